#pragma once

#include <span>
#include <vector>

namespace henon {

/// A radial function sampled in the Emden-Fowler coordinate t = -ln r,
/// phi(t) = r^lambda u(r).
///
/// Between nodes the profile is the cubic Hermite interpolant of the stored
/// values and t-derivatives. Outside the grid it follows the exponential tail
/// model phi(t) = phi(t_0) e^{rate (t - t_0)} on the left (r -> infinity) and
/// phi(t) = phi(t_N) e^{-rate (t - t_N)} on the right (r -> 0).
class RadialProfile {
public:
    RadialProfile() = default;

    /// Throws ConstraintViolation unless t is strictly increasing, all samples
    /// are finite and (when require_nonnegative) values are >= 0.
    RadialProfile(std::vector<double> t, std::vector<double> values, std::vector<double> derivs,
                  double lambda, double tail_rate, bool require_nonnegative = true);

    /// Derivatives estimated with five-point Lagrange differentiation.
    static RadialProfile from_samples(std::vector<double> t, std::vector<double> values, double lambda,
                                      double tail_rate, bool require_nonnegative = true);

    std::size_t size() const { return t_.size(); }
    bool empty() const { return t_.empty(); }
    std::span<const double> t_grid() const { return t_; }
    std::span<const double> values() const { return values_; }
    std::span<const double> derivs() const { return derivs_; }
    double t_min() const { return t_.front(); }
    double t_max() const { return t_.back(); }

    /// Weight exponent lambda of u(r) = r^{-lambda} phi(-ln r).
    double lambda() const { return lambda_; }
    /// Exponential decay rate of both tails.
    double tail_rate() const { return tail_rate_; }

    double value(double t) const;
    double derivative(double t) const;

    /// u(r) = r^{-lambda} phi(-ln r) and u'(r) = -r^{-lambda-1} (lambda phi + phi').
    double radial_value(double r) const;
    double radial_derivative(double r) const;

    /// phi(t) -> phi(-t): the modified Kelvin transform in t-coordinates.
    RadialProfile reflected() const;
    /// phi(t) -> phi(t + s).
    RadialProfile shifted(double s) const;
    RadialProfile scaled(double c) const;
    /// Same samples, reinterpreted with a different weight exponent.
    RadialProfile with_lambda(double lambda) const;

private:
    std::size_t interval(double t) const;

    std::vector<double> t_;
    std::vector<double> values_;
    std::vector<double> derivs_;
    double lambda_ = 0.0;
    double tail_rate_ = 0.0;
};

/// Nodes t_min + i (t_max - t_min) / (n_pts - 1).
std::vector<double> uniform_grid(double t_min, double t_max, std::size_t n_pts);

}  // namespace henon
