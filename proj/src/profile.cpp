#include "henon/profile.hpp"

#include "henon/error.hpp"

#include <algorithm>
#include <cmath>

namespace henon {

RadialProfile::RadialProfile(std::vector<double> t, std::vector<double> values, std::vector<double> derivs,
                             double lambda, double tail_rate, bool require_nonnegative)
    : t_(std::move(t)), values_(std::move(values)), derivs_(std::move(derivs)), lambda_(lambda), tail_rate_(tail_rate) {
    if (t_.size() < 2) throw Error(ErrorKind::ConstraintViolation, "profile needs at least two nodes");
    if (values_.size() != t_.size() || derivs_.size() != t_.size())
        throw Error(ErrorKind::ConstraintViolation, "profile arrays differ in length");
    for (std::size_t i = 0; i < t_.size(); ++i) {
        if (!std::isfinite(t_[i]) || !std::isfinite(values_[i]) || !std::isfinite(derivs_[i]))
            throw Error(ErrorKind::ConstraintViolation, "profile samples must be finite");
        if (i > 0 && !(t_[i] > t_[i - 1]))
            throw Error(ErrorKind::ConstraintViolation, "profile t-grid must be strictly increasing");
        if (require_nonnegative && values_[i] < 0.0)
            throw Error(ErrorKind::ConstraintViolation, "profile values must be nonnegative");
    }
    if (!(tail_rate_ >= 0.0)) throw Error(ErrorKind::ConstraintViolation, "tail rate must be nonnegative");
}

RadialProfile RadialProfile::from_samples(std::vector<double> t, std::vector<double> values, double lambda,
                                          double tail_rate, bool require_nonnegative) {
    const std::size_t n = t.size();
    std::vector<double> d(n, 0.0);
    if (n >= 5) {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t lo = std::min(i >= 2 ? i - 2 : 0, n - 5);
            // derivative of the Lagrange polynomial through t[lo..lo+4] at t[i]
            double sum = 0.0;
            for (std::size_t j = lo; j < lo + 5; ++j) {
                double lj_prime = 0.0;
                for (std::size_t m = lo; m < lo + 5; ++m) {
                    if (m == j) continue;
                    double term = 1.0 / (t[j] - t[m]);
                    for (std::size_t l = lo; l < lo + 5; ++l) {
                        if (l == j || l == m) continue;
                        term *= (t[i] - t[l]) / (t[j] - t[l]);
                    }
                    lj_prime += term;
                }
                sum += values[j] * lj_prime;
            }
            d[i] = sum;
        }
    } else if (n >= 2) {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j = i + 1 < n ? i + 1 : i;
            const std::size_t k = j - 1;
            d[i] = (values[j] - values[k]) / (t[j] - t[k]);
        }
    }
    return RadialProfile(std::move(t), std::move(values), std::move(d), lambda, tail_rate, require_nonnegative);
}

std::size_t RadialProfile::interval(double t) const {
    auto it = std::upper_bound(t_.begin(), t_.end(), t);
    std::size_t i = static_cast<std::size_t>(it - t_.begin());
    if (i == 0) return 0;
    return std::min(i - 1, t_.size() - 2);
}

double RadialProfile::value(double t) const {
    if (t < t_.front()) return values_.front() * std::exp(tail_rate_ * (t - t_.front()));
    if (t > t_.back()) return values_.back() * std::exp(-tail_rate_ * (t - t_.back()));
    const std::size_t i = interval(t);
    const double h = t_[i + 1] - t_[i];
    const double s = (t - t_[i]) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1;
    const double h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2;
    const double h11 = s3 - s2;
    return h00 * values_[i] + h10 * h * derivs_[i] + h01 * values_[i + 1] + h11 * h * derivs_[i + 1];
}

double RadialProfile::derivative(double t) const {
    if (t < t_.front()) return tail_rate_ * value(t);
    if (t > t_.back()) return -tail_rate_ * value(t);
    const std::size_t i = interval(t);
    const double h = t_[i + 1] - t_[i];
    const double s = (t - t_[i]) / h;
    const double s2 = s * s;
    const double d00 = (6 * s2 - 6 * s) / h;
    const double d10 = 3 * s2 - 4 * s + 1;
    const double d01 = (-6 * s2 + 6 * s) / h;
    const double d11 = 3 * s2 - 2 * s;
    return d00 * values_[i] + d10 * derivs_[i] + d01 * values_[i + 1] + d11 * derivs_[i + 1];
}

double RadialProfile::radial_value(double r) const {
    if (!(r > 0.0)) throw Error(ErrorKind::DomainError, "radial_value requires r > 0");
    return std::pow(r, -lambda_) * value(-std::log(r));
}

double RadialProfile::radial_derivative(double r) const {
    if (!(r > 0.0)) throw Error(ErrorKind::DomainError, "radial_derivative requires r > 0");
    const double t = -std::log(r);
    return -std::pow(r, -lambda_ - 1.0) * (lambda_ * value(t) + derivative(t));
}

RadialProfile RadialProfile::reflected() const {
    const std::size_t n = t_.size();
    std::vector<double> t(n), v(n), d(n);
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = -t_[n - 1 - i];
        v[i] = values_[n - 1 - i];
        d[i] = -derivs_[n - 1 - i];
    }
    return RadialProfile(std::move(t), std::move(v), std::move(d), lambda_, tail_rate_, false);
}

RadialProfile RadialProfile::shifted(double s) const {
    std::vector<double> t(t_);
    for (double& x : t) x -= s;
    return RadialProfile(std::move(t), values_, derivs_, lambda_, tail_rate_, false);
}

RadialProfile RadialProfile::scaled(double c) const {
    std::vector<double> v(values_), d(derivs_);
    for (double& x : v) x *= c;
    for (double& x : d) x *= c;
    return RadialProfile(t_, std::move(v), std::move(d), lambda_, tail_rate_, false);
}

RadialProfile RadialProfile::with_lambda(double lambda) const {
    RadialProfile out(*this);
    out.lambda_ = lambda;
    return out;
}

std::vector<double> uniform_grid(double t_min, double t_max, std::size_t n_pts) {
    std::vector<double> t(n_pts);
    const double h = (t_max - t_min) / static_cast<double>(n_pts - 1);
    for (std::size_t i = 0; i < n_pts; ++i) t[i] = t_min + h * static_cast<double>(i);
    t.back() = t_max;
    return t;
}

}  // namespace henon
