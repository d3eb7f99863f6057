#pragma once

#include <Eigen/Dense>

#include <span>

namespace henon::detail {

/// Chebyshev-Lobatto collocation on [-1, 1] with nodes in ascending order.
class ChebyshevBasis {
public:
    explicit ChebyshevBasis(int n_nodes);

    int size() const { return n_; }
    const Eigen::VectorXd& nodes() const { return nodes_; }
    /// (Q f)_i = integral of the interpolant of f from -1 to nodes()[i].
    const Eigen::MatrixXd& integration() const { return integrate_; }
    /// Nodal values -> Chebyshev coefficients.
    const Eigen::MatrixXd& to_coefficients() const { return to_coeffs_; }

    /// Barycentric evaluation of the interpolant at x in [-1, 1].
    double interpolate(std::span<const double> values, double x) const;
    /// Row vector of barycentric weights such that row . values = interpolant(x).
    Eigen::RowVectorXd interpolation_row(double x) const;

private:
    int n_;
    Eigen::VectorXd nodes_;
    Eigen::VectorXd bary_;
    Eigen::MatrixXd integrate_;
    Eigen::MatrixXd to_coeffs_;
};

}  // namespace henon::detail
