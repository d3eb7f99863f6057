#include "chebyshev.hpp"

#include <cmath>
#include <numbers>

namespace henon::detail {

namespace {

// T_0..T_{deg}(x)
Eigen::VectorXd chebyshev_t(double x, int deg) {
    Eigen::VectorXd t(deg + 1);
    t(0) = 1.0;
    if (deg >= 1) t(1) = x;
    for (int k = 2; k <= deg; ++k) t(k) = 2.0 * x * t(k - 1) - t(k - 2);
    return t;
}

}  // namespace

ChebyshevBasis::ChebyshevBasis(int n_nodes) : n_(n_nodes) {
    const int n = n_nodes;
    nodes_.resize(n);
    bary_.resize(n);
    for (int j = 0; j < n; ++j) {
        nodes_(j) = -std::cos(std::numbers::pi * j / (n - 1));
        bary_(j) = ((j % 2) ? -1.0 : 1.0) * ((j == 0 || j == n - 1) ? 0.5 : 1.0);
    }

    Eigen::MatrixXd vander(n, n);
    for (int j = 0; j < n; ++j) vander.row(j) = chebyshev_t(nodes_(j), n - 1).transpose();
    to_coeffs_ = vander.partialPivLu().inverse();

    // coefficients of the antiderivative vanishing at -1: degree n
    Eigen::MatrixXd anti = Eigen::MatrixXd::Zero(n + 1, n);
    for (int k = 0; k < n; ++k) {
        if (k == 0) {
            anti(1, 0) += 1.0;
        } else if (k == 1) {
            anti(2, 1) += 0.25;
        } else {
            anti(k + 1, k) += 1.0 / (2.0 * (k + 1));
            anti(k - 1, k) -= 1.0 / (2.0 * (k - 1));
        }
    }
    const Eigen::VectorXd at_minus_one = chebyshev_t(-1.0, n);
    anti.row(0) = -(at_minus_one.transpose() * anti);

    Eigen::MatrixXd eval(n, n + 1);
    for (int j = 0; j < n; ++j) eval.row(j) = chebyshev_t(nodes_(j), n).transpose();
    integrate_ = eval * anti * to_coeffs_;
}

double ChebyshevBasis::interpolate(std::span<const double> values, double x) const {
    double num = 0.0;
    double den = 0.0;
    for (int j = 0; j < n_; ++j) {
        const double diff = x - nodes_(j);
        if (diff == 0.0) return values[j];
        const double w = bary_(j) / diff;
        num += w * values[j];
        den += w;
    }
    return num / den;
}

Eigen::RowVectorXd ChebyshevBasis::interpolation_row(double x) const {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(n_);
    double den = 0.0;
    for (int j = 0; j < n_; ++j) {
        const double diff = x - nodes_(j);
        if (diff == 0.0) {
            row.setZero();
            row(j) = 1.0;
            return row;
        }
        row(j) = bary_(j) / diff;
        den += row(j);
    }
    return row / den;
}

}  // namespace henon::detail
