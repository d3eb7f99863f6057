#pragma once

#include "henon/params.hpp"
#include "henon/profile.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <vector>

namespace henon {

struct GridSpec {
    double half_width = 0.0;  ///< T; 0 selects e^{-lambda T} = 1e-10
    int points = 0;           ///< interior nodes of the coarsest grid; 0 selects about 50 per unit scale
};

/// Radial eigenpairs of -psi'' + gamma psi = lambda phi_U^{p-2} psi on [-T, T] with
/// Dirichlet ends, second-order finite differences on grids N, 2N+1, 4N+3
/// (halving h) and Richardson extrapolation.
struct RadialEigenResult {
    std::vector<double> eigenvalues;              ///< extrapolated, ascending
    std::vector<std::vector<double>> raw;         ///< per grid, coarse to fine
    std::vector<RadialProfile> eigenvectors;      ///< finest grid, int phi_U^{p-2} psi^2 dt = 1
    double half_width = 0.0;
    int points = 0;                               ///< interior nodes of the finest grid
    double h = 0.0;                               ///< finest spacing
    double richardson_gap = 0.0;                  ///< max relative disagreement of the two extrapolations
};

/// GridTooCoarse if the extrapolations from (N, 2N) and (2N, 4N) differ by more
/// than rel_tol; SymmetryBreakingRegime below the Felli-Schneider curve.
RadialEigenResult radial_eigen(const WeightSpace& space, int n_modes = 3, GridSpec grid = {}, double rel_tol = 1e-5);
inline RadialEigenResult radial_eigen(const ProblemParams& params, int n_modes = 3, GridSpec grid = {},
                                      double rel_tol = 1e-5) {
    return radial_eigen(params.space(), n_modes, grid, rel_tol);
}

/// int phi_U^{p-2} psi f dt / (norms), with f sampled on the eigenvector grid.
double weighted_cosine(const WeightSpace& space, const RadialProfile& psi, const std::vector<double>& f);

/// Cosines of the first two eigenvectors against phi_U and phi_U'.
std::pair<double, double> mode_cosines(const WeightSpace& space, const RadialEigenResult& result);

struct NondegeneracyReport {
    double lhs = 0.0;  ///< nu alpha beta (c1^{alpha-2} c2^beta + c1^alpha c2^{beta-2}); 0 for semi-trivial pairs
    double rhs = 0.0;  ///< p - 2
    bool nondegenerate = true;
    bool sufficient_nu_bound = false;  ///< nu <= (p - 2)/(2 alpha beta)
    bool semi_trivial = false;
    Eigen::Matrix2d theta = Eigen::Matrix2d::Zero();
};

/// NotASyncRoot if (c1, c2) has a negative entry or synchronization residual above 1e-8.
/// Semi-trivial pairs are nondegenerate directly from the scalar spectrum.
NondegeneracyReport nondegeneracy_check(const ProblemParams& params, double c1, double c2, double tol = 1e-10);

struct DecoupleResult {
    double dilation_eigenvalue = 0.0;  ///< eigenvalue along (c1, c2), equal to p - 1
    double coupled_eigenvalue = 0.0;   ///< the other one, equal to p - 1 - lhs
    double gamma_tilde = 0.0;          ///< (theta11 - theta22 - sqrt(disc)) / (2 theta12) = -c2/c1
    Eigen::Matrix2d rotation = Eigen::Matrix2d::Identity();  ///< orthonormal eigenvectors as columns
};

/// Diagonalizes the theta matrix. ConstraintViolation unless c1, c2 > 0.
DecoupleResult linearized_decouple(const ProblemParams& params, double c1, double c2);

struct DegeneracyCandidate {
    double nu = 0.0;
    int branch = 0;
    double c1 = 0.0;
    double c2 = 0.0;
    double gap = 0.0;  ///< lhs - (p - 2)
};

/// Evaluates lhs - (p - 2) on every positive root for each nu. Returns the roots
/// with |gap| < threshold and the roots whose gap has the opposite sign from the
/// nearest root (in ln(c1/c2)) at the previous nu.
std::vector<DegeneracyCandidate> degeneracy_scan(const WeightSpace& space, double alpha,
                                                 const std::vector<double>& nu_values, double threshold = 1e-3);

nlohmann::json to_json(const RadialEigenResult& result, const WeightSpace& space);
nlohmann::json to_json(const NondegeneracyReport& report);
nlohmann::json to_json(const DecoupleResult& result);
nlohmann::json to_json(const DegeneracyCandidate& candidate);

}  // namespace henon
