#pragma once

#include "henon/params.hpp"
#include "henon/profile.hpp"

#include <json.hpp>

#include <cstdint>
#include <string_view>
#include <vector>

namespace henon {

/// f(x, y) = (x^2 + y^2) / (x^p + y^p + p nu x^alpha y^beta)^{2/p}. DomainError at
/// the origin or for negative entries.
double f_value(const ProblemParams& params, double x, double y);

/// sum_i x_i^2 / N(x)^{2/p} with N(x) = sum_ij kappa_ij x_i^{alpha_ij} x_j^{beta_ij},
/// the nonlinear energy density of a variational spec evaluated on constants.
/// ConstraintViolation for a non-variational spec.
double f_value_k(const CouplingSpec& spec, const std::vector<double>& x);

/// N(x) above.
double coupling_energy_density(const CouplingSpec& spec, const std::vector<double>& x);

struct FMinimum {
    std::vector<double> minimizer;  ///< on the simplex sum x_i = 1
    double f_min = 0.0;
    bool interior = false;          ///< every component positive
};

/// k = 2: f(x, 1 - x) on a grid of grid_points nodes (endpoints included),
/// Brent refinement, then the interior candidate is replaced by the nearest
/// positive synchronization root when one lies within the bracket.
FMinimum minimize_f(const ProblemParams& params, std::size_t grid_points = 10001);

/// k >= 3: simplex vertices, Nelder-Mead from `restarts` seeded starting points
/// in the parameterization x_i = y_i^2 / |y|^2, and Newton-polished
/// synchronization roots. k = 2 specs use the one-dimensional path.
FMinimum minimize_f(const CouplingSpec& spec, int restarts = 50, std::uint64_t seed = 1);

enum class CaseLabel { CaseI, CaseII, CaseIII, Unclassified };

std::string_view to_string(CaseLabel label);

/// (i) min{alpha, beta} < 2; (ii) min >= 2 and nu > (2^{p/2} - 2)/p;
/// (iii) min >= 2 and nu <= (p - 2)/(2p); unclassified in between.
CaseLabel regime_cases(const ProblemParams& params);

/// Surface area 2 pi^{n/2} / Gamma(n/2) of the unit sphere in R^n.
double sphere_area(int n);

/// I = omega_{n-1} int r^{n-1-bp} U_mu^p dr = omega_{n-1} int phi_U^p dt.
double bubble_energy_integral(const WeightSpace& space, double mu = 1.0);

/// S = inf D(u) / N(u)^{2/p} over D_a, attained by the bubble, so S = I^{(p-2)/p}.
/// The constant of the inequality written as (int |x|^{-bp}|u|^p)^{2/p} <= C int |x|^{-2a}|grad u|^2
/// is C = 1/S. SymmetryBreakingRegime below the Felli-Schneider curve.
double sharp_ckn_constant(const WeightSpace& space, double mu = 1.0);
inline double sharp_ckn_constant(const ProblemParams& params) { return sharp_ckn_constant(params.space()); }

/// S_bar = S f_min.
double vector_ckn_constant(const ProblemParams& params);
double vector_ckn_constant(const CouplingSpec& spec);

struct ProfileIntegrals {
    double dirichlet = 0.0;  ///< omega int (phi'^2 + gamma phi^2) dt = int |x|^{-2a} |grad u|^2
    double potential = 0.0;  ///< omega int phi^p dt = int |x|^{-bp} |u|^p
};

/// Integrals of a profile over its grid (cubic Hermite, Gauss on each interval)
/// plus the exponential tails.
ProfileIntegrals profile_integrals(const WeightSpace& space, const RadialProfile& profile);

/// D(u) / N(u)^{2/p}.
double rayleigh_quotient(const WeightSpace& space, const RadialProfile& profile);

/// sum_i D(u_i) / (sum_ij kappa_ij int |x|^{-bp} u_i^{alpha_ij} u_j^{beta_ij})^{2/p} for
/// nonnegative profiles on a common grid. GridMismatch otherwise.
double vector_rayleigh_quotient(const CouplingSpec& spec, const std::vector<RadialProfile>& profiles);

struct GroundStateReport {
    std::vector<double> minimizer;
    double f_min = 0.0;
    CaseLabel case_label = CaseLabel::Unclassified;
    double S = 0.0;
    double S_bar = 0.0;
    double energy = 0.0;
    double s_factor = 0.0;
    std::vector<double> constants;  ///< s * minimizer, the synchronization constants of the ground state
    double sync_residual = 0.0;     ///< of `constants`
};

/// energy = (1/2 - 1/p) f_min^{p/(p-2)} S^{p/(p-2)}; s solves s^{p-2} N(x) = |x|^2
/// on the minimizer x, so that c = s x satisfies the synchronization system.
GroundStateReport ground_energy(const ProblemParams& params);
GroundStateReport ground_energy(const CouplingSpec& spec, int restarts = 50, std::uint64_t seed = 1);

nlohmann::json to_json(const GroundStateReport& report);

}  // namespace henon
