#pragma once

#include "henon/params.hpp"
#include "henon/profile.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <memory>
#include <span>
#include <vector>

namespace henon {

namespace detail {
class ChebyshevBasis;
}

/// u_i(0) for each component; all entries must be positive.
struct InitialData {
    std::vector<double> values_at_zero;
};

struct PicardOptions {
    double tol = 1e-13;           ///< relative sup-norm tolerance of each window's fixed point
    int nodes = 32;               ///< Chebyshev nodes per window
    int jacobi_nodes = 40;        ///< Gauss-Jacobi nodes for the inner integral of the first window
    int max_iterations = 400;     ///< Picard sweeps per window attempt
    double max_contraction = 0.5; ///< a window is halved while the measured ratio exceeds this
    double blowup_factor = 1e8;   ///< BlowUp once any |u_i| > factor * max u_i(0)
};

enum class PicardStatus { Completed, Vanished };

/// Spectral representation of a radial solution of the k-coupled system on
/// [0, r_end], produced window by window from the integral identity
///   u_i(r) = u_i(0) - int_0^r s^{2a+1-n} int_0^s t^{n-1-bp} F_i(u(t)) dt ds
/// after the substitution rho = r^sigma, sigma = 2a + 2 - bp.
class RadialSolution {
public:
    struct Window {
        double rho_begin = 0.0;
        double rho_end = 0.0;
        std::vector<Eigen::VectorXd> u;       ///< per component, nodal values
        std::vector<Eigen::VectorXd> u_rho;   ///< per component, du/drho at nodes
        int iterations = 0;
        double contraction = 0.0;             ///< largest measured ratio of successive updates
    };

    RadialSolution(const CouplingSpec& spec, std::vector<double> init, std::vector<Window> windows,
                   PicardStatus status, double r_end, std::shared_ptr<const detail::ChebyshevBasis> basis);

    const CouplingSpec& spec() const { return spec_; }
    int components() const { return spec_.k(); }
    PicardStatus status() const { return status_; }
    /// r_max when Completed, first zero of some component when Vanished.
    double r_end() const { return r_end_; }
    const std::vector<double>& initial_values() const { return init_; }
    const std::vector<Window>& windows() const { return windows_; }
    int total_iterations() const;

    /// u_i(r) for 0 <= r <= r_end.
    double value(int i, double r) const;
    /// du_i/dr for 0 < r <= r_end.
    double derivative(int i, double r) const;
    /// r^{n-1-2a} u_i'(r).
    double flux(int i, double r) const;
    /// All radii that are collocation nodes, ascending, r = 0 included.
    std::vector<double> node_radii() const;

    /// Emden-Fowler samples on a uniform t-grid over [-ln r_end, -ln r_small],
    /// r_small chosen so rho = r^sigma is below 1e-14 times the first window.
    std::vector<RadialProfile> to_profiles(std::size_t n_pts = 4001) const;

private:
    const Window& locate(double rho, double& x) const;

    CouplingSpec spec_;
    std::vector<double> init_;
    std::vector<Window> windows_;
    PicardStatus status_;
    double r_end_;
    std::shared_ptr<const detail::ChebyshevBasis> basis_;
};

/// Nonlinearity F_i(u) = sum_j kappa_ij |u_i|^{alpha_ij - 2} u_i |u_j|^{beta_ij}.
double coupling_rhs(const CouplingSpec& spec, int i, std::span<const double> u);

/// Errors: ConstraintViolation for non-positive data, BlowUp, NoConvergence.
/// A component reaching zero ends the run with status Vanished.
RadialSolution picard_solve(const CouplingSpec& spec, const InitialData& init, double r_max,
                            const PicardOptions& options = {});
RadialSolution picard_solve(const ProblemParams& params, const InitialData& init, double r_max,
                            const PicardOptions& options = {});

/// Largest relative residual of -phi_i'' + gamma phi_i = sum_j kappa_ij phi_i^{alpha_ij-1} phi_j^{beta_ij}
/// over the interior nodes of a common grid (seven-point stencils applied to the
/// stored derivatives). GridMismatch if the profiles do not share a grid.
double residual(const CouplingSpec& spec, const std::vector<RadialProfile>& profiles);
double residual(const ProblemParams& params, const std::vector<RadialProfile>& profiles);

struct AsymptoticData {
    std::vector<double> u0;             ///< lim_{r->0} u_i(r)
    std::vector<double> u_inf;          ///< lim_{r->inf} r^{n-2-2a} u_i(r)
    std::vector<double> decay_exponent; ///< fitted exponent of r^{-e} at infinity, expected n-2-2a
    std::vector<double> fit_residuals;  ///< relative mismatch of the fitted tail rates against lambda
};

/// Tail extrapolation with the known correction rate sigma at both ends.
/// TailNotResolved when any fit residual exceeds tol.
AsymptoticData asymptotics(const WeightSpace& space, const std::vector<RadialProfile>& profiles,
                           double tol = 1e-4);

struct UniquenessReport {
    double theta = 1.0;
    std::vector<double> deviation;          ///< sup_r |u2_i(r) - theta u1_i(theta^{1/lambda} r)| / |u2_i(r)|
    std::vector<double> literal_deviation;  ///< same without the dilation, for reference
    double r_compared = 0.0;
    bool within_hypotheses = true;          ///< a >= 0 and b != 0
    bool pass = false;
};

/// Solves from init1 and from init2 = theta * init1 (NotProportional otherwise) and
/// compares the second run with the dilated first run, which is the unique solution
/// with that data. Components are compared up to the first vanishing radius.
UniquenessReport uniqueness_experiment(const CouplingSpec& spec, const InitialData& init1,
                                       const InitialData& init2, double r_max, double tol = 1e-8,
                                       const PicardOptions& options = {});

struct InversionResult {
    double tau = 1.0;
    double shift = 0.0;  ///< s with tau = e^{-s}
    RadialProfile profile;
    double defect = 0.0; ///< max |phi(t) - phi(-t)| / max phi after recentring
};

/// Finds the translation s minimising int (phi(t+s) - phi(s-t))^2 dt and
/// returns the recentred profile phi(t + s).
InversionResult inversion_normalize(const RadialProfile& profile);

nlohmann::json to_json(const AsymptoticData& data);
nlohmann::json to_json(const UniquenessReport& report);

}  // namespace henon
