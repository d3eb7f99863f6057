#pragma once

#include <json.hpp>

#include <string_view>
#include <vector>

namespace henon {

/// Weighted space D_a^{1,2}(R^n) together with the critical exponent it fixes.
///
/// All quantities derived from (n, a, b) live here so that the scalar problem
/// and the k-coupled problem share one validated object.
struct WeightSpace {
    int n = 3;
    double a = 0.0;
    double b = 0.0;
    double p = 6.0;       ///< 2n / (n - 2 + 2(b - a))
    double lambda = 0.5;  ///< (n - 2 - 2a) / 2, the Emden-Fowler weight exponent
    double gamma = 0.25;  ///< lambda^2, the mass term of the transformed ODE

    /// Integrability exponent 2a + 2 - bp of the radial integral identity.
    /// Identically lambda (p - 2), hence positive on the admissible range.
    double sigma() const { return 2.0 * a + 2.0 - b * p; }
    /// Bubble shape in t: phi = K 2^{-m} sech^m(kappa t) with m = 2/(p-2), K = U(0).
    double sech_power() const { return 2.0 / (p - 2.0); }
    double sech_rate() const { return lambda * (p - 2.0) / 2.0; }
};

WeightSpace validate_space(int n, double a, double b);

class ProblemParams {
public:
    const WeightSpace& space() const { return space_; }
    int n() const { return space_.n; }
    double a() const { return space_.a; }
    double b() const { return space_.b; }
    double p() const { return space_.p; }
    double gamma() const { return space_.gamma; }
    double lambda() const { return space_.lambda; }
    double nu() const { return nu_; }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }

private:
    friend ProblemParams validate_params(int, double, double, double, double, double);
    WeightSpace space_;
    double nu_ = 1.0;
    double alpha_ = 3.0;
    double beta_ = 3.0;
};

/// Checks every admissibility condition on (n, a, b, nu, alpha, beta) and fills
/// in the derived quantities. Throws Error{ConstraintViolation} naming the
/// first violated condition.
ProblemParams validate_params(int n, double a, double b, double nu, double alpha, double beta);

/// Felli-Schneider curve b_FS(a). Only meaningful as a regime threshold for a < 0.
double felli_schneider(int n, double a);

enum class RegimeTag { Symmetric, SymmetryBreaking, FSBoundary };

std::string_view to_string(RegimeTag tag);

struct Regime {
    RegimeTag tag = RegimeTag::Symmetric;
    double b_fs = 0.0;
};

inline constexpr double kDefaultFsTolerance = 1e-12;

/// Symmetric for a >= 0 or b above the Felli-Schneider curve, FSBoundary within
/// rel_tol * max(1, |b_FS|) of it, SymmetryBreaking below.
Regime classify_regime(const WeightSpace& space, double rel_tol = kDefaultFsTolerance);
inline Regime classify_regime(const ProblemParams& params, double rel_tol = kDefaultFsTolerance) {
    return classify_regime(params.space(), rel_tol);
}

/// Coefficient tables of the k-coupled system
///   -div(|x|^{-2a} grad u_i) = sum_j kappa_ij |x|^{-bp} u_i^{alpha_ij - 1} u_j^{beta_ij}.
class CouplingSpec {
public:
    using Table = std::vector<std::vector<double>>;

    int k() const { return static_cast<int>(kappa_.size()); }
    const WeightSpace& space() const { return space_; }
    double p() const { return space_.p; }
    double kappa(int i, int j) const { return kappa_[i][j]; }
    double alpha(int i, int j) const { return alpha_[i][j]; }
    double beta(int i, int j) const { return beta_[i][j]; }
    const Table& kappa_table() const { return kappa_; }
    const Table& alpha_table() const { return alpha_; }
    const Table& beta_table() const { return beta_; }
    /// alpha_ij = beta_ji and kappa_ij / kappa_ji = alpha_ij / beta_ij for all i, j.
    bool variational() const { return variational_; }

    /// The two-component system with coupling nu * alpha, nu * beta written as
    /// a k = 2 table (diagonal terms kappa = 1, alpha = beta = p/2).
    static CouplingSpec from_pair(const ProblemParams& params);

private:
    friend CouplingSpec make_coupling_spec(const WeightSpace&, Table, Table, Table);
    WeightSpace space_;
    Table kappa_;
    Table alpha_;
    Table beta_;
    bool variational_ = false;
};

CouplingSpec make_coupling_spec(const WeightSpace& space, CouplingSpec::Table kappa,
                                CouplingSpec::Table alpha, CouplingSpec::Table beta);

/// {"n","a","b","nu","alpha","beta"}
ProblemParams params_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ProblemParams& params);

/// {"n","a","b","kappa","alpha_ij","beta_ij"}; n, a, b may also come from a
/// nested "params" object.
CouplingSpec coupling_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CouplingSpec& spec);

}  // namespace henon
