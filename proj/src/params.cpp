#include "henon/params.hpp"

#include "henon/error.hpp"

#include <cmath>
#include <sstream>

namespace henon {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::ConstraintViolation: return "ConstraintViolation";
        case ErrorKind::DomainError: return "DomainError";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::GridMismatch: return "GridMismatch";
        case ErrorKind::NotProportional: return "NotProportional";
        case ErrorKind::NotASyncRoot: return "NotASyncRoot";
        case ErrorKind::SymmetryBreakingRegime: return "SymmetryBreakingRegime";
        case ErrorKind::BlowUp: return "BlowUp";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::TailNotResolved: return "TailNotResolved";
        case ErrorKind::NoPositiveRoot: return "NoPositiveRoot";
        case ErrorKind::GridTooCoarse: return "GridTooCoarse";
        case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

bool is_validation_error(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::ConstraintViolation:
        case ErrorKind::DomainError:
        case ErrorKind::ParseError:
        case ErrorKind::GridMismatch:
        case ErrorKind::NotProportional:
        case ErrorKind::NotASyncRoot:
        case ErrorKind::SymmetryBreakingRegime:
            return true;
        default:
            return false;
    }
}

namespace {

// Relative slack for the exponent identity alpha + beta = p when the inputs are
// decimal approximations of rationals.
constexpr double kExponentSlack = 1e-9;

[[noreturn]] void violation(const std::string& what) {
    throw Error(ErrorKind::ConstraintViolation, what);
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

}  // namespace

WeightSpace validate_space(int n, double a, double b) {
    if (n < 3) violation("n >= 3 required (got n = " + std::to_string(n) + ")");
    if (!std::isfinite(a) || !std::isfinite(b)) violation("a and b must be finite");
    const double half = (n - 2) / 2.0;
    if (!(a < half)) violation("a < (n-2)/2 required (a = " + fmt(a) + ", (n-2)/2 = " + fmt(half) + ")");
    if (!(a <= b)) violation("a <= b required (a = " + fmt(a) + ", b = " + fmt(b) + ")");
    if (!(b < a + 1.0)) violation("b < a + 1 required (a = " + fmt(a) + ", b = " + fmt(b) + ")");

    WeightSpace s;
    s.n = n;
    s.a = a;
    s.b = b;
    s.p = 2.0 * n / (n - 2.0 + 2.0 * (b - a));
    s.lambda = (n - 2.0 - 2.0 * a) / 2.0;
    s.gamma = s.lambda * s.lambda;

    const double p_sobolev = 2.0 * n / (n - 2.0);
    if (!(s.p > 2.0 && s.p <= p_sobolev * (1.0 + 1e-15)))
        violation("2 < p <= 2n/(n-2) required (p = " + fmt(s.p) + ")");
    if (!(s.sigma() > 0.0)) violation("2a + 2 - bp > 0 required (got " + fmt(s.sigma()) + ")");
    return s;
}

ProblemParams validate_params(int n, double a, double b, double nu, double alpha, double beta) {
    ProblemParams out;
    out.space_ = validate_space(n, a, b);
    const double p = out.space_.p;
    if (!(nu > 0.0)) violation("nu > 0 required (nu = " + fmt(nu) + ")");
    if (!(alpha > 1.0)) violation("alpha > 1 required (alpha = " + fmt(alpha) + ")");
    if (!(beta > 1.0)) violation("beta > 1 required (beta = " + fmt(beta) + ")");
    if (std::abs(alpha + beta - p) > kExponentSlack * p)
        violation("alpha + beta = p required (alpha + beta = " + fmt(alpha + beta) + ", p = " + fmt(p) + ")");
    out.nu_ = nu;
    out.alpha_ = alpha;
    // snap so that alpha + beta == p holds to rounding downstream
    out.beta_ = p - alpha;
    if (!(out.beta_ > 1.0)) violation("beta > 1 required (beta = " + fmt(out.beta_) + ")");
    return out;
}

double felli_schneider(int n, double a) {
    const double d = n - 2.0 - 2.0 * a;
    return n * d / (2.0 * std::sqrt(d * d + 4.0 * n - 4.0)) - d / 2.0;
}

std::string_view to_string(RegimeTag tag) {
    switch (tag) {
        case RegimeTag::Symmetric: return "Symmetric";
        case RegimeTag::SymmetryBreaking: return "SymmetryBreaking";
        case RegimeTag::FSBoundary: return "FSBoundary";
    }
    return "Unknown";
}

Regime classify_regime(const WeightSpace& space, double rel_tol) {
    Regime r;
    r.b_fs = felli_schneider(space.n, space.a);
    if (space.a >= 0.0) {
        r.tag = RegimeTag::Symmetric;
        return r;
    }
    const double tol = rel_tol * std::max(1.0, std::abs(r.b_fs));
    if (std::abs(space.b - r.b_fs) <= tol)
        r.tag = RegimeTag::FSBoundary;
    else if (space.b > r.b_fs)
        r.tag = RegimeTag::Symmetric;
    else
        r.tag = RegimeTag::SymmetryBreaking;
    return r;
}

CouplingSpec make_coupling_spec(const WeightSpace& space, CouplingSpec::Table kappa,
                                CouplingSpec::Table alpha, CouplingSpec::Table beta) {
    const std::size_t k = kappa.size();
    if (k < 2) violation("k >= 2 required for a coupled system");
    auto square = [k](const CouplingSpec::Table& t) {
        if (t.size() != k) return false;
        for (const auto& row : t)
            if (row.size() != k) return false;
        return true;
    };
    if (!square(kappa) || !square(alpha) || !square(beta))
        violation("kappa, alpha_ij, beta_ij must all be k x k tables");

    const double p = space.p;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            const std::string at = "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
            if (!(kappa[i][j] > 0.0)) violation("kappa_ij > 0 required at " + at);
            if (!(alpha[i][j] > 1.0)) violation("alpha_ij > 1 required at " + at);
            if (std::abs(alpha[i][j] + beta[i][j] - p) > kExponentSlack * p)
                violation("alpha_ij + beta_ij = p required at " + at);
            beta[i][j] = p - alpha[i][j];
            if (!(beta[i][j] > 1.0)) violation("beta_ij > 1 required at " + at);
        }
    }

    CouplingSpec spec;
    spec.space_ = space;
    spec.kappa_ = std::move(kappa);
    spec.alpha_ = std::move(alpha);
    spec.beta_ = std::move(beta);

    constexpr double tol = 1e-12;
    bool variational = true;
    for (std::size_t i = 0; i < k && variational; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            const double a_ij = spec.alpha_[i][j];
            const double b_ij = spec.beta_[i][j];
            if (std::abs(a_ij - spec.beta_[j][i]) > tol * p ||
                std::abs(spec.kappa_[i][j] / spec.kappa_[j][i] - a_ij / b_ij) > tol * (a_ij / b_ij)) {
                variational = false;
                break;
            }
        }
    }
    spec.variational_ = variational;
    return spec;
}

CouplingSpec CouplingSpec::from_pair(const ProblemParams& params) {
    const double p = params.p();
    const double nu = params.nu();
    const double al = params.alpha();
    const double be = params.beta();
    return make_coupling_spec(params.space(), {{1.0, nu * al}, {nu * be, 1.0}},
                              {{p / 2.0, al}, {be, p / 2.0}}, {{p / 2.0, be}, {al, p / 2.0}});
}

namespace {

template <typename T>
T required(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) throw Error(ErrorKind::ParseError, std::string("missing key \"") + key + "\"");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::ParseError, std::string("key \"") + key + "\": " + e.what());
    }
}

const nlohmann::json& params_object(const nlohmann::json& j) {
    if (!j.is_object()) throw Error(ErrorKind::ParseError, "config must be a JSON object");
    if (j.contains("params") && j.at("params").is_object()) return j.at("params");
    return j;
}

CouplingSpec::Table table(const nlohmann::json& j, const char* key) {
    return required<CouplingSpec::Table>(j, key);
}

}  // namespace

ProblemParams params_from_json(const nlohmann::json& j) {
    const auto& o = params_object(j);
    return validate_params(required<int>(o, "n"), required<double>(o, "a"), required<double>(o, "b"),
                           required<double>(o, "nu"), required<double>(o, "alpha"), required<double>(o, "beta"));
}

nlohmann::json to_json(const ProblemParams& params) {
    return {{"n", params.n()},         {"a", params.a()},         {"b", params.b()},
            {"nu", params.nu()},       {"alpha", params.alpha()}, {"beta", params.beta()},
            {"p", params.p()},         {"gamma", params.gamma()}, {"lambda", params.lambda()}};
}

CouplingSpec coupling_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw Error(ErrorKind::ParseError, "coupling spec must be a JSON object");
    const auto& o = params_object(j);
    const WeightSpace space = validate_space(required<int>(o, "n"), required<double>(o, "a"), required<double>(o, "b"));
    return make_coupling_spec(space, table(j, "kappa"), table(j, "alpha_ij"), table(j, "beta_ij"));
}

nlohmann::json to_json(const CouplingSpec& spec) {
    return {{"n", spec.space().n},       {"a", spec.space().a},           {"b", spec.space().b},
            {"p", spec.p()},             {"kappa", spec.kappa_table()},   {"alpha_ij", spec.alpha_table()},
            {"beta_ij", spec.beta_table()}, {"variational", spec.variational()}};
}

}  // namespace henon
