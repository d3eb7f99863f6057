#include "henon/groundstate.hpp"

#include "henon/bubble.hpp"
#include "henon/coupling.hpp"
#include "henon/error.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/minima.hpp>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

namespace henon {

namespace {

// interior candidates must beat the boundary by this relative margin
constexpr double kTieMargin = 1e-14;
// simplex components below this are treated as lying on a face
constexpr double kFaceThreshold = 1e-6;

void check_point(const std::vector<double>& x) {
    bool nonzero = false;
    for (double v : x) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw Error(ErrorKind::DomainError, "f needs nonnegative finite entries");
        nonzero = nonzero || v > 0.0;
    }
    if (!nonzero) throw Error(ErrorKind::DomainError, "f is undefined at the origin");
}

void require_variational(const CouplingSpec& spec) {
    if (!spec.variational())
        throw Error(ErrorKind::ConstraintViolation, "the coupling function needs a variational spec");
}

std::vector<double> normalized(std::vector<double> x) {
    double sum = 0.0;
    for (double v : x) sum += v;
    for (double& v : x) v /= sum;
    return x;
}

bool all_positive(const std::vector<double>& x) {
    return std::all_of(x.begin(), x.end(), [](double v) { return v > 0.0; });
}

// Picks the smallest value; later candidates must win by a relative margin so
// boundary points listed first keep exact ties.
struct Best {
    FMinimum m;
    bool set = false;
    void offer(const std::vector<double>& x, double f) {
        if (!set || f < m.f_min - kTieMargin * std::abs(m.f_min)) {
            m.minimizer = x;
            m.f_min = f;
            m.interior = all_positive(x);
            set = true;
        }
    }
};

// one-dimensional search of g(x) = f(x, 1 - x) followed by the root candidates
FMinimum minimize_on_segment(const std::function<double(double)>& g, const std::vector<std::vector<double>>& roots,
                             std::size_t grid_points) {
    grid_points = std::max<std::size_t>(grid_points, 3);
    Best best;
    best.offer({1.0, 0.0}, g(1.0));
    best.offer({0.0, 1.0}, g(0.0));

    std::size_t arg = 0;
    double low = INFINITY;
    for (std::size_t i = 1; i + 1 < grid_points; ++i) {
        const double x = static_cast<double>(i) / (grid_points - 1.0);
        const double v = g(x);
        if (v < low) {
            low = v;
            arg = i;
        }
    }
    const double lo = (arg - 1.0) / (grid_points - 1.0);
    const double hi = (arg + 1.0) / (grid_points - 1.0);
    auto safe = [&](double x) { return x <= 0.0 || x >= 1.0 ? INFINITY : g(x); };
    auto brent = boost::math::tools::brent_find_minima(safe, lo, hi, 52);

    // an interior critical point of f is a synchronization root, which is exact
    bool replaced = false;
    for (const auto& c : roots) {
        const std::vector<double> x = normalized(c);
        if (x[0] >= lo && x[0] <= hi) {
            best.offer(x, g(x[0]));
            replaced = true;
        }
    }
    if (!replaced && brent.first > 0.0 && brent.first < 1.0) best.offer({brent.first, 1.0 - brent.first}, brent.second);
    for (const auto& c : roots) {
        const std::vector<double> x = normalized(c);
        best.offer(x, g(x[0]));
    }
    return best.m;
}

struct NmContext {
    const CouplingSpec* spec;
};

std::vector<double> from_squares(const gsl_vector* y) {
    std::vector<double> x(y->size);
    double sum = 0.0;
    for (std::size_t i = 0; i < y->size; ++i) {
        x[i] = gsl_vector_get(y, i) * gsl_vector_get(y, i);
        sum += x[i];
    }
    for (double& v : x) v /= sum;
    return x;
}

double nm_objective(const gsl_vector* y, void* params) {
    const auto* ctx = static_cast<const NmContext*>(params);
    const std::vector<double> x = from_squares(y);
    if (!std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); })) return GSL_POSINF;
    return f_value_k(*ctx->spec, x);
}

std::vector<double> nelder_mead(const CouplingSpec& spec, const std::vector<double>& start) {
    const std::size_t k = start.size();
    NmContext ctx{&spec};
    gsl_multimin_function fn{&nm_objective, k, &ctx};
    gsl_vector* y = gsl_vector_alloc(k);
    gsl_vector* step = gsl_vector_alloc(k);
    for (std::size_t i = 0; i < k; ++i) gsl_vector_set(y, i, start[i]);
    gsl_vector_set_all(step, 0.1);
    gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, k);
    gsl_multimin_fminimizer_set(s, &fn, y, step);
    for (int it = 0; it < 5000; ++it) {
        if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
        if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), 1e-11) == GSL_SUCCESS) break;
    }
    std::vector<double> x = from_squares(gsl_multimin_fminimizer_x(s));
    gsl_multimin_fminimizer_free(s);
    gsl_vector_free(step);
    gsl_vector_free(y);
    for (double& v : x)
        if (v < 1e-14) v = 0.0;
    return normalized(x);
}

double scale_factor(const CouplingSpec& spec, const std::vector<double>& x) {
    double sq = 0.0;
    for (double v : x) sq += v * v;
    return std::pow(sq / coupling_energy_density(spec, x), 1.0 / (spec.p() - 2.0));
}

// A minimizer of f restricted to its support is, up to scale, a synchronization
// root of the sub-system on that support; Newton there removes the simplex
// tolerance and the near-zero components Nelder-Mead leaves on a face.
std::vector<double> polish_on_support(const CouplingSpec& spec, std::vector<double> x) {
    std::vector<int> idx;
    for (int i = 0; i < spec.k(); ++i) {
        if (x[i] < kFaceThreshold) x[i] = 0.0;
        else idx.push_back(i);
    }
    const int m = static_cast<int>(idx.size());
    if (m == 0) return x;
    if (m == 1) {
        x[idx[0]] = 1.0;
        return x;
    }
    CouplingSpec::Table kappa(m, std::vector<double>(m)), alpha = kappa, beta = kappa;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            kappa[i][j] = spec.kappa(idx[i], idx[j]);
            alpha[i][j] = spec.alpha(idx[i], idx[j]);
            beta[i][j] = spec.beta(idx[i], idx[j]);
        }
    const CouplingSpec sub = make_coupling_spec(spec.space(), kappa, alpha, beta);
    std::vector<double> xs(m);
    for (int i = 0; i < m; ++i) xs[i] = x[idx[i]];
    xs = normalized(xs);
    const double s = scale_factor(sub, xs);
    for (double& v : xs) v *= s;
    xs = normalized(polish_sync_root(sub, xs));
    std::vector<double> out(spec.k(), 0.0);
    for (int i = 0; i < m; ++i) out[idx[i]] = xs[i];
    return out;
}

// cubic Hermite on one interval evaluated at the Gauss nodes
template <class F>
void hermite_nodes(double t0, double t1, double v0, double d0, double v1, double d1, F&& fn) {
    using Q = boost::math::quadrature::gauss<double, 7>;
    const double h = t1 - t0;
    const auto& abscissa = Q::abscissa();
    const auto& weights = Q::weights();
    auto eval = [&](double xi, double w) {
        const double s = 0.5 * (1.0 + xi);
        const double s2 = s * s, s3 = s2 * s;
        const double v = (2 * s3 - 3 * s2 + 1) * v0 + (s3 - 2 * s2 + s) * h * d0 + (-2 * s3 + 3 * s2) * v1 +
                         (s3 - s2) * h * d1;
        const double d = ((6 * s2 - 6 * s) * v0 + (3 * s2 - 4 * s + 1) * h * d0 + (-6 * s2 + 6 * s) * v1 +
                          (3 * s2 - 2 * s) * h * d1) /
                         h;
        fn(v, d, 0.5 * h * w);
    };
    for (std::size_t i = 0; i < abscissa.size(); ++i) {
        eval(abscissa[i], weights[i]);
        if (abscissa[i] != 0.0) eval(-abscissa[i], weights[i]);
    }
}

}  // namespace

double coupling_energy_density(const CouplingSpec& spec, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != spec.k())
        throw Error(ErrorKind::ConstraintViolation, "vector length must equal k");
    // one log per component; exponents exceed 1, so a zero entry gives exp(-inf) = 0
    const int k = spec.k();
    double logs[16];
    std::vector<double> heap;
    double* lx = logs;
    if (k > 16) {
        heap.resize(k);
        lx = heap.data();
    }
    for (int i = 0; i < k; ++i) lx[i] = std::log(x[i]);
    double sum = 0.0;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            sum += spec.kappa(i, j) * std::exp(spec.alpha(i, j) * lx[i] + spec.beta(i, j) * lx[j]);
    return sum;
}

double f_value(const ProblemParams& params, double x, double y) {
    check_point({x, y});
    const double p = params.p();
    const double num = x * x + y * y;
    const double den = std::pow(x, p) + std::pow(y, p) + p * params.nu() * std::pow(x, params.alpha()) *
                                                              std::pow(y, params.beta());
    return num / std::pow(den, 2.0 / p);
}

double f_value_k(const CouplingSpec& spec, const std::vector<double>& x) {
    require_variational(spec);
    check_point(x);
    double num = 0.0;
    for (double v : x) num += v * v;
    return num / std::pow(coupling_energy_density(spec, x), 2.0 / spec.p());
}

FMinimum minimize_f(const ProblemParams& params, std::size_t grid_points) {
    std::vector<std::vector<double>> roots;
    for (const auto& sc : solve_sync_2(params))
        if (sc.label == SyncLabel::Positive) roots.push_back(sc.c);
    return minimize_on_segment([&](double x) { return f_value(params, x, 1.0 - x); }, roots, grid_points);
}

FMinimum minimize_f(const CouplingSpec& spec, int restarts, std::uint64_t seed) {
    require_variational(spec);
    const int k = spec.k();
    std::vector<std::vector<double>> roots;
    for (const auto& sc : solve_sync_k(spec, restarts, seed)) roots.push_back(sc.c);
    if (k == 2)
        return minimize_on_segment([&](double x) { return f_value_k(spec, {x, 1.0 - x}); }, roots, 10001);

    Best best;
    for (int i = 0; i < k; ++i) {
        std::vector<double> e(k, 0.0);
        e[i] = 1.0;
        best.offer(e, f_value_k(spec, e));
    }
    for (const auto& c : roots) {
        const auto x = normalized(c);
        best.offer(x, f_value_k(spec, x));
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uy(0.05, 1.0);
    for (int r = 0; r < std::max(restarts, 1); ++r) {
        std::vector<double> y(k);
        for (double& v : y) v = r == 0 ? 1.0 : uy(rng);
        const std::vector<double> x = nelder_mead(spec, y);
        const std::vector<double> polished = polish_on_support(spec, x);
        // the polished point wins ties: it is exact on its face, the raw one is not
        const double fx = f_value_k(spec, x), fp = f_value_k(spec, polished);
        if (fp <= fx + kTieMargin * std::abs(fx)) best.offer(polished, fp);
        else best.offer(x, fx);
    }
    return best.m;
}

std::string_view to_string(CaseLabel label) {
    switch (label) {
        case CaseLabel::CaseI: return "case_i";
        case CaseLabel::CaseII: return "case_ii";
        case CaseLabel::CaseIII: return "case_iii";
        case CaseLabel::Unclassified: return "unclassified";
    }
    return "unknown";
}

CaseLabel regime_cases(const ProblemParams& params) {
    const double p = params.p();
    const double nu = params.nu();
    if (std::min(params.alpha(), params.beta()) < 2.0) return CaseLabel::CaseI;
    if (nu > (std::pow(2.0, p / 2.0) - 2.0) / p) return CaseLabel::CaseII;
    if (nu <= (p - 2.0) / (2.0 * p)) return CaseLabel::CaseIII;
    return CaseLabel::Unclassified;
}

double sphere_area(int n) {
    return 2.0 * std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0);
}

double bubble_energy_integral(const WeightSpace& space, double mu) {
    const BubbleParams bp = make_bubble(space, mu);
    const double p = space.p;
    const double c = -std::log(mu);
    const double T = default_half_width(space);
    const double panel = 0.5 / std::max(space.lambda, space.sech_rate());
    const int panels = static_cast<int>(std::ceil(2.0 * T / panel));
    const double h = 2.0 * T / panels;
    auto integrand = [&](double t) { return std::pow(bubble_phi(bp, t), p); };
    double sum = 0.0;
    for (int i = 0; i < panels; ++i)
        sum += boost::math::quadrature::gauss<double, 20>::integrate(integrand, c - T + i * h, c - T + (i + 1) * h);
    // phi ~ phi(T) e^{-lambda |t - T|} beyond the window
    sum += (integrand(c - T) + integrand(c + T)) / (p * space.lambda);
    return sphere_area(space.n) * sum;
}

double sharp_ckn_constant(const WeightSpace& space, double mu) {
    const Regime regime = classify_regime(space);
    if (regime.tag == RegimeTag::SymmetryBreaking)
        throw Error(ErrorKind::SymmetryBreakingRegime,
                    "b < b_FS(a): symmetry-breaking regime, S(a,b,n) radial computation refused");
    const double I = bubble_energy_integral(space, mu);
    return std::pow(I, (space.p - 2.0) / space.p);
}

double vector_ckn_constant(const ProblemParams& params) {
    const double S = sharp_ckn_constant(params);
    return S * minimize_f(params).f_min;
}

double vector_ckn_constant(const CouplingSpec& spec) {
    const double S = sharp_ckn_constant(spec.space());
    return S * minimize_f(spec).f_min;
}

ProfileIntegrals profile_integrals(const WeightSpace& space, const RadialProfile& profile) {
    const double p = space.p;
    const auto t = profile.t_grid();
    const auto v = profile.values();
    const auto d = profile.derivs();
    double dir = 0.0, pot = 0.0;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        hermite_nodes(t[i], t[i + 1], v[i], d[i], v[i + 1], d[i + 1], [&](double phi, double dphi, double w) {
            dir += w * (dphi * dphi + space.gamma * phi * phi);
            pot += w * std::pow(std::max(phi, 0.0), p);
        });
    }
    const double rate = profile.tail_rate();
    if (rate > 0.0) {
        for (double e : {v.front(), v.back()}) {
            dir += (rate * rate + space.gamma) * e * e / (2.0 * rate);
            pot += std::pow(std::max(e, 0.0), p) / (p * rate);
        }
    }
    const double omega = sphere_area(space.n);
    return {omega * dir, omega * pot};
}

double rayleigh_quotient(const WeightSpace& space, const RadialProfile& profile) {
    const ProfileIntegrals in = profile_integrals(space, profile);
    return in.dirichlet / std::pow(in.potential, 2.0 / space.p);
}

double vector_rayleigh_quotient(const CouplingSpec& spec, const std::vector<RadialProfile>& profiles) {
    require_variational(spec);
    const int k = spec.k();
    if (static_cast<int>(profiles.size()) != k)
        throw Error(ErrorKind::GridMismatch, "need one profile per component");
    const auto t = profiles[0].t_grid();
    for (const auto& pr : profiles) {
        const auto s = pr.t_grid();
        if (s.size() != t.size() || !std::equal(s.begin(), s.end(), t.begin()))
            throw Error(ErrorKind::GridMismatch, "profiles must share one grid");
    }
    const WeightSpace& space = spec.space();
    const double p = space.p;
    double dir = 0.0, pot = 0.0;
    std::vector<double> phi(k);
    std::vector<std::vector<double>> vals(k);
    std::vector<double> weights;
    for (std::size_t n = 0; n + 1 < t.size(); ++n) {
        // accumulate per component then combine at each node
        for (auto& v : vals) v.clear();
        weights.clear();
        for (int i = 0; i < k; ++i) {
            const auto v = profiles[i].values();
            const auto d = profiles[i].derivs();
            hermite_nodes(t[n], t[n + 1], v[n], d[n], v[n + 1], d[n + 1], [&](double f, double df, double w) {
                dir += w * (df * df + space.gamma * f * f);
                vals[i].push_back(std::max(f, 0.0));
                if (i == 0) weights.push_back(w);
            });
        }
        for (std::size_t q = 0; q < weights.size(); ++q) {
            for (int i = 0; i < k; ++i) phi[i] = vals[i][q];
            pot += weights[q] * coupling_energy_density(spec, phi);
        }
    }
    const double rate = profiles[0].tail_rate();
    if (rate > 0.0) {
        for (bool left : {true, false}) {
            for (int i = 0; i < k; ++i) {
                const auto v = profiles[i].values();
                const double e = left ? v.front() : v.back();
                dir += (rate * rate + space.gamma) * e * e / (2.0 * rate);
                phi[i] = std::max(e, 0.0);
            }
            pot += coupling_energy_density(spec, phi) / (p * rate);
        }
    }
    const double omega = sphere_area(space.n);
    return omega * dir / std::pow(omega * pot, 2.0 / p);
}

namespace {

GroundStateReport assemble(const CouplingSpec& spec, const FMinimum& fm, CaseLabel label) {
    GroundStateReport r;
    const double p = spec.p();
    r.minimizer = fm.minimizer;
    r.f_min = fm.f_min;
    r.case_label = label;
    r.S = sharp_ckn_constant(spec.space());
    r.S_bar = r.S * r.f_min;
    r.energy = (0.5 - 1.0 / p) * std::pow(r.f_min, p / (p - 2.0)) * std::pow(r.S, p / (p - 2.0));
    r.s_factor = scale_factor(spec, fm.minimizer);
    r.constants.resize(fm.minimizer.size());
    for (std::size_t i = 0; i < r.constants.size(); ++i) r.constants[i] = r.s_factor * fm.minimizer[i];
    r.sync_residual = sync_residual(spec, r.constants);
    return r;
}

}  // namespace

GroundStateReport ground_energy(const ProblemParams& params) {
    // fail on the regime before the minimization work
    sharp_ckn_constant(params);
    return assemble(CouplingSpec::from_pair(params), minimize_f(params), regime_cases(params));
}

GroundStateReport ground_energy(const CouplingSpec& spec, int restarts, std::uint64_t seed) {
    sharp_ckn_constant(spec.space());
    return assemble(spec, minimize_f(spec, restarts, seed), CaseLabel::Unclassified);
}

nlohmann::json to_json(const GroundStateReport& r) {
    return {{"minimizer", r.minimizer}, {"f_min", r.f_min},       {"case", to_string(r.case_label)},
            {"S", r.S},                 {"S_bar", r.S_bar},       {"energy", r.energy},
            {"s_factor", r.s_factor},   {"constants", r.constants}, {"sync_residual", r.sync_residual}};
}

}  // namespace henon
