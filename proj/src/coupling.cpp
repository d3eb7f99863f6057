#include "henon/coupling.hpp"

#include "henon/error.hpp"

#include <Eigen/Dense>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <random>
#include <thread>

namespace henon {

namespace {

constexpr double kDedupTol = 1e-9;
constexpr double kAcceptResidual = 1e-10;

double refine_root(const std::function<double(double)>& f, double lo, double hi, double f_lo, double f_hi) {
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;
    std::uintmax_t iters = 200;
    auto r = boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(48),
                                               iters);
    return 0.5 * (r.first + r.second);
}

// H_i(x) = sum_j kappa_ij exp((alpha_ij - 2) x_i + beta_ij x_j) - 1 with c = exp(x).
Eigen::VectorXd log_residual(const CouplingSpec& s, const Eigen::VectorXd& x, Eigen::MatrixXd* jac) {
    const int k = s.k();
    Eigen::VectorXd h = Eigen::VectorXd::Constant(k, -1.0);
    if (jac) jac->setZero(k, k);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            const double term = s.kappa(i, j) * std::exp((s.alpha(i, j) - 2.0) * x(i) + s.beta(i, j) * x(j));
            h(i) += term;
            if (jac) {
                (*jac)(i, i) += (s.alpha(i, j) - 2.0) * term;
                (*jac)(i, j) += s.beta(i, j) * term;
            }
        }
    }
    return h;
}

bool newton_log(const CouplingSpec& s, Eigen::VectorXd& x, int max_iter = 100) {
    Eigen::MatrixXd jac;
    Eigen::VectorXd h = log_residual(s, x, &jac);
    double norm = h.cwiseAbs().maxCoeff();
    for (int it = 0; it < max_iter; ++it) {
        if (!std::isfinite(norm)) return false;
        if (norm < 1e-15) return true;
        const Eigen::VectorXd step = jac.fullPivLu().solve(-h);
        if (!step.allFinite()) return false;
        double t = 1.0;
        bool improved = false;
        for (int halving = 0; halving < 40; ++halving) {
            const Eigen::VectorXd trial = x + t * step;
            const Eigen::VectorXd ht = log_residual(s, trial, nullptr);
            const double nt = ht.cwiseAbs().maxCoeff();
            if (std::isfinite(nt) && nt < norm) {
                x = trial;
                improved = true;
                break;
            }
            t *= 0.5;
        }
        if (!improved) return norm < 1e-13;
        h = log_residual(s, x, &jac);
        norm = h.cwiseAbs().maxCoeff();
    }
    return norm < 1e-13;
}

SyncConstants make_constants(const CouplingSpec& spec, std::vector<double> c) {
    SyncConstants out;
    out.residual = sync_residual(spec, c);
    out.label = classify_sync(c);
    out.c = std::move(c);
    if (out.c.size() == 2 && out.c[1] > 0.0) out.ratio = out.c[0] / out.c[1];
    return out;
}

}  // namespace

std::string_view to_string(SyncLabel label) {
    switch (label) {
        case SyncLabel::Positive: return "positive";
        case SyncLabel::SemiTrivial: return "semi-trivial";
        case SyncLabel::Trivial: return "trivial";
    }
    return "unknown";
}

double scalar_reduction_f(const ProblemParams& params, double t) {
    if (!(t > 0.0)) throw Error(ErrorKind::DomainError, "scalar reduction needs t > 0");
    const double p = params.p();
    const double nu = params.nu();
    const double al = params.alpha();
    const double be = params.beta();
    return std::pow(t, p - 2.0) + nu * al * std::pow(t, al - 2.0) - 1.0 - nu * be * std::pow(t, al);
}

ReductionRoots scalar_reduction_roots(const ProblemParams& params, std::size_t grid_points) {
    if (grid_points < 3) throw Error(ErrorKind::ConstraintViolation, "scan needs at least 3 points");
    // work in s = ln t so the bracket refinement is scale-free
    auto f = [&](double s) { return scalar_reduction_f(params, std::exp(s)); };
    const double s_lo = std::log(1e-8);
    const double s_hi = std::log(1e8);
    std::vector<double> s(grid_points), v(grid_points);
    for (std::size_t i = 0; i < grid_points; ++i) {
        s[i] = s_lo + (s_hi - s_lo) * static_cast<double>(i) / static_cast<double>(grid_points - 1);
        v[i] = f(s[i]);
    }
    ReductionRoots out;
    std::vector<double> roots;
    for (std::size_t i = 0; i + 1 < grid_points; ++i) {
        if (v[i] == 0.0) {
            roots.push_back(s[i]);
            continue;
        }
        if ((v[i] < 0.0) != (v[i + 1] < 0.0) && v[i + 1] != 0.0) roots.push_back(refine_root(f, s[i], s[i + 1], v[i], v[i + 1]));
    }
    if (v.back() == 0.0) roots.push_back(s.back());

    // local minima of |f| without a sign change: either a tangency or a missed pair
    for (std::size_t i = 1; i + 1 < grid_points; ++i) {
        if (v[i] == 0.0) continue;
        const bool same = (v[i - 1] < 0.0) == (v[i] < 0.0) && (v[i + 1] < 0.0) == (v[i] < 0.0);
        if (!same || !(std::abs(v[i]) <= std::abs(v[i - 1]) && std::abs(v[i]) <= std::abs(v[i + 1]))) continue;
        const double sign = v[i] < 0.0 ? -1.0 : 1.0;
        auto g = [&](double x) { return sign * f(x); };
        const auto m = boost::math::tools::brent_find_minima(g, s[i - 1], s[i + 1], 52);
        const double fm = sign * m.second;
        if ((fm < 0.0) != (v[i] < 0.0) && fm != 0.0) {
            roots.push_back(refine_root(f, s[i - 1], m.first, v[i - 1], fm));
            roots.push_back(refine_root(f, m.first, s[i + 1], fm, v[i + 1]));
        } else if (std::abs(fm) < 1e-10) {
            out.tangencies.push_back(std::exp(m.first));
        }
    }
    std::sort(roots.begin(), roots.end());
    for (double r : roots) {
        const double t = std::exp(r);
        if (out.roots.empty() || std::abs(t - out.roots.back()) > 1e-12 * t) out.roots.push_back(t);
    }
    return out;
}

double sync_residual(const CouplingSpec& spec, const std::vector<double>& c) {
    if (static_cast<int>(c.size()) != spec.k())
        throw Error(ErrorKind::ConstraintViolation, "sync vector length must equal k");
    double worst = 0.0;
    for (int i = 0; i < spec.k(); ++i) {
        double sum = 0.0;
        for (int j = 0; j < spec.k(); ++j)
            sum += spec.kappa(i, j) * std::pow(c[i], spec.alpha(i, j) - 1.0) * std::pow(c[j], spec.beta(i, j));
        worst = std::max(worst, std::abs(sum - c[i]));
    }
    return worst;
}

double sync_residual(const ProblemParams& params, double c1, double c2) {
    return sync_residual(CouplingSpec::from_pair(params), {c1, c2});
}

SyncLabel classify_sync(const std::vector<double>& c) {
    const auto zeros = std::count(c.begin(), c.end(), 0.0);
    if (zeros == static_cast<long>(c.size())) return SyncLabel::Trivial;
    if (zeros > 0) return SyncLabel::SemiTrivial;
    return SyncLabel::Positive;
}

std::vector<double> polish_sync_root(const CouplingSpec& spec, std::vector<double> c) {
    Eigen::VectorXd x(spec.k());
    for (int i = 0; i < spec.k(); ++i) {
        if (!(c[i] > 0.0)) return c;
        x(i) = std::log(c[i]);
    }
    Eigen::VectorXd trial = x;
    if (!newton_log(spec, trial, 20)) return c;
    std::vector<double> out(spec.k());
    for (int i = 0; i < spec.k(); ++i) out[i] = std::exp(trial(i));
    return sync_residual(spec, out) <= sync_residual(spec, c) ? out : c;
}

std::vector<SyncConstants> solve_sync_2(const ProblemParams& params) {
    const CouplingSpec spec = CouplingSpec::from_pair(params);
    const double p = params.p();
    const double nu = params.nu();
    const double al = params.alpha();
    const double be = params.beta();
    const ReductionRoots rr = scalar_reduction_roots(params);
    std::vector<SyncConstants> out;
    int branch = 0;
    for (double L : rr.roots) {
        const double c1 = std::pow(1.0 + nu * al * std::pow(L, -be), -1.0 / (p - 2.0));
        const double c2 = c1 / L;
        SyncConstants sc = make_constants(spec, polish_sync_root(spec, {c1, c2}));
        sc.branch = branch++;
        out.push_back(std::move(sc));
    }
    SyncConstants first = make_constants(spec, {1.0, 0.0});
    SyncConstants second = make_constants(spec, {0.0, 1.0});
    out.push_back(first);
    out.push_back(second);
    return out;
}

std::vector<SyncConstants> require_positive_root(const std::vector<SyncConstants>& roots) {
    std::vector<SyncConstants> out;
    for (const auto& r : roots)
        if (r.label == SyncLabel::Positive) out.push_back(r);
    if (out.empty())
        throw Error(ErrorKind::NoPositiveRoot, "the synchronization system has no positive solution on the scanned range");
    return out;
}

std::vector<SyncConstants> solve_sync_k(const CouplingSpec& spec, int starts, std::uint64_t seed, int threads) {
    if (starts < 0) throw Error(ErrorKind::ConstraintViolation, "starts >= 0 required");
    const int k = spec.k();
    const double p = spec.p();

    std::vector<Eigen::VectorXd> initial;
    Eigen::VectorXd sym(k);
    for (int i = 0; i < k; ++i) {
        double row = 0.0;
        for (int j = 0; j < k; ++j) row += spec.kappa(i, j);
        sym(i) = -std::log(row) / (p - 2.0);
    }
    initial.push_back(sym);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> spread(-4.0, 1.0);
    for (int s = 0; s < starts; ++s) {
        Eigen::VectorXd x(k);
        for (int i = 0; i < k; ++i) x(i) = spread(rng);
        initial.push_back(x);
    }

    std::vector<std::vector<double>> found(initial.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t idx = next++; idx < initial.size(); idx = next++) {
            Eigen::VectorXd x = initial[idx];
            if (!newton_log(spec, x)) continue;
            std::vector<double> c(k);
            for (int i = 0; i < k; ++i) c[i] = std::exp(x(i));
            if (sync_residual(spec, c) < kAcceptResidual) found[idx] = std::move(c);
        }
    };
    const int n_threads = std::max(1, std::min<int>(threads, static_cast<int>(initial.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    std::vector<std::vector<double>> unique;
    for (auto& c : found) {
        if (c.empty()) continue;
        const bool dup = std::any_of(unique.begin(), unique.end(), [&](const std::vector<double>& u) {
            double d = 0.0;
            for (int i = 0; i < k; ++i) d = std::max(d, std::abs(u[i] - c[i]));
            return d < kDedupTol;
        });
        if (!dup) unique.push_back(c);
    }
    std::sort(unique.begin(), unique.end());
    std::vector<SyncConstants> out;
    for (auto& c : unique) out.push_back(make_constants(spec, std::move(c)));
    return out;
}

nlohmann::json to_json(const SyncConstants& sc) {
    nlohmann::json j{{"c", sc.c}, {"residual", sc.residual}, {"label", std::string(to_string(sc.label))}};
    if (sc.branch >= 0) j["branch"] = sc.branch;
    if (sc.c.size() == 2 && sc.label == SyncLabel::Positive) j["ratio"] = sc.ratio;
    return j;
}

}  // namespace henon
