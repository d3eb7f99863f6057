#include "henon/spectrum.hpp"

#include "henon/bubble.hpp"
#include "henon/coupling.hpp"
#include "henon/error.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>

namespace henon {

namespace {

constexpr double kSyncTolerance = 1e-8;

// A - s W for A = tridiag(-1, 2, -1)/h^2 + gamma, W = diag(w)
struct Pencil {
    double h = 0.0;
    double gamma = 0.0;
    std::vector<double> w;

    int size() const { return static_cast<int>(w.size()); }
    double diag(int i, double s) const { return 2.0 / (h * h) + gamma - s * w[i]; }
    double off() const { return -1.0 / (h * h); }

    /// Number of eigenvalues below s (inertia of A - s W via LDL^T).
    int count_below(double s) const {
        const double o2 = off() * off();
        int neg = 0;
        double d = diag(0, s);
        for (int i = 0;; ++i) {
            if (d == 0.0) d = -1e-300;
            if (d < 0.0) ++neg;
            if (i + 1 == size()) break;
            d = diag(i + 1, s) - o2 / d;
        }
        return neg;
    }

    /// The j-th eigenvalue (0-based) by bisection on the inertia count.
    double eigenvalue(int j) const {
        double lo = 0.0, hi = 1.0;
        while (count_below(hi) <= j) hi *= 2.0;
        for (int it = 0; it < 200 && hi - lo > 4e-16 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (count_below(mid) <= j) lo = mid;
            else hi = mid;
        }
        return 0.5 * (lo + hi);
    }

    /// Inverse iteration at a shift just off the eigenvalue.
    Eigen::VectorXd eigenvector(double lambda) const {
        const int n = size();
        const double shift = lambda * (1.0 + 1e-9);
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(3 * n);
        for (int i = 0; i < n; ++i) {
            trip.emplace_back(i, i, diag(i, shift));
            if (i + 1 < n) {
                trip.emplace_back(i, i + 1, off());
                trip.emplace_back(i + 1, i, off());
            }
        }
        Eigen::SparseMatrix<double> M(n, n);
        M.setFromTriplets(trip.begin(), trip.end());
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(M);
        if (lu.info() != Eigen::Success) throw Error(ErrorKind::NoConvergence, "inverse iteration factorization failed");
        const Eigen::Map<const Eigen::VectorXd> W(w.data(), n);
        Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
        for (int it = 0; it < 6; ++it) {
            x = lu.solve(W.cwiseProduct(x));
            x /= std::sqrt(h * x.dot(W.cwiseProduct(x)));
        }
        return x;
    }
};

Pencil make_pencil(const WeightSpace& space, double T, int n) {
    Pencil pc;
    pc.h = 2.0 * T / (n + 1);
    pc.gamma = space.gamma;
    pc.w.resize(n);
    const BubbleParams bp = make_bubble(space, 1.0);
    for (int i = 0; i < n; ++i) pc.w[i] = std::pow(bubble_phi(bp, -T + (i + 1) * pc.h), space.p - 2.0);
    return pc;
}

}  // namespace

RadialEigenResult radial_eigen(const WeightSpace& space, int n_modes, GridSpec grid, double rel_tol) {
    if (n_modes < 1) throw Error(ErrorKind::ConstraintViolation, "n_modes must be positive");
    if (classify_regime(space).tag == RegimeTag::SymmetryBreaking)
        throw Error(ErrorKind::SymmetryBreakingRegime,
                    "b < b_FS(a): symmetry-breaking regime, radial linearization is not at the extremal");
    const double T = grid.half_width > 0.0 ? grid.half_width : 10.0 * std::log(10.0) / space.lambda;
    int n = grid.points;
    if (n <= 0) {
        const double h = 0.02 / std::max(space.lambda, space.sech_rate());
        n = static_cast<int>(std::ceil(2.0 * T / h));
    }
    if (n < 8 * n_modes) throw Error(ErrorKind::GridTooCoarse, "too few grid points for the requested modes");

    RadialEigenResult out;
    out.half_width = T;
    const std::vector<int> sizes{n, 2 * n + 1, 4 * n + 3};
    Pencil finest;
    for (int size : sizes) {
        finest = make_pencil(space, T, size);
        std::vector<double> ev(n_modes);
        for (int j = 0; j < n_modes; ++j) ev[j] = finest.eigenvalue(j);
        out.raw.push_back(std::move(ev));
    }
    out.eigenvalues.resize(n_modes);
    for (int j = 0; j < n_modes; ++j) {
        const double r1 = (4.0 * out.raw[1][j] - out.raw[0][j]) / 3.0;
        const double r2 = (4.0 * out.raw[2][j] - out.raw[1][j]) / 3.0;
        out.eigenvalues[j] = r2;
        out.richardson_gap = std::max(out.richardson_gap, std::abs(r1 - r2) / std::abs(r2));
    }
    if (out.richardson_gap > rel_tol)
        throw Error(ErrorKind::GridTooCoarse, "Richardson extrapolations disagree by " +
                                                  std::to_string(out.richardson_gap) + " relative");

    out.points = finest.size();
    out.h = finest.h;
    std::vector<double> t(out.points + 2);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = -T + i * finest.h;
    for (int j = 0; j < n_modes; ++j) {
        Eigen::VectorXd x = finest.eigenvector(out.raw[2][j]);
        // leftmost significant entry positive
        const double big = x.cwiseAbs().maxCoeff();
        for (int i = 0; i < x.size(); ++i)
            if (std::abs(x(i)) > 1e-3 * big) {
                if (x(i) < 0.0) x = -x;
                break;
            }
        std::vector<double> v(t.size(), 0.0);
        for (int i = 0; i < x.size(); ++i) v[i + 1] = x(i);
        out.eigenvectors.push_back(RadialProfile::from_samples(t, std::move(v), space.lambda, space.lambda, false));
    }
    return out;
}

double weighted_cosine(const WeightSpace& space, const RadialProfile& psi, const std::vector<double>& f) {
    const auto t = psi.t_grid();
    const auto v = psi.values();
    if (f.size() != t.size()) throw Error(ErrorKind::GridMismatch, "samples must match the eigenvector grid");
    const BubbleParams bp = make_bubble(space, 1.0);
    double pf = 0.0, pp = 0.0, ff = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double w = std::pow(bubble_phi(bp, t[i]), space.p - 2.0);
        pf += w * v[i] * f[i];
        pp += w * v[i] * v[i];
        ff += w * f[i] * f[i];
    }
    return pf / std::sqrt(pp * ff);
}

std::pair<double, double> mode_cosines(const WeightSpace& space, const RadialEigenResult& result) {
    if (result.eigenvectors.size() < 2) throw Error(ErrorKind::ConstraintViolation, "need at least two modes");
    const BubbleParams bp = make_bubble(space, 1.0);
    const auto t = result.eigenvectors[0].t_grid();
    std::vector<double> phi(t.size()), dphi(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        phi[i] = bubble_phi(bp, t[i]);
        dphi[i] = bubble_phi_derivative(bp, t[i]);
    }
    return {weighted_cosine(space, result.eigenvectors[0], phi), weighted_cosine(space, result.eigenvectors[1], dphi)};
}

NondegeneracyReport nondegeneracy_check(const ProblemParams& params, double c1, double c2, double tol) {
    if (!(c1 >= 0.0) || !(c2 >= 0.0) || (c1 == 0.0 && c2 == 0.0))
        throw Error(ErrorKind::NotASyncRoot, "constants must be nonnegative and not both zero");
    const double res = sync_residual(params, c1, c2);
    if (!(res <= kSyncTolerance))
        throw Error(ErrorKind::NotASyncRoot, "synchronization residual " + std::to_string(res) + " exceeds 1e-8");
    const double p = params.p();
    const double nab = params.nu() * params.alpha() * params.beta();
    NondegeneracyReport r;
    r.rhs = p - 2.0;
    r.sufficient_nu_bound = params.nu() <= (p - 2.0) / (2.0 * params.alpha() * params.beta());
    if (c1 == 0.0 || c2 == 0.0) {
        r.semi_trivial = true;
        r.nondegenerate = true;
        return r;
    }
    const double al = params.alpha(), be = params.beta();
    const double t1 = nab * std::pow(c1, al - 2.0) * std::pow(c2, be);
    const double t2 = nab * std::pow(c1, al) * std::pow(c2, be - 2.0);
    r.lhs = t1 + t2;
    r.theta(0, 0) = p - 1.0 - t1;
    r.theta(1, 1) = p - 1.0 - t2;
    r.theta(0, 1) = r.theta(1, 0) = nab * std::pow(c1, al - 1.0) * std::pow(c2, be - 1.0);
    r.nondegenerate = std::abs(r.lhs - r.rhs) > tol;
    return r;
}

DecoupleResult linearized_decouple(const ProblemParams& params, double c1, double c2) {
    if (!(c1 > 0.0) || !(c2 > 0.0)) throw Error(ErrorKind::ConstraintViolation, "decoupling needs c1, c2 > 0");
    const double p = params.p();
    const double nab = params.nu() * params.alpha() * params.beta();
    const double al = params.alpha(), be = params.beta();
    Eigen::Matrix2d th;
    th(0, 0) = p - 1.0 - nab * std::pow(c1, al - 2.0) * std::pow(c2, be);
    th(1, 1) = p - 1.0 - nab * std::pow(c1, al) * std::pow(c2, be - 2.0);
    th(0, 1) = th(1, 0) = nab * std::pow(c1, al - 1.0) * std::pow(c2, be - 1.0);

    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(th);
    const Eigen::Vector2d dir = Eigen::Vector2d(c1, c2).normalized();
    const int k = std::abs(es.eigenvectors().col(0).dot(dir)) > std::abs(es.eigenvectors().col(1).dot(dir)) ? 0 : 1;
    DecoupleResult r;
    r.dilation_eigenvalue = es.eigenvalues()(k);
    r.coupled_eigenvalue = es.eigenvalues()(1 - k);
    r.rotation = es.eigenvectors();
    const double diff = th(0, 0) - th(1, 1);
    r.gamma_tilde = (diff - std::sqrt(diff * diff + 4.0 * th(0, 1) * th(0, 1))) / (2.0 * th(0, 1));
    return r;
}

std::vector<DegeneracyCandidate> degeneracy_scan(const WeightSpace& space, double alpha,
                                                 const std::vector<double>& nu_values, double threshold) {
    std::vector<DegeneracyCandidate> out;
    std::vector<DegeneracyCandidate> previous;
    for (double nu : nu_values) {
        const ProblemParams pp = validate_params(space.n, space.a, space.b, nu, alpha, space.p - alpha);
        std::vector<DegeneracyCandidate> current;
        for (const auto& sc : require_positive_root(solve_sync_2(pp))) {
            const NondegeneracyReport rep = nondegeneracy_check(pp, sc.c[0], sc.c[1]);
            current.push_back({nu, sc.branch, sc.c[0], sc.c[1], rep.lhs - rep.rhs});
        }
        for (const auto& cur : current) {
            // branches are followed by the nearest ratio c1/c2, since roots appear and vanish in pairs
            const DegeneracyCandidate* match = nullptr;
            double dist = INFINITY;
            for (const auto& prev : previous) {
                const double d = std::abs(std::log(prev.c1 / prev.c2) - std::log(cur.c1 / cur.c2));
                if (d < dist) {
                    dist = d;
                    match = &prev;
                }
            }
            const bool near = std::abs(cur.gap) < threshold;
            const bool crossed = match != nullptr && (match->gap < 0.0) != (cur.gap < 0.0);
            if (near || crossed) out.push_back(cur);
        }
        previous = std::move(current);
    }
    return out;
}

nlohmann::json to_json(const RadialEigenResult& r, const WeightSpace& space) {
    nlohmann::json j{{"eigenvalues", r.eigenvalues},
                     {"raw", r.raw},
                     {"half_width", r.half_width},
                     {"points", r.points},
                     {"h", r.h},
                     {"richardson_gap", r.richardson_gap}};
    if (r.eigenvectors.size() >= 2) {
        const auto [c1, c2] = mode_cosines(space, r);
        j["cosine_phi"] = c1;
        j["cosine_dphi"] = c2;
    }
    return j;
}

nlohmann::json to_json(const NondegeneracyReport& r) {
    return {{"lhs", r.lhs},
            {"rhs", r.rhs},
            {"nondegenerate", r.nondegenerate},
            {"sufficient_nu_bound", r.sufficient_nu_bound},
            {"semi_trivial", r.semi_trivial},
            {"theta", {{r.theta(0, 0), r.theta(0, 1)}, {r.theta(1, 0), r.theta(1, 1)}}}};
}

nlohmann::json to_json(const DecoupleResult& r) {
    return {{"dilation_eigenvalue", r.dilation_eigenvalue},
            {"coupled_eigenvalue", r.coupled_eigenvalue},
            {"gamma_tilde", r.gamma_tilde},
            {"rotation", {{r.rotation(0, 0), r.rotation(0, 1)}, {r.rotation(1, 0), r.rotation(1, 1)}}}};
}

nlohmann::json to_json(const DegeneracyCandidate& c) {
    return {{"nu", c.nu}, {"branch", c.branch}, {"c1", c.c1}, {"c2", c.c2}, {"gap", c.gap}};
}

}  // namespace henon
