#include "henon/radial_ode.hpp"

#include "chebyshev.hpp"
#include "henon/error.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>
#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace henon {

namespace {

double signed_pow(double x, double e) { return x < 0.0 ? -std::pow(-x, e) : std::pow(x, e); }

// Derivative weights at x[c] of the Lagrange polynomial through x[lo..lo+len).
std::vector<double> lagrange_derivative_weights(std::span<const double> x, std::size_t lo, std::size_t len,
                                                std::size_t c) {
    std::vector<double> w(len, 0.0);
    for (std::size_t j = 0; j < len; ++j) {
        double sum = 0.0;
        for (std::size_t m = 0; m < len; ++m) {
            if (m == j) continue;
            double term = 1.0 / (x[lo + j] - x[lo + m]);
            for (std::size_t l = 0; l < len; ++l) {
                if (l == j || l == m) continue;
                term *= (x[c] - x[lo + l]) / (x[lo + j] - x[lo + l]);
            }
            sum += term;
        }
        w[j] = sum;
    }
    return w;
}

// Gauss-Jacobi rule for int_0^1 x^m g(x) dx.
struct JacobiRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

JacobiRule jacobi_rule(int n, double m) {
    gsl_integration_fixed_workspace* w =
        gsl_integration_fixed_alloc(gsl_integration_fixed_jacobi, static_cast<std::size_t>(n), 0.0, 1.0, 0.0, m);
    if (w == nullptr) throw Error(ErrorKind::NoConvergence, "Gauss-Jacobi rule allocation failed");
    JacobiRule rule;
    const double* x = gsl_integration_fixed_nodes(w);
    const double* q = gsl_integration_fixed_weights(w);
    rule.nodes.assign(x, x + n);
    rule.weights.assign(q, q + n);
    gsl_integration_fixed_free(w);
    return rule;
}

class PicardEngine {
public:
    PicardEngine(const CouplingSpec& spec, std::vector<double> init, double rho_max, const PicardOptions& opt)
        : spec_(spec), k_(spec.k()), init_(std::move(init)), rho_max_(rho_max), opt_(opt),
          basis_(std::make_shared<detail::ChebyshevBasis>(opt.nodes)),
          sigma_(spec.space().sigma()), m_(2.0 / (spec.p() - 2.0)) {
        jacobi_ = jacobi_rule(opt.jacobi_nodes, m_);
        const int n = basis_->size();
        const int q = opt.jacobi_nodes;
        // first-window inner points rho_j * xi_q in local coordinates are 2 * (x_j + 1)/2 * xi_q - 1
        inner_interp_.resize(n * q, n);
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < q; ++l)
                inner_interp_.row(j * q + l) = basis_->interpolation_row((basis_->nodes()(j) + 1.0) * jacobi_.nodes[l] - 1.0);
        cap_ = opt.blowup_factor * *std::max_element(init_.begin(), init_.end());
    }

    RadialSolution run() {
        std::vector<RadialSolution::Window> windows;
        PicardStatus status = PicardStatus::Completed;
        double r_end = std::pow(rho_max_, 1.0 / sigma_);

        double max_ratio = 0.0;
        for (int i = 0; i < k_; ++i)
            max_ratio = std::max(max_ratio, coupling_rhs(spec_, i, init_) / init_[i]);
        double length = 0.5 * sigma_ * sigma_ * (m_ + 1.0) / std::max(max_ratio, 1e-300);
        length = std::min(length, rho_max_);

        double rho_a = 0.0;
        std::vector<double> u_a = init_;
        std::vector<double> y_a(k_, 0.0);
        std::vector<double> du_a(k_, 0.0);
        for (int i = 0; i < k_; ++i) du_a[i] = -coupling_rhs(spec_, i, init_) / (sigma_ * sigma_ * (m_ + 1.0));

        while (rho_a < rho_max_) {
            if (rho_a > 0.0) length = std::min(length, rho_a);
            length = std::min(length, rho_max_ - rho_a);
            RadialSolution::Window win;
            for (;;) {
                if (length < 1e-12 * std::max(1.0, rho_a))
                    throw Error(ErrorKind::NoConvergence,
                                "Picard window collapsed at rho = " + std::to_string(rho_a));
                if (attempt(rho_a, length, u_a, y_a, du_a, win)) break;
                length *= 0.5;
            }
            check_bounds(win);
            windows.push_back(win);

            const double zero = first_zero(win);
            if (zero >= 0.0) {
                status = PicardStatus::Vanished;
                r_end = std::pow(zero, 1.0 / sigma_);
                break;
            }
            const int last = basis_->size() - 1;
            rho_a = win.rho_end;
            for (int i = 0; i < k_; ++i) {
                u_a[i] = win.u[i](last);
                du_a[i] = win.u_rho[i](last);
                y_a[i] = std::pow(rho_a, m_ + 1.0) * du_a[i];
            }
            length *= 2.0;
        }
        return RadialSolution(spec_, init_, std::move(windows), status, r_end, basis_);
    }

private:
    // One attempt at the fixed point on [rho_a, rho_a + length]; false if the
    // window has to be shortened.
    bool attempt(double rho_a, double length, const std::vector<double>& u_a, const std::vector<double>& y_a,
                 const std::vector<double>& du_a, RadialSolution::Window& win) const {
        const int n = basis_->size();
        const Eigen::VectorXd& x = basis_->nodes();
        const Eigen::VectorXd rho = (rho_a + 0.5 * length * (x.array() + 1.0)).matrix();

        std::vector<Eigen::VectorXd> u(k_), u_rho(k_);
        for (int i = 0; i < k_; ++i) u[i] = (u_a[i] + du_a[i] * (rho.array() - rho_a)).matrix();

        double prev_diff = std::numeric_limits<double>::infinity();
        double worst_ratio = 0.0;
        bool converged = false;
        int it = 0;
        std::vector<double> point(k_);
        for (it = 1; it <= opt_.max_iterations; ++it) {
            std::vector<Eigen::VectorXd> next(k_);
            if (rho_a == 0.0) {
                const int q = opt_.jacobi_nodes;
                std::vector<Eigen::VectorXd> inner(k_);
                for (int i = 0; i < k_; ++i) inner[i] = inner_interp_ * u[i];
                for (int i = 0; i < k_; ++i) u_rho[i] = Eigen::VectorXd::Zero(n);
                for (int j = 0; j < n; ++j) {
                    for (int l = 0; l < q; ++l) {
                        for (int i = 0; i < k_; ++i) point[i] = inner[i](j * q + l);
                        for (int i = 0; i < k_; ++i)
                            u_rho[i](j) += jacobi_.weights[l] * coupling_rhs(spec_, i, point);
                    }
                }
                for (int i = 0; i < k_; ++i) u_rho[i] *= -1.0 / (sigma_ * sigma_);
            } else {
                std::vector<Eigen::VectorXd> g(k_, Eigen::VectorXd(n));
                for (int j = 0; j < n; ++j) {
                    for (int i = 0; i < k_; ++i) point[i] = u[i](j);
                    const double w = std::pow(rho(j), m_);
                    for (int i = 0; i < k_; ++i) g[i](j) = w * coupling_rhs(spec_, i, point);
                }
                for (int i = 0; i < k_; ++i) {
                    const Eigen::VectorXd y =
                        (y_a[i] - 0.5 * length / (sigma_ * sigma_) * (basis_->integration() * g[i]).array()).matrix();
                    u_rho[i] = (y.array() * rho.array().pow(-m_ - 1.0)).matrix();
                }
            }
            double diff = 0.0;
            for (int i = 0; i < k_; ++i) {
                next[i] = (u_a[i] + 0.5 * length * (basis_->integration() * u_rho[i]).array()).matrix();
                const double scale = std::max(next[i].cwiseAbs().maxCoeff(), 1e-300);
                diff = std::max(diff, (next[i] - u[i]).cwiseAbs().maxCoeff() / scale);
            }
            u = std::move(next);
            if (!std::isfinite(diff)) return false;
            if (diff < opt_.tol) {
                converged = true;
                break;
            }
            const double ratio = diff / prev_diff;
            if (prev_diff > 1e3 * opt_.tol) {
                worst_ratio = std::max(worst_ratio, it >= 3 ? ratio : 0.0);
                if (it >= 3 && ratio > opt_.max_contraction) return false;
            } else if (diff < 10.0 * opt_.tol && ratio > 0.9) {
                // stagnation at the rounding floor
                converged = true;
                break;
            }
            prev_diff = diff;
        }
        if (!converged) return false;

        // spectral resolution: trailing Chebyshev coefficients at rounding level
        for (int i = 0; i < k_; ++i) {
            const Eigen::VectorXd c = basis_->to_coefficients() * u[i];
            const double head = std::max(c.cwiseAbs().maxCoeff(), 1e-300);
            const double tail = c.tail(3).cwiseAbs().maxCoeff();
            if (tail > 1e-13 * head) return false;
        }
        win.rho_begin = rho_a;
        win.rho_end = rho_a + length;
        win.u = std::move(u);
        win.u_rho = std::move(u_rho);
        win.iterations = it;
        win.contraction = worst_ratio;
        return true;
    }

    void check_bounds(const RadialSolution::Window& win) const {
        for (const auto& ui : win.u) {
            for (int j = 0; j < ui.size(); ++j) {
                if (!std::isfinite(ui(j)) || std::abs(ui(j)) > cap_)
                    throw Error(ErrorKind::BlowUp, "solution exceeded " + std::to_string(cap_) + " at rho = " +
                                                       std::to_string(win.rho_begin));
            }
        }
    }

    // First rho in the window at which some component reaches zero, or -1.
    double first_zero(const RadialSolution::Window& win) const {
        const int n = basis_->size();
        double best = -1.0;
        for (int i = 0; i < k_; ++i) {
            const Eigen::VectorXd& ui = win.u[i];
            for (int j = 1; j < n; ++j) {
                if (ui(j) > 0.0) continue;
                const std::span<const double> vals(ui.data(), static_cast<std::size_t>(n));
                auto f = [&](double x) { return basis_->interpolate(vals, x); };
                double lo = basis_->nodes()(j - 1);
                double hi = basis_->nodes()(j);
                double x0 = hi;
                if (ui(j) < 0.0) {
                    std::uintmax_t iters = 200;
                    auto r = boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(52),
                                                               iters);
                    x0 = 0.5 * (r.first + r.second);
                }
                const double rho = win.rho_begin + 0.5 * (win.rho_end - win.rho_begin) * (x0 + 1.0);
                if (best < 0.0 || rho < best) best = rho;
                break;
            }
        }
        return best;
    }

    const CouplingSpec& spec_;
    int k_;
    std::vector<double> init_;
    double rho_max_;
    PicardOptions opt_;
    std::shared_ptr<detail::ChebyshevBasis> basis_;
    double sigma_;
    double m_;
    JacobiRule jacobi_;
    Eigen::MatrixXd inner_interp_;
    double cap_ = 0.0;
};

double gl_integrate(const std::function<double(double)>& f, double a, double b, double panel) {
    if (!(b > a)) return 0.0;
    const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / panel)));
    const double h = (b - a) / panels;
    double sum = 0.0;
    for (int i = 0; i < panels; ++i)
        sum += boost::math::quadrature::gauss<double, 20>::integrate(f, a + i * h, a + (i + 1) * h);
    return sum;
}

}  // namespace

double coupling_rhs(const CouplingSpec& spec, int i, std::span<const double> u) {
    double sum = 0.0;
    for (int j = 0; j < spec.k(); ++j)
        sum += spec.kappa(i, j) * signed_pow(u[i], spec.alpha(i, j) - 1.0) * std::pow(std::abs(u[j]), spec.beta(i, j));
    return sum;
}

RadialSolution::RadialSolution(const CouplingSpec& spec, std::vector<double> init, std::vector<Window> windows,
                               PicardStatus status, double r_end,
                               std::shared_ptr<const detail::ChebyshevBasis> basis)
    : spec_(spec), init_(std::move(init)), windows_(std::move(windows)), status_(status), r_end_(r_end),
      basis_(std::move(basis)) {}

int RadialSolution::total_iterations() const {
    int total = 0;
    for (const auto& w : windows_) total += w.iterations;
    return total;
}

const RadialSolution::Window& RadialSolution::locate(double rho, double& x) const {
    auto it = std::lower_bound(windows_.begin(), windows_.end(), rho,
                               [](const Window& w, double r) { return w.rho_end < r; });
    if (it == windows_.end()) it = std::prev(windows_.end());
    x = std::clamp(2.0 * (rho - it->rho_begin) / (it->rho_end - it->rho_begin) - 1.0, -1.0, 1.0);
    return *it;
}

double RadialSolution::value(int i, double r) const {
    if (r < 0.0 || r > r_end_ * (1.0 + 1e-12))
        throw Error(ErrorKind::DomainError, "radius outside the solved range [0, " + std::to_string(r_end_) + "]");
    if (r == 0.0) return init_[i];
    double x = 0.0;
    const Window& w = locate(std::pow(r, spec_.space().sigma()), x);
    return basis_->interpolate(std::span<const double>(w.u[i].data(), w.u[i].size()), x);
}

double RadialSolution::derivative(int i, double r) const {
    if (!(r > 0.0) || r > r_end_ * (1.0 + 1e-12))
        throw Error(ErrorKind::DomainError, "derivative needs 0 < r <= " + std::to_string(r_end_));
    const double sigma = spec_.space().sigma();
    double x = 0.0;
    const Window& w = locate(std::pow(r, sigma), x);
    const double du = basis_->interpolate(std::span<const double>(w.u_rho[i].data(), w.u_rho[i].size()), x);
    return sigma * std::pow(r, sigma - 1.0) * du;
}

double RadialSolution::flux(int i, double r) const {
    if (r < 0.0 || r > r_end_ * (1.0 + 1e-12))
        throw Error(ErrorKind::DomainError, "radius outside the solved range");
    if (r == 0.0) return 0.0;
    const double sigma = spec_.space().sigma();
    const double m = 2.0 / (spec_.p() - 2.0);
    const double rho = std::pow(r, sigma);
    double x = 0.0;
    const Window& w = locate(rho, x);
    const double du = basis_->interpolate(std::span<const double>(w.u_rho[i].data(), w.u_rho[i].size()), x);
    return sigma * std::pow(rho, m + 1.0) * du;
}

std::vector<double> RadialSolution::node_radii() const {
    const double sigma = spec_.space().sigma();
    std::vector<double> out{0.0};
    for (const auto& w : windows_) {
        for (int j = 1; j < basis_->size(); ++j) {
            const double rho = w.rho_begin + 0.5 * (w.rho_end - w.rho_begin) * (basis_->nodes()(j) + 1.0);
            const double r = std::pow(rho, 1.0 / sigma);
            if (r > r_end_) return out;
            out.push_back(r);
        }
    }
    return out;
}

std::vector<RadialProfile> RadialSolution::to_profiles(std::size_t n_pts) const {
    const WeightSpace& s = spec_.space();
    const double sigma = s.sigma();
    const double rho_small = 1e-14 * windows_.front().rho_end;
    const double t_lo = -std::log(r_end_);
    const double t_hi = -std::log(rho_small) / sigma;
    const std::vector<double> t = uniform_grid(t_lo, t_hi, n_pts);
    std::vector<RadialProfile> out;
    for (int i = 0; i < components(); ++i) {
        std::vector<double> v(n_pts), d(n_pts);
        for (std::size_t j = 0; j < n_pts; ++j) {
            const double r = std::min(std::exp(-t[j]), r_end_);
            const double rho = std::pow(r, sigma);
            double x = 0.0;
            const Window& w = locate(rho, x);
            const double u = basis_->interpolate(std::span<const double>(w.u[i].data(), w.u[i].size()), x);
            const double du = basis_->interpolate(std::span<const double>(w.u_rho[i].data(), w.u_rho[i].size()), x);
            const double rl = std::pow(r, s.lambda);
            v[j] = rl * u;
            d[j] = -rl * (s.lambda * u + sigma * rho * du);
        }
        out.emplace_back(t, std::move(v), std::move(d), s.lambda, s.lambda, status_ == PicardStatus::Completed);
    }
    return out;
}

RadialSolution picard_solve(const CouplingSpec& spec, const InitialData& init, double r_max,
                            const PicardOptions& options) {
    if (static_cast<int>(init.values_at_zero.size()) != spec.k())
        throw Error(ErrorKind::ConstraintViolation, "initial data must have one entry per component");
    for (double v : init.values_at_zero)
        if (!(v > 0.0) || !std::isfinite(v))
            throw Error(ErrorKind::ConstraintViolation, "initial data u_i(0) > 0 required");
    if (!(r_max > 0.0) || !std::isfinite(r_max)) throw Error(ErrorKind::ConstraintViolation, "r_max > 0 required");
    if (!(options.tol > 0.0)) throw Error(ErrorKind::ConstraintViolation, "tol > 0 required");
    if (options.nodes < 8) throw Error(ErrorKind::ConstraintViolation, "at least 8 collocation nodes required");
    PicardEngine engine(spec, init.values_at_zero, std::pow(r_max, spec.space().sigma()), options);
    return engine.run();
}

RadialSolution picard_solve(const ProblemParams& params, const InitialData& init, double r_max,
                            const PicardOptions& options) {
    return picard_solve(CouplingSpec::from_pair(params), init, r_max, options);
}

double residual(const CouplingSpec& spec, const std::vector<RadialProfile>& profiles) {
    const int k = spec.k();
    if (static_cast<int>(profiles.size()) != k)
        throw Error(ErrorKind::GridMismatch, "expected one profile per component");
    const std::span<const double> t = profiles.front().t_grid();
    const std::size_t n = t.size();
    if (n < 7) throw Error(ErrorKind::GridMismatch, "residual needs at least 7 nodes");
    for (const auto& p : profiles) {
        if (p.size() != n) throw Error(ErrorKind::GridMismatch, "profiles have different lengths");
        const std::span<const double> tp = p.t_grid();
        const double tol = 1e-12 * std::max(1.0, std::max(std::abs(t.front()), std::abs(t.back())));
        for (std::size_t j = 0; j < n; ++j)
            if (std::abs(tp[j] - t[j]) > tol) throw Error(ErrorKind::GridMismatch, "profiles use different t-grids");
    }
    const double gamma = spec.space().gamma;
    double scale = 0.0;
    double worst = 0.0;
    std::vector<double> phi(k);
    for (std::size_t c = 3; c + 3 < n; ++c) {
        const std::vector<double> w = lagrange_derivative_weights(t, c - 3, 7, c);
        for (int i = 0; i < k; ++i) phi[i] = profiles[i].values()[c];
        for (int i = 0; i < k; ++i) {
            const std::span<const double> d = profiles[i].derivs();
            double second = 0.0;
            for (std::size_t j = 0; j < 7; ++j) second += w[j] * d[c - 3 + j];
            const double rhs = coupling_rhs(spec, i, phi);
            scale = std::max({scale, std::abs(second), gamma * std::abs(phi[i]), std::abs(rhs)});
            worst = std::max(worst, std::abs(-second + gamma * phi[i] - rhs));
        }
    }
    return scale == 0.0 ? 0.0 : worst / scale;
}

double residual(const ProblemParams& params, const std::vector<RadialProfile>& profiles) {
    return residual(CouplingSpec::from_pair(params), profiles);
}

AsymptoticData asymptotics(const WeightSpace& space, const std::vector<RadialProfile>& profiles, double tol) {
    const double lambda = space.lambda;
    const double sigma = space.sigma();
    AsymptoticData out;
    for (const auto& p : profiles) {
        const std::span<const double> t = p.t_grid();
        const std::span<const double> v = p.values();
        const std::span<const double> d = p.derivs();
        const std::size_t n = t.size();
        const double span_t = t.back() - t.front();
        const double delta_target = std::min(1.0 / sigma, 0.125 * span_t);
        // node closest to t_min + delta and to t_max - delta
        const auto step = static_cast<std::size_t>(std::max(1.0, std::round(delta_target / (span_t / (n - 1)))));
        const std::size_t l1 = 0, l2 = std::min(step, n - 1);
        const std::size_t r2 = n - 1, r1 = n - 1 - std::min(step, n - 1);

        const double dl = t[l2] - t[l1];
        const double el = std::exp(-sigma * dl);
        const double g1 = v[l1] * std::exp(-lambda * t[l1]);
        const double g2 = v[l2] * std::exp(-lambda * t[l2]);
        const double u_inf = (g1 - g2 * el) / (1.0 - el);
        const double s_inf = (d[l1] / v[l1] - el * d[l2] / v[l2]) / (1.0 - el);

        const double dr = t[r2] - t[r1];
        const double er = std::exp(-sigma * dr);
        const double h2 = v[r2] * std::exp(lambda * t[r2]);
        const double h1 = v[r1] * std::exp(lambda * t[r1]);
        const double u0 = (h2 - h1 * er) / (1.0 - er);
        const double s_0 = (d[r2] / v[r2] - er * d[r1] / v[r1]) / (1.0 - er);

        double fit = std::max(std::abs(s_inf - lambda), std::abs(s_0 + lambda)) / lambda;
        if (!std::isfinite(fit) || !std::isfinite(u0) || !std::isfinite(u_inf))
            fit = std::numeric_limits<double>::infinity();
        out.u0.push_back(u0);
        out.u_inf.push_back(u_inf);
        out.decay_exponent.push_back(lambda + s_inf);
        out.fit_residuals.push_back(fit);
        if (!(fit <= tol))
            throw Error(ErrorKind::TailNotResolved,
                        "tail slope misses lambda by relative " + std::to_string(fit) + " (tolerance " +
                            std::to_string(tol) + "); integrate to a larger r_max");
    }
    return out;
}

UniquenessReport uniqueness_experiment(const CouplingSpec& spec, const InitialData& init1, const InitialData& init2,
                                       double r_max, double tol, const PicardOptions& options) {
    const std::vector<double>& a = init1.values_at_zero;
    const std::vector<double>& b = init2.values_at_zero;
    if (a.size() != b.size() || static_cast<int>(a.size()) != spec.k())
        throw Error(ErrorKind::NotProportional, "initial data have different lengths");
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!(a[i] > 0.0) || !(b[i] > 0.0))
            throw Error(ErrorKind::ConstraintViolation, "initial data u_i(0) > 0 required");
    const double theta = b[0] / a[0];
    for (std::size_t i = 1; i < a.size(); ++i)
        if (std::abs(b[i] / a[i] - theta) > 1e-12 * theta)
            throw Error(ErrorKind::NotProportional, "init2 is not a constant multiple of init1");

    const WeightSpace& s = spec.space();
    const double dil = std::pow(theta, 1.0 / s.lambda);
    const RadialSolution first = picard_solve(spec, init1, r_max * std::max(1.0, dil), options);
    const RadialSolution second = picard_solve(spec, init2, r_max, options);

    UniquenessReport rep;
    rep.theta = theta;
    rep.within_hypotheses = s.a >= 0.0 && s.b != 0.0;
    double r_cmp = r_max;
    if (first.status() == PicardStatus::Vanished || second.status() == PicardStatus::Vanished)
        r_cmp = 0.98 * std::min({r_max, second.r_end(), first.r_end() / dil, first.r_end()});
    rep.r_compared = r_cmp;

    std::vector<double> radii = second.node_radii();
    std::erase_if(radii, [&](double r) { return r > r_cmp; });
    for (int j = 1; j <= 1000; ++j) radii.push_back(r_cmp * j / 1000.0);

    const int k = spec.k();
    rep.deviation.assign(k, 0.0);
    rep.literal_deviation.assign(k, 0.0);
    for (int i = 0; i < k; ++i) {
        for (double r : radii) {
            const double u2 = second.value(i, r);
            const double scaled = theta * first.value(i, std::min(dil * r, first.r_end()));
            const double literal = theta * first.value(i, std::min(r, first.r_end()));
            rep.deviation[i] = std::max(rep.deviation[i], std::abs(u2 - scaled) / std::abs(u2));
            rep.literal_deviation[i] = std::max(rep.literal_deviation[i], std::abs(u2 - literal) / std::abs(u2));
        }
    }
    rep.pass = std::all_of(rep.deviation.begin(), rep.deviation.end(), [&](double d) { return d < tol; });
    return rep;
}

InversionResult inversion_normalize(const RadialProfile& profile) {
    const std::span<const double> t = profile.t_grid();
    const std::span<const double> v = profile.values();
    const std::size_t peak = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
    const double s_peak = t[peak];
    const double w = std::min(1.0, 0.25 * (profile.t_max() - profile.t_min()));
    const double half = std::min(profile.t_max() - s_peak - w, s_peak - w - profile.t_min());
    if (!(half > 0.0))
        throw Error(ErrorKind::DomainError, "profile peak too close to the end of the grid for recentring");
    const double panel = std::max(0.1, half / 400.0);

    auto energy = [&](double s) {
        return gl_integrate(
            [&](double x) {
                const double e = profile.value(s + x) - profile.value(s - x);
                return e * e;
            },
            0.0, half, panel);
    };
    auto slope = [&](double s) {
        return gl_integrate(
            [&](double x) {
                return (profile.value(s + x) - profile.value(s - x)) *
                       (profile.derivative(s + x) - profile.derivative(s - x));
            },
            0.0, half, panel);
    };

    const int n_scan = 40;
    std::vector<double> grid(n_scan + 1), e(n_scan + 1);
    for (int i = 0; i <= n_scan; ++i) {
        grid[i] = s_peak - w + 2.0 * w * i / n_scan;
        e[i] = energy(grid[i]);
    }
    const int best = static_cast<int>(std::min_element(e.begin(), e.end()) - e.begin());
    double s = grid[best];
    const double lo = grid[std::max(best - 1, 0)];
    const double hi = grid[std::min(best + 1, n_scan)];
    const double f_lo = slope(lo);
    const double f_hi = slope(hi);
    if (f_lo == 0.0) {
        s = lo;
    } else if (f_hi == 0.0) {
        s = hi;
    } else if ((f_lo < 0.0) != (f_hi < 0.0)) {
        std::uintmax_t iters = 100;
        auto r = boost::math::tools::toms748_solve(slope, lo, hi, f_lo, f_hi,
                                                   boost::math::tools::eps_tolerance<double>(50), iters);
        s = 0.5 * (r.first + r.second);
    }

    InversionResult out;
    out.shift = s;
    out.tau = std::exp(-s);
    out.profile = profile.shifted(s);
    const double peak_value = *std::max_element(v.begin(), v.end());
    double defect = 0.0;
    for (double x : out.profile.t_grid()) {
        if (x < 0.0 || x > half) continue;
        defect = std::max(defect, std::abs(out.profile.value(x) - out.profile.value(-x)));
    }
    out.defect = peak_value > 0.0 ? defect / peak_value : 0.0;
    return out;
}

nlohmann::json to_json(const AsymptoticData& data) {
    return nlohmann::json{{"u0", data.u0},
                          {"u_inf", data.u_inf},
                          {"decay_exponent", data.decay_exponent},
                          {"fit_residuals", data.fit_residuals}};
}

nlohmann::json to_json(const UniquenessReport& report) {
    return nlohmann::json{{"theta", report.theta},
                          {"deviation", report.deviation},
                          {"literal_deviation", report.literal_deviation},
                          {"r_compared", report.r_compared},
                          {"within_hypotheses", report.within_hypotheses},
                          {"pass", report.pass}};
}

}  // namespace henon
