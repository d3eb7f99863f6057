// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "henon/bubble.hpp"
#include "henon/coupling.hpp"
#include "henon/error.hpp"
#include "henon/groundstate.hpp"
#include "henon/radial_ode.hpp"
#include "henon/spectrum.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>

using namespace henon;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, const std::function<Verdict()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
        v = body();
    } catch (const std::exception& e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2d %-28s %s (%.2fs)\n", v.pass ? "PASS" : "FAIL", id, title, v.detail.c_str(), secs);
    std::fflush(stdout);
    if (!v.pass) ++failures;
}

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

/// Random admissible weight space with a >= 0.
WeightSpace random_space(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> un(3, 6);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (;;) {
        const int n = un(rng);
        const double a = 0.8 * u01(rng) * (n - 2) / 2.0;
        const double b = a + 0.9 * u01(rng);
        try {
            return validate_space(n, a, b);
        } catch (const Error&) {
        }
    }
}

/// Random coupled parameters with alpha + beta = p on a symmetric space.
ProblemParams random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (;;) {
        const WeightSpace w = random_space(rng);
        const double alpha = 1.2 + u01(rng) * (w.p - 2.4);
        const double nu = std::exp(std::log(0.05) + u01(rng) * std::log(100.0));
        try {
            return validate_params(w.n, w.a, w.b, nu, alpha, w.p - alpha);
        } catch (const Error&) {
        }
    }
}

CouplingSpec random_variational(const WeightSpace& w, int k, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ua(1.2, w.p - 1.2);
    std::uniform_real_distribution<double> uk(0.2, 1.5);
    CouplingSpec::Table kappa(k, std::vector<double>(k)), alpha = kappa, beta = kappa;
    for (int i = 0; i < k; ++i) {
        kappa[i][i] = uk(rng);
        alpha[i][i] = beta[i][i] = w.p / 2.0;
        for (int j = i + 1; j < k; ++j) {
            alpha[i][j] = ua(rng);
            beta[i][j] = w.p - alpha[i][j];
            alpha[j][i] = beta[i][j];
            beta[j][i] = alpha[i][j];
            kappa[i][j] = uk(rng);
            kappa[j][i] = kappa[i][j] * beta[i][j] / alpha[i][j];
        }
    }
    return make_coupling_spec(w, kappa, alpha, beta);
}

RadialProfile sum_of_bubbles(const WeightSpace& w, const std::vector<double>& coef, const std::vector<double>& mus,
                             double t_min, double t_max, std::size_t n_pts) {
    const std::vector<double> t = uniform_grid(t_min, t_max, n_pts);
    std::vector<double> v(n_pts, 0.0), d(n_pts, 0.0);
    for (std::size_t j = 0; j < coef.size(); ++j) {
        const BubbleParams bp = make_bubble(w, mus[j]);
        for (std::size_t i = 0; i < n_pts; ++i) {
            v[i] += coef[j] * bubble_phi(bp, t[i]);
            d[i] += coef[j] * bubble_phi_derivative(bp, t[i]);
        }
    }
    return RadialProfile(t, v, d, w.lambda, w.lambda);
}

/// omega int (phi'^2 + gamma phi^2) dt for the unit bubble, panelled Gauss-Legendre.
double bubble_dirichlet(const WeightSpace& w) {
    const BubbleParams bp = make_bubble(w, 1.0);
    const double T = default_half_width(w);
    const int panels = static_cast<int>(std::ceil(4.0 * T * std::max(w.lambda, w.sech_rate())));
    const double h = 2.0 * T / panels;
    auto dens = [&](double t) {
        const double f = bubble_phi(bp, t), df = bubble_phi_derivative(bp, t);
        return df * df + w.gamma * f * f;
    };
    double s = 0.0;
    for (int i = 0; i < panels; ++i)
        s += boost::math::quadrature::gauss<double, 20>::integrate(dens, -T + i * h, -T + (i + 1) * h);
    return sphere_area(w.n) * s;
}

}  // namespace

int main() {
    std::mt19937_64 rng(20261018);
    std::vector<ProblemParams> sets;
    for (int i = 0; i < 10; ++i) sets.push_back(random_params(rng));

    criterion(1, "bubble residual", [&] {
        double worst = 0.0;
        for (int s = 0; s < 20; ++s) {
            const WeightSpace w = random_space(rng);
            const BubbleParams bp = make_bubble(w, 1.0);
            for (int i = 0; i < 200; ++i) {
                const double r = std::pow(10.0, -3.0 + 6.0 * i / 199.0);
                worst = std::max(worst, radial_residual(w, 0.0, r, bubble_jet(bp, r)));
            }
        }
        return Verdict{worst < 1e-10, "20 sets x 200 radii, max residual " + fmt("%.3e", worst) + " < 1e-10"};
    });

    criterion(2, "synchronization round-trip", [&] {
        double sys = 0.0, alg = 0.0;
        int roots = 0;
        for (const auto& pp : sets) {
            const RadialProfile u = bubble_profile(make_bubble(pp.space(), 1.0));
            for (const auto& sc : solve_sync_2(pp)) {
                if (sc.label == SyncLabel::Trivial) continue;
                sys = std::max(sys, residual(pp, {u.scaled(sc.c[0]), u.scaled(sc.c[1])}));
                alg = std::max(alg, sync_residual(pp, sc.c[0], sc.c[1]));
                ++roots;
            }
        }
        return Verdict{sys < 1e-8 && alg < 1e-12, std::to_string(roots) + " roots, system " + fmt("%.3e", sys) +
                                                      " < 1e-8, algebraic " + fmt("%.3e", alg) + " < 1e-12"};
    });

    criterion(3, "Picard reproduction", [&] {
        double worst = 0.0;
        for (int s = 0; s < 5; ++s) {
            const ProblemParams& pp = sets[s];
            const SyncConstants sc = require_positive_root(solve_sync_2(pp)).front();
            const double K = bubble_constant(pp.space());
            const RadialSolution sol = picard_solve(pp, InitialData{{sc.c[0] * K, sc.c[1] * K}}, 10.0);
            const BubbleParams bp = make_bubble(pp.space(), 1.0);
            for (int j = 0; j <= 1000; ++j) {
                const double r = 10.0 * j / 1000.0;
                for (int i = 0; i < 2; ++i) {
                    const double exact = sc.c[i] * (r == 0.0 ? K : bubble_value(bp, r));
                    worst = std::max(worst, std::abs(sol.value(i, r) / exact - 1.0));
                }
            }
        }
        return Verdict{worst < 1e-6, "5 sets, r in [0, 10], max relative error " + fmt("%.3e", worst) + " < 1e-6"};
    });

    criterion(4, "uniqueness, k = 3", [&] {
        double worst = 0.0;
        bool ok = true;
        std::uniform_real_distribution<double> u0(0.5, 1.5);
        for (int s = 0; s < 3; ++s) {
            WeightSpace w = random_space(rng);
            // b != 0 for the theorem, p >= 3 so that exponents in (1.2, p - 1.2) exist
            while (w.b == 0.0 || w.p < 3.0) w = random_space(rng);
            const CouplingSpec spec = random_variational(w, 3, rng);
            // random direction, rescaled by the dilation u -> tau^lambda u(tau r) so the theta = 2
            // run stays positive beyond r = 6
            std::vector<double> d{u0(rng), u0(rng), u0(rng)};
            const RadialSolution probe = picard_solve(spec, InitialData{d}, 1e3);
            const double reach = probe.r_end() / std::pow(2.0, 1.0 / w.lambda);
            const double tau = std::min(1.0, reach / 6.0);
            for (double& x : d) x *= std::pow(tau, w.lambda);
            const InitialData one{d};
            const InitialData two{{2 * d[0], 2 * d[1], 2 * d[2]}};
            const UniquenessReport rep = uniqueness_experiment(spec, one, two, 5.0, 1e-8);
            ok = ok && rep.pass && rep.within_hypotheses && rep.r_compared >= 5.0 - 1e-12;
            for (double dev : rep.deviation) worst = std::max(worst, dev);
        }
        return Verdict{ok && worst < 1e-8, "3 specs, theta = 2, r in [0, 5], max deviation " + fmt("%.3e", worst) + " < 1e-8"};
    });

    criterion(5, "asymptotics", [&] {
        double worst = 0.0;
        bool positive = true;
        for (const auto& pp : sets) {
            const WeightSpace& w = pp.space();
            const RadialProfile u = bubble_profile(make_bubble(w, 1.0));
            const SyncConstants sc = require_positive_root(solve_sync_2(pp)).front();
            const AsymptoticData d = asymptotics(w, {u.scaled(sc.c[0]), u.scaled(sc.c[1])});
            for (int i = 0; i < 2; ++i) {
                worst = std::max(worst, std::abs(d.decay_exponent[i] / (w.n - 2.0 - 2.0 * w.a) - 1.0));
                positive = positive && d.u_inf[i] > 0.0;
            }
        }
        return Verdict{worst < 1e-4 && positive,
                       "10 sets, exponent relative error " + fmt("%.3e", worst) + " < 1e-4, u_inf > 0"};
    });

    criterion(6, "inversion symmetry", [&] {
        double worst = 0.0;
        bool decreasing = true;
        std::uniform_real_distribution<double> ulog(-2.0, 2.0);
        for (const auto& pp : sets) {
            const InversionResult r = inversion_normalize(bubble_profile(make_bubble(pp.space(), std::exp(ulog(rng)))));
            worst = std::max(worst, r.defect);
            const auto t = r.profile.t_grid();
            const auto v = r.profile.values();
            for (std::size_t i = 1; i < t.size(); ++i)
                if (t[i - 1] > 0.0 && v[i] > 0.0 && !(v[i] < v[i - 1])) decreasing = false;
        }
        return Verdict{worst < 1e-8 && decreasing,
                       "10 sets, evenness defect " + fmt("%.3e", worst) + " < 1e-8, strictly decreasing for t > 0"};
    });

    criterion(7, "Kelvin and Hardy-Sobolev", [&] {
        double kelvin = 0.0, hs = 0.0;
        for (int s = 0; s < 10; ++s) {
            const WeightSpace w = random_space(rng);
            for (double mu : {0.3, 1.0, 2.5}) {
                const RadialProfile k = kelvin_transform(bubble_profile(make_bubble(w, mu)));
                const BubbleParams inv = make_bubble(w, 1.0 / mu);
                const auto t = k.t_grid();
                const auto v = k.values();
                const double peak = *std::max_element(v.begin(), v.end());
                for (std::size_t i = 0; i < t.size(); ++i)
                    kelvin = std::max(kelvin, std::abs(v[i] - bubble_phi(inv, t[i])) / peak);
            }
            const RadialProfile prof = bubble_profile(make_bubble(w, 1.0));
            for (double g : {-0.5 * w.gamma, 0.5 * w.gamma}) {
                const HardySobolevMap m = hardy_sobolev_map(w, g);
                const HardySobolevMap back = hardy_sobolev_from_target(m.target, g);
                hs = std::max({hs, std::abs(back.source.a - w.a), std::abs(back.source.b - w.b)});
                const RadialProfile rt = m.inverse(m.forward(prof));
                for (int j = 0; j < 50; ++j) {
                    const double r = std::pow(10.0, -2.0 + 4.0 * j / 49.0);
                    const double u = prof.radial_value(r);
                    hs = std::max({hs, std::abs(rt.radial_value(r) / u - 1.0),
                                   std::abs(m.inverse_value(r, m.forward_value(r, u)) / u - 1.0)});
                }
            }
        }
        return Verdict{kelvin < 1e-12 && hs < 1e-12,
                       "Kelvin " + fmt("%.3e", kelvin) + ", Hardy-Sobolev round trip " + fmt("%.3e", hs) + " < 1e-12"};
    });

    criterion(8, "coupling-function regimes", [&] {
        bool ok = true;
        double iii = 0.0, interior_max = 0.0;
        // case (iii): p = 6, min(alpha, beta) >= 2, nu <= (p - 2)/(2p) = 1/3
        for (double al : {2.0, 2.5, 3.0})
            for (double nu : {0.05, 0.2, 1.0 / 3.0}) {
                const ProblemParams pp = validate_params(3, 0, 0, nu, al, 6 - al);
                const FMinimum m = minimize_f(pp);
                ok = ok && regime_cases(pp) == CaseLabel::CaseIII && !m.interior;
                iii = std::max(iii, std::abs(m.f_min - 1.0));
            }
        // case (ii): min(alpha, beta) >= 2 and nu > (2^{p/2} - 2)/p = 1
        for (double al : {2.5, 2.75, 3.0})
            for (double nu : {1.2, 2.0, 5.0}) {
                const ProblemParams pp = validate_params(3, 0, 0, nu, al, 6 - al);
                const FMinimum m = minimize_f(pp);
                ok = ok && regime_cases(pp) == CaseLabel::CaseII && m.interior;
                interior_max = std::max(interior_max, m.f_min);
            }
        // case (i): min(alpha, beta) < 2
        const WeightSpace w = validate_space(4, 0.2, 0.5);
        for (double al : {1.3, 1.5, 1.7})
            for (double nu : {0.5, 1.0, 2.0}) {
                const ProblemParams pp = validate_params(4, 0.2, 0.5, nu, al, w.p - al);
                const FMinimum m = minimize_f(pp);
                ok = ok && regime_cases(pp) == CaseLabel::CaseI && m.interior;
                interior_max = std::max(interior_max, m.f_min);
            }
        ok = ok && iii < 1e-10 && interior_max < 1.0 - 1e-6;
        return Verdict{ok, "(iii) |f_min - 1| " + fmt("%.3e", iii) + " < 1e-10; (i),(ii) max f_min " +
                               fmt("%.9f", interior_max) + " < 1 - 1e-6"};
    });

    criterion(9, "sharp constants", [&] {
        double dil = 0.0;
        for (int s = 0; s < 10; ++s) {
            const WeightSpace w = random_space(rng);
            const double S = sharp_ckn_constant(w);
            for (double mu : {0.25, 0.5, 2.0, 4.0}) dil = std::max(dil, std::abs(sharp_ckn_constant(w, mu) / S - 1.0));
        }
        // Talenti: U = 3^{1/4} (1 + r^2)^{-1/2}, S = (4 pi int r^2 U^6 dr)^{2/3} = 3 (pi/2)^{4/3}
        boost::math::quadrature::tanh_sinh<double> ts;
        const double I = 4.0 * std::numbers::pi *
                         ts.integrate([](double r) { return r * r * 3.0 * std::sqrt(3.0) * std::pow(1 + r * r, -3.0); },
                                      0.0, INFINITY);
        const double oracle = std::pow(I, 2.0 / 3.0);
        const double talenti = std::abs(sharp_ckn_constant(validate_space(3, 0, 0)) / oracle - 1.0);

        double sbar = 0.0, low = INFINITY;
        int quotients = 0;
        std::uniform_real_distribution<double> uc(0.0, 1.0), umu(-1.0, 1.0);
        for (const ProblemParams& pp : {validate_params(3, 0, 0, 2.0, 3, 3), sets[0]}) {
            const WeightSpace& w = pp.space();
            const double S = sharp_ckn_constant(w), Sb = vector_ckn_constant(pp);
            sbar = std::max(sbar, std::abs(Sb / (S * minimize_f(pp).f_min) - 1.0));
            const CouplingSpec spec = CouplingSpec::from_pair(pp);
            const double T = default_half_width(w);
            for (int trial = 0; trial < 5000; ++trial) {
                const std::vector<double> mus{std::exp(umu(rng)), std::exp(umu(rng))};
                const RadialProfile u = sum_of_bubbles(w, {uc(rng), uc(rng)}, mus, -T - 3, T + 3, 1501);
                const RadialProfile v = sum_of_bubbles(w, {uc(rng), uc(rng)}, mus, -T - 3, T + 3, 1501);
                low = std::min(low, vector_rayleigh_quotient(spec, {u, v}) / Sb);
                ++quotients;
            }
        }
        const bool ok = dil < 1e-10 && talenti < 1e-8 && sbar < 1e-14 && low >= 1.0 - 1e-6;
        return Verdict{ok, "dilation " + fmt("%.2e", dil) + ", Talenti " + fmt("%.2e", talenti) + ", S_bar/(S f_min) - 1 " +
                               fmt("%.2e", sbar) + ", min of " + std::to_string(quotients) + " quotients / S_bar " +
                               fmt("%.9f", low)};
    });

    criterion(10, "energy identity", [&] {
        double worst = 0.0;
        for (const auto& pp : sets) {
            const GroundStateReport g = ground_energy(pp);
            double c2 = 0.0;
            for (double c : g.constants) c2 += c * c;
            const double direct = (0.5 - 1.0 / pp.p()) * c2 * bubble_dirichlet(pp.space());
            worst = std::max(worst, std::abs(direct / g.energy - 1.0));
        }
        return Verdict{worst < 1e-8, "10 sets, relative mismatch " + fmt("%.3e", worst) + " < 1e-8"};
    });

    criterion(11, "radial spectrum", [&] {
        double err = 0.0, cos_min = 1.0, margin = INFINITY;
        for (int s = 0; s < 4; ++s) {
            const WeightSpace& w = sets[s].space();
            const RadialEigenResult r = radial_eigen(w, 3);
            err = std::max({err, std::abs(r.eigenvalues[0] - 1.0), std::abs(r.eigenvalues[1] - (w.p - 1.0))});
            const auto [c1, c2] = mode_cosines(w, r);
            cos_min = std::min({cos_min, c1, c2});
            margin = std::min(margin, r.eigenvalues[2] - (w.p - 1.0));
        }
        return Verdict{err < 1e-4 && cos_min > 1.0 - 1e-6 && margin > 0.0,
                       "4 sets, eigenvalue error " + fmt("%.3e", err) + " < 1e-4, min cosine 1 - " +
                           fmt("%.2e", 1.0 - cos_min) + ", lambda_3 - (p - 1) >= " + fmt("%.4f", margin)};
    });

    criterion(12, "nondegeneracy", [&] {
        bool ok = true;
        double worst = 0.0;
        int bounded = 0;
        std::vector<ProblemParams> pool = sets;
        for (int s = 0; s < 10; ++s) {
            // nu at or below the sufficient bound (p - 2)/(2 alpha beta)
            const ProblemParams& q = sets[s];
            const double bound = (q.p() - 2.0) / (2.0 * q.alpha() * q.beta());
            pool.push_back(validate_params(q.n(), q.a(), q.b(), bound * (s + 1) / 10.0, q.alpha(), q.beta()));
        }
        for (const auto& pp : pool) {
            const double p = pp.p();
            for (const auto& sc : solve_sync_2(pp)) {
                const NondegeneracyReport rep = nondegeneracy_check(pp, sc.c[0], sc.c[1]);
                if (rep.sufficient_nu_bound) {
                    ++bounded;
                    ok = ok && rep.nondegenerate;
                }
                if (rep.semi_trivial) continue;
                const DecoupleResult d = linearized_decouple(pp, sc.c[0], sc.c[1]);
                const double ratio = sc.c[1] / sc.c[0];
                worst = std::max({worst, std::abs(d.dilation_eigenvalue - (p - 1.0)) / p,
                                  std::abs(d.coupled_eigenvalue - (p - 1.0 - rep.lhs)) / std::max(1.0, rep.lhs),
                                  std::abs(d.gamma_tilde + ratio) / std::max(1.0, ratio)});
            }
        }
        return Verdict{ok && worst < 1e-12, std::to_string(bounded) + " roots under the nu bound all nondegenerate, " +
                                                "theta identities " + fmt("%.3e", worst) + " < 1e-12"};
    });

    std::printf("%s: %d of 12 criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
