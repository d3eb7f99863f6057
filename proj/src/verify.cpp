#include "henon/verify.hpp"

#include "henon/bubble.hpp"
#include "henon/coupling.hpp"
#include "henon/error.hpp"
#include "henon/groundstate.hpp"
#include "henon/radial_ode.hpp"
#include "henon/spectrum.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <functional>

namespace henon {

namespace {

CheckResult measured(std::string name, double value, double tol, std::string detail = {}) {
    CheckResult c;
    c.name = std::move(name);
    c.value = value;
    c.tolerance = tol;
    c.pass = value <= tol;
    c.detail = std::move(detail);
    return c;
}

CheckResult guarded(const std::string& name, const std::function<CheckResult()>& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        CheckResult c;
        c.name = name;
        c.detail = e.what();
        c.skipped = e.kind() == ErrorKind::SymmetryBreakingRegime;
        c.pass = c.skipped;
        return c;
    }
}

std::vector<SyncConstants> positive_roots(const ProblemParams& params) {
    return require_positive_root(solve_sync_2(params));
}

}  // namespace

std::vector<CheckResult> verify_all(const ProblemParams& params) {
    const WeightSpace& w = params.space();
    const double p = w.p;
    std::vector<CheckResult> out;

    out.push_back(guarded("bubble_residual", [&] {
        const BubbleParams bp = make_bubble(w, 1.0);
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            const double r = std::pow(10.0, -3.0 + 6.0 * i / 199.0);
            worst = std::max(worst, radial_residual(w, 0.0, r, bubble_jet(bp, r)));
        }
        return measured("bubble_residual", worst, 1e-10, "200 radii in [1e-3, 1e3]");
    }));

    out.push_back(guarded("kelvin_involution", [&] {
        double worst = 0.0;
        for (double mu : {0.5, 2.0}) {
            const RadialProfile k = kelvin_transform(bubble_profile(make_bubble(w, mu)));
            const BubbleParams inv = make_bubble(w, 1.0 / mu);
            const auto t = k.t_grid();
            const auto v = k.values();
            const double peak = *std::max_element(v.begin(), v.end());
            for (std::size_t i = 0; i < t.size(); ++i)
                worst = std::max(worst, std::abs(v[i] - bubble_phi(inv, t[i])) / peak);
        }
        return measured("kelvin_involution", worst, 1e-12, "Kelvin(U_mu) against U_{1/mu}");
    }));

    out.push_back(guarded("sync_roots", [&] {
        double worst = 0.0;
        for (const auto& sc : solve_sync_2(params)) worst = std::max(worst, sc.residual);
        return measured("sync_roots", worst, 1e-12, "algebraic synchronization residual");
    }));

    out.push_back(guarded("sync_system", [&] {
        const RadialProfile u = bubble_profile(make_bubble(w, 1.0));
        double worst = 0.0;
        for (const auto& sc : positive_roots(params))
            worst = std::max(worst, residual(params, {u.scaled(sc.c[0]), u.scaled(sc.c[1])}));
        return measured("sync_system", worst, 1e-8, "(c1 U, c2 U) in the coupled system");
    }));

    out.push_back(guarded("picard_reproduction", [&] {
        const SyncConstants sc = positive_roots(params).front();
        const double K = bubble_constant(w);
        const RadialSolution sol = picard_solve(params, InitialData{{sc.c[0] * K, sc.c[1] * K}}, 10.0);
        const BubbleParams bp = make_bubble(w, 1.0);
        double worst = 0.0;
        for (int j = 1; j <= 500; ++j) {
            const double r = 10.0 * j / 500.0;
            for (int i = 0; i < 2; ++i)
                worst = std::max(worst, std::abs(sol.value(i, r) / (sc.c[i] * bubble_value(bp, r)) - 1.0));
        }
        return measured("picard_reproduction", worst, 1e-6, "r in [0, 10]");
    }));

    out.push_back(guarded("asymptotics", [&] {
        const AsymptoticData d = asymptotics(w, {bubble_profile(make_bubble(w, 1.0))});
        const double expected = w.n - 2.0 - 2.0 * w.a;
        CheckResult c = measured("asymptotics", std::abs(d.decay_exponent[0] / expected - 1.0), 1e-4,
                                 "decay exponent against n - 2 - 2a");
        c.pass = c.pass && d.u_inf[0] > 0.0;
        return c;
    }));

    out.push_back(guarded("inversion_symmetry", [&] {
        const InversionResult r = inversion_normalize(bubble_profile(make_bubble(w, 3.0)));
        const auto t = r.profile.t_grid();
        const auto v = r.profile.values();
        bool decreasing = true;
        for (std::size_t i = 1; i < t.size(); ++i)
            if (t[i - 1] > 0.0 && v[i] > 1e-300 && !(v[i] < v[i - 1])) decreasing = false;
        CheckResult c = measured("inversion_symmetry", r.defect, 1e-8, "evenness defect after recentring");
        c.pass = c.pass && decreasing;
        if (!decreasing) c.detail += "; not strictly decreasing for t > 0";
        return c;
    }));

    out.push_back(guarded("f_regime", [&] {
        const FMinimum m = minimize_f(params);
        const CaseLabel label = regime_cases(params);
        CheckResult c;
        c.name = "f_regime";
        c.detail = std::string(to_string(label));
        switch (label) {
            case CaseLabel::CaseIII:
                c.value = std::abs(m.f_min - 1.0);
                c.tolerance = 1e-10;
                c.pass = c.value <= c.tolerance && !m.interior;
                break;
            case CaseLabel::CaseI:
            case CaseLabel::CaseII:
                c.value = m.f_min;
                c.tolerance = 1.0;
                c.pass = m.interior && m.f_min < 1.0;
                break;
            case CaseLabel::Unclassified:
                c.value = m.f_min;
                c.skipped = true;
                c.pass = true;
                break;
        }
        return c;
    }));

    out.push_back(guarded("sharp_constant_dilation", [&] {
        const double S = sharp_ckn_constant(w);
        double worst = 0.0;
        for (double mu : {0.5, 2.0}) worst = std::max(worst, std::abs(sharp_ckn_constant(w, mu) / S - 1.0));
        return measured("sharp_constant_dilation", worst, 1e-10, "S from U_mu, mu in {0.5, 2}");
    }));

    out.push_back(guarded("energy_identity", [&] {
        const GroundStateReport g = ground_energy(params);
        const BubbleParams bp = make_bubble(w, 1.0);
        const double T = default_half_width(w);
        const int panels = static_cast<int>(std::ceil(2.0 * T * std::max(w.lambda, w.sech_rate()) / 0.5));
        const double h = 2.0 * T / panels;
        auto dens = [&](double t) {
            const double f = bubble_phi(bp, t);
            const double df = bubble_phi_derivative(bp, t);
            return df * df + w.gamma * f * f;
        };
        double dir = 0.0;
        for (int i = 0; i < panels; ++i)
            dir += boost::math::quadrature::gauss<double, 20>::integrate(dens, -T + i * h, -T + (i + 1) * h);
        dir *= sphere_area(w.n);
        double c2 = 0.0;
        for (double c : g.constants) c2 += c * c;
        return measured("energy_identity", std::abs((0.5 - 1.0 / p) * c2 * dir / g.energy - 1.0), 1e-8,
                        "(1/2 - 1/p) |c|^2 int |x|^{-2a}|grad U|^2 against the energy formula");
    }));

    out.push_back(guarded("radial_spectrum", [&] {
        const RadialEigenResult r = radial_eigen(w, 3);
        const auto [c1, c2] = mode_cosines(w, r);
        const double err = std::max(std::abs(r.eigenvalues[0] - 1.0), std::abs(r.eigenvalues[1] - (p - 1.0)));
        CheckResult c = measured("radial_spectrum", err, 1e-4, "lambda_1 = 1, lambda_2 = p - 1");
        c.pass = c.pass && c1 > 1.0 - 1e-6 && c2 > 1.0 - 1e-6 && r.eigenvalues[2] > p - 1.0;
        return c;
    }));

    out.push_back(guarded("nondegeneracy", [&] {
        double worst = 0.0;
        bool ok = true;
        for (const auto& sc : solve_sync_2(params)) {
            const NondegeneracyReport rep = nondegeneracy_check(params, sc.c[0], sc.c[1]);
            if (rep.sufficient_nu_bound && !rep.nondegenerate) ok = false;
            if (rep.semi_trivial) continue;
            const DecoupleResult d = linearized_decouple(params, sc.c[0], sc.c[1]);
            worst = std::max({worst, std::abs(d.dilation_eigenvalue - (p - 1.0)) / p,
                              std::abs(d.coupled_eigenvalue - (p - 1.0 - rep.lhs)) / std::max(1.0, rep.lhs),
                              std::abs(d.gamma_tilde + sc.c[1] / sc.c[0]) / std::max(1.0, sc.c[1] / sc.c[0])});
        }
        CheckResult c = measured("nondegeneracy", worst, 1e-12, "theta-matrix eigenvalue identities");
        c.pass = c.pass && ok;
        return c;
    }));

    return out;
}

nlohmann::json to_json(const CheckResult& c) {
    return {{"name", c.name},           {"pass", c.pass},           {"skipped", c.skipped},
            {"value", c.value},         {"tolerance", c.tolerance}, {"detail", c.detail}};
}

}  // namespace henon
