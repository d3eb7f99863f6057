#include "henon/bubble.hpp"

#include "henon/error.hpp"

#include <algorithm>
#include <cmath>

namespace henon {

namespace {

// Exponents of U(x) = K (1 + |x|^q)^{-m}, written exactly as in the closed form.
struct BubbleShape {
    double K;
    double q;
    double m;
};

BubbleShape shape(const WeightSpace& s) {
    const double e = 1.0 + s.a - s.b;
    const double d = s.n - 2.0 - 2.0 * s.a;
    const double denom = s.n - 2.0 * e;
    BubbleShape out;
    out.K = std::pow(s.n * d * d / denom, denom / (4.0 * e));
    out.q = 2.0 * d * e / denom;
    out.m = denom / (2.0 * e);
    return out;
}

// ln(1 + x^q) without overflow for large x.
double log1p_pow(double x, double q) {
    if (x <= 1.0) return std::log1p(std::pow(x, q));
    return q * std::log(x) + std::log1p(std::pow(x, -q));
}

// ln(2 cosh y)
double log_two_cosh(double y) {
    const double ay = std::abs(y);
    return ay + std::log1p(std::exp(-2.0 * ay));
}

}  // namespace

BubbleParams make_bubble(const WeightSpace& space, double mu) {
    if (!(mu > 0.0) || !std::isfinite(mu))
        throw Error(ErrorKind::ConstraintViolation, "bubble scaling factor mu > 0 required");
    return BubbleParams{space, mu};
}

double bubble_constant(const WeightSpace& space) { return shape(space).K; }

double bubble_value(const BubbleParams& bp, double r) {
    if (!(r > 0.0)) throw Error(ErrorKind::DomainError, "bubble_value requires r > 0");
    const BubbleShape sh = shape(bp.space);
    const double x = r / bp.mu;
    return std::pow(bp.mu, -bp.space.lambda) * sh.K * std::exp(-sh.m * log1p_pow(x, sh.q));
}

RadialJet bubble_jet(const BubbleParams& bp, double r) {
    if (!(r > 0.0)) throw Error(ErrorKind::DomainError, "bubble_jet requires r > 0");
    const BubbleShape sh = shape(bp.space);
    const double x = r / bp.mu;
    const double xq = std::pow(x, sh.q);
    const double base = sh.K * std::exp(-sh.m * log1p_pow(x, sh.q));  // K (1+x^q)^{-m}
    const double u = base;
    const double du = -sh.K * sh.m * sh.q * std::pow(x, sh.q - 1.0) * std::exp(-(sh.m + 1.0) * log1p_pow(x, sh.q));
    const double d2u = -sh.K * sh.m * sh.q * std::pow(x, sh.q - 2.0) *
                       std::exp(-(sh.m + 2.0) * log1p_pow(x, sh.q)) *
                       ((sh.q - 1.0) * (1.0 + xq) - (sh.m + 1.0) * sh.q * xq);
    const double scale = std::pow(bp.mu, -bp.space.lambda);
    return RadialJet{scale * u, scale * du / bp.mu, scale * d2u / (bp.mu * bp.mu)};
}

double bubble_phi(const BubbleParams& bp, double t) {
    const BubbleShape sh = shape(bp.space);
    const double s = t + std::log(bp.mu);
    return sh.K * std::exp(-sh.m * log_two_cosh(0.5 * sh.q * s));
}

double bubble_phi_derivative(const BubbleParams& bp, double t) {
    const BubbleShape sh = shape(bp.space);
    const double s = t + std::log(bp.mu);
    return -sh.m * 0.5 * sh.q * std::tanh(0.5 * sh.q * s) * bubble_phi(bp, t);
}

double default_half_width(const WeightSpace& space) {
    const double m = space.sech_power();
    const double kappa = space.sech_rate();
    const double by_value = (14.0 * std::log(10.0) + m * std::log(2.0)) / space.lambda;
    const double by_slope = 9.0 / kappa;
    return std::max(by_value, by_slope);
}

RadialProfile bubble_profile(const BubbleParams& bp, double t_min, double t_max, std::size_t n_pts) {
    if (!(t_min < t_max)) throw Error(ErrorKind::DomainError, "bubble_profile requires t_min < t_max");
    if (n_pts < 16) throw Error(ErrorKind::DomainError, "bubble_profile requires n_pts >= 16");
    std::vector<double> t = uniform_grid(t_min, t_max, n_pts);
    std::vector<double> v(n_pts), d(n_pts);
    for (std::size_t i = 0; i < n_pts; ++i) {
        v[i] = bubble_phi(bp, t[i]);
        d[i] = bubble_phi_derivative(bp, t[i]);
    }
    return RadialProfile(std::move(t), std::move(v), std::move(d), bp.space.lambda, bp.space.lambda);
}

RadialProfile bubble_profile(const BubbleParams& bp) {
    const double T = default_half_width(bp.space);
    const double h = 0.01 / std::max(bp.space.lambda, bp.space.sech_rate());
    // an even number of intervals puts the peak on a node
    const auto intervals = static_cast<std::size_t>(std::clamp(std::ceil(T / h), 1000.0, 100000.0));
    const std::size_t n = 2 * intervals + 1;
    const double c = -std::log(bp.mu);
    return bubble_profile(bp, c - T, c + T, n);
}

double soliton_profile(const WeightSpace& space, double t) {
    const double p = space.p;
    const double amplitude = std::pow(0.5 * p * space.gamma, 1.0 / (p - 2.0));
    const double rate = 0.5 * (p - 2.0) * std::sqrt(space.gamma);
    // sech y = exp(-ln(cosh y)) = exp(ln 2 - ln(2 cosh y))
    const double log_sech = std::log(2.0) - log_two_cosh(rate * t);
    return amplitude * std::exp(2.0 / (p - 2.0) * log_sech);
}

RadialProfile kelvin_transform(const RadialProfile& profile) { return profile.reflected(); }

double radial_residual(const WeightSpace& space, double gamma_hs, double r, const RadialJet& jet) {
    const double w = std::pow(r, -2.0 * space.a);
    const double t_second = -w * jet.d2u;
    const double t_first = -w * (space.n - 1.0 - 2.0 * space.a) * jet.du / r;
    const double t_mass = gamma_hs * std::pow(r, -2.0 - 2.0 * space.a) * jet.u;
    const double t_rhs = std::pow(r, -space.b * space.p) * std::pow(std::abs(jet.u), space.p - 2.0) * jet.u;
    const double scale =
        std::max({std::abs(t_second), std::abs(t_first), std::abs(t_mass), std::abs(t_rhs)});
    if (scale == 0.0) return 0.0;
    return std::abs(t_second + t_first + t_mass - t_rhs) / scale;
}

double HardySobolevMap::forward_value(double r, double u) const { return std::pow(r, shift) * u; }

double HardySobolevMap::inverse_value(double r, double u_bar) const { return std::pow(r, -shift) * u_bar; }

RadialJet HardySobolevMap::forward_jet(double r, const RadialJet& u) const {
    const double d = shift;
    const double rd = std::pow(r, d);
    return RadialJet{rd * u.u, rd * (d * u.u / r + u.du),
                     rd * (d * (d - 1.0) * u.u / (r * r) + 2.0 * d * u.du / r + u.d2u)};
}

RadialProfile HardySobolevMap::forward(const RadialProfile& u) const { return u.with_lambda(target.lambda); }

RadialProfile HardySobolevMap::inverse(const RadialProfile& u_bar) const { return u_bar.with_lambda(source.lambda); }

HardySobolevMap hardy_sobolev_map(const WeightSpace& space, double gamma_hs) {
    const double lam2 = space.lambda * space.lambda;
    if (!(gamma_hs < lam2))
        throw Error(ErrorKind::DomainError, "gamma_hs < lambda^2 required for the transformed weight to stay admissible");
    const double lambda_bar = std::sqrt(lam2 - gamma_hs);
    HardySobolevMap map;
    map.source = space;
    map.gamma_hs = gamma_hs;
    map.shift = space.lambda - lambda_bar;
    map.target = validate_space(space.n, space.a + map.shift, space.b + map.shift);
    return map;
}

std::pair<ProblemParams, HardySobolevMap> hardy_sobolev_map(const ProblemParams& params, double gamma_hs) {
    HardySobolevMap map = hardy_sobolev_map(params.space(), gamma_hs);
    ProblemParams target = validate_params(params.n(), map.target.a, map.target.b, params.nu(), params.alpha(),
                                           params.beta());
    return {target, map};
}

HardySobolevMap hardy_sobolev_from_target(const WeightSpace& target, double gamma_hs) {
    const double lam2 = target.lambda * target.lambda;
    if (!(gamma_hs > -lam2)) throw Error(ErrorKind::DomainError, "gamma_hs > -lambda_bar^2 required");
    HardySobolevMap map;
    map.target = target;
    map.gamma_hs = gamma_hs;
    map.shift = std::sqrt(lam2 + gamma_hs) - target.lambda;
    map.source = validate_space(target.n, target.a - map.shift, target.b - map.shift);
    return map;
}

}  // namespace henon
