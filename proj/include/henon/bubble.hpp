#pragma once

#include "henon/params.hpp"
#include "henon/profile.hpp"

namespace henon {

/// U_mu(x) = mu^{(2+2a-n)/2} U(x / mu), the radial solutions of the decoupled equation.
/// The exponent -lambda is the one the weighted equation is invariant under.
struct BubbleParams {
    WeightSpace space;
    double mu = 1.0;
};

BubbleParams make_bubble(const WeightSpace& space, double mu = 1.0);

/// K(p,a,b) = (n (n-2-2a)^2 / (n - 2(1+a-b)))^{(n - 2(1+a-b)) / (4(1+a-b))} = U(0).
double bubble_constant(const WeightSpace& space);

/// U_mu(r). Throws DomainError for r <= 0.
double bubble_value(const BubbleParams& bp, double r);

struct RadialJet {
    double u = 0.0;
    double du = 0.0;
    double d2u = 0.0;
};

/// U_mu and its first two radial derivatives, in closed form.
RadialJet bubble_jet(const BubbleParams& bp, double r);

/// phi_U(t) = r^lambda U_mu(r), r = e^{-t}; evaluated through logarithms so it
/// stays finite far into both tails.
double bubble_phi(const BubbleParams& bp, double t);
double bubble_phi_derivative(const BubbleParams& bp, double t);

/// Half-width T of the default window [-T, T]: the profile has dropped below
/// 1e-14 of its peak and the tail slope matches lambda to better than 1e-7.
double default_half_width(const WeightSpace& space);

/// Uniform sampling of phi_U on [t_min, t_max] with exact derivatives.
RadialProfile bubble_profile(const BubbleParams& bp, double t_min, double t_max, std::size_t n_pts);
/// Window centred on the peak at t = -ln mu, default half-width and spacing.
RadialProfile bubble_profile(const BubbleParams& bp);

/// Even positive homoclinic of -phi'' + gamma phi = phi^{p-1}:
/// ((p/2) gamma)^{1/(p-2)} sech^{2/(p-2)}((p-2) sqrt(gamma) t / 2).
/// Computed from (p, gamma) alone, independently of the bubble formula.
double soliton_profile(const WeightSpace& space, double t);

/// Modified Kelvin transform |x|^{2+2a-n} u(x/|x|^2): reflection t -> -t.
RadialProfile kelvin_transform(const RadialProfile& profile);

/// Relative residual of
///   -r^{-2a}(u'' + (n-1-2a) u'/r) + gamma_hs r^{-2-2a} u - r^{-bp} |u|^{p-2} u
/// scaled by the largest of the three terms. gamma_hs = 0 is the decoupled
/// Henon equation in radial form.
double radial_residual(const WeightSpace& space, double gamma_hs, double r, const RadialJet& jet);

/// The map u -> |x|^{sqrt(lambda_bar^2 + gamma_hs) - lambda_bar} u relating the
/// Henon system on D_a to the Hardy-Sobolev system with mass term gamma_hs on
/// D_{a_bar}, a_bar = a + shift, b_bar = b + shift.
struct HardySobolevMap {
    WeightSpace source;
    WeightSpace target;
    double gamma_hs = 0.0;
    double shift = 0.0;  ///< sqrt(lambda_bar^2 + gamma_hs) - lambda_bar

    double forward_value(double r, double u) const;
    double inverse_value(double r, double u_bar) const;
    RadialJet forward_jet(double r, const RadialJet& u) const;
    /// In t-coordinates phi is unchanged; only the weight exponent moves to lambda_bar.
    RadialProfile forward(const RadialProfile& u) const;
    RadialProfile inverse(const RadialProfile& u_bar) const;
};

/// Forward direction from (a, b). Solving the implicit relations gives
/// lambda_bar = sqrt(lambda^2 - gamma_hs), so gamma_hs < lambda^2 is required
/// (DomainError otherwise).
HardySobolevMap hardy_sobolev_map(const WeightSpace& space, double gamma_hs);
/// Same, carrying the coupling parameters across.
std::pair<ProblemParams, HardySobolevMap> hardy_sobolev_map(const ProblemParams& params, double gamma_hs);

/// Recovers (a, b) from the transformed (a_bar, b_bar). DomainError if
/// gamma_hs <= -lambda_bar^2.
HardySobolevMap hardy_sobolev_from_target(const WeightSpace& target, double gamma_hs);

}  // namespace henon
