#pragma once

#include "harmonorm/harmonic_map.hpp"
#include "harmonorm/mobius.hpp"

#include <random>
#include <utility>

namespace harmonorm {

/// |epsilon| < 1 for the affine transform f -> (f - conj(epsilon f)) / (1 - conj(epsilon) g'(0)).
class AffineParams {
public:
    explicit AffineParams(cplx epsilon) : epsilon_(epsilon)
    {
        if (!(std::abs(epsilon) < 1.0)) {
            throw ConstructionError("affine parameter must satisfy |epsilon| < 1");
        }
    }
    cplx epsilon() const noexcept { return epsilon_; }

private:
    cplx epsilon_;
};

/// phi' for phi = e^{it}(z - a)/(1 - conj(a) z), as a closed-form AnalyticFn.
inline AnalyticFn mobius_derivative(const MobiusParams& phi)
{
    return power(phi.rotation() * (1.0 - std::norm(phi.a())), 2.0, std::conj(phi.a()));
}

/// f o phi, without renormalisation: analytic part h o phi, dilatation omega o phi.
inline HarmonicMap precompose(const HarmonicMap& f, const MobiusParams& phi)
{
    const AnalyticFn p = mobius(phi);
    const AnalyticPart& h = f.h();
    AnalyticPart composed = h.level() == AnalyticPart::Level::function
                                ? AnalyticPart(compose(h.base(), p))
                                : AnalyticPart::from_derivative(compose(h.base(), p) * mobius_derivative(phi));
    if (h.factor()) {
        composed = composed.times_derivative_factor(compose(*h.factor(), p));
    }
    std::optional<AnalyticFn> q;
    if (f.q()) {
        q = compose(*f.q(), p);
    }
    return {std::move(composed), compose(f.omega(), p), std::move(q)};
}

/// Koebe transform L_phi(f) = (f o phi - f(phi(0))) / (f_z(phi(0)) phi'(0)).
///
/// With K = h'(phi(0)) phi'(0) the parts are H = (h o phi - h(phi(0)))/K and
/// G = (g o phi - g(phi(0)))/conj(K), so the new dilatation is
/// (K/conj(K)) (omega o phi) and the new square root is (K/|K|)(q o phi).
inline HarmonicMap koebe_transform(const HarmonicMap& f, const MobiusParams& phi)
{
    const cplx z0 = phi(0.0);
    // Sense-preservation at phi(0) is a precondition.
    const cplx k = detail::at_point(z0, [&] {
        detail::checked_dilatation(f.omega(), z0);
        return detail::checked_derivatives(f.h(), z0).h1 * phi.rotation() * (1.0 - std::norm(phi.a()));
    });
    const cplx inv_k = 1.0 / k;
    const cplx phase = k / std::abs(k);

    const AnalyticFn p = mobius(phi);
    std::optional<AnalyticFn> q;
    if (f.q()) {
        q = phase * compose(*f.q(), p);
    }
    const AnalyticFn omega = (phase * phase) * compose(f.omega(), p);

    if (auto h = f.h().function()) {
        const AnalyticFn hp = compose(*h, p);
        return {AnalyticPart(inv_k * (hp - constant(h->jet(z0).v))), omega, std::move(q)};
    }
    const HarmonicMap moved = precompose(f, phi);
    return {moved.h().times_derivative_factor(constant(inv_k)), omega, std::move(q)};
}

/// e^{-i theta} f(e^{i theta} z): the Koebe transform by a pure rotation.
inline HarmonicMap rotate(const HarmonicMap& f, double theta)
{
    return koebe_transform(f, MobiusParams(0.0, theta));
}

/// A_epsilon(f) = (f - conj(epsilon f)) / c with c = 1 - conj(epsilon) g'(0).
///
/// f - conj(eps) conj(f) = (h - conj(eps) g) + conj(g - eps h), so
/// H' = h' (1 - conj(eps) omega) / c and omega_new = (c/conj(c)) (omega - eps)/(1 - conj(eps) omega).
/// The square root q does not survive: omega_new has no reason to be a square.
inline HarmonicMap affine_transform(const HarmonicMap& f, const AffineParams& params)
{
    const cplx eps = params.epsilon();
    const cplx omega0 = f.omega().jet(0.0).v;
    const cplx g1_at_0 = omega0 * f.h().derivatives(0.0).h1;
    const cplx c = 1.0 - std::conj(eps) * g1_at_0;
    if (std::abs(c) < singularity_tolerance) {
        throw DegenerateError("affine normaliser 1 - conj(eps) g'(0) vanishes");
    }
    const AnalyticFn one_minus = constant(1.0) - std::conj(eps) * f.omega();
    AnalyticPart h = f.h().times_derivative_factor((1.0 / c) * one_minus);
    const AnalyticFn omega = (c / std::conj(c)) * ((f.omega() - constant(eps)) / one_minus);
    return {std::move(h), omega};
}

/// Largest deviations from the chain rules
///   P_{f o phi} = (P_f o phi) phi' + P_phi,  S_{f o phi} = (S_f o phi) phi'^2 + S_phi
/// over `samples` seeded points uniform in |z| <= radius.
inline std::pair<double, double> chain_rule_residuals(const HarmonicMap& f, const MobiusParams& phi, int samples,
                                                      unsigned seed = 42, double radius = 0.8)
{
    const HarmonicMap composed = precompose(f, phi);
    const AnalyticFn p = mobius(phi);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double pre = 0.0;
    double schw = 0.0;
    for (int i = 0; i < samples; ++i) {
        const cplx z = std::polar(radius * std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng));
        const Jet3 pj = jet_eval(p, z);
        const cplx p_phi = pj.d2 / pj.d1;
        const cplx s_phi = pj.d3 / pj.d1 - 1.5 * p_phi * p_phi;
        pre = std::max(pre, std::abs(pre_schwarzian_hm(composed, z) - (pre_schwarzian_hm(f, pj.v) * pj.d1 + p_phi)));
        schw = std::max(schw, std::abs(schwarzian_hm(composed, z) -
                                       (schwarzian_hm(f, pj.v) * pj.d1 * pj.d1 + s_phi)));
    }
    return {pre, schw};
}

} // namespace harmonorm
