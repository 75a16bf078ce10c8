#pragma once

#include "harmonorm/harmonic_map.hpp"

#include <vector>

namespace harmonorm {

/// b_1..b_{n_max} of the co-analytic part, g(0) = 0, from g' = omega h' by
/// series multiplication and termwise integration.
inline std::vector<cplx> g_coefficients(const HarmonicMap& f, int n_max)
{
    if (n_max < 1) {
        throw ParamError("n_max must be at least 1");
    }
    PowerSeries g;
    try {
        g = (f.omega().taylor(0.0, n_max - 1) * f.h().derivative_series(n_max - 1)).integrate();
    } catch (const Error& e) {
        throw SeriesError(std::string("series expansion failed: ") + e.what());
    }
    return {g.coeffs().begin() + 1, g.coeffs().end()};
}

struct CoefficientReport {
    double max_modulus = 0.0;
    int argmax_n = 0;
    // Worst n |b_n| - n, i.e. the majorisation margin of z g' by a function with |coefficients| <= n.
    double majorization_excess = 0.0;
    bool passed = true;
};

/// max_n |b_n| against the bound 1 (slack 1e-10).
inline CoefficientReport coefficient_bound_check(const HarmonicMap& f, int n_max)
{
    const auto b = g_coefficients(f, n_max);
    CoefficientReport rep;
    rep.majorization_excess = -std::numeric_limits<double>::infinity();
    for (int n = 1; n <= n_max; ++n) {
        const double m = std::abs(b[n - 1]);
        if (m > rep.max_modulus || rep.argmax_n == 0) {
            rep.max_modulus = m;
            rep.argmax_n = n;
        }
        rep.majorization_excess = std::max(rep.majorization_excess, n * m - n);
    }
    rep.passed = rep.max_modulus <= 1.0 + 1e-10;
    return rep;
}

/// Worst slack of each distortion band; negative means violated beyond the
/// 1e-9 allowance.
struct DistortionReport {
    double gamma = 0.0;  // |omega(0)|, the modulus parameter of the automorphism
    double h_lower_margin = std::numeric_limits<double>::infinity();
    double h_upper_margin = std::numeric_limits<double>::infinity();
    double omega_lower_margin = std::numeric_limits<double>::infinity();
    double omega_upper_margin = std::numeric_limits<double>::infinity();
    double g_upper_margin = std::numeric_limits<double>::infinity();
    int points = 0;
    bool passed = true;
};

/// On each circle |z| = r (n_angles points): 1/(1+r)^2 <= |h'| <= 1/(1-r)^2,
/// |r - gamma|/(1 - gamma r) <= |omega| <= (r + gamma)/(1 + gamma r) and
/// |g'| <= 1/(1-r)^2. Margins are relative to max(1, bound).
inline DistortionReport distortion_check(const HarmonicMap& f, const std::vector<double>& radii, int n_angles = 256)
{
    DistortionReport rep;
    rep.gamma = std::abs(jet_eval(f.omega(), 0.0).v);
    const double g = rep.gamma;
    const auto margin = [](double slack, double scale) { return slack / std::max(1.0, scale); };
    for (double r : radii) {
        const double h_lo = 1.0 / ((1.0 + r) * (1.0 + r));
        const double h_hi = 1.0 / ((1.0 - r) * (1.0 - r));
        const double w_lo = std::abs(r - g) / (1.0 - g * r);
        const double w_hi = (r + g) / (1.0 + g * r);
        for (int k = 0; k < n_angles; ++k) {
            const cplx z = std::polar(r, 2.0 * std::numbers::pi * k / n_angles);
            const double h1 = std::abs(detail::at_point(z, [&] { return f.h().derivatives(z).h1; }));
            const double w = std::abs(dilatation(f, z));
            const double g1 = h1 * w;
            rep.h_lower_margin = std::min(rep.h_lower_margin, margin(h1 - h_lo, h_lo));
            rep.h_upper_margin = std::min(rep.h_upper_margin, margin(h_hi - h1, h_hi));
            rep.omega_lower_margin = std::min(rep.omega_lower_margin, w - w_lo);
            rep.omega_upper_margin = std::min(rep.omega_upper_margin, w_hi - w);
            rep.g_upper_margin = std::min(rep.g_upper_margin, margin(h_hi - g1, h_hi));
            ++rep.points;
        }
    }
    const double slack = -1e-9;
    rep.passed = rep.h_lower_margin >= slack && rep.h_upper_margin >= slack && rep.omega_lower_margin >= slack &&
                 rep.omega_upper_margin >= slack && rep.g_upper_margin >= slack;
    return rep;
}

} // namespace harmonorm
