#pragma once

#include "harmonorm/analytic_fn.hpp"

#include <array>
#include <limits>
#include <span>

namespace harmonorm {

/// (A z + B) / (C z + D), stored projectively.
struct LinearFractional {
    cplx A, B, C, D;

    cplx operator()(cplx z) const { return (A * z + B) / (C * z + D); }

    LinearFractional inverse() const { return {D, -B, -C, A}; }

    friend LinearFractional operator*(const LinearFractional& f, const LinearFractional& g)
    {
        return {f.A * g.A + f.B * g.C, f.A * g.B + f.B * g.D, f.C * g.A + f.D * g.C, f.C * g.B + f.D * g.D};
    }
};

/// Unique linear fractional map sending z[k] to w[k], k = 0, 1, 2.
inline LinearFractional fit_linear_fractional(const std::array<cplx, 3>& z, const std::array<cplx, 3>& w)
{
    // Cross-ratio maps sending the triples to (0, 1, inf).
    const auto to_standard = [](const std::array<cplx, 3>& p) {
        return LinearFractional{p[1] - p[2], -p[0] * (p[1] - p[2]), p[1] - p[0], -p[2] * (p[1] - p[0])};
    };
    return to_standard(w).inverse() * to_standard(z);
}

/// Distance of `w` from the automorphism group of the disk, measured as the
/// largest pointwise deviation on a fixed probe set between `w` and the
/// unimodular Mobius map fitted through w(0), w(1/2), w(i/2). Returns +inf
/// when the fit has no zero inside the disk.
inline double automorphism_fit_residual(const AnalyticFn& w)
{
    static constexpr double inf = std::numeric_limits<double>::infinity();
    const std::array<cplx, 3> z{cplx{0.0, 0.0}, cplx{0.5, 0.0}, cplx{0.0, 0.5}};
    std::array<cplx, 3> wz{};
    for (std::size_t k = 0; k < 3; ++k) {
        wz[k] = jet_eval(w, z[k]).v;
    }
    if (std::abs(wz[0] - wz[1]) < 1e-14 || std::abs(wz[0] - wz[2]) < 1e-14 || std::abs(wz[1] - wz[2]) < 1e-14) {
        return inf;
    }
    const LinearFractional T = fit_linear_fractional(z, wz);
    if (std::abs(T.A) < 1e-300) {
        return inf;
    }
    const cplx a = -T.B / T.A;
    if (!(std::abs(a) < 1.0)) {
        return inf;
    }
    // T = lambda (z - a) / (1 - conj(a) z) if T is an automorphism up to scale.
    const cplx lambda = std::abs(a) > 1e-8 ? T(0.0) / (-a) : (T.A * T.D - T.B * T.C) / (T.D * T.D);
    if (std::abs(lambda) == 0.0) {
        return inf;
    }
    const MobiusParams fitted(a, std::arg(lambda));

    double residual = 0.0;
    for (int ring = 1; ring <= 3; ++ring) {
        for (int k = 0; k < 8; ++k) {
            const cplx p = std::polar(0.3 * ring, 2.0 * std::numbers::pi * (k + 0.5 * ring) / 8.0);
            residual = std::max(residual, std::abs(jet_eval(w, p).v - fitted(p)));
        }
    }
    return residual;
}

} // namespace harmonorm
