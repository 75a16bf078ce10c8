#pragma once

#include <cmath>
#include <complex>
#include <ostream>

namespace harmonorm {

using cplx = std::complex<double>;

/// Value and first three complex derivatives of an analytic function at a
/// point. All arithmetic below is exact propagation of the truncated Taylor
/// jet; nothing is differentiated numerically.
struct Jet3 {
    cplx v{};
    cplx d1{};
    cplx d2{};
    cplx d3{};

    static constexpr Jet3 constant(cplx c) noexcept { return {c, 0.0, 0.0, 0.0}; }
    static constexpr Jet3 variable(cplx z) noexcept { return {z, 1.0, 0.0, 0.0}; }

    bool finite() const noexcept
    {
        auto ok = [](cplx c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); };
        return ok(v) && ok(d1) && ok(d2) && ok(d3);
    }

    Jet3& operator+=(const Jet3& o) noexcept
    {
        v += o.v;
        d1 += o.d1;
        d2 += o.d2;
        d3 += o.d3;
        return *this;
    }
    Jet3& operator-=(const Jet3& o) noexcept
    {
        v -= o.v;
        d1 -= o.d1;
        d2 -= o.d2;
        d3 -= o.d3;
        return *this;
    }
    Jet3& operator*=(cplx s) noexcept
    {
        v *= s;
        d1 *= s;
        d2 *= s;
        d3 *= s;
        return *this;
    }
};

inline Jet3 operator+(Jet3 a, const Jet3& b) noexcept { return a += b; }
inline Jet3 operator-(Jet3 a, const Jet3& b) noexcept { return a -= b; }
inline Jet3 operator-(Jet3 a) noexcept { return a *= -1.0; }
inline Jet3 operator*(Jet3 a, cplx s) noexcept { return a *= s; }
inline Jet3 operator*(cplx s, Jet3 a) noexcept { return a *= s; }

// Leibniz rule to third order.
inline Jet3 operator*(const Jet3& f, const Jet3& g) noexcept
{
    return {f.v * g.v,
            f.d1 * g.v + f.v * g.d1,
            f.d2 * g.v + 2.0 * f.d1 * g.d1 + f.v * g.d2,
            f.d3 * g.v + 3.0 * f.d2 * g.d1 + 3.0 * f.d1 * g.d2 + f.v * g.d3};
}

/// Faa di Bruno to third order: jet of outer(inner(z)) given the jet of
/// `outer` at inner.v and the jet of `inner` at z.
inline Jet3 chain(const Jet3& outer, const Jet3& inner) noexcept
{
    const cplx g1 = inner.d1;
    const cplx g2 = inner.d2;
    const cplx g3 = inner.d3;
    return {outer.v,
            outer.d1 * g1,
            outer.d2 * g1 * g1 + outer.d1 * g2,
            outer.d3 * g1 * g1 * g1 + 3.0 * outer.d2 * g1 * g2 + outer.d1 * g3};
}

/// 1/g. The caller is responsible for rejecting g.v == 0.
inline Jet3 reciprocal(const Jet3& g) noexcept
{
    const cplx u = 1.0 / g.v;
    const cplx u2 = u * u;
    const Jet3 outer{u, -u2, 2.0 * u2 * u, -6.0 * u2 * u2};
    return chain(outer, g);
}

inline Jet3 operator/(const Jet3& f, const Jet3& g) noexcept { return f * reciprocal(g); }

inline std::ostream& operator<<(std::ostream& os, const Jet3& j)
{
    return os << "Jet3(" << j.v << ", " << j.d1 << ", " << j.d2 << ", " << j.d3 << ")";
}

} // namespace harmonorm
