#pragma once

#include "harmonorm/errors.hpp"
#include "harmonorm/jet.hpp"
#include "harmonorm/power_series.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace harmonorm {

/// Modulus below which a denominator is treated as a pole. Hard error, never
/// a clamp: every function this library is built for has its poles on the
/// unit circle, so hitting this inside the disk means a caller bug.
inline constexpr double singularity_tolerance = 1e-12;

inline constexpr int default_series_order = 64;

/// Parameters of the disk automorphism z -> e^{i theta} (z - a) / (1 - conj(a) z).
class MobiusParams {
public:
    MobiusParams(cplx a, double theta) : a_(a), theta_(theta)
    {
        if (!(std::abs(a) < 1.0)) {
            throw ConstructionError("Mobius parameter must satisfy |a| < 1");
        }
    }

    /// The form e^{i theta} (z + alpha) / (1 + conj(alpha) z).
    static MobiusParams from_alpha(cplx alpha, double theta) { return {-alpha, theta}; }

    /// Automorphism sending 0 to `z0` with positive derivative at 0.
    static MobiusParams sending_zero_to(cplx z0) { return {-z0, 0.0}; }

    cplx a() const noexcept { return a_; }
    double theta() const noexcept { return theta_; }
    cplx rotation() const noexcept { return std::polar(1.0, theta_); }

    cplx operator()(cplx z) const { return rotation() * (z - a_) / (1.0 - std::conj(a_) * z); }

private:
    cplx a_;
    double theta_;
};

/// Parameters of (outer o inner) as a single automorphism.
inline MobiusParams compose(const MobiusParams& outer, const MobiusParams& inner)
{
    // psi(0) = -e^{i t} a, psi'(0) = e^{i t} (1 - |a|^2) pin down (a, t).
    const cplx w0 = outer(inner(0.0));
    const cplx inner_d = inner.rotation() * (1.0 - std::norm(inner.a()));
    const cplx w = inner(0.0);
    const cplx outer_d = outer.rotation() * (1.0 - std::norm(outer.a())) /
                         ((1.0 - std::conj(outer.a()) * w) * (1.0 - std::conj(outer.a()) * w));
    const cplx d = outer_d * inner_d;
    const cplx rot = d / (1.0 - std::norm(w0));
    return {-w0 / rot, std::arg(rot)};
}

class AnalyticFn;

namespace node {

struct Identity {};
struct Constant {
    cplx c;
};
struct Mobius {
    MobiusParams p;
};
/// scale * (1 - beta z)^(-exponent), principal branch.
struct Power {
    cplx scale;
    double exponent;
    cplx beta;
};
/// 1 / (alpha + beta z).
struct ReciprocalLinear {
    cplx alpha;
    cplx beta;
};
struct Polynomial {
    std::vector<cplx> coeffs;
};
struct Sum;
struct Difference;
struct Product;
struct Quotient;
struct Compose;

} // namespace node

/// Immutable analytic function on the disk, built from closed-form
/// primitives and combinators. Copies share structure.
class AnalyticFn {
public:
    using Node = std::variant<node::Identity, node::Constant, node::Mobius, node::Power,
                              node::ReciprocalLinear, node::Polynomial, std::shared_ptr<const node::Sum>,
                              std::shared_ptr<const node::Difference>, std::shared_ptr<const node::Product>,
                              std::shared_ptr<const node::Quotient>, std::shared_ptr<const node::Compose>>;

    AnalyticFn() : node_(std::make_shared<const Node>(node::Identity{})) {}
    explicit AnalyticFn(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}

    const Node& node() const noexcept { return *node_; }

    /// Jet at z without the |z| < 1 domain guard; used for inner evaluation of
    /// compositions whose outer function may live on a different domain.
    Jet3 jet(cplx z) const;

    /// Taylor coefficients about `center` through degree `order`, by exact
    /// series algebra on the expression tree.
    PowerSeries taylor(cplx center, int order) const;

    cplx operator()(cplx z) const { return jet(z).v; }

private:
    std::shared_ptr<const Node> node_;
};

namespace node {

struct Sum {
    AnalyticFn lhs, rhs;
};
struct Difference {
    AnalyticFn lhs, rhs;
};
struct Product {
    AnalyticFn lhs, rhs;
};
struct Quotient {
    AnalyticFn num, den;
};
struct Compose {
    AnalyticFn outer, inner;
};

} // namespace node

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

inline AnalyticFn identity() { return AnalyticFn(node::Identity{}); }
inline AnalyticFn constant(cplx c) { return AnalyticFn(node::Constant{c}); }
inline AnalyticFn mobius(const MobiusParams& p) { return AnalyticFn(node::Mobius{p}); }

/// scale * (1 - beta z)^(-exponent). With beta on the unit circle the only
/// branch point sits on the boundary.
inline AnalyticFn power(cplx scale, double exponent, cplx beta = 1.0)
{
    return AnalyticFn(node::Power{scale, exponent, beta});
}

inline AnalyticFn reciprocal_linear(cplx alpha, cplx beta) { return AnalyticFn(node::ReciprocalLinear{alpha, beta}); }

inline AnalyticFn polynomial(std::vector<cplx> coeffs)
{
    if (coeffs.empty()) {
        coeffs.push_back(cplx{});
    }
    return AnalyticFn(node::Polynomial{std::move(coeffs)});
}

inline AnalyticFn operator+(const AnalyticFn& a, const AnalyticFn& b)
{
    return AnalyticFn(std::make_shared<const node::Sum>(node::Sum{a, b}));
}
inline AnalyticFn operator-(const AnalyticFn& a, const AnalyticFn& b)
{
    return AnalyticFn(std::make_shared<const node::Difference>(node::Difference{a, b}));
}
inline AnalyticFn operator*(const AnalyticFn& a, const AnalyticFn& b)
{
    return AnalyticFn(std::make_shared<const node::Product>(node::Product{a, b}));
}
inline AnalyticFn operator/(const AnalyticFn& a, const AnalyticFn& b)
{
    return AnalyticFn(std::make_shared<const node::Quotient>(node::Quotient{a, b}));
}
inline AnalyticFn operator*(cplx s, const AnalyticFn& f) { return constant(s) * f; }

/// outer o inner
inline AnalyticFn compose(const AnalyticFn& outer, const AnalyticFn& inner)
{
    return AnalyticFn(std::make_shared<const node::Compose>(node::Compose{outer, inner}));
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace detail {

inline void require_nonsingular(cplx denom, const char* what)
{
    if (std::abs(denom) < singularity_tolerance) {
        throw SingularityError(std::string(what) + ": denominator modulus below tolerance");
    }
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Jet of c * (1 - beta z)^(-n): derivatives multiply by beta (n + k) / (1 - beta z).
inline Jet3 power_jet(const node::Power& p, cplx z)
{
    const cplx base = 1.0 - p.beta * z;
    require_nonsingular(base, "power");
    const cplx v = p.scale * std::pow(base, -p.exponent);
    const cplx step = p.beta / base;
    const double n = p.exponent;
    const cplx d1 = v * n * step;
    const cplx d2 = d1 * (n + 1.0) * step;
    const cplx d3 = d2 * (n + 2.0) * step;
    return {v, d1, d2, d3};
}

} // namespace detail

inline Jet3 AnalyticFn::jet(cplx z) const
{
    using detail::require_nonsingular;
    return std::visit(
        detail::overloaded{
            [&](const node::Identity&) { return Jet3::variable(z); },
            [&](const node::Constant& c) { return Jet3::constant(c.c); },
            [&](const node::Mobius& m) {
                const cplx ab = std::conj(m.p.a());
                const cplx den = 1.0 - ab * z;
                require_nonsingular(den, "mobius");
                const cplx rot = m.p.rotation();
                const cplx d1 = rot * (1.0 - std::norm(m.p.a())) / (den * den);
                const cplx step = ab / den;
                return Jet3{rot * (z - m.p.a()) / den, d1, 2.0 * d1 * step, 6.0 * d1 * step * step};
            },
            [&](const node::Power& p) { return detail::power_jet(p, z); },
            [&](const node::ReciprocalLinear& r) {
                const cplx den = r.alpha + r.beta * z;
                require_nonsingular(den, "reciprocal_linear");
                const cplx u = 1.0 / den;
                const cplx s = -r.beta * u;
                return Jet3{u, u * s, 2.0 * u * s * s, 6.0 * u * s * s * s};
            },
            [&](const node::Polynomial& p) {
                PowerSeries s(p.coeffs);
                return s.evaluate(z);
            },
            [&](const std::shared_ptr<const node::Sum>& n) { return n->lhs.jet(z) + n->rhs.jet(z); },
            [&](const std::shared_ptr<const node::Difference>& n) { return n->lhs.jet(z) - n->rhs.jet(z); },
            [&](const std::shared_ptr<const node::Product>& n) { return n->lhs.jet(z) * n->rhs.jet(z); },
            [&](const std::shared_ptr<const node::Quotient>& n) {
                const Jet3 den = n->den.jet(z);
                require_nonsingular(den.v, "quotient");
                return n->num.jet(z) / den;
            },
            [&](const std::shared_ptr<const node::Compose>& n) {
                const Jet3 in = n->inner.jet(z);
                return chain(n->outer.jet(in.v), in);
            },
        },
        *node_);
}

/// Value and first three derivatives of f at z. Requires |z| < 1.
inline Jet3 jet_eval(const AnalyticFn& f, cplx z)
{
    if (!(std::abs(z) < 1.0)) {
        auto e = DomainError("evaluation point outside the open unit disk");
        e.set_point(z);
        throw e;
    }
    try {
        Jet3 j = f.jet(z);
        if (!j.finite()) {
            throw SingularityError("non-finite jet");
        }
        return j;
    } catch (Error& e) {
        e.set_point(z);
        throw;
    }
}

// ---------------------------------------------------------------------------
// Series
// ---------------------------------------------------------------------------

inline PowerSeries AnalyticFn::taylor(cplx w0, int order) const
{
    const auto geometric = [order](cplx first, cplx ratio) {
        auto s = PowerSeries::zero(order);
        cplx c = first;
        for (int k = 0; k <= order; ++k) {
            s[k] = c;
            c *= ratio;
        }
        return s;
    };
    return std::visit(
        detail::overloaded{
            [&](const node::Identity&) {
                auto s = PowerSeries::zero(order);
                s[0] = w0;
                if (order >= 1) {
                    s[1] = 1.0;
                }
                return s;
            },
            [&](const node::Constant& c) { return PowerSeries::constant(c.c, order); },
            [&](const node::Mobius& m) {
                // e^{i t} ((w0 - a) + u) / ((1 - conj(a) w0) - conj(a) u)
                const cplx ab = std::conj(m.p.a());
                const cplx den = 1.0 - ab * w0;
                if (std::abs(den) < singularity_tolerance) {
                    throw SingularityError("mobius series centred at its pole");
                }
                auto num = PowerSeries::zero(order);
                num[0] = m.p.rotation() * (w0 - m.p.a());
                if (order >= 1) {
                    num[1] = m.p.rotation();
                }
                return num * geometric(1.0 / den, ab / den);
            },
            [&](const node::Power& p) {
                // c d^{-n} (1 - (beta/d) u)^{-n}, d = 1 - beta w0
                const cplx d = 1.0 - p.beta * w0;
                if (std::abs(d) < singularity_tolerance) {
                    throw SingularityError("power series centred at its branch point");
                }
                const cplx ratio = p.beta / d;
                auto s = PowerSeries::zero(order);
                cplx c = p.scale * std::pow(d, -p.exponent);
                for (int k = 0; k <= order; ++k) {
                    s[k] = c;
                    c *= ratio * (p.exponent + k) / static_cast<double>(k + 1);
                }
                return s;
            },
            [&](const node::ReciprocalLinear& r) {
                const cplx d = r.alpha + r.beta * w0;
                if (std::abs(d) < singularity_tolerance) {
                    throw SingularityError("reciprocal_linear series centred at its pole");
                }
                return geometric(1.0 / d, -r.beta / d);
            },
            [&](const node::Polynomial& p) {
                // Taylor shift by repeated synthetic division.
                std::vector<cplx> c = p.coeffs;
                const int deg = static_cast<int>(c.size()) - 1;
                for (int k = 0; k < deg; ++k) {
                    for (int j = deg - 1; j >= k; --j) {
                        c[j] += w0 * c[j + 1];
                    }
                }
                return PowerSeries(std::move(c)).truncated(order);
            },
            [&](const std::shared_ptr<const node::Sum>& n) {
                return n->lhs.taylor(w0, order) + n->rhs.taylor(w0, order);
            },
            [&](const std::shared_ptr<const node::Difference>& n) {
                return n->lhs.taylor(w0, order) - n->rhs.taylor(w0, order);
            },
            [&](const std::shared_ptr<const node::Product>& n) {
                return n->lhs.taylor(w0, order) * n->rhs.taylor(w0, order);
            },
            [&](const std::shared_ptr<const node::Quotient>& n) {
                return n->num.taylor(w0, order) / n->den.taylor(w0, order);
            },
            [&](const std::shared_ptr<const node::Compose>& n) {
                auto in = n->inner.taylor(w0, order);
                const cplx centre = in[0];
                in[0] = 0.0;
                return PowerSeries::compose(n->outer.taylor(centre, order), in);
            },
        },
        *node_);
}

/// Taylor coefficients of f at 0 through degree `order`.
inline PowerSeries series_from(const AnalyticFn& f, int order = default_series_order)
{
    return f.taylor(0.0, order);
}

/// Singular points of the primitives in the tree that are known in closed
/// form: poles and branch points of the leaves, pulled back through inner
/// Mobius maps. Singularities created by a vanishing quotient denominator or
/// by a general inner map are not found.
inline std::vector<cplx> known_singularities(const AnalyticFn& f)
{
    std::vector<cplx> out;
    const auto add_point = [&](cplx num, cplx den) {
        if (std::abs(den) > 0.0) {
            out.push_back(num / den);
        }
    };
    std::visit(detail::overloaded{
                   [](const node::Identity&) {},
                   [](const node::Constant&) {},
                   [](const node::Polynomial&) {},
                   [&](const node::Mobius& m) { add_point(1.0, std::conj(m.p.a())); },
                   [&](const node::Power& p) {
                       if (p.exponent != 0.0) {
                           add_point(1.0, p.beta);
                       }
                   },
                   [&](const node::ReciprocalLinear& r) { add_point(-r.alpha, r.beta); },
                   [&](const auto& ptr) {
                       using T = std::decay_t<decltype(*ptr)>;
                       if constexpr (std::is_same_v<T, node::Compose>) {
                           out = known_singularities(ptr->inner);
                           const auto* inner_mobius = std::get_if<node::Mobius>(&ptr->inner.node());
                           const bool inner_identity = std::holds_alternative<node::Identity>(ptr->inner.node());
                           if (inner_mobius || inner_identity) {
                               for (cplx w : known_singularities(ptr->outer)) {
                                   if (inner_identity) {
                                       out.push_back(w);
                                       continue;
                                   }
                                   // w = e^{it}(z - a)/(1 - conj(a) z)  =>  z = (u + a)/(1 + conj(a) u), u = e^{-it} w
                                   const MobiusParams& m = inner_mobius->p;
                                   const cplx u = std::conj(m.rotation()) * w;
                                   add_point(u + m.a(), 1.0 + std::conj(m.a()) * u);
                               }
                           }
                       } else if constexpr (std::is_same_v<T, node::Quotient>) {
                           out = known_singularities(ptr->num);
                           const auto more = known_singularities(ptr->den);
                           out.insert(out.end(), more.begin(), more.end());
                       } else {
                           out = known_singularities(ptr->lhs);
                           const auto more = known_singularities(ptr->rhs);
                           out.insert(out.end(), more.begin(), more.end());
                       }
                   },
               },
               f.node());
    return out;
}

} // namespace harmonorm
