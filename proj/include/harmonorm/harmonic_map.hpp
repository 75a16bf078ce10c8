#pragma once

#include "harmonorm/analytic_fn.hpp"

#include <optional>
#include <random>

namespace harmonorm {

/// Tolerance on |omega| approaching 1 before a point counts as not
/// sense-preserving.
inline constexpr double sense_tolerance = 1e-12;

/// h', h'', h''' at a point.
struct DerivativeTriple {
    cplx h1, h2, h3;
};

/// The analytic part h of a harmonic map, given either as h itself or as h'
/// (for families whose h has no closed form in the primitive set), times an
/// optional analytic multiplier on h'. Every operator consumes only h', h'',
/// h''', so both levels are equivalent downstream.
class AnalyticPart {
public:
    enum class Level { function, derivative };

    // Implicit: an AnalyticFn is read as h itself.
    AnalyticPart(AnalyticFn h) : base_(std::move(h)), level_(Level::function) {}

    static AnalyticPart from_derivative(AnalyticFn h_prime)
    {
        AnalyticPart p(std::move(h_prime));
        p.level_ = Level::derivative;
        return p;
    }

    /// The part whose derivative is this->h' * m.
    AnalyticPart times_derivative_factor(const AnalyticFn& m) const
    {
        AnalyticPart p = *this;
        p.factor_ = factor_ ? *factor_ * m : m;
        return p;
    }

    Level level() const noexcept { return level_; }
    const AnalyticFn& base() const noexcept { return base_; }
    const std::optional<AnalyticFn>& factor() const noexcept { return factor_; }

    /// h itself, when it is represented (function level, no factor).
    std::optional<AnalyticFn> function() const
    {
        if (level_ == Level::function && !factor_) {
            return base_;
        }
        return std::nullopt;
    }

    /// Derivatives at z, no domain guard.
    DerivativeTriple derivatives(cplx z) const
    {
        const Jet3 b = base_.jet(z);
        DerivativeTriple t = level_ == Level::function ? DerivativeTriple{b.d1, b.d2, b.d3}
                                                       : DerivativeTriple{b.v, b.d1, b.d2};
        if (factor_) {
            const Jet3 m = factor_->jet(z);
            t = {t.h1 * m.v, t.h2 * m.v + t.h1 * m.d1, t.h3 * m.v + 2.0 * t.h2 * m.d1 + t.h1 * m.d2};
        }
        return t;
    }

    /// Taylor series of h' at 0 through degree `order`.
    PowerSeries derivative_series(int order) const
    {
        PowerSeries s = level_ == Level::function ? base_.taylor(0.0, order + 1).derivative()
                                                  : base_.taylor(0.0, order);
        if (factor_) {
            s = s * factor_->taylor(0.0, order);
        }
        return s;
    }

private:
    AnalyticFn base_;
    Level level_;
    std::optional<AnalyticFn> factor_;
};

/// Sense-preserving harmonic map f = h + conj(g) stored as (h, omega) with
/// g' = omega h'. The square-root dilatation q (q^2 = omega) is optional and
/// only consumed by the Chuaqui-Duren-Osgood operators.
class HarmonicMap {
public:
    HarmonicMap(AnalyticPart h, AnalyticFn omega, std::optional<AnalyticFn> q = std::nullopt)
        : h_(std::move(h)), omega_(std::move(omega)), q_(std::move(q))
    {
    }

    const AnalyticPart& h() const noexcept { return h_; }
    const AnalyticFn& omega() const noexcept { return omega_; }
    const std::optional<AnalyticFn>& q() const noexcept { return q_; }
    bool has_q() const noexcept { return q_.has_value(); }

    HarmonicMap with_q(AnalyticFn q) const { return {h_, omega_, std::move(q)}; }
    HarmonicMap without_q() const { return {h_, omega_}; }

    /// |h(0)| + |h'(0) - 1|; h(0) is zero by construction when only h' is stored.
    double normalization_defect() const
    {
        double defect = std::abs(h_.derivatives(0.0).h1 - 1.0);
        if (auto fn = h_.function()) {
            defect += std::abs(fn->jet(0.0).v);
        }
        return defect;
    }

    /// max |q(z)^2 - omega(z)| over `samples` seeded random points in |z| <= 0.9.
    double q_residual(int samples = 100, unsigned seed = 42) const
    {
        if (!q_) {
            throw MissingQError("map carries no square-root dilatation");
        }
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double worst = 0.0;
        for (int i = 0; i < samples; ++i) {
            const cplx z = std::polar(0.9 * std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng));
            const cplx q = jet_eval(*q_, z).v;
            worst = std::max(worst, std::abs(q * q - jet_eval(omega_, z).v));
        }
        return worst;
    }

private:
    AnalyticPart h_;
    AnalyticFn omega_;
    std::optional<AnalyticFn> q_;
};

/// All derivative flavours at one point.
struct DerivativeBundle {
    cplx p_analytic;
    cplx s_analytic;
    cplx p_hm;
    cplx s_hm;
    std::optional<cplx> p_cdo;
    std::optional<cplx> s_cdo;
    double jacobian;
    cplx omega_value;
    cplx q_functional;
};

namespace detail {

inline void require_in_disk(cplx z)
{
    if (!(std::abs(z) < 1.0)) {
        throw DomainError("evaluation point outside the open unit disk");
    }
}

// Attach z to any library error escaping `fn`.
template <class Fn>
auto at_point(cplx z, Fn&& fn)
{
    try {
        require_in_disk(z);
        return fn();
    } catch (Error& e) {
        e.set_point(z);
        throw;
    }
}

inline DerivativeTriple checked_derivatives(const AnalyticPart& h, cplx z)
{
    const DerivativeTriple t = h.derivatives(z);
    if (std::abs(t.h1) < singularity_tolerance) {
        throw SingularityError("h' vanishes: map is not locally univalent here");
    }
    return t;
}

inline Jet3 checked_dilatation(const AnalyticFn& omega, cplx z)
{
    const Jet3 w = omega.jet(z);
    if (!(std::abs(w.v) < 1.0 - sense_tolerance)) {
        throw SenseError("|omega| >= 1: map is not sense-preserving here");
    }
    return w;
}

struct AnalyticTerms {
    cplx p;  // h''/h'
    cplx s;  // classical Schwarzian of h
};

inline AnalyticTerms analytic_terms(const DerivativeTriple& t)
{
    const cplx p = t.h2 / t.h1;
    return {p, t.h3 / t.h1 - 1.5 * p * p};
}

inline cplx hm_pre(const AnalyticTerms& a, const Jet3& w)
{
    return a.p - std::conj(w.v) * w.d1 / (1.0 - std::norm(w.v));
}

inline cplx hm_schwarzian(const AnalyticTerms& a, const Jet3& w)
{
    const double gap = 1.0 - std::norm(w.v);
    const cplx t = w.d1 * std::conj(w.v) / gap;
    return a.s + std::conj(w.v) / gap * (a.p * w.d1 - w.d2) - 1.5 * t * t;
}

inline cplx cdo_pre(const AnalyticTerms& a, const Jet3& q)
{
    return a.p + 2.0 * std::conj(q.v) * q.d1 / (1.0 + std::norm(q.v));
}

inline cplx cdo_schwarzian(const AnalyticTerms& a, const Jet3& q)
{
    const double lift = 1.0 + std::norm(q.v);
    const cplx t = q.d1 * std::conj(q.v) / lift;
    return a.s + 2.0 * std::conj(q.v) / lift * (q.d2 - a.p * q.d1) - 4.0 * t * t;
}

inline const AnalyticFn& require_q(const HarmonicMap& f)
{
    if (!f.has_q()) {
        throw MissingQError("CDO operators need the square-root dilatation q");
    }
    return *f.q();
}

} // namespace detail

// ---------------------------------------------------------------------------
// Operators
// ---------------------------------------------------------------------------

inline cplx dilatation(const HarmonicMap& f, cplx z)
{
    return detail::at_point(z, [&] { return detail::checked_dilatation(f.omega(), z).v; });
}

/// |h'|^2 (1 - |omega|^2).
inline double jacobian(const HarmonicMap& f, cplx z)
{
    return detail::at_point(z, [&] {
        const cplx h1 = detail::checked_derivatives(f.h(), z).h1;
        const cplx w = detail::checked_dilatation(f.omega(), z).v;
        return std::norm(h1) * (1.0 - std::norm(w));
    });
}

/// h''/h'
inline cplx pre_schwarzian_analytic(const AnalyticPart& h, cplx z)
{
    return detail::at_point(z, [&] { return detail::analytic_terms(detail::checked_derivatives(h, z)).p; });
}

/// (h''/h')' - (h''/h')^2 / 2
inline cplx schwarzian_analytic(const AnalyticPart& h, cplx z)
{
    return detail::at_point(z, [&] { return detail::analytic_terms(detail::checked_derivatives(h, z)).s; });
}

/// 1 + z h''/h'
inline cplx q_functional(const AnalyticPart& h, cplx z)
{
    return detail::at_point(z, [&] { return 1.0 + z * detail::analytic_terms(detail::checked_derivatives(h, z)).p; });
}

/// (log J_f)_z = h''/h' - conj(omega) omega' / (1 - |omega|^2)
inline cplx pre_schwarzian_hm(const HarmonicMap& f, cplx z)
{
    return detail::at_point(z, [&] {
        const auto a = detail::analytic_terms(detail::checked_derivatives(f.h(), z));
        return detail::hm_pre(a, detail::checked_dilatation(f.omega(), z));
    });
}

/// (log J_f)_zz - ((log J_f)_z)^2 / 2, in closed form through omega, omega', omega''.
inline cplx schwarzian_hm(const HarmonicMap& f, cplx z)
{
    return detail::at_point(z, [&] {
        const auto a = detail::analytic_terms(detail::checked_derivatives(f.h(), z));
        return detail::hm_schwarzian(a, detail::checked_dilatation(f.omega(), z));
    });
}

/// 2 (log lambda)_z with lambda = |h'| + |g'|, written through q.
inline cplx pre_schwarzian_cdo(const HarmonicMap& f, cplx z)
{
    const AnalyticFn& q = detail::require_q(f);
    return detail::at_point(z, [&] {
        const auto a = detail::analytic_terms(detail::checked_derivatives(f.h(), z));
        detail::checked_dilatation(f.omega(), z);
        return detail::cdo_pre(a, q.jet(z));
    });
}

inline cplx schwarzian_cdo(const HarmonicMap& f, cplx z)
{
    const AnalyticFn& q = detail::require_q(f);
    return detail::at_point(z, [&] {
        const auto a = detail::analytic_terms(detail::checked_derivatives(f.h(), z));
        detail::checked_dilatation(f.omega(), z);
        return detail::cdo_schwarzian(a, q.jet(z));
    });
}

/// Every operator at once, sharing the jets.
inline DerivativeBundle derivative_bundle(const HarmonicMap& f, cplx z)
{
    return detail::at_point(z, [&] {
        const DerivativeTriple t = detail::checked_derivatives(f.h(), z);
        const auto a = detail::analytic_terms(t);
        const Jet3 w = detail::checked_dilatation(f.omega(), z);
        DerivativeBundle b{};
        b.p_analytic = a.p;
        b.s_analytic = a.s;
        b.p_hm = detail::hm_pre(a, w);
        b.s_hm = detail::hm_schwarzian(a, w);
        if (f.has_q()) {
            const Jet3 q = f.q()->jet(z);
            b.p_cdo = detail::cdo_pre(a, q);
            b.s_cdo = detail::cdo_schwarzian(a, q);
        }
        b.jacobian = std::norm(t.h1) * (1.0 - std::norm(w.v));
        b.omega_value = w.v;
        b.q_functional = 1.0 + z * a.p;
        return b;
    });
}

} // namespace harmonorm
