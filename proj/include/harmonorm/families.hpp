#pragma once

#include "harmonorm/harmonic_map.hpp"
#include "harmonorm/mobius.hpp"

#include <functional>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace harmonorm {

using ParamSet = std::map<std::string, cplx>;

struct ParamSpec {
    std::string name;
    cplx default_value;
    bool is_complex = false;
    // Real parameters live in [lo, hi) (hi excluded); complex ones need |value| < hi.
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
};

struct ReferenceSpec {
    std::vector<std::string> extra_args;  // beyond the family parameters, e.g. "n" or "r"
    std::function<double(const ParamSet&)> eval;
};

struct FamilySpec {
    std::string name;
    std::string summary;
    std::vector<ParamSpec> params;
    bool f0_member = false;  // convex h and automorphism dilatation for every admissible parameter
    std::function<HarmonicMap(const ParamSet&)> builder;
    std::map<std::string, ReferenceSpec> references;
};

namespace family_math {

/// r0 = sqrt(sqrt 5 - 2), the maximiser of 2r(1 - r^2)/(1 + r^2).
inline double gap_maximiser() { return std::sqrt(std::sqrt(5.0) - 2.0); }

/// sup over 0 <= r < 1 of 2r(1 - r^2)/(1 + r^2).
inline double gap_constant()
{
    const double r0 = gap_maximiser();
    return 2.0 * r0 * (1.0 - r0 * r0) / (1.0 + r0 * r0);
}

/// Weighted pre-Schwarzian of the extremal family on the real axis.
inline double psi(double t, double r) { return 2.0 * (1.0 + r) - (r - t) / (1.0 - t * r); }

/// Critical point of psi.
inline double psi_maximiser(double t) { return (1.0 - std::sqrt((1.0 - t * t) / 2.0)) / t; }

/// M_t = psi(r0(t)) in closed form.
inline double psi_maximum(double t) { return 2.0 + 3.0 / t - 4.0 / t * std::sqrt((1.0 - t * t) / 2.0); }

inline double extremal_schwarzian_at_zero(double t) { return 2.0 + t * t; }

/// n-th coefficient of g for h = z/(1-z), omega = (z + gamma)/(1 + gamma z).
inline double coanalytic_coefficient(double gamma, int n)
{
    return 1.0 - (1.0 / n) * ((1.0 - gamma) / (1.0 + gamma)) * (1.0 - std::pow(-gamma, n));
}

} // namespace family_math

/// 2 eps~ / (1 - z eps~): the pre-Schwarzian h''/h' of the convex map with
/// 1 + z h''/h' = (1 + eps)/(1 - eps), where eps = z eps~ (the factor z is
/// cancelled so the expression is analytic at the origin).
inline AnalyticFn pre_schwarzian_from_schwarz_quotient(const AnalyticFn& eps_over_z)
{
    return (constant(2.0) * eps_over_z) / (constant(1.0) - identity() * eps_over_z);
}

/// eps_t(z)/z = (z + t/2)/(1 + t z/2) for the Schwarzian-extremal family.
inline AnalyticFn schwarzian_extremal_quotient(double t) { return mobius(MobiusParams(-t / 2.0, 0.0)); }

namespace detail {

inline double real_param(const ParamSet& p, const std::string& key)
{
    const auto it = p.find(key);
    if (it == p.end()) {
        throw ParamError("missing parameter '" + key + "'");
    }
    if (it->second.imag() != 0.0) {
        throw ParamError("parameter '" + key + "' must be real");
    }
    return it->second.real();
}

inline int integer_param(const ParamSet& p, const std::string& key)
{
    const double v = real_param(p, key);
    if (v != std::floor(v) || v < 1.0) {
        throw ParamError("parameter '" + key + "' must be a positive integer");
    }
    return static_cast<int>(v);
}

inline ParamSpec unit_interval(std::string name, double def, double lo)
{
    return {std::move(name), def, false, lo, 1.0};
}

inline ParamSpec angle(std::string name) { return {std::move(name), 0.0, false}; }

inline ParamSpec disk_point(std::string name) { return {std::move(name), 0.0, true, 0.0, 1.0}; }

inline HarmonicMap with_square_root(AnalyticPart h, const ParamSet& p)
{
    const AnalyticFn q = mobius(MobiusParams(p.at("a"), real_param(p, "theta")));
    return {std::move(h), q * q, q};
}

inline std::vector<FamilySpec> make_registry()
{
    using namespace family_math;
    const auto gap_ref = ReferenceSpec{{}, [](const ParamSet&) { return gap_constant(); }};
    const auto bound = [](double base) {
        return ReferenceSpec{{}, [base](const ParamSet&) { return base + gap_constant(); }};
    };
    std::vector<FamilySpec> reg;

    reg.push_back({"cubic-cdo",
                   "F(z) = z + conj(z^3/3), q(z) = z",
                   {},
                   false,
                   [](const ParamSet&) { return HarmonicMap(identity(), identity() * identity(), identity()); },
                   {{"gap", gap_ref}, {"r0", {{}, [](const ParamSet&) { return gap_maximiser(); }}}}});

    reg.push_back({"thm42-extremal",
                   "h' = (1-z)^-2, omega = (z-t)/(1-tz)",
                   {unit_interval("t", 0.5, 0.5)},
                   true,
                   [](const ParamSet& p) {
                       const double t = real_param(p, "t");
                       return HarmonicMap(AnalyticPart::from_derivative(power(1.0, 2.0)),
                                          mobius(MobiusParams(t, 0.0)));
                   },
                   {{"M", {{}, [](const ParamSet& p) { return psi_maximum(real_param(p, "t")); }}},
                    {"r0", {{}, [](const ParamSet& p) { return psi_maximiser(real_param(p, "t")); }}},
                    {"psi", {{"r"}, [](const ParamSet& p) { return psi(real_param(p, "t"), real_param(p, "r")); }}}}});

    reg.push_back({"thm43-extremal",
                   "1 + z h''/h' = (1+eps_t)/(1-eps_t), eps_t = z(z+t/2)/(1+tz/2), omega = (z+t)/(1+tz)",
                   {unit_interval("t", 0.5, 0.0)},
                   true,
                   [](const ParamSet& p) {
                       const double t = real_param(p, "t");
                       // h''/h' = (2z + t)/(1 - z^2) integrates to this product.
                       const AnalyticFn h1 = power(1.0, 1.0 + t / 2.0, 1.0) * power(1.0, 1.0 - t / 2.0, -1.0);
                       return HarmonicMap(AnalyticPart::from_derivative(h1), mobius(MobiusParams(-t, 0.0)));
                   },
                   {{"S0", {{}, [](const ParamSet& p) { return extremal_schwarzian_at_zero(real_param(p, "t")); }}}}});

    reg.push_back(
        {"coeff-family",
         "h = z/(1-z), omega = (z+gamma)/(1+gamma z)",
         {unit_interval("gamma", 0.5, 0.0)},
         true,
         [](const ParamSet& p) {
             const double g = real_param(p, "gamma");
             return HarmonicMap(identity() * reciprocal_linear(1.0, -1.0), mobius(MobiusParams(-g, 0.0)));
         },
         {{"b_n",
           {{"n"},
            [](const ParamSet& p) { return coanalytic_coefficient(real_param(p, "gamma"), integer_param(p, "n")); }}},
          {"gprime_pos",
           {{"r"},
            [](const ParamSet& p) {
                const double g = real_param(p, "gamma");
                const double r = real_param(p, "r");
                return (r + g) / ((1.0 + g * r) * (1.0 - r) * (1.0 - r));
            }}},
          {"gprime_neg", {{"r"}, [](const ParamSet& p) {
               const double g = real_param(p, "gamma");
               const double r = real_param(p, "r");
               return (g - r) / ((1.0 - g * r) * (1.0 + r) * (1.0 + r));
           }}}}});

    reg.push_back({"bloch-unbounded",
                   "h = z/(1 - e^{i theta} z), omega = e^{i alpha} z",
                   {angle("theta"), angle("alpha")},
                   true,
                   [](const ParamSet& p) {
                       const cplx rot = std::polar(1.0, real_param(p, "theta"));
                       return HarmonicMap(identity() * reciprocal_linear(1.0, -rot),
                                          mobius(MobiusParams(0.0, real_param(p, "alpha"))));
                   },
                   {{"radial", {{"r"}, [](const ParamSet& p) {
                         const double r = real_param(p, "r");
                         return (1.0 - r * r) * (1.0 + r) / ((1.0 - r) * (1.0 - r));
                     }}}}});

    reg.push_back({"bloch-bounded",
                   "h' = 1/(1-z), omega = z",
                   {},
                   true,
                   [](const ParamSet&) { return HarmonicMap(AnalyticPart::from_derivative(power(1.0, 1.0)), identity()); },
                   {{"bloch", {{}, [](const ParamSet&) { return 4.0; }}}}});

    reg.push_back({"cor32-family",
                   "h' = (1-z)^-3 (Re Q_h > -1/2), q = e^{i theta}(z-a)/(1-conj(a)z), omega = q^2",
                   {disk_point("a"), angle("theta")},
                   false,
                   [](const ParamSet& p) { return with_square_root(AnalyticPart::from_derivative(power(1.0, 3.0)), p); },
                   {{"bound", bound(6.0)}, {"gap", gap_ref}}});

    reg.push_back({"cor33-family",
                   "h' = 1 - z (Re Q_h < 3/2), q = e^{i theta}(z-a)/(1-conj(a)z), omega = q^2",
                   {disk_point("a"), angle("theta")},
                   false,
                   [](const ParamSet& p) {
                       return with_square_root(AnalyticPart::from_derivative(polynomial({1.0, -1.0})), p);
                   },
                   {{"bound", bound(2.0)}, {"gap", gap_ref}}});

    reg.push_back({"cor34-family",
                   "h' = 1 + z/2 (0 < Re Q_h < 4/3), q = e^{i theta}(z-a)/(1-conj(a)z), omega = q^2",
                   {disk_point("a"), angle("theta")},
                   false,
                   [](const ParamSet& p) {
                       return with_square_root(AnalyticPart::from_derivative(polynomial({1.0, 0.5})), p);
                   },
                   {{"bound", bound(2.0)}, {"gap", gap_ref}}});

    return reg;
}

inline void validate(const ParamSpec& spec, cplx v)
{
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw ParamError("parameter '" + spec.name + "' is not finite");
    }
    if (spec.is_complex) {
        if (!(std::abs(v) < spec.hi)) {
            throw ParamError("parameter '" + spec.name + "' out of range");
        }
        return;
    }
    if (v.imag() != 0.0) {
        throw ParamError("parameter '" + spec.name + "' must be real");
    }
    if (!(v.real() >= spec.lo) || !(v.real() < spec.hi)) {
        throw ParamError("parameter '" + spec.name + "' out of range");
    }
}

} // namespace detail

inline const std::vector<FamilySpec>& registry()
{
    static const std::vector<FamilySpec> reg = detail::make_registry();
    return reg;
}

inline const FamilySpec& family(const std::string& name)
{
    for (const auto& f : registry()) {
        if (f.name == name) {
            return f;
        }
    }
    throw ParamError("unknown family '" + name + "'");
}

/// Fill defaults, reject unknown names and out-of-range values. Names in
/// `extra` are accepted and passed through untouched.
inline ParamSet resolve_params(const FamilySpec& fam, const ParamSet& given, const std::vector<std::string>& extra = {})
{
    ParamSet out;
    for (const auto& spec : fam.params) {
        const auto it = given.find(spec.name);
        const cplx v = it == given.end() ? spec.default_value : it->second;
        detail::validate(spec, v);
        out[spec.name] = v;
    }
    for (const auto& [key, value] : given) {
        if (out.count(key)) {
            continue;
        }
        if (std::find(extra.begin(), extra.end(), key) == extra.end()) {
            throw ParamError("family '" + fam.name + "' has no parameter '" + key + "'");
        }
        out[key] = value;
    }
    return out;
}

inline HarmonicMap build(const std::string& name, const ParamSet& params = {})
{
    const FamilySpec& fam = family(name);
    return fam.builder(resolve_params(fam, params));
}

/// Closed-form reference value `key` of a family.
inline double reference(const std::string& name, const std::string& key, const ParamSet& params = {})
{
    const FamilySpec& fam = family(name);
    const auto it = fam.references.find(key);
    if (it == fam.references.end()) {
        throw KeyError("family '" + name + "' has no reference value '" + key + "'");
    }
    const ParamSet resolved = resolve_params(fam, params, it->second.extra_args);
    for (const auto& arg : it->second.extra_args) {
        if (!resolved.count(arg)) {
            throw ParamError("reference '" + key + "' needs argument '" + arg + "'");
        }
    }
    return it->second.eval(resolved);
}

/// Sampled evidence of membership in the convex-part / automorphism class:
/// the smallest Re Q_h over seeded points with |z| <= radius, and the
/// automorphism fit residual of the dilatation.
struct MembershipEvidence {
    double min_re_q;
    double automorphism_residual;
};

inline MembershipEvidence membership_evidence(const HarmonicMap& f, int samples = 1000, unsigned seed = 42,
                                              double radius = 1.0 - 1e-4)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        const cplx z = std::polar(radius * std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng));
        worst = std::min(worst, q_functional(f.h(), z).real());
    }
    return {worst, automorphism_fit_residual(f.omega())};
}

} // namespace harmonorm
