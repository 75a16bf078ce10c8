#pragma once

// Verification suites: each check compares a measured quantity against a
// bound with the slack stated in its name.

#include "harmonorm/families.hpp"
#include "harmonorm/norm_engine.hpp"
#include "harmonorm/series_coeffs.hpp"
#include "harmonorm/transforms.hpp"

#include <chrono>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace harmonorm {

struct Check {
    std::string name;
    double measured = 0.0;
    std::string relation;  // "<=" or ">="
    double bound = 0.0;
    bool passed = false;
};

struct SuiteReport {
    std::string suite;
    std::vector<Check> checks;
    double seconds = 0.0;

    bool passed() const
    {
        for (const auto& c : checks) {
            if (!c.passed) {
                return false;
            }
        }
        return true;
    }
};

struct VerifyOptions {
    unsigned seed = 42;
    GridConfig grid;
};

namespace detail {

class SuiteBuilder {
public:
    explicit SuiteBuilder(std::string name) { report_.suite = std::move(name); }

    void at_most(std::string name, double measured, double bound)
    {
        report_.checks.push_back({std::move(name), measured, "<=", bound, measured <= bound});
    }
    void at_least(std::string name, double measured, double bound)
    {
        report_.checks.push_back({std::move(name), measured, ">=", bound, measured >= bound});
    }

    SuiteReport finish(std::chrono::steady_clock::time_point start)
    {
        report_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return report_;
    }

private:
    SuiteReport report_;
};

inline cplx random_point(std::mt19937_64& rng, double radius)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return std::polar(radius * std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng));
}

inline double unit(std::mt19937_64& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

/// Representative members of every registry family flagged as convex-part /
/// automorphism class.
inline std::vector<HarmonicMap> class_fixtures()
{
    std::vector<HarmonicMap> out;
    for (double t : {0.5, 0.75, 0.9, 0.99}) {
        out.push_back(build("thm42-extremal", {{"t", t}}));
    }
    for (double t : {0.0, 0.5, 0.9, 0.99}) {
        out.push_back(build("thm43-extremal", {{"t", t}}));
    }
    for (double g : {0.0, 0.5, 0.9, 0.99}) {
        out.push_back(build("coeff-family", {{"gamma", g}}));
    }
    out.push_back(build("bloch-unbounded", {{"theta", 0.0}, {"alpha", 0.0}}));
    out.push_back(build("bloch-unbounded", {{"theta", 1.3}, {"alpha", 2.1}}));
    out.push_back(build("bloch-bounded"));
    return out;
}

inline HarmonicMap random_class_member(std::mt19937_64& rng)
{
    switch (std::uniform_int_distribution<int>(0, 4)(rng)) {
    case 0:
        return build("thm42-extremal", {{"t", 0.5 + 0.49 * unit(rng)}});
    case 1:
        return build("thm43-extremal", {{"t", 0.99 * unit(rng)}});
    case 2:
        return build("coeff-family", {{"gamma", 0.99 * unit(rng)}});
    case 3:
        return build("bloch-unbounded", {{"theta", 6.0 * unit(rng)}, {"alpha", 6.0 * unit(rng)}});
    default:
        return build("bloch-bounded");
    }
}

inline HarmonicMap random_square_root_member(const std::string& name, std::mt19937_64& rng)
{
    if (name == "cubic-cdo") {
        return build(name);
    }
    const cplx a = random_point(rng, 0.95);
    return build(name, {{"a", a}, {"theta", 2.0 * std::numbers::pi * unit(rng)}});
}

inline std::vector<HarmonicMap> square_root_fixtures(const std::string& name, std::mt19937_64& rng, int random_count)
{
    std::vector<HarmonicMap> out{build(name, {{"a", 0.0}, {"theta", 0.0}}),
                                 build(name, {{"a", cplx{0.5, 0.0}}, {"theta", 0.0}}),
                                 build(name, {{"a", cplx{-0.3, 0.6}}, {"theta", 1.0}})};
    for (int i = 0; i < random_count; ++i) {
        out.push_back(random_square_root_member(name, rng));
    }
    return out;
}

/// Central-difference Wirtinger derivative d/dz = (d/dx - i d/dy)/2.
template <class F>
cplx wirtinger(F&& f, cplx z, double h)
{
    const cplx dx = (f(z + h) - f(z - h)) / (2.0 * h);
    const cplx dy = (f(z + cplx{0.0, h}) - f(z - cplx{0.0, h})) / (2.0 * h);
    return 0.5 * (dx - cplx{0.0, 1.0} * dy);
}

// -- suites ------------------------------------------------------------------

inline SuiteReport suite_thm31(const VerifyOptions& opt)
{
    const auto start = std::chrono::steady_clock::now();
    SuiteBuilder s("thm31");
    const double gap = family_math::gap_constant();
    std::mt19937_64 rng(opt.seed);

    const NormEstimate cubic = norm_pre_schwarzian(build("cubic-cdo"), Flavor::cdo, opt.grid);
    s.at_most("cubic map: |CDO pre-Schwarzian norm - gap constant| (tol 1e-3)", std::abs(cubic.value - gap), 1e-3);
    s.at_most("cubic map: |argmax| - r0 (tol 1e-3)", std::abs(std::abs(cubic.argmax) - family_math::gap_maximiser()),
              1e-3);

    const std::vector<std::string> names{"cubic-cdo", "cor32-family", "cor33-family", "cor34-family"};
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const HarmonicMap f = random_square_root_member(names[i % names.size()], rng);
        const cplx z = random_point(rng, 1.0 - 1e-6);
        worst = std::max(worst, (1.0 - std::norm(z)) * std::abs(pre_schwarzian_cdo(f, z) - pre_schwarzian_analytic(f.h(), z)));
    }
    s.at_most("pointwise (1-|z|^2)|P_cdo - P_h| over 1e4 samples of square-root families (gap + 1e-6)", worst,
              gap + 1e-6);

    double norm_gap = 0.0;
    for (const auto& name : names) {
        const auto members = name == "cubic-cdo" ? std::vector<HarmonicMap>{build(name)} : square_root_fixtures(name, rng, 1);
        for (const auto& f : members) {
            const double cdo = norm_pre_schwarzian(f, Flavor::cdo, opt.grid).value;
            const double an = norm_pre_schwarzian(f, Flavor::analytic, opt.grid).value;
            norm_gap = std::max(norm_gap, std::abs(cdo - an));
        }
    }
    s.at_most("|CDO norm - analytic norm of h| over square-root families (gap + 1e-6)", norm_gap, gap + 1e-6);
    return s.finish(start);
}

inline SuiteReport suite_square_root_family(const std::string& suite, const std::string& fam, double base,
                                   double q_lower, double q_upper, const VerifyOptions& opt)
{
    const auto start = std::chrono::steady_clock::now();
    SuiteBuilder s(suite);
    const double gap = family_math::gap_constant();
    std::mt19937_64 rng(opt.seed);
    double worst = 0.0;
    for (const auto& f : square_root_fixtures(fam, rng, 3)) {
        worst = std::max(worst, norm_pre_schwarzian(f, Flavor::cdo, opt.grid).value);
    }
    s.at_most(fam + ": CDO pre-Schwarzian norm (" + std::to_string(static_cast<int>(base)) + " + gap + 1e-6)", worst,
              base + gap + 1e-6);

    const HarmonicMap f = build(fam);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int i = 0; i < 10000; ++i) {
        const double re = q_functional(f.h(), random_point(rng, 1.0 - 1e-6)).real();
        lo = std::min(lo, re);
        hi = std::max(hi, re);
    }
    if (std::isfinite(q_lower)) {
        s.at_least(fam + ": sampled min Re(1 + z h''/h')", lo, q_lower);
    }
    if (std::isfinite(q_upper)) {
        s.at_most(fam + ": sampled max Re(1 + z h''/h')", hi, q_upper);
    }
    s.at_most(fam + ": max |q^2 - omega| on 100 points (1e-10)", f.q_residual(100, opt.seed), 1e-10);
    return s.finish(start);
}

inline SuiteReport suite_thm42(const VerifyOptions& opt)
{
    const auto start = std::chrono::steady_clock::now();
    SuiteBuilder s("thm42");
    for (double t : {0.5, 0.7, 0.9}) {
        const HarmonicMap f = build("thm42-extremal", {{"t", t}});
        const NormEstimate radial = radial_supremum(pre_schwarzian_density(f, Flavor::hm), 0.0, 1.0 - 1e-6, 1e-6);
        const double m = family_math::psi_maximum(t);
        s.at_most("t = " + std::to_string(t).substr(0, 3) + ": |real-axis sup - M_t| (tol 1e-5)",
                  std::abs(radial.value - m), 1e-5);
        const NormEstimate full = norm_pre_schwarzian(f, Flavor::hm, opt.grid);
        s.at_least("t = " + std::to_string(t).substr(0, 3) + ": full-disk estimate - real-axis sup (>= -1e-9)",
                   full.value - radial.value, -1e-9);
    }
    const NormEstimate near_one = norm_pre_schwarzian(build("thm42-extremal", {{"t", 0.99}}), Flavor::hm, opt.grid);
    s.at_least("t = 0.99: sampled norm - M_0.99 (>= -1e-9)", near_one.value - family_math::psi_maximum(0.99), -1e-9);

    double min_step = std::numeric_limits<double>::infinity();
    double prev = family_math::psi_maximum(0.5);
    for (int k = 1; k <= 9; ++k) {
        const double m = family_math::psi_maximum(0.5 + 0.05 * k);
        min_step = std::min(min_step, m - prev);
        prev = m;
    }
    s.at_least("M_t increasing on t = 0.5, 0.55, ..., 0.95: smallest increment (> 0)", min_step,
               std::numeric_limits<double>::min());

    double worst = 0.0;
    for (const auto& f : class_fixtures()) {
        worst = std::max(worst, norm_pre_schwarzian(f, Flavor::hm, opt.grid).value);
    }
    s.at_most("class fixtures: largest sampled pre-Schwarzian norm (5 + 1e-6)", worst, 5.0 + 1e-6);
    return s.finish(start);
}

inline SuiteReport suite_thm43(const VerifyOptions& opt)
{
    const auto start = std::chrono::steady_clock::now();
    SuiteBuilder s("thm43");
    double err = 0.0;
    for (double t : {0.0, 0.5, 0.9, 0.99}) {
        const cplx s0 = schwarzian_hm(build("thm43-extremal", {{"t", t}}), 0.0);
        err = std::max(err, std::abs(s0 - (2.0 + t * t)));
    }
    s.at_most("max |S_f(0) - (2 + t^2)| over t in {0, 0.5, 0.9, 0.99} (1e-9)", err, 1e-9);

    // Route through the Schwarz-function quotient rather than the closed-form h'.
    double route = 0.0;
    for (double t : {0.0, 0.5, 0.9, 0.99}) {
        const HarmonicMap f = build("thm43-extremal", {{"t", t}});
        const AnalyticFn p = pre_schwarzian_from_schwarz_quotient(schwarzian_extremal_quotient(t));
        const Jet3 pj = jet_eval(p, 0.0);
        const cplx sh = pj.d1 - 0.5 * pj.v * pj.v;
        route = std::max(route, std::abs(sh - schwarzian_analytic(f.h(), 0.0)));
    }
    s.at_most("S_h(0) from the Schwarz quotient vs closed-form h' (1e-12)", route, 1e-12);

    s.at_least("t = 0.9: sampled Schwarzian norm (>= 2.81)",
               norm_schwarzian(build("thm43-extremal", {{"t", 0.9}}), Flavor::hm, opt.grid).value, 2.81);
    s.at_least("t = 0.99: sampled Schwarzian norm (>= 2.98)",
               norm_schwarzian(build("thm43-extremal", {{"t", 0.99}}), Flavor::hm, opt.grid).value, 2.98);

    double worst = 0.0;
    for (const auto& f : class_fixtures()) {
        worst = std::max(worst, norm_schwarzian(f, Flavor::hm, opt.grid).value);
    }
    s.at_most("class fixtures: largest sampled Schwarzian norm (3 + 1e-6)", worst, 3.0 + 1e-6);
    return s.finish(start);
}

inline SuiteReport suite_thm45(const VerifyOptions& opt)
{
    const auto start = std::chrono::steady_clock::now();
    SuiteBuilder s("thm45");
    double err = 0.0;
    double largest = 0.0;
    for (double g : {0.0, 0.25, 0.5, 0.75, 0.9, 0.99}) {
        const auto b = g_coefficients(build("coeff-family", {{"gamma", g}}), 50);
        for (int n = 1; n <= 50; ++n) {
            err = std::max(err, std::abs(b[n - 1] - family_math::coanalytic_coefficient(g, n)));
            largest = std::max(largest, std::abs(b[n - 1]));
        }
    }
    s.at_most("coefficient family: max |b_n - closed form|, n <= 50, six gamma (1e-10)", err, 1e-10);
    s.at_most("coefficient family: max |b_n| (1 + 1e-10)", largest, 1.0 + 1e-10);

    double smallest = std::numeric_limits<double>::infinity();
    for (int n = 1; n <= 10; ++n) {
        smallest = std::min(smallest, family_math::coanalytic_coefficient(0.999, n));
    }
    s.at_least("gamma = 0.999: min b_n over n <= 10 (> 0.99)", smallest, 0.99);

    std::mt19937_64 rng(opt.seed);
    std::vector<HarmonicMap> members = class_fixtures();
    for (int i = 0; i < 10; ++i) {
        members.push_back(koebe_transform(random_class_member(rng), MobiusParams(random_point(rng, 0.9), 6.0 * unit(rng))));
    }
    double max_b = 0.0;
    double excess = -std::numeric_limits<double>::infinity();
    for (const auto& f : members) {
        const CoefficientReport r = coefficient_bound_check(f, 50);
        max_b = std::max(max_b, r.max_modulus);
        excess = std::max(excess, r.majorization_excess);
    }
    s.at_most("class fixtures and Koebe transforms: max |b_n|, n <= 50 (1 + 1e-10)", max_b, 1.0 + 1e-10);
    s.at_most("class fixtures: max over n of n|b_n| - n (1e-10)", excess, 1e-10);
    return s.finish(start);
}

inline SuiteReport suite_thm46(const VerifyOptions&)
{
    const auto start = std::chrono::steady_clock::now();
    SuiteBuilder s("thm46");
    const std::vector<double> radii{0.1, 0.3, 0.5, 0.7, 0.9, 0.99};
    double worst = std::numeric_limits<double>::infinity();
    for (double g : {0.0, 0.5, 0.9}) {
        const DistortionReport r = distortion_check(build("coeff-family", {{"gamma", g}}), radii);
        worst = std::min({worst, r.h_lower_margin, r.h_upper_margin, r.omega_lower_margin, r.omega_upper_margin,
                          r.g_upper_margin});
    }
    s.at_least("coefficient family, gamma in {0, 0.5, 0.9}: worst distortion-band margin (>= -1e-9)", worst, -1e-9);

    double g_band = std::numeric_limits<double>::infinity();
    for (const auto& f : class_fixtures()) {
        g_band = std::min(g_band, distortion_check(f, radii).g_upper_margin);
    }
    s.at_least("class fixtures: worst margin of |g'| <= 1/(1-r)^2 (>= -1e-9)", g_band, -1e-9);

    double zero = 0.0;
    double closed = 0.0;
    for (double r : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const HarmonicMap f = build("coeff-family", {{"gamma", r}});
        zero = std::max(zero, std::abs(dilatation(f, -r) * f.h().derivatives(-r).h1));
        const cplx gp = dilatation(f, r) * f.h().derivatives(r).h1;
        closed = std::max(closed, std::abs(gp - reference("coeff-family", "gprime_pos", {{"gamma", r}, {"r", r}})) /
                                      std::abs(gp));
    }
    s.at_most("gamma = r: max |g'(-r)| (1e-12)", zero, 1e-12);
    s.at_most("g'(r) against (r + gamma)/((1 + gamma r)(1 - r)^2), relative (1e-12)", closed, 1e-12);

    const HarmonicMap f = build("coeff-family", {{"gamma", 0.999}});
    const double r = 0.5;
    s.at_least("gamma = 0.999, r = 0.5: g'(r)(1-r)^2 (>= 0.999)",
               std::abs(dilatation(f, r) * f.h().derivatives(r).h1) * (1.0 - r) * (1.0 - r), 0.999);
    return s.finish(start);
}

inline SuiteReport suite_identities(const VerifyOptions& opt)
{
    const auto start = std::chrono::steady_clock::now();
    SuiteBuilder s("identities");
    std::mt19937_64 rng(opt.seed);

    double pre = 0.0;
    double schw = 0.0;
    for (int i = 0; i < 20; ++i) {
        const HarmonicMap f = random_class_member(rng);
        const auto [p, q] = chain_rule_residuals(f, MobiusParams(random_point(rng, 0.5), 6.0 * unit(rng)), 100,
                                                 static_cast<unsigned>(rng()));
        pre = std::max(pre, p);
        schw = std::max(schw, q);
    }
    s.at_most("chain rule, pre-Schwarzian: max residual (1e-6)", pre, 1e-6);
    s.at_most("chain rule, Schwarzian: max residual (1e-6)", schw, 1e-6);

    double aff_p = 0.0;
    double aff_s = 0.0;
    for (int i = 0; i < 100; ++i) {
        const HarmonicMap f = random_class_member(rng);
        const HarmonicMap a = affine_transform(f, AffineParams(random_point(rng, 0.95)));
        const cplx z = random_point(rng, 0.8);
        const cplx p = pre_schwarzian_hm(f, z);
        const cplx sf = schwarzian_hm(f, z);
        aff_p = std::max(aff_p, std::abs(pre_schwarzian_hm(a, z) - p) / (1.0 + std::abs(p)));
        aff_s = std::max(aff_s, std::abs(schwarzian_hm(a, z) - sf) / (1.0 + std::abs(sf)));
    }
    s.at_most("affine invariance of P_f: max relative residual (1e-9)", aff_p, 1e-9);
    s.at_most("affine invariance of S_f: max relative residual (1e-9)", aff_s, 1e-9);

    double wirt = 0.0;
    for (int i = 0; i < 100; ++i) {
        const HarmonicMap f = random_class_member(rng);
        const cplx z = random_point(rng, 0.9);
        const cplx p = pre_schwarzian_hm(f, z);
        const cplx dp = wirtinger([&](cplx w) { return pre_schwarzian_hm(f, w); }, z, 1e-5);
        const cplx sf = schwarzian_hm(f, z);
        wirt = std::max(wirt, std::abs(sf - (dp - 0.5 * p * p)) / (1.0 + std::abs(sf)));
    }
    s.at_most("S_f = (P_f)_z - P_f^2/2 with finite-difference d/dz: max relative residual (1e-4)", wirt, 1e-4);

    double pick = -std::numeric_limits<double>::infinity();
    std::vector<HarmonicMap> maps;
    for (const auto& fam : registry()) {
        ParamSet p;
        for (const auto& spec : fam.params) {
            p[spec.name] = spec.is_complex ? random_point(rng, 0.9)
                           : std::isfinite(spec.lo) ? cplx{spec.lo + (spec.hi - spec.lo) * 0.99 * unit(rng)}
                                                    : cplx{6.0 * unit(rng)};
        }
        maps.push_back(fam.builder(resolve_params(fam, p)));
    }
    for (int i = 0; i < 10000; ++i) {
        const HarmonicMap& f = maps[i % maps.size()];
        const cplx z = random_point(rng, 0.999);
        const Jet3 w = jet_eval(f.omega(), z);
        pick = std::max(pick, (1.0 - std::norm(z)) * std::abs(w.d1) - (1.0 - std::norm(w.v)) * (1.0 + 1e-12));
    }
    s.at_most("Schwarz-Pick: max (1-|z|^2)|omega'| - (1-|omega|^2)(1 + 1e-12) over 1e4 samples", pick, 0.0);

    double mob = 0.0;
    for (int i = 0; i < 100; ++i) {
        const MobiusParams m(random_point(rng, 0.95), 6.0 * unit(rng));
        mob = std::max(mob, std::abs(schwarzian_analytic(mobius(m), random_point(rng, 0.95))));
    }
    s.at_most("Mobius maps: max |S| (1e-10)", mob, 1e-10);

    double koebe = 0.0;
    for (int i = 0; i < 30; ++i) {
        const HarmonicMap f = random_class_member(rng);
        const cplx z = random_point(rng, 0.9);
        const double w = 1.0 - std::norm(z);
        const HarmonicMap lf = koebe_transform(f, MobiusParams::from_alpha(z, 0.0));
        koebe = std::max(koebe, std::abs(std::abs(schwarzian_hm(lf, 0.0)) - w * w * std::abs(schwarzian_hm(f, z))));
    }
    s.at_most("|S_{L_phi f}(0)| = (1-|z|^2)^2 |S_f(z)| for phi(0) = z: max residual (1e-8)", koebe, 1e-8);

    double reduction = 0.0;
    for (int i = 0; i < 100; ++i) {
        const HarmonicMap f = random_class_member(rng);
        const HarmonicMap analytic(f.h(), constant(0.0));
        const cplx z = random_point(rng, 0.9);
        reduction = std::max({reduction, std::abs(pre_schwarzian_hm(analytic, z) - pre_schwarzian_analytic(f.h(), z)),
                              std::abs(schwarzian_hm(analytic, z) - schwarzian_analytic(f.h(), z))});
    }
    s.at_most("omega = 0 reduces to the analytic operators: max difference (exact)", reduction, 0.0);
    return s.finish(start);
}

} // namespace detail

inline const std::vector<std::string>& verify_suite_names()
{
    static const std::vector<std::string> names{"thm31", "cor32", "cor33", "cor34", "thm42",
                                                "thm43", "thm45", "thm46", "identities"};
    return names;
}

inline SuiteReport run_verify_suite(const std::string& name, const VerifyOptions& opt = {})
{
    const double inf = std::numeric_limits<double>::infinity();
    if (name == "thm31") {
        return detail::suite_thm31(opt);
    }
    if (name == "cor32") {
        return detail::suite_square_root_family(name, "cor32-family", 6.0, -0.5, inf, opt);
    }
    if (name == "cor33") {
        return detail::suite_square_root_family(name, "cor33-family", 2.0, -inf, 1.5, opt);
    }
    if (name == "cor34") {
        return detail::suite_square_root_family(name, "cor34-family", 2.0, 0.0, 4.0 / 3.0, opt);
    }
    if (name == "thm42") {
        return detail::suite_thm42(opt);
    }
    if (name == "thm43") {
        return detail::suite_thm43(opt);
    }
    if (name == "thm45") {
        return detail::suite_thm45(opt);
    }
    if (name == "thm46") {
        return detail::suite_thm46(opt);
    }
    if (name == "identities") {
        return detail::suite_identities(opt);
    }
    throw ParamError("unknown verify suite '" + name + "'");
}

} // namespace harmonorm
