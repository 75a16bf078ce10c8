// Acceptance run: one PASS/FAIL line per criterion.

#include <harmonorm/harmonorm.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace harmonorm;

namespace {

struct Outcome {
    bool passed;
    std::string detail;
};

cplx random_point(std::mt19937_64& rng, double radius)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return std::polar(radius * std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng));
}

// Every registry family, sampled at a few admissible parameter values.
std::vector<HarmonicMap> sample_registry(bool f0_only, bool q_only, int per_family, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<HarmonicMap> out;
    for (const auto& fam : registry()) {
        if (f0_only && !fam.f0_member) {
            continue;
        }
        for (int i = 0; i < per_family; ++i) {
            ParamSet p;
            for (const auto& spec : fam.params) {
                if (spec.is_complex) {
                    p[spec.name] = random_point(rng, 0.95 * spec.hi);
                } else if (std::isfinite(spec.lo)) {
                    // Include the upper end of the range: extremal behaviour sits there.
                    const double s = i == 0 ? 0.99 : u(rng);
                    p[spec.name] = spec.lo + (spec.hi - spec.lo) * s;
                } else {
                    p[spec.name] = 2.0 * std::numbers::pi * u(rng);
                }
            }
            HarmonicMap f = fam.builder(resolve_params(fam, p));
            if (!q_only || f.has_q()) {
                out.push_back(std::move(f));
            }
        }
    }
    return out;
}

double real_axis_brute_sup(double t)
{
    const HarmonicMap f = build("thm42-extremal", {{"t", t}});
    double best = 0.0;
    for (int k = 0; k < 1000000 - 1; ++k) {
        const double r = k * 1e-6;
        best = std::max(best, (1.0 - r * r) * std::abs(pre_schwarzian_hm(f, r)));
    }
    return best;
}

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

Outcome gap_constant()
{
    const double r0 = std::sqrt(std::sqrt(5.0) - 2.0);
    const double target = 2.0 * r0 * (1.0 - r0 * r0) / (1.0 + r0 * r0);
    const double v = norm_pre_schwarzian(build("cubic-cdo"), Flavor::cdo).value;
    return {std::abs(v - target) <= 1e-3, "norm " + fmt(v) + ", target " + fmt(target)};
}

Outcome gap_universality()
{
    const double bound = 0.600566 + 1e-6;
    std::mt19937_64 rng(42);
    const std::vector<HarmonicMap> maps = sample_registry(false, true, 25, rng);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const HarmonicMap& f = maps[i % maps.size()];
        const cplx z = random_point(rng, 1.0 - 1e-6);
        worst = std::max(worst, (1.0 - std::norm(z)) * std::abs(pre_schwarzian_cdo(f, z) - pre_schwarzian_analytic(f.h(), z)));
    }
    return {worst <= bound, "max " + fmt(worst) + " over 1e4 samples, " + std::to_string(maps.size()) + " maps"};
}

Outcome pre_schwarzian_curve()
{
    std::ostringstream d;
    bool ok = true;
    for (double t : {0.5, 0.7, 0.9}) {
        const double m = 2.0 + 3.0 / t - 4.0 / t * std::sqrt((1.0 - t * t) / 2.0);
        const double brute = real_axis_brute_sup(t);
        ok = ok && std::abs(brute - m) <= 1e-5;
        d << "t=" << t << " |sup-M|=" << fmt(std::abs(brute - m)) << "; ";
    }
    const double m999 = real_axis_brute_sup(0.999);
    const bool m_ok = m999 >= 4.9;
    ok = ok && m_ok;
    d << "M_0.999=" << fmt(m999) << (m_ok ? " (>= 4.9)" : " (< 4.9 required)") << "; ";

    std::mt19937_64 rng(42);
    double worst = 0.0;
    for (const auto& f : sample_registry(true, false, 4, rng)) {
        worst = std::max(worst, norm_pre_schwarzian(f, Flavor::hm).value);
    }
    ok = ok && worst <= 5.0 + 1e-6;
    d << "max sampled norm " << fmt(worst);
    return {ok, d.str()};
}

Outcome schwarzian_bound()
{
    double err = 0.0;
    for (double t : {0.0, 0.5, 0.9, 0.99}) {
        err = std::max(err, std::abs(schwarzian_hm(build("thm43-extremal", {{"t", t}}), 0.0) - (2.0 + t * t)));
    }
    std::mt19937_64 rng(42);
    double worst = 0.0;
    for (const auto& f : sample_registry(true, false, 4, rng)) {
        worst = std::max(worst, norm_schwarzian(f, Flavor::hm).value);
    }
    const double near_one = norm_schwarzian(build("thm43-extremal", {{"t", 0.99}}), Flavor::hm).value;
    return {err <= 1e-9 && worst <= 3.0 + 1e-6 && near_one >= 2.98,
            "max |S(0)-(2+t^2)| " + fmt(err) + ", max norm " + fmt(worst) + ", t=0.99 norm " + fmt(near_one)};
}

Outcome coefficient_bound()
{
    double err = 0.0;
    double largest = 0.0;
    for (double g : {0.0, 0.2, 0.5, 0.7, 0.9, 0.99}) {
        const auto b = g_coefficients(build("coeff-family", {{"gamma", g}}), 50);
        for (int n = 1; n <= 50; ++n) {
            const double closed = 1.0 - (1.0 / n) * ((1.0 - g) / (1.0 + g)) * (1.0 - std::pow(-g, n));
            err = std::max(err, std::abs(b[n - 1] - closed));
            largest = std::max(largest, std::abs(b[n - 1]));
        }
    }
    return {err <= 1e-10 && largest <= 1.0, "max |b_n - closed| " + fmt(err) + ", max |b_n| " + fmt(largest)};
}

Outcome distortion()
{
    const std::vector<double> radii{0.1, 0.3, 0.5, 0.7, 0.9, 0.99, 0.999};
    std::mt19937_64 rng(42);
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& f : sample_registry(true, false, 4, rng)) {
        margin = std::min(margin, distortion_check(f, radii).g_upper_margin);
    }
    double zero = 0.0;
    for (double r : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const HarmonicMap f = build("coeff-family", {{"gamma", r}});
        zero = std::max(zero, std::abs(dilatation(f, -r) * f.h().derivatives(-r).h1));
    }
    const HarmonicMap f = build("coeff-family", {{"gamma", 0.999}});
    const double scaled = std::abs(dilatation(f, 0.5) * f.h().derivatives(0.5).h1) * 0.25;
    return {margin >= -1e-9 && zero <= 1e-12 && scaled >= 0.999,
            "min margin " + fmt(margin) + ", max |g'(-r)| " + fmt(zero) + ", g'(r)(1-r)^2 " + fmt(scaled)};
}

Outcome identities()
{
    const SuiteReport r = run_verify_suite("identities");
    std::string failing;
    for (const auto& c : r.checks) {
        if (!c.passed) {
            failing += " [" + c.name + "]";
        }
    }
    return {r.passed() && r.seconds < 30.0,
            std::to_string(r.checks.size()) + " checks in " + fmt(r.seconds) + " s" + failing};
}

Outcome corollaries()
{
    std::mt19937_64 rng(42);
    double w32 = 0.0;
    double w33 = 0.0;
    for (int i = 0; i < 6; ++i) {
        const ParamSet p{{"a", i == 0 ? cplx{0.0} : random_point(rng, 0.95)},
                         {"theta", 2.0 * std::numbers::pi * std::uniform_real_distribution<double>(0.0, 1.0)(rng)}};
        w32 = std::max(w32, norm_pre_schwarzian(build("cor32-family", p), Flavor::cdo).value);
        w33 = std::max(w33, norm_pre_schwarzian(build("cor33-family", p), Flavor::cdo).value);
    }
    return {w32 <= 6.600566 + 1e-6 && w33 <= 2.600566 + 1e-6, "cor32 " + fmt(w32) + ", cor33 " + fmt(w33)};
}

Outcome bloch()
{
    const NormEstimate bounded = bloch_constant(build("bloch-bounded"));
    GridConfig cfg;
    cfg.r_max = 1.0 - 1e-4;
    const NormEstimate unbounded = bloch_constant(build("bloch-unbounded"), cfg);
    return {std::abs(bounded.value - 4.0) <= 1e-3 && unbounded.value > 100.0 && unbounded.boundary_limit,
            "bounded " + fmt(bounded.value) + ", unbounded " + fmt(unbounded.value) +
                (unbounded.boundary_limit ? " (boundary limit)" : " (interior)")};
}

} // namespace

int main()
{
    struct Criterion {
        const char* name;
        double max_seconds;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {"gap constant", 5.0, gap_constant},
        {"gap bound universality", 5.0, gap_universality},
        {"pre-Schwarzian extremal curve", 0.0, pre_schwarzian_curve},
        {"Schwarzian bound", 0.0, schwarzian_bound},
        {"coefficient bound", 0.0, coefficient_bound},
        {"distortion of g'", 0.0, distortion},
        {"identity suite", 30.0, identities},
        {"square-root family bounds", 0.0, corollaries},
        {"Bloch constants", 0.0, bloch},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const auto& c = criteria[k];
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.max_seconds > 0.0 && secs >= c.max_seconds) {
            o.passed = false;
            o.detail += ", over the " + fmt(c.max_seconds) + " s budget";
        }
        failed += o.passed ? 0 : 1;
        std::printf("%s  %zu  %-30s %s (%.2f s)\n", o.passed ? "PASS" : "FAIL", k + 1, c.name, o.detail.c_str(), secs);
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
