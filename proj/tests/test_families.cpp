#include <harmonorm/families.hpp>
#include <harmonorm/norm_engine.hpp>

#include "support/oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <set>

using namespace harmonorm;
using Catch::Approx;

namespace {

ParamSet sample_params(const FamilySpec& fam, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ParamSet p;
    for (const auto& spec : fam.params) {
        if (spec.is_complex) {
            p[spec.name] = oracle::random_in_disk(rng, 0.99 * spec.hi);
        } else if (std::isfinite(spec.lo)) {
            p[spec.name] = spec.lo + (spec.hi - spec.lo) * 0.999 * u(rng);
        } else {
            p[spec.name] = 2.0 * std::numbers::pi * u(rng);
        }
    }
    return p;
}

} // namespace

TEST_CASE("registry contents", "[families]")
{
    std::set<std::string> names;
    for (const auto& f : registry()) {
        names.insert(f.name);
    }
    for (const char* n : {"cubic-cdo", "thm42-extremal", "thm43-extremal", "coeff-family", "bloch-unbounded",
                          "bloch-bounded", "cor32-family", "cor33-family", "cor34-family"}) {
        CHECK(names.count(n) == 1);
    }
    CHECK_THROWS_AS(family("no-such-family"), ParamError);
    CHECK_THROWS_AS(build("no-such-family"), ParamError);
}

TEST_CASE("parameter validation", "[families]")
{
    CHECK_THROWS_AS(build("thm42-extremal", {{"t", 0.4}}), ParamError);
    CHECK_THROWS_AS(build("thm42-extremal", {{"t", 1.0}}), ParamError);
    CHECK_NOTHROW(build("thm42-extremal", {{"t", 0.5}}));
    CHECK_THROWS_AS(build("thm42-extremal", {{"t", cplx{0.6, 0.1}}}), ParamError);
    CHECK_THROWS_AS(build("thm42-extremal", {{"gamma", 0.6}}), ParamError);
    CHECK_THROWS_AS(build("coeff-family", {{"gamma", -0.1}}), ParamError);
    CHECK_THROWS_AS(build("cor32-family", {{"a", cplx{0.8, 0.8}}}), ParamError);
    CHECK_THROWS_AS(build("thm43-extremal", {{"t", std::nan("")}}), ParamError);
    CHECK_NOTHROW(build("cor32-family", {{"a", cplx{0.5, -0.5}}, {"theta", 2.0}}));
}

TEST_CASE("builders produce valid maps", "[families][property]")
{
    std::mt19937_64 rng(42);
    for (const auto& fam : registry()) {
        for (int i = 0; i < 10; ++i) {
            const ParamSet p = sample_params(fam, rng);
            const HarmonicMap f = fam.builder(resolve_params(fam, p));
            INFO(fam.name);
            CHECK(f.normalization_defect() < 1e-14);
            if (f.has_q()) {
                CHECK(f.q_residual() < 1e-10);
            }
            std::mt19937_64 pts(i);
            for (int k = 0; k < 50; ++k) {
                const cplx z = oracle::random_in_disk(pts, 0.99);
                CHECK(std::abs(dilatation(f, z)) < 1.0);
                CHECK(jacobian(f, z) > 0.0);
            }
        }
    }
}

TEST_CASE("convex-part / automorphism class membership", "[families][property]")
{
    std::mt19937_64 rng(43);
    for (const auto& fam : registry()) {
        if (!fam.f0_member) {
            continue;
        }
        for (int i = 0; i < 5; ++i) {
            const HarmonicMap f = fam.builder(resolve_params(fam, sample_params(fam, rng)));
            const MembershipEvidence ev = membership_evidence(f);
            INFO(fam.name);
            CHECK(ev.min_re_q > 0.0);
            CHECK(ev.automorphism_residual < 1e-10);
        }
    }
    // Marked non-members really fail one of the two conditions.
    CHECK(membership_evidence(build("cubic-cdo")).automorphism_residual > 1e-3);
    CHECK(membership_evidence(build("cor33-family")).min_re_q < 0.0);
}

TEST_CASE("Q_h ranges of the square-root families", "[families][property]")
{
    std::mt19937_64 rng(44);
    for (int i = 0; i < 2000; ++i) {
        const cplx z = oracle::random_in_disk(rng, 1.0 - 1e-6);
        CHECK(q_functional(build("cor32-family").h(), z).real() > -0.5);
        CHECK(q_functional(build("cor33-family").h(), z).real() < 1.5);
        const double q34 = q_functional(build("cor34-family").h(), z).real();
        CHECK(q34 > 0.0);
        CHECK(q34 < 4.0 / 3.0);
    }
}

TEST_CASE("pre-Schwarzian extremal family", "[families]")
{
    const HarmonicMap f = build("thm42-extremal", {{"t", 0.5}});
    CHECK(dilatation(f, 0.0) == cplx{-0.5});
    CHECK(reference("thm42-extremal", "M", {{"t", 0.5}}) == Approx(3.101021).margin(1e-6));
    CHECK(reference("thm42-extremal", "M") == Approx(3.1010205144336442).epsilon(1e-15));
    CHECK(reference("thm42-extremal", "r0", {{"t", 0.5}}) == Approx((1.0 - std::sqrt(0.375)) / 0.5));
    CHECK(reference("thm42-extremal", "psi", {{"t", 0.5}, {"r", 0.0}}) == Approx(2.5));
    CHECK_THROWS_AS(reference("thm42-extremal", "psi", {{"t", 0.5}}), ParamError);

    // Closed form near t = 1: increasing toward 5.
    const double m999 = reference("thm42-extremal", "M", {{"t", 0.999}});
    CHECK(m999 == Approx(4.876416937260964).epsilon(1e-13));
    CHECK(m999 < 5.0);
    CHECK(reference("thm42-extremal", "M", {{"t", 0.999999}}) > m999);

    SECTION("real-axis sup matches M_t")
    {
        for (double t : {0.5, 0.7, 0.9}) {
            const HarmonicMap ft = build("thm42-extremal", {{"t", t}});
            const NormEstimate e = radial_supremum(pre_schwarzian_density(ft, Flavor::hm), 0.0, 1.0 - 1e-6, 1e-6);
            CHECK(e.value == Approx(reference("thm42-extremal", "M", {{"t", t}})).margin(1e-5));
            // The critical point is a zero of psi'.
            const double r0 = reference("thm42-extremal", "r0", {{"t", t}});
            const double h = 1e-6;
            CHECK(std::abs(family_math::psi(t, r0 + h) - family_math::psi(t, r0 - h)) / (2 * h) < 1e-6);
        }
    }
}

TEST_CASE("Schwarzian extremal family", "[families]")
{
    CHECK(reference("thm43-extremal", "S0", {{"t", 0.0}}) == 2.0);
    CHECK(std::abs(schwarzian_hm(build("thm43-extremal", {{"t", 0.0}}), 0.0) - 2.0) < 1e-12);
    // eps_0(z) = z^2: the quotient eps/z is the identity at t = 0.
    const AnalyticFn q0 = schwarzian_extremal_quotient(0.0);
    for (cplx z : {cplx{0.3, 0.1}, cplx{-0.7, 0.2}}) {
        CHECK(std::abs(q0(z) - z) < 1e-15);
    }
}

TEST_CASE("coefficient family references", "[families]")
{
    CHECK(reference("coeff-family", "b_n", {{"gamma", 0.0}, {"n", 2.0}}) == Approx(0.5));
    CHECK(reference("coeff-family", "b_n", {{"gamma", 0.5}, {"n", 2.0}}) == Approx(0.875));
    CHECK(reference("coeff-family", "b_n", {{"gamma", 0.5}, {"n", 1.0}}) == Approx(0.5));
    CHECK_THROWS_AS(reference("coeff-family", "b_n", {{"gamma", 0.5}, {"n", 1.5}}), ParamError);
    for (int n = 1; n <= 10; ++n) {
        CHECK(reference("coeff-family", "b_n", {{"gamma", 0.999}, {"n", double(n)}}) > 0.99);
    }
    // g'(r) and g'(-r) against the pointwise product omega h'.
    const double g = 0.4;
    const HarmonicMap f = build("coeff-family", {{"gamma", g}});
    for (double r : {0.1, 0.4, 0.8}) {
        const double pos = (dilatation(f, r) * f.h().derivatives(r).h1).real();
        const double neg = (dilatation(f, -r) * f.h().derivatives(-r).h1).real();
        CHECK(reference("coeff-family", "gprime_pos", {{"gamma", g}, {"r", r}}) == Approx(pos).epsilon(1e-14));
        CHECK(reference("coeff-family", "gprime_neg", {{"gamma", g}, {"r", r}}) == Approx(neg).epsilon(1e-13));
    }
}

TEST_CASE("other references", "[families]")
{
    CHECK(reference("cubic-cdo", "gap") == Approx(0.600566).margin(1e-6));
    CHECK(reference("cubic-cdo", "r0") == Approx(std::sqrt(std::sqrt(5.0) - 2.0)));
    CHECK(reference("bloch-bounded", "bloch") == 4.0);
    CHECK(reference("cor32-family", "bound") == Approx(6.600566).margin(1e-6));
    CHECK(reference("cor33-family", "bound") == Approx(2.600566).margin(1e-6));
    const double r = 0.9;
    const HarmonicMap f = build("bloch-unbounded");
    CHECK(reference("bloch-unbounded", "radial", {{"r", r}}) == Approx(bloch_density(f)(r)).epsilon(1e-13));
    CHECK_THROWS_AS(reference("cubic-cdo", "nope"), KeyError);
    CHECK_THROWS_AS(reference("bloch-bounded", "bloch", {{"x", 1.0}}), ParamError);
}
