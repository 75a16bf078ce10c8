#include <harmonorm/analytic_fn.hpp>
#include <harmonorm/mobius.hpp>

#include "support/oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace harmonorm;
using Catch::Approx;

namespace {

bool close(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol; }

// z/(1-z)
AnalyticFn koebe_half() { return identity() * reciprocal_linear(1.0, -1.0); }

} // namespace

TEST_CASE("identity jet", "[jet]")
{
    const Jet3 j = jet_eval(identity(), {0.3, 0.1});
    CHECK(j.v == cplx{0.3, 0.1});
    CHECK(j.d1 == 1.0);
    CHECK(j.d2 == 0.0);
    CHECK(j.d3 == 0.0);
}

TEST_CASE("z/(1-z) jet at the origin", "[jet]")
{
    // h' = (1-z)^-2, h'' = 2(1-z)^-3, h''' = 6(1-z)^-4
    const Jet3 j = jet_eval(koebe_half(), 0.0);
    CHECK(close(j.v, 0.0, 1e-15));
    CHECK(close(j.d1, 1.0, 1e-15));
    CHECK(close(j.d2, 2.0, 1e-15));
    CHECK(close(j.d3, 6.0, 1e-15));

    const Jet3 q = jet_eval(identity() / (constant(1.0) - identity()), 0.0);
    CHECK(close(q.d3, 6.0, 1e-15));
}

TEST_CASE("Mobius jet matches finite differences", "[jet][mobius]")
{
    const MobiusParams p(0.5, 0.0);
    const Jet3 j = jet_eval(mobius(p), 0.0);
    CHECK(close(j.v, -0.5, 1e-15));
    CHECK(close(j.d1, 0.75, 1e-15));
    CHECK(close(j.d2, 0.75, 1e-15));
    CHECK(close(j.d3, 1.125, 1e-15));

    const oracle::Scalar f = [](cplx z) { return (z - 0.5) / (1.0 - 0.5 * z); };
    CHECK(close(j.d1, oracle::d1(f, 0.0), 1e-6));
    CHECK(close(j.d2, oracle::d2(f, 0.0), 1e-6));
    CHECK(close(j.d3, oracle::d3(f, 0.0), 1e-5));
}

TEST_CASE("mobius builder", "[mobius]")
{
    SECTION("a = 0, theta = 0 is the identity")
    {
        for (cplx z : {cplx{0.0}, cplx{0.4, -0.2}, cplx{-0.7, 0.1}}) {
            const Jet3 j = jet_eval(mobius(MobiusParams(0.0, 0.0)), z);
            CHECK(close(j.v, z, 1e-15));
            CHECK(close(j.d1, 1.0, 1e-15));
            CHECK(j.d2 == 0.0);
            CHECK(j.d3 == 0.0);
        }
    }
    SECTION("alpha form derivatives at 0")
    {
        // (z + alpha)/(1 + conj(alpha) z): w'(0) = 1 - |alpha|^2, w''(0) = -2 conj(alpha)(1 - |alpha|^2)
        const Jet3 j = jet_eval(mobius(MobiusParams::from_alpha(0.5, 0.0)), 0.0);
        CHECK(close(j.d1, 0.75, 1e-15));
        CHECK(close(j.d2, -0.75, 1e-15));

        const cplx alpha{0.2, -0.4};
        const double theta = 0.7;
        const Jet3 k = jet_eval(mobius(MobiusParams::from_alpha(alpha, theta)), 0.0);
        const cplx rot = std::polar(1.0, theta);
        CHECK(close(k.d1, rot * (1.0 - std::norm(alpha)), 1e-15));
        CHECK(close(k.d2, -2.0 * std::conj(alpha) * (1.0 - std::norm(alpha)) * rot, 1e-15));
    }
    SECTION("|a| >= 1 is rejected")
    {
        CHECK_THROWS_AS(MobiusParams(1.0, 0.0), ConstructionError);
        CHECK_THROWS_AS(MobiusParams(cplx{0.8, 0.8}, 0.0), ConstructionError);
    }
    SECTION("composition of automorphisms is an automorphism through 3 points")
    {
        std::mt19937_64 rng(7);
        for (int trial = 0; trial < 20; ++trial) {
            const MobiusParams p1(oracle::random_in_disk(rng, 0.9), 6.0 * oracle::random_in_disk(rng, 1.0).real());
            const MobiusParams p2(oracle::random_in_disk(rng, 0.9), 6.0 * oracle::random_in_disk(rng, 1.0).real());
            const AnalyticFn comp = compose(mobius(p1), mobius(p2));
            const std::array<cplx, 3> z{cplx{0.1, 0.0}, cplx{-0.2, 0.3}, cplx{0.0, -0.5}};
            std::array<cplx, 3> w{};
            for (std::size_t k = 0; k < 3; ++k) {
                w[k] = comp(z[k]);
            }
            const LinearFractional fit = fit_linear_fractional(z, w);
            const MobiusParams combined = compose(p1, p2);
            for (int k = 0; k < 10; ++k) {
                const cplx p = oracle::random_in_disk(rng, 0.95);
                CHECK(close(jet_eval(comp, p).v, fit(p), 1e-10));
                CHECK(close(jet_eval(comp, p).v, combined(p), 1e-10));
            }
            CHECK(automorphism_fit_residual(comp) < 1e-10);
        }
    }
}

TEST_CASE("automorphism residual separates automorphisms from other maps", "[mobius]")
{
    CHECK(automorphism_fit_residual(mobius(MobiusParams({0.3, 0.4}, 1.1))) < 1e-12);
    CHECK(automorphism_fit_residual(identity() * identity()) > 1e-3);
    CHECK(automorphism_fit_residual(constant(0.5) * identity()) > 1e-3);
    CHECK(automorphism_fit_residual(constant(0.2)) == std::numeric_limits<double>::infinity());
    // Mobius but not of the disk-preserving shape.
    CHECK(automorphism_fit_residual((identity() - constant(0.5)) / (constant(1.0) - constant(0.2) * identity())) >
          1e-3);
}

TEST_CASE("evaluation errors", "[jet]")
{
    CHECK_THROWS_AS(jet_eval(identity(), 1.0), DomainError);
    CHECK_THROWS_AS(jet_eval(identity(), cplx{0.0, -1.5}), DomainError);
    // Pole of 1/(z - 0.5) inside the disk.
    const AnalyticFn bad = constant(1.0) / (identity() - constant(0.5));
    CHECK_THROWS_AS(jet_eval(bad, 0.5), SingularityError);
    try {
        jet_eval(bad, 0.5);
    } catch (const SingularityError& e) {
        REQUIRE(e.point().has_value());
        CHECK(*e.point() == cplx{0.5});
    }
    CHECK_THROWS_AS(jet_eval(reciprocal_linear(0.5, -1.0), 0.5), SingularityError);
    // Near (but not at) the pole is fine.
    CHECK(jet_eval(bad, 0.5 + 1e-6).finite());
}

TEST_CASE("jet arithmetic agrees with finite differences on random trees", "[jet][property]")
{
    oracle::TreeGenerator gen(20240611);
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        const AnalyticFn f = gen(4);
        const cplx z = oracle::random_in_disk(rng, 0.8);
        const oracle::Scalar value = [&](cplx w) { return f.jet(w).v; };
        const Jet3 j = jet_eval(f, z);
        INFO("trial " << trial << " z = " << z << " jet " << j);
        CHECK(std::abs(j.d1 - oracle::d1(value, z)) < 1e-6 * (1.0 + std::abs(j.d1)));
        CHECK(std::abs(j.d2 - oracle::d2(value, z)) < 1e-4 * (1.0 + std::abs(j.d2)));
        CHECK(std::abs(j.d3 - oracle::d3(value, z)) < 1e-2 * (1.0 + std::abs(j.d3)));
    }
}

TEST_CASE("series_from", "[series]")
{
    SECTION("geometric series")
    {
        const PowerSeries s = series_from(koebe_half(), 4);
        REQUIRE(s.order() == 4);
        const std::array<double, 5> expect{0, 1, 1, 1, 1};
        for (int k = 0; k <= 4; ++k) {
            CHECK(close(s[k], expect[k], 1e-15));
        }
    }
    SECTION("eps_t(z) = z(z + t/2)/(1 + tz/2) at t = 1")
    {
        const AnalyticFn eps = identity() * (identity() + constant(0.5)) / (constant(1.0) + constant(0.5) * identity());
        const PowerSeries s = series_from(eps, 3);
        CHECK(close(s[0], 0.0, 1e-15));
        CHECK(close(s[1], 0.5, 1e-15));
        CHECK(close(s[2], 0.75, 1e-15));
        CHECK(close(s[3], -0.375, 1e-15));
        // Displayed expansion: c1 = t/2, c2 = 1 - t^2/4 for any t.
        for (double t : {0.0, 0.3, 0.9}) {
            const AnalyticFn e = identity() * mobius(MobiusParams(-t / 2.0, 0.0));
            const PowerSeries c = series_from(e, 2);
            CHECK(close(c[1], t / 2.0, 1e-15));
            CHECK(close(c[2], 1.0 - t * t / 4.0, 1e-15));
        }
    }
    SECTION("integrate")
    {
        const PowerSeries s = PowerSeries{1.0, 2.0, 3.0}.integrate();
        CHECK(s == PowerSeries{0.0, 1.0, 1.0, 1.0});
    }
    SECTION("quotient with vanishing divisor constant term")
    {
        CHECK_THROWS_AS(series_from(constant(1.0) / identity(), 5), SingularityError);
        CHECK_THROWS_AS(series_from(reciprocal_linear(0.0, 1.0), 5), SingularityError);
    }
    SECTION("real exponent power")
    {
        // (1 - z)^(-1/2) = sum binom(2k, k) (z/4)^k
        const PowerSeries s = series_from(power(1.0, 0.5), 6);
        double binom = 1.0;
        for (int k = 0; k <= 6; ++k) {
            CHECK(close(s[k], binom / std::pow(4.0, k), 1e-15));
            binom = binom * (2 * k + 1) * (2 * k + 2) / ((k + 1.0) * (k + 1.0));
        }
    }
}

TEST_CASE("truncated series reproduces the function near the origin", "[series][property]")
{
    oracle::TreeGenerator gen(5150);
    std::mt19937_64 rng(3);
    const int order = 10;
    for (int trial = 0; trial < 100; ++trial) {
        const AnalyticFn f = gen(3);
        const PowerSeries s = series_from(f, order);
        const PowerSeries wide = series_from(f, 3 * order);
        double max_coeff = 0.0;
        for (const cplx& c : wide.coeffs()) {
            max_coeff = std::max(max_coeff, std::abs(c));
        }
        const cplx z = oracle::random_in_disk(rng, 0.1);
        const double r = std::abs(z);
        const double tail = 2.0 * std::pow(r, order + 1) / (1.0 - r) * max_coeff;
        const cplx exact = jet_eval(f, z).v;
        INFO("trial " << trial);
        CHECK(std::abs(s.evaluate(z).v - exact) <= tail + 1e-14 * (1.0 + std::abs(exact)));
    }
}

TEST_CASE("series centred away from the origin", "[series]")
{
    // Taylor coefficients about w0 match the jet: c1 = f'(w0), c2 = f''(w0)/2, c3 = f'''(w0)/6.
    oracle::TreeGenerator gen(77);
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 50; ++trial) {
        const AnalyticFn f = gen(3);
        const cplx w0 = oracle::random_in_disk(rng, 0.6);
        const PowerSeries s = f.taylor(w0, 3);
        const Jet3 j = jet_eval(f, w0);
        const double scale = 1.0 + std::abs(j.v) + std::abs(j.d1) + std::abs(j.d2) + std::abs(j.d3);
        CHECK(std::abs(s[0] - j.v) < 1e-12 * scale);
        CHECK(std::abs(s[1] - j.d1) < 1e-12 * scale);
        CHECK(std::abs(s[2] - j.d2 / 2.0) < 1e-12 * scale);
        CHECK(std::abs(s[3] - j.d3 / 6.0) < 1e-12 * scale);
    }
}

TEST_CASE("power series multiplication is commutative and associative", "[series][property]")
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> small(-9, 9);
    const auto integer_series = [&](int order) {
        std::vector<cplx> c(order + 1);
        for (auto& x : c) {
            x = {double(small(rng)), double(small(rng))};
        }
        return PowerSeries(c);
    };
    const auto real_series = [&](int order) {
        std::vector<cplx> c(order + 1);
        for (auto& x : c) {
            x = oracle::random_in_disk(rng, 1.0);
        }
        return PowerSeries(c);
    };
    for (int trial = 0; trial < 50; ++trial) {
        // Gaussian-integer coefficients: every partial sum is exact.
        const auto a = integer_series(12);
        const auto b = integer_series(12);
        const auto c = integer_series(12);
        CHECK(a * b == b * a);
        CHECK((a * b) * c == a * (b * c));

        const auto x = real_series(20);
        const auto y = real_series(20);
        CHECK(x * y == y * x);
    }
}

TEST_CASE("power series division and composition", "[series]")
{
    const PowerSeries a{1.0, 2.0, -1.0, 0.5};
    const PowerSeries b{2.0, -1.0, 0.25, 3.0};
    const PowerSeries q = a / b;
    const PowerSeries back = q * b;
    for (int k = 0; k <= 3; ++k) {
        CHECK(close(back[k], a[k], 1e-14));
    }
    // 1/(1 - u) composed with u + u^2 is sum (u + u^2)^k.
    const PowerSeries outer = series_from(reciprocal_linear(1.0, -1.0), 4);
    const PowerSeries inner{0.0, 1.0, 1.0, 0.0, 0.0};
    const PowerSeries c = PowerSeries::compose(outer, inner);
    const std::array<double, 5> expect{1, 1, 2, 3, 5};  // Fibonacci
    for (int k = 0; k <= 4; ++k) {
        CHECK(close(c[k], expect[k], 1e-14));
    }
    CHECK_THROWS_AS(PowerSeries::compose(outer, PowerSeries{1.0, 1.0}), SeriesError);
}
