// Prints the sampled pre-Schwarzian and Schwarzian norms of the two
// extremal families next to their closed forms, then the first few b_n.

#include <harmonorm/harmonorm.hpp>

#include <cstdio>

using namespace harmonorm;

int main()
{
    std::printf("%6s  %14s  %14s\n", "t", "M_t", "sampled ||P||");
    for (double t : {0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99}) {
        const HarmonicMap f = build("thm42-extremal", {{"t", t}});
        std::printf("%6.2f  %14.10f  %14.10f\n", t, reference("thm42-extremal", "M", {{"t", t}}),
                    norm_pre_schwarzian(f, Flavor::hm).value);
    }

    std::printf("\n%6s  %14s  %14s\n", "t", "S(0) = 2+t^2", "sampled ||S||");
    for (double t : {0.0, 0.5, 0.9, 0.99}) {
        const HarmonicMap f = build("thm43-extremal", {{"t", t}});
        std::printf("%6.2f  %14.10f  %14.10f\n", t, schwarzian_hm(f, 0.0).real(), norm_schwarzian(f, Flavor::hm).value);
    }

    const double gap = norm_pre_schwarzian(build("cubic-cdo"), Flavor::cdo).value;
    std::printf("\ncubic map, CDO pre-Schwarzian norm: %.12f\n", gap);

    std::printf("\nb_n for gamma = 0.5:");
    for (const cplx& b : g_coefficients(build("coeff-family", {{"gamma", 0.5}}), 8)) {
        std::printf(" %.6f", b.real());
    }
    std::printf("\n");
}
