#pragma once

#include "harmonorm/harmonic_map.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace harmonorm {

enum class Flavor { analytic, hm, cdo };

/// Sampling grid for disk suprema. Circles sit at radii r_i with 1 - r_i
/// log-spaced from 1 down to 1 - r_max over `n_radii` equal steps, so the
/// grid has n_radii + 1 circles and doubling n_radii nests the old grid.
struct GridConfig {
    int n_theta = 256;
    int n_radii = 200;
    double r_max = 1.0 - 1e-6;
    bool refine = true;
    double refine_tol = 1e-9;
    int refine_starts = 5;
    int refine_max_iter = 2000;
    unsigned threads = 0;  // 0: hardware concurrency

    std::vector<double> radii() const
    {
        if (n_radii < 1 || !(r_max > 0.0) || !(r_max < 1.0)) {
            throw ParamError("grid needs n_radii >= 1 and 0 < r_max < 1");
        }
        std::vector<double> r(n_radii + 1);
        const double floor_log = std::log(1.0 - r_max);
        for (int i = 0; i <= n_radii; ++i) {
            r[i] = -std::expm1(floor_log * i / n_radii);
        }
        r.back() = r_max;
        return r;
    }
};

/// Sampled lower bound of a disk supremum.
struct NormEstimate {
    double value = 0.0;
    cplx argmax{};
    bool boundary_limit = false;
    std::int64_t evaluations = 0;
};

namespace detail {

struct Sample {
    double value;
    double r;
    double theta;
};

// Larger value wins; ties go to the smaller radius, then the smaller angle.
inline bool better(const Sample& a, const Sample& b)
{
    if (a.value != b.value) {
        return a.value > b.value;
    }
    if (a.r != b.r) {
        return a.r < b.r;
    }
    return a.theta < b.theta;
}

// Point for signed radius r and unwrapped angle theta.
inline cplx from_polar(double r, double theta) { return r * cplx{std::cos(theta), std::sin(theta)}; }

// Reflect the radial coordinate back into [-r_max, r_max]; a negative radius
// is the antipodal ray, so the simplex never sees a coordinate seam.
inline double reflect_radius(double r, double r_max)
{
    if (r > r_max) {
        r = 2.0 * r_max - r;
    } else if (r < -r_max) {
        r = -2.0 * r_max - r;
    }
    return std::clamp(r, -r_max, r_max);
}

// Canonical (r >= 0, theta in [0, 2 pi)) form of a signed polar sample.
inline Sample canonical(Sample s)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    if (s.r < 0.0) {
        s.r = -s.r;
        s.theta += std::numbers::pi;
    }
    s.theta = std::fmod(s.theta, two_pi);
    if (s.theta < 0.0) {
        s.theta += two_pi;
    }
    if (s.theta >= two_pi) {
        s.theta = 0.0;
    }
    return s;
}

/// Nelder-Mead maximisation in (r, theta) starting from a simplex spanned by
/// `start`, `start + (dr, 0)`, `start + (0, dtheta)`.
template <class Objective>
Sample nelder_mead(Objective&& objective, Sample start, double dr, double dtheta, const GridConfig& cfg,
                   std::int64_t& evaluations)
{
    using Point = std::array<double, 2>;
    struct Vertex {
        Point p;
        double f;  // negated objective: minimised
    };
    const auto eval = [&](Point p) {
        p[0] = reflect_radius(p[0], cfg.r_max);
        ++evaluations;
        return Vertex{p, -objective(from_polar(p[0], p[1]))};
    };

    std::array<Vertex, 3> s{Vertex{{start.r, start.theta}, -start.value},
                            eval({start.r + dr, start.theta}), eval({start.r, start.theta + dtheta})};
    const auto by_f = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };

    for (int iter = 0; iter < cfg.refine_max_iter; ++iter) {
        std::sort(s.begin(), s.end(), by_f);
        double size = 0.0;
        for (int k = 1; k < 3; ++k) {
            size = std::max(size, std::hypot(s[k].p[0] - s[0].p[0], s[k].p[1] - s[0].p[1]));
        }
        if (size < cfg.refine_tol) {
            break;
        }
        const Point c{(s[0].p[0] + s[1].p[0]) / 2.0, (s[0].p[1] + s[1].p[1]) / 2.0};
        const auto along = [&](double t) {
            return Point{c[0] + t * (s[2].p[0] - c[0]), c[1] + t * (s[2].p[1] - c[1])};
        };
        const Vertex refl = eval(along(-1.0));
        if (refl.f < s[0].f) {
            const Vertex exp = eval(along(-2.0));
            s[2] = exp.f < refl.f ? exp : refl;
        } else if (refl.f < s[1].f) {
            s[2] = refl;
        } else {
            const Vertex con = refl.f < s[2].f ? eval(along(-0.5)) : eval(along(0.5));
            if (con.f < std::min(refl.f, s[2].f)) {
                s[2] = con;
            } else {
                for (int k = 1; k < 3; ++k) {
                    s[k] = eval({(s[0].p[0] + s[k].p[0]) / 2.0, (s[0].p[1] + s[k].p[1]) / 2.0});
                }
            }
        }
    }
    std::sort(s.begin(), s.end(), by_f);
    return canonical({-s[0].f, s[0].p[0], s[0].p[1]});
}

/// Maximise theta -> objective(r e^{i theta}) on [lo, hi]: a 17-point scan,
/// then golden sections around the best scan point.
template <class Objective>
Sample angular_max(Objective&& objective, double r, double lo, double hi, std::int64_t& evaluations)
{
    const auto at = [&](double th) {
        ++evaluations;
        return objective(from_polar(r, th));
    };
    constexpr int n = 16;
    const double h = (hi - lo) / n;
    Sample best{-1.0, r, lo};
    for (int k = 0; k <= n; ++k) {
        const double th = lo + k * h;
        const double v = at(th);
        if (v > best.value) {
            best = {v, r, th};
        }
    }
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = best.theta - h;
    double b = best.theta + h;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = at(c);
    double fd = at(d);
    const double tol = std::max(1e-15, 1e-9 * (1.0 - r));
    for (int iter = 0; iter < 200 && b - a > tol; ++iter) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = at(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = at(d);
        }
    }
    if (fc > best.value) {
        best = {fc, r, c};
    }
    if (fd > best.value) {
        best = {fd, r, d};
    }
    return best;
}

/// Follow a ridge toward the boundary. Near a boundary singularity the
/// weighted functionals are often close to functions of angle / (1 - r), so
/// the supremum sits along a ray inside a wedge that narrows like 1 - r;
/// a fixed simplex cannot track it. Halve 1 - r at each step, re-maximise
/// in angle inside a window scaled to 1 - r, stop when the value drops.
template <class Objective>
Sample ridge_climb(Objective&& objective, Sample s, double r_max, std::int64_t& evaluations)
{
    const double floor_gap = 1.0 - r_max;
    while (s.r < r_max) {
        const double gap = std::max((1.0 - s.r) / 2.0, floor_gap);
        const double r = gap == floor_gap ? r_max : 1.0 - gap;
        const double w = std::min(8.0 * gap, std::numbers::pi);
        const Sample next = angular_max(objective, r, s.theta - w, s.theta + w, evaluations);
        if (!(next.value >= s.value)) {
            break;
        }
        s = next;
    }
    // The simplex may already have stopped on the outer circle with an
    // angle that is only good to refine_tol; polish it.
    const double w = std::min(8.0 * (1.0 - s.r), std::numbers::pi);
    const Sample polished = angular_max(objective, s.r, s.theta - w, s.theta + w, evaluations);
    if (polished.value > s.value) {
        s = polished;
    }
    return canonical(s);
}

} // namespace detail

/// Sampled supremum of a nonnegative functional over |z| <= cfg.r_max.
///
/// The grid is evaluated circle by circle (in parallel when threads allow);
/// results are reduced after collection with the deterministic tie-break, so
/// the outcome does not depend on scheduling. With `refine`, Nelder-Mead runs
/// from the best `refine_starts` grid points and from the best grid radius
/// on each ray in `seed_angles` (directions of known boundary
/// singularities, whose ridges can be narrower than the angular spacing),
/// followed by a ridge climb toward r_max. The returned value is always
/// the functional evaluated at the returned argmax. Library errors escape
/// with the offending point attached.
template <class Functional>
NormEstimate estimate_supremum(Functional&& functional, const GridConfig& cfg = {},
                               const std::vector<double>& seed_angles = {})
{
    if (cfg.n_theta < 1) {
        throw ParamError("grid needs n_theta >= 1");
    }
    const std::vector<double> radii = cfg.radii();
    const double dtheta = 2.0 * std::numbers::pi / cfg.n_theta;
    const auto angle = [&](int j) { return dtheta * j; };

    const auto eval_at = [&](cplx z) {
        try {
            return static_cast<double>(functional(z));
        } catch (Error& e) {
            e.set_point(z);
            throw;
        }
    };

    const int n_circles = static_cast<int>(radii.size());
    std::vector<std::vector<detail::Sample>> circles(n_circles);
    std::vector<std::exception_ptr> failures(n_circles);
    const auto run_circle = [&](int i) {
        try {
            const int n = radii[i] == 0.0 ? 1 : cfg.n_theta;
            auto& row = circles[i];
            row.reserve(n);
            for (int j = 0; j < n; ++j) {
                row.push_back({eval_at(std::polar(radii[i], angle(j))), radii[i], angle(j)});
            }
        } catch (...) {
            failures[i] = std::current_exception();
        }
    };

    unsigned workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, n_circles);
    if (workers <= 1) {
        for (int i = 0; i < n_circles; ++i) {
            run_circle(i);
        }
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (int i = static_cast<int>(w); i < n_circles; i += static_cast<int>(workers)) {
                    run_circle(i);
                }
            });
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    for (const auto& f : failures) {
        if (f) {
            std::rethrow_exception(f);
        }
    }

    std::vector<detail::Sample> all;
    for (const auto& row : circles) {
        all.insert(all.end(), row.begin(), row.end());
    }
    NormEstimate est;
    est.evaluations = static_cast<std::int64_t>(all.size());

    const int starts = std::min<int>(cfg.refine ? cfg.refine_starts : 1, static_cast<int>(all.size()));
    std::partial_sort(all.begin(), all.begin() + starts, all.end(), detail::better);
    detail::Sample best = all.front();

    if (cfg.refine) {
        std::vector<detail::Sample> seeds(all.begin(), all.begin() + starts);
        for (double a : seed_angles) {
            detail::Sample ray{-1.0, 0.0, a};
            for (std::size_t i = 1; i < radii.size(); ++i) {
                const double v = eval_at(std::polar(radii[i], a));
                ++est.evaluations;
                if (v > ray.value) {
                    ray = {v, radii[i], a};
                }
            }
            seeds.push_back(detail::canonical(ray));
        }
        for (const detail::Sample& s : seeds) {
            if (detail::better(s, best)) {
                best = s;
            }
            const auto it = std::lower_bound(radii.begin(), radii.end(), s.r);
            const std::size_t idx = static_cast<std::size_t>(it - radii.begin());
            double dr = idx + 1 < radii.size() ? radii[idx + 1] - radii[idx] : radii[idx] - radii[idx - 1];
            if (idx + 1 == radii.size()) {
                dr = -dr;
            }
            detail::Sample refined = detail::nelder_mead(eval_at, s, dr, dtheta, cfg, est.evaluations);
            refined = detail::ridge_climb(eval_at, refined, cfg.r_max, est.evaluations);
            if (detail::better(refined, best)) {
                best = refined;
            }
        }
    }

    est.argmax = std::polar(best.r, best.theta);
    est.value = eval_at(est.argmax);
    ++est.evaluations;
    const double last_step = radii.size() > 1 ? radii.back() - radii[radii.size() - 2] : 0.0;
    est.boundary_limit = cfg.r_max - std::abs(est.argmax) <= last_step;
    return est;
}

/// Brute-force supremum along the ray arg z = theta, r in [0, r_max], on a
/// uniform step.
template <class Functional>
NormEstimate radial_supremum(Functional&& functional, double theta, double r_max, double step)
{
    if (!(step > 0.0) || !(r_max < 1.0)) {
        throw ParamError("radial sweep needs step > 0 and r_max < 1");
    }
    NormEstimate est;
    detail::Sample best{-1.0, 0.0, theta};
    const auto n = static_cast<std::int64_t>(std::floor(r_max / step));
    for (std::int64_t i = 0; i <= n + 1; ++i) {
        const double r = i <= n ? static_cast<double>(i) * step : r_max;
        cplx z = std::polar(r, theta);
        double v = 0.0;
        try {
            v = functional(z);
        } catch (Error& e) {
            e.set_point(z);
            throw;
        }
        ++est.evaluations;
        if (v > best.value) {
            best = {v, r, theta};
        }
    }
    est.argmax = std::polar(best.r, theta);
    est.value = functional(est.argmax);
    est.boundary_limit = r_max - best.r <= step;
    return est;
}

// ---------------------------------------------------------------------------
// Weighted functionals
// ---------------------------------------------------------------------------

inline std::function<double(cplx)> pre_schwarzian_density(const HarmonicMap& f, Flavor flavor)
{
    if (flavor == Flavor::cdo) {
        detail::require_q(f);
    }
    return [f, flavor](cplx z) {
        const double w = 1.0 - std::norm(z);
        switch (flavor) {
        case Flavor::analytic:
            return w * std::abs(pre_schwarzian_analytic(f.h(), z));
        case Flavor::hm:
            return w * std::abs(pre_schwarzian_hm(f, z));
        case Flavor::cdo:
            return w * std::abs(pre_schwarzian_cdo(f, z));
        }
        return 0.0;
    };
}

inline std::function<double(cplx)> schwarzian_density(const HarmonicMap& f, Flavor flavor)
{
    if (flavor == Flavor::cdo) {
        detail::require_q(f);
    }
    return [f, flavor](cplx z) {
        const double w = 1.0 - std::norm(z);
        switch (flavor) {
        case Flavor::analytic:
            return w * w * std::abs(schwarzian_analytic(f.h(), z));
        case Flavor::hm:
            return w * w * std::abs(schwarzian_hm(f, z));
        case Flavor::cdo:
            return w * w * std::abs(schwarzian_cdo(f, z));
        }
        return 0.0;
    };
}

/// (1 - |z|^2)(|h'| + |g'|) = (1 - |z|^2)|h'|(1 + |omega|)
inline std::function<double(cplx)> bloch_density(const HarmonicMap& f)
{
    return [f](cplx z) {
        return detail::at_point(z, [&] {
            const cplx h1 = detail::checked_derivatives(f.h(), z).h1;
            const cplx w = detail::checked_dilatation(f.omega(), z).v;
            return (1.0 - std::norm(z)) * std::abs(h1) * (1.0 + std::abs(w));
        });
    };
}

/// Directions of the closed-form singularities of h, omega and q lying
/// outside the disk but within distance 3 of it, sorted and deduplicated.
inline std::vector<double> boundary_directions(const HarmonicMap& f)
{
    std::vector<cplx> pts = known_singularities(f.h().base());
    const auto append = [&](const AnalyticFn& g) {
        const auto more = known_singularities(g);
        pts.insert(pts.end(), more.begin(), more.end());
    };
    if (f.h().factor()) {
        append(*f.h().factor());
    }
    append(f.omega());
    if (f.q()) {
        append(*f.q());
    }
    std::vector<double> angles;
    for (cplx p : pts) {
        const double m = std::abs(p);
        if (std::isfinite(m) && m >= 1.0 - 1e-12 && m <= 4.0) {
            angles.push_back(detail::canonical({0.0, 1.0, std::arg(p)}).theta);
        }
    }
    std::sort(angles.begin(), angles.end());
    angles.erase(std::unique(angles.begin(), angles.end(), [](double a, double b) { return b - a < 1e-12; }),
                 angles.end());
    return angles;
}

/// sup (1 - |z|^2) |P(z)|
inline NormEstimate norm_pre_schwarzian(const HarmonicMap& f, Flavor flavor, const GridConfig& cfg = {})
{
    return estimate_supremum(pre_schwarzian_density(f, flavor), cfg, boundary_directions(f));
}

/// sup (1 - |z|^2)^2 |S(z)|
inline NormEstimate norm_schwarzian(const HarmonicMap& f, Flavor flavor, const GridConfig& cfg = {})
{
    return estimate_supremum(schwarzian_density(f, flavor), cfg, boundary_directions(f));
}

/// Sampled Bloch constant. A boundary_limit flag on the result is the
/// diagnostic for an unbounded constant.
inline NormEstimate bloch_constant(const HarmonicMap& f, const GridConfig& cfg = {})
{
    return estimate_supremum(bloch_density(f), cfg, boundary_directions(f));
}

} // namespace harmonorm
