#pragma once

#include "harmonorm/errors.hpp"
#include "harmonorm/jet.hpp"

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace harmonorm {

/// Truncated Taylor series c_0 + c_1 u + ... + c_N u^N over complex doubles.
/// Binary operations truncate to the smaller order of the two operands.
class PowerSeries {
public:
    PowerSeries() : coeffs_(1, cplx{}) {}
    explicit PowerSeries(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs))
    {
        if (coeffs_.empty()) {
            coeffs_.push_back(cplx{});
        }
    }
    PowerSeries(std::initializer_list<cplx> coeffs) : PowerSeries(std::vector<cplx>(coeffs)) {}

    static PowerSeries zero(int order) { return PowerSeries(std::vector<cplx>(order + 1, cplx{})); }
    static PowerSeries constant(cplx c, int order)
    {
        auto s = zero(order);
        s.coeffs_[0] = c;
        return s;
    }

    int order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<cplx>& coeffs() const noexcept { return coeffs_; }
    cplx operator[](std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : cplx{}; }
    cplx& operator[](std::size_t k) { return coeffs_.at(k); }

    PowerSeries truncated(int order) const
    {
        std::vector<cplx> c(order + 1, cplx{});
        std::copy_n(coeffs_.begin(), std::min<std::size_t>(coeffs_.size(), c.size()), c.begin());
        return PowerSeries(std::move(c));
    }

    friend PowerSeries operator+(const PowerSeries& a, const PowerSeries& b)
    {
        const int n = std::min(a.order(), b.order());
        auto r = zero(n);
        for (int k = 0; k <= n; ++k) {
            r.coeffs_[k] = a.coeffs_[k] + b.coeffs_[k];
        }
        return r;
    }

    friend PowerSeries operator-(const PowerSeries& a, const PowerSeries& b)
    {
        const int n = std::min(a.order(), b.order());
        auto r = zero(n);
        for (int k = 0; k <= n; ++k) {
            r.coeffs_[k] = a.coeffs_[k] - b.coeffs_[k];
        }
        return r;
    }

    friend PowerSeries operator*(cplx s, PowerSeries a)
    {
        for (auto& c : a.coeffs_) {
            c *= s;
        }
        return a;
    }

    // Cauchy product. The inner sum runs over i <= k - i pairs first and
    // adds symmetric partners together, so a*b and b*a agree bit for bit.
    friend PowerSeries operator*(const PowerSeries& a, const PowerSeries& b)
    {
        const int n = std::min(a.order(), b.order());
        auto r = zero(n);
        for (int k = 0; k <= n; ++k) {
            cplx acc{};
            for (int i = 0; 2 * i < k; ++i) {
                acc += a.coeffs_[i] * b.coeffs_[k - i] + a.coeffs_[k - i] * b.coeffs_[i];
            }
            if (k % 2 == 0) {
                acc += a.coeffs_[k / 2] * b.coeffs_[k / 2];
            }
            r.coeffs_[k] = acc;
        }
        return r;
    }

    /// a / b; requires b_0 != 0.
    friend PowerSeries operator/(const PowerSeries& a, const PowerSeries& b)
    {
        if (std::abs(b.coeffs_[0]) < 1e-12) {
            throw SingularityError("power series division by a series with vanishing constant term");
        }
        const int n = std::min(a.order(), b.order());
        auto r = zero(n);
        const cplx inv = 1.0 / b.coeffs_[0];
        for (int k = 0; k <= n; ++k) {
            cplx acc = a.coeffs_[k];
            for (int i = 1; i <= k; ++i) {
                acc -= b.coeffs_[i] * r.coeffs_[k - i];
            }
            r.coeffs_[k] = acc * inv;
        }
        return r;
    }

    /// outer(inner(u)); inner must have zero constant term.
    static PowerSeries compose(const PowerSeries& outer, const PowerSeries& inner)
    {
        if (std::abs(inner.coeffs_[0]) != 0.0) {
            throw SeriesError("series composition requires an inner series with zero constant term");
        }
        const int n = std::min(outer.order(), inner.order());
        auto r = constant(outer.coeffs_[n], n);
        const auto in = inner.truncated(n);
        for (int k = n - 1; k >= 0; --k) {
            r = r * in;
            r.coeffs_[0] += outer.coeffs_[k];
        }
        return r;
    }

    /// Termwise antiderivative with zero constant; order grows by one.
    PowerSeries integrate() const
    {
        auto r = zero(order() + 1);
        for (int k = 0; k <= order(); ++k) {
            r.coeffs_[k + 1] = coeffs_[k] / static_cast<double>(k + 1);
        }
        return r;
    }

    PowerSeries derivative() const
    {
        if (order() == 0) {
            return zero(0);
        }
        auto r = zero(order() - 1);
        for (int k = 1; k <= order(); ++k) {
            r.coeffs_[k - 1] = coeffs_[k] * static_cast<double>(k);
        }
        return r;
    }

    /// Jet of the truncated polynomial at z (Horner with derivatives).
    Jet3 evaluate(cplx z) const
    {
        Jet3 acc = Jet3::constant(coeffs_.back());
        const Jet3 x = Jet3::variable(z);
        for (int k = order() - 1; k >= 0; --k) {
            acc = acc * x;
            acc.v += coeffs_[k];
        }
        return acc;
    }

    friend bool operator==(const PowerSeries&, const PowerSeries&) = default;

private:
    std::vector<cplx> coeffs_;
};

} // namespace harmonorm
