#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "smkp/errors.hpp"

namespace smkp {

// Neumaier's variant of Kahan summation. Handles terms larger than the running
// sum, which plain Kahan does not.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

namespace detail {

inline constexpr double two_over_sqrt_pi = std::numbers::inv_sqrtpi * 2.0;

// Maclaurin series, |x| < 0.2: F(x) = sum_k (-2)^k x^(2k+1) / (2k+1)!!.
inline double dawson_small(double x) {
    const double x2 = x * x;
    double term = x;
    double sum = x;
    for (int k = 1; k < 30; ++k) {
        term *= -2.0 * x2 / (2.0 * k + 1.0);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

// Rybicki's sampling representation
//   F(x) = (1/sqrt(pi)) sum_{n odd} exp(-(x - n h)^2) / n,
// exact as h -> 0 with aliasing error ~ exp(-(pi / 2h)^2). h = 0.2 puts that
// near 1e-27; the window is re-centred on the even multiple of h closest to x.
inline double dawson_rybicki(double x) {
    constexpr double h = 0.2;
    constexpr int half_width = 35;  // exp(-(35 h)^2) ~ 5e-22
    const double ax = std::abs(x);
    const long n0 = 2 * std::lround(0.5 * ax / h);
    const double xp = ax - static_cast<double>(n0) * h;
    CompensatedSum sum;
    for (int n = -half_width; n <= half_width; n += 2) {
        const double d = xp - n * h;
        sum.add(std::exp(-d * d) / static_cast<double>(n + n0));
    }
    const double v = std::numbers::inv_sqrtpi * sum.value();
    return x < 0.0 ? -v : v;
}

// Asymptotic series F(x) ~ 1/(2x) sum_k (2k-1)!! / (2x^2)^k. At |x| >= 7 the
// smallest term is below 1e-20, so truncating there is exact to rounding.
inline double dawson_asymptotic(double x) {
    const double inv = 1.0 / (2.0 * x * x);
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double next = term * (2.0 * k - 1.0) * inv;
        if (next >= term) break;
        term = next;
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sum / (2.0 * x);
}

} // namespace detail

// Dawson's integral F(x) = exp(-x^2) * int_0^x exp(t^2) dt.
inline double dawson(double x) {
    if (std::isnan(x)) return x;
    const double ax = std::abs(x);
    if (ax < 0.2) return detail::dawson_small(x);
    if (ax < 7.0) return detail::dawson_rybicki(x);
    if (std::isinf(x)) return x > 0 ? 0.0 : -0.0;
    return detail::dawson_asymptotic(x);
}

// Erfi(x) * exp(-x^2) = (2/sqrt(pi)) F(x). Bounded by ~0.6107 for all x.
inline double erfi_scaled(double x) {
    return detail::two_over_sqrt_pi * dawson(x);
}

// Imaginary error function Erfi(x) = -i erf(ix). Throws OverflowError when
// the result is not representable; use erfi_scaled in that regime.
inline double erfi(double x) {
    const double x2 = x * x;
    if (x2 > 709.0) {
        const double v = detail::two_over_sqrt_pi * std::exp(x2) * dawson(x);
        if (!std::isfinite(v))
            throw OverflowError("erfi(" + std::to_string(x) + ") overflows; use erfi_scaled");
        return v;
    }
    return detail::two_over_sqrt_pi * std::exp(x2) * dawson(x);
}

// 2F1(-n, b; c; s) as the degree-n polynomial sum_k (-n)_k (b)_k / ((c)_k k!) s^k.
// Throws PoleError when (c)_k vanishes for some k <= n.
inline double hyp2f1_terminating(int n, double b, double c, double s) {
    if (n < 0) throw DomainError("hyp2f1_terminating: n must be nonnegative");
    for (int j = 0; j < n; ++j) {
        if (c + j == 0.0)
            throw PoleError("hyp2f1_terminating: (c)_k vanishes at c = " + std::to_string(c));
    }
    CompensatedSum sum;
    double term = 1.0;
    sum.add(term);
    for (int k = 0; k < n; ++k) {
        term *= (static_cast<double>(k - n) * (b + k)) / ((c + k) * (k + 1.0)) * s;
        sum.add(term);
    }
    return sum.value();
}

} // namespace smkp
