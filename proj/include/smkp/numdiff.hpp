#pragma once

#include <algorithm>
#include <cmath>

namespace smkp {

// Result of a two-level Richardson-extrapolated central difference.
struct DerivativeEstimate {
    double value = 0.0;   // extrapolated estimate
    double coarse = 0.0;  // plain central difference at step h
    double fine = 0.0;    // plain central difference at step h/2

    // Relative disagreement between the extrapolated value and the finer
    // level; a cheap proxy for the truncation error of `fine`.
    [[nodiscard]] double discrepancy() const noexcept {
        const double scale = std::max({std::abs(value), std::abs(fine), std::abs(coarse)});
        if (scale == 0.0) return 0.0;
        return std::abs(value - fine) / scale;
    }
    [[nodiscard]] bool consistent(double rel_tol = 1e-3) const noexcept {
        return std::isfinite(value) && discrepancy() <= rel_tol;
    }
};

// df/dx with O(h^4) error: (4 D(h/2) - D(h)) / 3, D(h) = (f(x+h) - f(x-h)) / 2h.
template <class F>
DerivativeEstimate richardson_first(F&& f, double x, double h) {
    auto central = [&](double step) { return (f(x + step) - f(x - step)) / (2.0 * step); };
    DerivativeEstimate d;
    d.coarse = central(h);
    d.fine = central(0.5 * h);
    d.value = (4.0 * d.fine - d.coarse) / 3.0;
    return d;
}

// d2f/dx2 with O(h^4) error, same extrapolation on the three-point stencil.
template <class F>
DerivativeEstimate richardson_second(F&& f, double x, double h) {
    const double f0 = f(x);
    auto central = [&](double step) {
        return (f(x + step) - 2.0 * f0 + f(x - step)) / (step * step);
    };
    DerivativeEstimate d;
    d.coarse = central(h);
    d.fine = central(0.5 * h);
    d.value = (4.0 * d.fine - d.coarse) / 3.0;
    return d;
}

} // namespace smkp
