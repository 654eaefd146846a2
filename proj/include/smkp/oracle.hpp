#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "smkp/numdiff.hpp"
#include "smkp/spectrum.hpp"

namespace smkp {

struct ShootingConfig {
    double r_min = 1e-3;  // A
    double r_max = 12.0;  // A
    double step = 2e-4;   // A
    // Search window [E_lo, E_hi] in eV. When absent it runs from the minimum
    // of the potential on the grid to its value at r_max.
    std::optional<std::pair<double, double>> energy_bracket;
    double tol = 1e-9;  // eV
    CentrifugalMode centrifugal_mode = CentrifugalMode::greene_aldrich;
    int max_iter = 200;
    // Shrink [r_min, r_max] to where the WKB decay exponent at E_hi reaches
    // trim_exponent. Without this the stiff inner wall makes Numerov unstable.
    bool trim_domain = true;
    double trim_exponent = 40.0;

    void validate() const {
        if (!(r_min > 0.0 && r_max > r_min)) throw DomainError("shooting: need 0 < r_min < r_max");
        if (!(step > 0.0)) throw DomainError("shooting: step must be > 0");
        if (!(tol > 0.0)) throw DomainError("shooting: tol must be > 0");
        if (energy_bracket && !(energy_bracket->first < energy_bracket->second))
            throw DomainError("shooting: need E_lo < E_hi");
        if (max_iter < 1) throw DomainError("shooting: max_iter must be >= 1");
    }
};

struct NumerovState {
    double energy = 0.0;  // eV
    int nodes = 0;        // sign changes of the matched eigenfunction
    int iterations = 0;   // refinement steps
};

namespace detail {

// Radial equation u'' = k2 (V - E) u on a uniform grid.
class NumerovSolver {
public:
    NumerovSolver(std::vector<double> r, std::vector<double> v, double k2)
        : r_(std::move(r)), v_(std::move(v)), k2_(k2), h2_12_(sq(r_[1] - r_[0]) / 12.0) {}

    [[nodiscard]] std::size_t size() const noexcept { return r_.size(); }
    [[nodiscard]] const std::vector<double>& radii() const noexcept { return r_; }
    [[nodiscard]] const std::vector<double>& potential() const noexcept { return v_; }

    // Sign changes of the outward solution over the whole grid: the number of
    // eigenvalues below E.
    [[nodiscard]] int count_below(double E) const {
        int nodes = 0;
        double prev = 0.0, cur = 1e-30;
        for (std::size_t i = 1; i + 1 < size(); ++i) {
            const double next = step_value(prev, cur, i, E, +1);
            if ((next < 0.0) != (cur < 0.0) && next != 0.0) ++nodes;
            prev = cur;
            cur = next;
            if (std::abs(cur) > 1e150) {
                prev *= 1e-150;
                cur *= 1e-150;
            }
        }
        return nodes;
    }

    // Outer classical turning point for energy E: last index where V < E.
    [[nodiscard]] std::size_t outer_turning_point(double E) const {
        const auto it_min = std::min_element(v_.begin(), v_.end());
        std::size_t i = static_cast<std::size_t>(it_min - v_.begin());
        while (i + 1 < size() && v_[i + 1] < E) ++i;
        return std::clamp<std::size_t>(i, 2, size() - 4);
    }

    // Normalized Wronskian-type mismatch between the outward and inward
    // solutions at (im, im+1). Zero exactly at an eigenvalue.
    [[nodiscard]] double mismatch(double E, std::size_t im) const {
        const auto out = integrate_out(E, im + 1);
        const auto in = integrate_in(E, im);
        const double a0 = out[0], a1 = out[1], b0 = in[0], b1 = in[1];
        const double na = std::hypot(a0, a1), nb = std::hypot(b0, b1);
        return (a0 * b1 - a1 * b0) / (na * nb);
    }

    // Matched eigenfunction on the full grid, sign-normalized, for node counting.
    [[nodiscard]] std::vector<double> eigenfunction(double E, std::size_t im) const {
        std::vector<double> u(size(), 0.0);
        u[1] = 1e-30;
        for (std::size_t i = 1; i < im + 1; ++i) {
            u[i + 1] = step_value(u[i - 1], u[i], i, E, +1);
            if (std::abs(u[i + 1]) > 1e150)
                for (std::size_t j = 0; j <= i + 1; ++j) u[j] *= 1e-150;
        }
        std::vector<double> w(size(), 0.0);
        const std::size_t last = size() - 1;
        w[last - 1] = 1e-30;
        for (std::size_t i = last - 1; i > im; --i) {
            w[i - 1] = step_value(w[i + 1], w[i], i, E, -1);
            if (std::abs(w[i - 1]) > 1e150)
                for (std::size_t j = i - 1; j <= last; ++j) w[j] *= 1e-150;
        }
        const double scale = u[im] / w[im];
        for (std::size_t i = im + 1; i <= last; ++i) u[i] = w[i] * scale;
        return u;
    }

private:
    static double sq(double x) { return x * x; }

    // 1 + h^2 f / 12 with f = k2 (E - V).
    [[nodiscard]] double weight(std::size_t i, double E) const {
        return 1.0 + h2_12_ * k2_ * (E - v_[i]);
    }

    // One Numerov step from (u_{i-dir}, u_i) to u_{i+dir}.
    [[nodiscard]] double step_value(double u_back, double u_here, std::size_t i, double E,
                                    int dir) const {
        const std::size_t ib = dir > 0 ? i - 1 : i + 1;
        const std::size_t in = dir > 0 ? i + 1 : i - 1;
        const double wi = weight(i, E);
        return ((12.0 - 10.0 * wi) * u_here - weight(ib, E) * u_back) / weight(in, E);
    }

    [[nodiscard]] std::array<double, 2> integrate_out(double E, std::size_t upto) const {
        double prev = 0.0, cur = 1e-30;
        for (std::size_t i = 1; i < upto; ++i) {
            const double next = step_value(prev, cur, i, E, +1);
            prev = cur;
            cur = next;
            if (std::abs(cur) > 1e150) {
                prev *= 1e-150;
                cur *= 1e-150;
            }
        }
        return {prev, cur};  // u[upto-1], u[upto]
    }

    [[nodiscard]] std::array<double, 2> integrate_in(double E, std::size_t downto) const {
        const std::size_t last = size() - 1;
        double prev = 0.0, cur = 1e-30;  // u[last], u[last-1]
        for (std::size_t i = last - 1; i > downto; --i) {
            const double next = step_value(prev, cur, i, E, -1);
            prev = cur;
            cur = next;
            if (std::abs(cur) > 1e150) {
                prev *= 1e-150;
                cur *= 1e-150;
            }
        }
        return {cur, prev};  // u[downto], u[downto+1]
    }

    std::vector<double> r_;
    std::vector<double> v_;
    double k2_;
    double h2_12_;
};

inline int count_sign_changes(const std::vector<double>& u, double floor_rel = 1e-10) {
    double peak = 0.0;
    for (double x : u) peak = std::max(peak, std::abs(x));
    int changes = 0;
    double last = 0.0;
    for (double x : u) {
        if (std::abs(x) <= floor_rel * peak) continue;
        if (last != 0.0 && ((x < 0.0) != (last < 0.0))) ++changes;
        last = x;
    }
    return changes;
}

// Grid restricted to where the solution is not negligibly small at E_hi.
inline std::pair<std::size_t, std::size_t> wkb_window(const std::vector<double>& v, double k2,
                                                      double h, double E, double exponent) {
    const std::size_t n = v.size();
    const std::size_t imin =
        static_cast<std::size_t>(std::min_element(v.begin(), v.end()) - v.begin());
    std::size_t lo = imin;
    while (lo > 0 && v[lo - 1] < E) --lo;
    double acc = 0.0;
    while (lo > 0 && acc < exponent) {
        --lo;
        acc += std::sqrt(std::max(0.0, k2 * (v[lo] - E))) * h;
    }
    std::size_t hi = imin;
    while (hi + 1 < n && v[hi + 1] < E) ++hi;
    acc = 0.0;
    while (hi + 1 < n && acc < exponent) {
        ++hi;
        acc += std::sqrt(std::max(0.0, k2 * (v[hi] - E))) * h;
    }
    return {lo, hi};
}

} // namespace detail

// Lowest `count` eigenvalues of u'' = (2 mu / hbar^2)(V_eff - E) u with
// u(r_min) = u(r_max) = 0. Each state is isolated by bisection on the node
// count, then refined by Illinois regula falsi on the matching mismatch at the
// outer turning point.
inline std::vector<NumerovState> numerov_states(const MoleculeParams& mol,
                                                const FieldConfig& fields, double m, int count,
                                                const ShootingConfig& cfg,
                                                const PhysicalConstants& pc = default_constants()) {
    cfg.validate();
    mol.validate();
    fields.validate();
    if (count < 1) throw DomainError("numerov: count must be >= 1");

    const DerivedCoefficients c = compute_coefficients(mol, fields, m, pc);
    const double k2 = pc.two_mu_over_hbar2(mol.mu);
    const auto npts = static_cast<std::size_t>(std::floor((cfg.r_max - cfg.r_min) / cfg.step)) + 1;
    if (npts < 8) throw DomainError("numerov: grid has fewer than 8 points");
    std::vector<double> r(npts), v(npts);
    for (std::size_t i = 0; i < npts; ++i) {
        r[i] = cfg.r_min + cfg.step * static_cast<double>(i);
        v[i] = detail::effective_potential(c, mol.delta, r[i], cfg.centrifugal_mode);
    }

    double e_lo, e_hi;
    if (cfg.energy_bracket) {
        std::tie(e_lo, e_hi) = *cfg.energy_bracket;
    } else {
        e_lo = *std::min_element(v.begin(), v.end());
        e_hi = v.back();
    }

    if (cfg.trim_domain) {
        const auto [lo, hi] = detail::wkb_window(v, k2, cfg.step, e_hi, cfg.trim_exponent);
        if (hi - lo + 1 >= 8) {
            r = std::vector<double>(r.begin() + static_cast<std::ptrdiff_t>(lo),
                                    r.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
            v = std::vector<double>(v.begin() + static_cast<std::ptrdiff_t>(lo),
                                    v.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
        }
    }
    const detail::NumerovSolver solver(std::move(r), std::move(v), k2);

    const int n_hi = solver.count_below(e_hi);
    if (n_hi < count)
        throw BracketFailure("numerov: only " + std::to_string(n_hi) + " states below E_hi = " +
                             std::to_string(e_hi) + " eV, requested " + std::to_string(count));
    if (solver.count_below(e_lo) > 0)
        throw BracketFailure("numerov: states already present below E_lo");

    std::vector<NumerovState> states;
    double floor_e = e_lo;
    for (int k = 0; k < count; ++k) {
        // Isolate: count(a) <= k < count(b), then tighten to count(a) == k,
        // count(b) == k + 1 so [a, b] holds exactly state k.
        double a = floor_e, b = e_hi;
        int ca = solver.count_below(a), cb = n_hi;
        int it = 0;
        while (!(ca == k && cb == k + 1)) {
            if (++it > cfg.max_iter)
                throw ConvergenceFailure("numerov: could not isolate state " + std::to_string(k));
            const double mid = 0.5 * (a + b);
            const int cm = solver.count_below(mid);
            if (cm <= k) {
                a = mid;
                ca = cm;
            } else {
                b = mid;
                cb = cm;
            }
        }

        const std::size_t im = solver.outer_turning_point(0.5 * (a + b));
        double fa = solver.mismatch(a, im), fb = solver.mismatch(b, im);
        if (fa * fb > 0.0) {
            // The mismatch at a fixed matching point can fail to straddle when
            // the bracket is wide; shrink it by bisection on the node count.
            for (int j = 0; j < cfg.max_iter && fa * fb > 0.0 && b - a > cfg.tol; ++j) {
                const double mid = 0.5 * (a + b);
                if (solver.count_below(mid) <= k) {
                    a = mid;
                    fa = solver.mismatch(a, im);
                } else {
                    b = mid;
                    fb = solver.mismatch(b, im);
                }
            }
        }

        int iters = 0;
        int side = 0;
        double e = 0.5 * (a + b);
        while (b - a > cfg.tol) {
            if (++iters > cfg.max_iter)
                throw ConvergenceFailure("numerov: no convergence for state " + std::to_string(k));
            e = (fa * fb < 0.0) ? (a * fb - b * fa) / (fb - fa) : 0.5 * (a + b);
            if (!(e > a && e < b)) e = 0.5 * (a + b);
            const double fe = solver.mismatch(e, im);
            if (fe == 0.0) {
                a = b = e;
                break;
            }
            if ((fe < 0.0) == (fa < 0.0)) {
                a = e;
                fa = fe;
                if (side == -1) fb *= 0.5;
                side = -1;
            } else {
                b = e;
                fb = fe;
                if (side == +1) fa *= 0.5;
                side = +1;
            }
        }
        e = 0.5 * (a + b);
        const auto u = solver.eigenfunction(e, solver.outer_turning_point(e));
        states.push_back({e, detail::count_sign_changes(u), iters});
        floor_e = e;
    }
    return states;
}

inline std::vector<double> numerov_eigenvalues(const MoleculeParams& mol,
                                               const FieldConfig& fields, double m, int count,
                                               const ShootingConfig& cfg = {},
                                               const PhysicalConstants& pc = default_constants()) {
    std::vector<double> out;
    for (const auto& s : numerov_states(mol, fields, m, count, cfg, pc)) out.push_back(s.energy);
    return out;
}

struct NmaxScan {
    int n_max = 0;              // last n in [0, n_cap] on the rising branch of E(n)
    int argmax = 0;             // integer argmax of E(n) over [0, n_cap]
    bool cap_hit = false;       // the rising branch reaches n_cap
    bool no_interior_max = false;  // E(n) decreasing from n = 0 (Q1 < Q2^2)
};

// Brute-force scan for the top of the vibrational ladder. A level n counts as
// admissible when the continuous-n energy is still rising there, tested with a
// symmetric difference of width 2e-3. The integer argmax is reported
// alongside: it can exceed n_max by one, because the peak of E(n) sits between
// floor and ceil of sqrt(Q1) - Q2.
inline NmaxScan nmax_scan(const DerivedCoefficients& c, int n_cap) {
    if (n_cap < 1) throw DomainError("nmax_scan: n_cap must be >= 1");
    constexpr double h = 1e-3;
    NmaxScan out;
    auto rising = [&](int n) { return c.energy(n + h) >= c.energy(n - h); };
    if (!rising(0)) {
        out.no_interior_max = true;
        out.n_max = 0;
        out.argmax = 0;
        return out;
    }
    int n = 0;
    while (n < n_cap && rising(n + 1)) ++n;
    out.n_max = n;
    out.cap_hit = (n == n_cap);
    double best = c.energy(0);
    for (int j = 1; j <= n_cap; ++j) {
        const double e = c.energy(j);
        if (e > best) {
            best = e;
            out.argmax = j;
        }
        if (j > n + 1) break;  // past the peak, E(n) only falls
    }
    return out;
}

inline NmaxScan nmax_scan(const MoleculeParams& mol, const FieldConfig& fields, int m, int n_cap,
                          const PhysicalConstants& pc = default_constants()) {
    mol.validate();
    fields.validate();
    return nmax_scan(compute_coefficients(mol, fields, m, pc), n_cap);
}

struct FdCase {
    std::string name;
    double expected = 0.0;
    double computed = 0.0;
    double rel_error = 0.0;
    bool pass = false;
};

struct FdReport {
    std::vector<FdCase> cases;
    double tolerance = 1e-8;

    [[nodiscard]] bool all_pass() const {
        return std::all_of(cases.begin(), cases.end(), [](const FdCase& c) { return c.pass; });
    }
};

// Runs the Richardson engine on functions with known derivatives.
inline FdReport fd_selftest() {
    FdReport rep;
    auto record = [&](std::string name, double expected, const DerivativeEstimate& d) {
        const double err = std::abs(d.value - expected) / std::max(std::abs(expected), 1e-300);
        rep.cases.push_back({std::move(name), expected, d.value, err, err <= rep.tolerance});
    };

    record("d/dx x^3 at 2", 12.0,
           richardson_first([](double x) { return x * x * x; }, 2.0, 1e-3));

    const double a = 0.37;
    record("d/dbeta (-beta a)", -a,
           richardson_first([a](double b) { return -b * a; }, 1.3, 1e-4 * 1.3));

    record("d/dx exp(2x) at 0.5", 2.0 * std::exp(1.0),
           richardson_first([](double x) { return std::exp(2.0 * x); }, 0.5, 1e-3));

    // ln of a Gaussian integral: ln sqrt(pi / beta).
    const double beta_g = 0.8;
    auto log_gauss = [](double b) { return 0.5 * std::log(std::numbers::pi / b); };
    record("d/dbeta ln sqrt(pi/beta)", -0.5 / beta_g,
           richardson_first(log_gauss, beta_g, 1e-4 * beta_g));
    record("d2/dbeta2 ln sqrt(pi/beta)", 0.5 / (beta_g * beta_g),
           richardson_second(log_gauss, beta_g, 1e-2 * beta_g));

    // Two-level system: d2/dbeta2 ln Z = Var(E) = (a - b)^2 p (1 - p).
    const double ea = 0.2, eb = 0.9;
    for (double beta : {0.5, 2.0, 5.0}) {
        auto lnz = [&](double bb) {
            return -bb * ea + std::log1p(std::exp(-bb * (eb - ea)));
        };
        const double p = 1.0 / (1.0 + std::exp(-beta * (eb - ea)));
        record("two-level d2 lnZ at beta=" + std::to_string(beta),
               (ea - eb) * (ea - eb) * p * (1.0 - p),
               richardson_second(lnz, beta, 1e-2 * beta));
    }
    return rep;
}

} // namespace smkp
