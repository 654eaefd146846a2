#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "smkp/model.hpp"
#include "smkp/numdiff.hpp"
#include "smkp/special_functions.hpp"

namespace smkp {

enum class PartitionMethod { direct, closed_form };

inline const char* to_string(PartitionMethod m) {
    return m == PartitionMethod::direct ? "direct" : "closed";
}

struct PartitionResult {
    double Z = 0.0;
    double log_z = 0.0;  // NaN when the closed-form bracket is not positive
    PartitionMethod method = PartitionMethod::direct;
    bool negative_bracket = false;
};

namespace detail {

struct BoltzmannMoments {
    double log_z = 0.0;
    double mean = 0.0;      // <E>
    double variance = 0.0;  // <E^2> - <E>^2, computed two-pass
    double e_min = 0.0;
    double e_max = 0.0;
    int levels = 0;
};

// Exact finite sum over n = 0..n_max with the lowest level factored out.
inline BoltzmannMoments boltzmann_moments(const DerivedCoefficients& c, double beta) {
    if (!c.has_bound_states()) throw NoBoundStates("no bound states: n_max < 0");
    std::vector<double> e(static_cast<std::size_t>(c.n_max) + 1);
    for (int n = 0; n <= c.n_max; ++n) e[static_cast<std::size_t>(n)] = c.energy(n);
    BoltzmannMoments out;
    out.levels = static_cast<int>(e.size());
    out.e_min = *std::min_element(e.begin(), e.end());
    out.e_max = *std::max_element(e.begin(), e.end());

    std::vector<double> w(e.size());
    CompensatedSum z;
    CompensatedSum first;
    for (std::size_t i = 0; i < e.size(); ++i) {
        w[i] = std::exp(-beta * (e[i] - out.e_min));
        z.add(w[i]);
        first.add(w[i] * (e[i] - out.e_min));
    }
    const double zs = z.value();
    const double shift = first.value() / zs;
    CompensatedSum second;
    for (std::size_t i = 0; i < e.size(); ++i) {
        const double d = e[i] - out.e_min - shift;
        second.add(w[i] * d * d);
    }
    out.log_z = -beta * out.e_min + std::log(zs);
    out.mean = out.e_min + shift;
    out.variance = second.value() / zs;
    return out;
}

struct ClosedFormTerms {
    double log_z = 0.0;
    double bracket = 0.0;  // scaled bracket, Z = exp(log_prefactor) * bracket / 2
    double log_prefactor = 0.0;
    bool negative = false;
};

// Poisson-summation closed form, assembled without overflow. Each Erfi(y) is
// written e^{y^2} erfi_scaled(y); with t_i^2 = p_i^2 + 4 Q1 the e^{-4 Q1 beta
// Lambda} factor cancels and every term carries e^{beta Lambda p_i^2}, which is
// pulled out relative to the larger of the two.
inline ClosedFormTerms closed_form_terms(double Q0, double Lambda, double Q1, double p1,
                                         double p2, double beta) {
    const double bl = beta * Lambda;
    const double x = std::sqrt(bl);
    const double c = 0.5 * std::sqrt(std::numbers::pi) / x;
    const double P = std::max(p1 * p1, p2 * p2);
    auto side = [&](double p) {
        const double t = std::sqrt(p * p + 4.0 * Q1);
        const double inner = 1.0 + c * (erfi_scaled(p * x) - erfi_scaled(t * x));
        return std::exp(bl * (p * p - P)) * inner;
    };
    ClosedFormTerms out;
    out.bracket = side(p1) - side(p2);
    out.log_prefactor = -beta * (Q0 - Lambda * P);
    out.negative = !(out.bracket > 0.0);
    out.log_z = out.negative ? std::numeric_limits<double>::quiet_NaN()
                             : out.log_prefactor + std::log(0.5 * out.bracket);
    return out;
}

inline ClosedFormTerms closed_form_terms(const DerivedCoefficients& c, double beta) {
    if (!c.has_bound_states()) throw NoBoundStates("no bound states: n_max < 0");
    return closed_form_terms(c.Q0, c.Lambda, c.Q1, c.p1, c.p2, beta);
}

inline double log_partition(const DerivedCoefficients& c, double beta, PartitionMethod method) {
    return method == PartitionMethod::direct ? boltzmann_moments(c, beta).log_z
                                             : closed_form_terms(c, beta).log_z;
}

inline void check_beta(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("beta must be > 0");
}

} // namespace detail

inline PartitionResult partition_direct(const MoleculeParams& mol, const FieldConfig& fields,
                                        double m, double beta,
                                        const PhysicalConstants& pc = default_constants()) {
    detail::check_beta(beta);
    const auto c = derive_coefficients(mol, fields, m, pc);
    const double lz = detail::boltzmann_moments(c, beta).log_z;
    return {std::exp(lz), lz, PartitionMethod::direct, false};
}

inline PartitionResult partition_closed(const MoleculeParams& mol, const FieldConfig& fields,
                                        double m, double beta,
                                        const PhysicalConstants& pc = default_constants()) {
    detail::check_beta(beta);
    const auto c = derive_coefficients(mol, fields, m, pc);
    const auto t = detail::closed_form_terms(c, beta);
    const double z = t.negative ? 0.5 * t.bracket * std::exp(t.log_prefactor) : std::exp(t.log_z);
    return {z, t.log_z, PartitionMethod::closed_form, t.negative};
}

namespace thermo_flag {
inline constexpr unsigned negative_bracket = 1u;
inline constexpr unsigned derivative_inconsistent = 2u;
inline constexpr unsigned no_bound_states = 4u;
inline constexpr unsigned invalid_parameter = 8u;
} // namespace thermo_flag

struct ThermoPoint {
    double beta = 0.0;
    double Z = 0.0;
    double log_z = 0.0;
    double F = 0.0;          // eV
    double U = 0.0;          // eV
    double S = 0.0;          // k_B = 1
    double C = 0.0;          // k_B = 1
    double M = 0.0;          // eV/T
    double chi = 0.0;        // eV/T^2
    double I_current = 0.0;  // -dF/dm, e/hc = 1
    PartitionMethod method = PartitionMethod::direct;
    unsigned flags = 0;
    std::string message;

    [[nodiscard]] bool ok() const noexcept { return flags == 0; }
};

// "ok", or the set flags joined with '|'.
inline std::string flags_to_string(unsigned flags) {
    if (flags == 0) return "ok";
    std::string s;
    auto add = [&](unsigned bit, const char* name) {
        if (!(flags & bit)) return;
        if (!s.empty()) s += '|';
        s += name;
    };
    add(thermo_flag::negative_bracket, "negative_bracket");
    add(thermo_flag::derivative_inconsistent, "derivative_inconsistent");
    add(thermo_flag::no_bound_states, "no_bound_states");
    add(thermo_flag::invalid_parameter, "invalid_parameter");
    return s;
}

struct ThermoSteps {
    double beta_rel_first = 1e-4;   // relative step for dlnZ/dbeta
    double beta_rel_second = 1e-3;  // relative step for d2lnZ/dbeta2
    double b_rel = 1e-3;            // b_field step = max(b_rel * B, b_min)
    double b_min = 1e-3;            // T
    double m_step = 1e-3;
    double consistency = 1e-3;      // Richardson level agreement
};

// All observables at one point. Derivatives in b_field and m are taken on the
// unvalidated coefficient path, so the stencil may cross B = 0 freely.
inline ThermoPoint thermo_point(const MoleculeParams& mol, const FieldConfig& fields, double m,
                                double beta, PartitionMethod method,
                                const PhysicalConstants& pc = default_constants(),
                                const ThermoSteps& steps = {}) {
    detail::check_beta(beta);
    const DerivedCoefficients c = derive_coefficients(mol, fields, m, pc);

    ThermoPoint tp;
    tp.beta = beta;
    tp.method = method;
    bool consistent = true;
    auto note = [&](const DerivativeEstimate& d) {
        consistent = consistent && d.consistent(steps.consistency);
        return d.value;
    };

    if (method == PartitionMethod::direct) {
        const auto mom = detail::boltzmann_moments(c, beta);
        tp.log_z = mom.log_z;
        tp.U = mom.mean;
        tp.C = beta * beta * mom.variance;
    } else {
        const auto t = detail::closed_form_terms(c, beta);
        if (t.negative) tp.flags |= thermo_flag::negative_bracket;
        tp.log_z = t.log_z;
        auto lz = [&](double b) { return detail::closed_form_terms(c, b).log_z; };
        tp.U = -note(richardson_first(lz, beta, steps.beta_rel_first * beta));
        tp.C = beta * beta * note(richardson_second(lz, beta, steps.beta_rel_second * beta));
    }
    tp.Z = std::exp(tp.log_z);
    tp.F = -tp.log_z / beta;
    tp.S = tp.log_z + beta * tp.U;

    auto lz_field = [&](double b) {
        FieldConfig f = fields;
        f.b_field = b;
        return detail::log_partition(compute_coefficients(mol, f, m, pc), beta, method);
    };
    const double hb = std::max(steps.b_rel * fields.b_field, steps.b_min);
    tp.M = note(richardson_first(lz_field, fields.b_field, hb)) / beta;
    tp.chi = note(richardson_second(lz_field, fields.b_field, hb)) / beta;

    auto lz_m = [&](double mm) {
        return detail::log_partition(compute_coefficients(mol, fields, mm, pc), beta, method);
    };
    tp.I_current = note(richardson_first(lz_m, m, steps.m_step)) / beta;

    if (!consistent) tp.flags |= thermo_flag::derivative_inconsistent;
    return tp;
}

enum class SweepAxis { beta, alpha, b_field, xi };

inline const char* to_string(SweepAxis a) {
    switch (a) {
    case SweepAxis::beta: return "beta";
    case SweepAxis::alpha: return "alpha";
    case SweepAxis::b_field: return "B";
    case SweepAxis::xi: return "xi";
    }
    return "?";
}

// Everything a sweep holds fixed. The swept axis overrides its own entry.
struct ThermoContext {
    MoleculeParams molecule;
    FieldConfig fields;
    double m = 0.0;
    double beta = 1.0;
    PhysicalConstants constants = default_constants();
};

struct SweepGrid {
    SweepAxis axis = SweepAxis::beta;
    std::vector<double> values;
    ThermoContext fixed;

    void validate() const {
        if (values.empty()) throw DomainError("sweep grid is empty");
        for (std::size_t i = 1; i < values.size(); ++i)
            if (!(values[i] > values[i - 1]))
                throw DomainError("sweep grid must be strictly increasing");
    }
};

inline std::vector<double> linear_grid(double lo, double hi, int count) {
    if (count < 1) throw DomainError("grid count must be >= 1");
    if (count == 1) return {lo};
    std::vector<double> v(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (count - 1);
    return v;
}

inline std::vector<double> log_grid(double lo, double hi, int count) {
    if (!(lo > 0.0 && hi > 0.0)) throw DomainError("log grid bounds must be > 0");
    std::vector<double> v = linear_grid(std::log(lo), std::log(hi), count);
    for (double& x : v) x = std::exp(x);
    if (count > 1) {
        v.front() = lo;
        v.back() = hi;
    }
    return v;
}

// Default inverse-temperature axis, eV^-1.
inline std::vector<double> default_beta_grid(int count = 41) { return log_grid(1e-3, 1e2, count); }

// One point per grid value, in grid order. Failures become flagged points
// with NaN observables; the sweep itself never throws after validation.
inline std::vector<ThermoPoint> thermo_sweep(const SweepGrid& grid, PartitionMethod method,
                                             const ThermoSteps& steps = {}) {
    grid.validate();
    std::vector<ThermoPoint> out;
    out.reserve(grid.values.size());
    for (double v : grid.values) {
        ThermoContext ctx = grid.fixed;
        switch (grid.axis) {
        case SweepAxis::beta: ctx.beta = v; break;
        case SweepAxis::alpha: ctx.fields.alpha = v; break;
        case SweepAxis::b_field: ctx.fields.b_field = v; break;
        case SweepAxis::xi: ctx.fields.xi = v; break;
        }
        try {
            out.push_back(thermo_point(ctx.molecule, ctx.fields, ctx.m, ctx.beta, method,
                                       ctx.constants, steps));
        } catch (const Error& e) {
            constexpr double nan = std::numeric_limits<double>::quiet_NaN();
            ThermoPoint tp{ctx.beta, nan, nan, nan, nan, nan, nan, nan, nan, nan, method, 0, e.what()};
            tp.flags = dynamic_cast<const NoBoundStates*>(&e) ? thermo_flag::no_bound_states
                                                              : thermo_flag::invalid_parameter;
            out.push_back(std::move(tp));
        }
    }
    return out;
}

} // namespace smkp
