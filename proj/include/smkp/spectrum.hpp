#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smkp/model.hpp"
#include "smkp/special_functions.hpp"

namespace smkp {

enum class CentrifugalMode { exact, greene_aldrich };

// Which angular label a level carries: m for the planar (2D) problem, ell for
// the three-dimensional reduction m = ell + 1/2.
enum class AngularMode { magnetic, rotational };

struct EnergyLevel {
    int n = 0;
    double angular = 0.0;
    AngularMode mode = AngularMode::magnetic;
    double energy = 0.0;  // eV
    bool bound = false;   // n <= n_max
};

namespace detail {

// V_eff at radius r from precomputed coefficients. In greene_aldrich mode both
// 1/r and 1/r^2 are replaced by delta/(1 - e^{-delta r}) and its square, which
// is exactly the potential whose spectrum the closed-form energy describes.
inline double effective_potential(const DerivedCoefficients& c, double delta, double r,
                                  CentrifugalMode mode) {
    const double x = delta * r;
    const double s = std::exp(-x);
    const double one_minus_s = -std::expm1(-x);
    const double ir = mode == CentrifugalMode::exact ? 1.0 / x : 1.0 / one_minus_s;
    const double screen = s / one_minus_s;
    const double bracket = c.rho0 * s * s * ir * ir - c.rho1 * s * ir +
                           c.Omega1 * screen * screen + c.Omega0 * screen * ir +
                           c.gamma * ir * ir;
    return c.A + 4.0 * c.Lambda * bracket;
}

} // namespace detail

inline double effective_potential(const MoleculeParams& mol, const FieldConfig& fields, double m,
                                  double r, CentrifugalMode mode,
                                  const PhysicalConstants& pc = default_constants()) {
    if (!(r > 0.0)) throw DomainError("effective_potential: r must be > 0");
    mol.validate();
    fields.validate();
    return detail::effective_potential(compute_coefficients(mol, fields, m, pc), mol.delta, r,
                                       mode);
}

// Closed-form level for a continuous angular number m. Integer-m and
// ell + 1/2 evaluations delegate here.
inline EnergyLevel energy_2d_continuous(const MoleculeParams& mol, const FieldConfig& fields,
                                        int n, double m,
                                        const PhysicalConstants& pc = default_constants()) {
    if (n < 0) throw DomainError("energy_2d: n must be >= 0");
    const DerivedCoefficients c = derive_coefficients(mol, fields, m, pc);
    return {n, m, AngularMode::magnetic, c.energy(n), n <= c.n_max};
}

inline EnergyLevel energy_2d(const MoleculeParams& mol, const FieldConfig& fields, int n, int m,
                             const PhysicalConstants& pc = default_constants()) {
    return energy_2d_continuous(mol, fields, n, static_cast<double>(m), pc);
}

// Field-free three-dimensional level E_{n ell}. q_override replaces mol.q.
inline EnergyLevel energy_3d(const MoleculeParams& mol, int n, int ell,
                             std::optional<double> q_override = std::nullopt,
                             const PhysicalConstants& pc = default_constants()) {
    if (ell < 0) throw DomainError("energy_3d: ell must be >= 0");
    MoleculeParams m3 = mol;
    if (q_override) m3.q = *q_override;
    FieldConfig free_space;
    free_space.b_field = 0.0;
    free_space.xi = 0.0;
    free_space.alpha = 1.0;
    EnergyLevel level = energy_2d_continuous(m3, free_space, n, ell + 0.5, pc);
    level.angular = ell;
    level.mode = AngularMode::rotational;
    return level;
}

struct SpectrumRow {
    int n = 0;
    double angular = 0.0;
    std::optional<double> energy;  // absent only when no formula value exists
    bool bound = false;
    std::string error;             // empty unless the cell failed

    [[nodiscard]] bool ok() const noexcept { return error.empty(); }
};

struct SpectrumTable {
    AngularMode mode = AngularMode::magnetic;
    MoleculeParams molecule;
    FieldConfig fields;
    std::string constants;
    std::vector<SpectrumRow> rows;

    [[nodiscard]] bool all_ok() const {
        return std::all_of(rows.begin(), rows.end(), [](const SpectrumRow& r) { return r.ok(); });
    }
};

namespace detail {

inline SpectrumRow spectrum_cell(const MoleculeParams& mol, const FieldConfig& fields, int n,
                                 double m, const PhysicalConstants& pc) {
    SpectrumRow row;
    row.n = n;
    row.angular = m;
    try {
        const EnergyLevel level = energy_2d_continuous(mol, fields, n, m, pc);
        row.energy = level.energy;
        row.bound = level.bound;
    } catch (const NoBoundStates& e) {
        // The formula value still exists; it is just not a bound level.
        row.error = e.what();
        try {
            row.energy = compute_coefficients(mol, fields, m, pc).energy(n);
        } catch (const Error&) {
        }
    } catch (const Error& e) {
        row.error = e.what();
    }
    return row;
}

} // namespace detail

// Rows ordered by (m in the order given, then n). Per-cell failures become
// flagged rows instead of aborting the table.
inline SpectrumTable spectrum_table(const MoleculeParams& mol, const FieldConfig& fields,
                                    std::span<const int> n_values, std::span<const int> m_list,
                                    const PhysicalConstants& pc = default_constants()) {
    SpectrumTable table{AngularMode::magnetic, mol, fields, pc.name, {}};
    table.rows.reserve(n_values.size() * m_list.size());
    for (int m : m_list)
        for (int n : n_values)
            table.rows.push_back(detail::spectrum_cell(mol, fields, n, m, pc));
    return table;
}

// Three-dimensional table ordered by (n, ell). With lower_triangle set only
// ell <= n is emitted, the layout of the bundled reference table.
inline SpectrumTable spectrum_table_3d(const MoleculeParams& mol, std::span<const int> n_values,
                                       std::span<const int> ell_list, bool lower_triangle = true,
                                       const PhysicalConstants& pc = default_constants()) {
    FieldConfig free_space;
    free_space.b_field = 0.0;
    SpectrumTable table{AngularMode::rotational, mol, free_space, pc.name, {}};
    for (int n : n_values) {
        for (int ell : ell_list) {
            if (lower_triangle && ell > n) continue;
            SpectrumRow row;
            if (ell < 0) {
                row.n = n;
                row.angular = ell;
                row.error = "ell must be >= 0";
            } else {
                row = detail::spectrum_cell(mol, free_space, n, ell + 0.5, pc);
                row.angular = ell;
            }
            table.rows.push_back(std::move(row));
        }
    }
    return table;
}

enum class ProfileKind { effective_potential, wavefunction };

struct RadialProfile {
    std::vector<double> r_grid;  // A, strictly increasing, all > 0
    std::vector<double> values;
    ProfileKind kind = ProfileKind::wavefunction;
};

namespace detail {
inline void check_grid(std::span<const double> r_grid) {
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
        if (!(r_grid[i] > 0.0)) throw DomainError("radial grid must have r > 0");
        if (i > 0 && !(r_grid[i] > r_grid[i - 1]))
            throw DomainError("radial grid must be strictly increasing");
    }
}
} // namespace detail

inline RadialProfile effective_potential_profile(const MoleculeParams& mol,
                                                 const FieldConfig& fields, double m,
                                                 std::span<const double> r_grid,
                                                 CentrifugalMode mode,
                                                 const PhysicalConstants& pc = default_constants()) {
    detail::check_grid(r_grid);
    mol.validate();
    fields.validate();
    const DerivedCoefficients c = compute_coefficients(mol, fields, m, pc);
    RadialProfile p{{r_grid.begin(), r_grid.end()}, {}, ProfileKind::effective_potential};
    p.values.reserve(r_grid.size());
    for (double r : r_grid) p.values.push_back(detail::effective_potential(c, mol.delta, r, mode));
    return p;
}

// Unnormalized radial function R(s) = s^lambda (1-s)^sigma 2F1(-n, 2(lambda+sigma)+n;
// 2 lambda+1; s), s = exp(-delta r), sampled on r_grid and scaled so that
// max |R| = 1. The (-1)^n and Gamma-ratio prefactors are dropped; they only
// fix sign and scale.
inline RadialProfile radial_wavefunction(const MoleculeParams& mol, const FieldConfig& fields,
                                         int n, int m, std::span<const double> r_grid,
                                         const PhysicalConstants& pc = default_constants()) {
    detail::check_grid(r_grid);
    const DerivedCoefficients c = derive_coefficients(mol, fields, m, pc);
    if (n < 0) throw DomainError("radial_wavefunction: n must be >= 0");
    if (n > c.n_max)
        throw UnboundState("radial_wavefunction: n = " + std::to_string(n) + " exceeds n_max = " +
                           std::to_string(c.n_max));

    // epsilon = -2 mu (E - A) / (hbar^2 delta^2). With E from the closed form,
    // epsilon + gamma = g^2 / 4 where g = Q1/(n+Q2) - (n+Q2); taking lambda
    // from g avoids the cancellation in E - A.
    const double u = n + c.Q2;
    const double g = c.Q1 / u - u;
    const double epsilon = 0.25 * g * g - c.gamma;
    if (!(epsilon + c.gamma >= 0.0))
        throw DomainError("radial_wavefunction: epsilon + gamma < 0, lambda is imaginary");
    const double lambda = 0.5 * std::abs(g);
    const double sigma = c.sigma_exp;
    const double b = 2.0 * (lambda + sigma) + n;
    const double cc = 2.0 * lambda + 1.0;

    RadialProfile p{{r_grid.begin(), r_grid.end()}, {}, ProfileKind::wavefunction};
    std::vector<double> log_mag(r_grid.size());
    std::vector<double> sign(r_grid.size());
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
        const double x = mol.delta * r_grid[i];
        const double s = std::exp(-x);
        const double f = hyp2f1_terminating(n, b, cc, s);
        sign[i] = f < 0.0 ? -1.0 : 1.0;
        log_mag[i] = f == 0.0 ? -std::numeric_limits<double>::infinity()
                              : -lambda * x + sigma * std::log(-std::expm1(-x)) +
                                    std::log(std::abs(f));
        peak = std::max(peak, log_mag[i]);
    }
    p.values.reserve(r_grid.size());
    for (std::size_t i = 0; i < r_grid.size(); ++i)
        p.values.push_back(sign[i] * std::exp(log_mag[i] - peak));
    return p;
}

} // namespace smkp
