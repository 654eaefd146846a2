#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "smkp/constants.hpp"
#include "smkp/errors.hpp"

namespace smkp {

// Spectroscopic constants of one diatomic species in the library unit system.
struct MoleculeParams {
    std::string name;
    double D_e = 0.0;    // dissociation energy, eV
    double r_e = 0.0;    // equilibrium bond length, A
    double mu = 0.0;     // reduced mass, eV/c^2
    double delta = 0.0;  // screening parameter, 1/A
    double q = 1.0;      // control parameter

    void validate() const {
        auto ok = [](double v) { return std::isfinite(v); };
        if (!ok(D_e) || D_e <= 0.0) throw InvalidParameter("D_e > 0 violated for '" + name + "'");
        if (!ok(r_e) || r_e <= 0.0) throw InvalidParameter("r_e > 0 violated for '" + name + "'");
        if (!ok(mu) || mu <= 0.0) throw InvalidParameter("mu > 0 violated for '" + name + "'");
        if (!ok(delta) || delta <= 0.0)
            throw InvalidParameter("delta > 0 violated for '" + name + "'");
        if (!ok(q) || q < 0.0) throw InvalidParameter("q >= 0 violated for '" + name + "'");
    }
};

// kappa maps (b_field [T], mu [eV/c^2]) to the cyclotron energy hbar*omega_c
// [eV] through hbar*omega_c = kappa * B / mu.
namespace kappa {

// hbar c^2 / e: the SI cyclotron energy, in eV * (eV/c^2) / T.
inline constexpr double si = 59.15714046536554;

// Least-squares fit against the B = 6 T, xi = 0, alpha = 1 CO block of the
// bundled reference table with default_constants(). The tabulated magnetic shifts are ~3 eV,
// which no SI-consistent coupling can produce for a molecular mass, so the
// coupling is calibrated. Regenerate with `smkp validate --calibrate-kappa`.
inline constexpr double table1 = 1.9733508218e8;

} // namespace kappa

struct FieldConfig {
    double b_field = 0.0;                  // T
    double b_conversion = kappa::table1;   // kappa
    double xi = 0.0;                       // Aharonov-Bohm flux ratio
    double alpha = 1.0;                    // disclination parameter

    void validate() const {
        if (!(alpha > 0.0 && alpha <= 1.0))
            throw InvalidDefect("invalid defect: alpha must lie in (0, 1], got " +
                                std::to_string(alpha));
        if (!std::isfinite(b_field) || b_field < 0.0)
            throw InvalidParameter("b_field >= 0 violated");
        if (!std::isfinite(b_conversion) || b_conversion <= 0.0)
            throw InvalidParameter("b_conversion > 0 violated");
        if (!std::isfinite(xi) || xi < 0.0) throw InvalidParameter("xi >= 0 violated");
    }
};

// hbar*omega_c in eV.
inline double cyclotron_energy(const MoleculeParams& mol, const FieldConfig& fields) {
    return fields.b_conversion * fields.b_field / mol.mu;
}

// Every dimensionless quantity entering the closed-form spectrum and the
// partition function, for one (molecule, fields, m) combination.
//
// Lengths enter the magnetic terms through hbar*omega_c * 2mu/hbar^2, so
// Omega0 and Omega1 carry A^-1 and A^-2 scale factors that cancel against
// delta; the numbers are the ones the energy formula consumes.
struct DerivedCoefficients {
    double m = 0.0;             // angular quantum number (continuous)
    double A = 0.0;             // q^2 D_e / alpha, eV
    double B_coef = 0.0;        // D_e r_e^2 / alpha, eV A^2
    double C_coef = 0.0;        // 2 q D_e r_e / alpha, eV A
    double rho0 = 0.0;
    double rho1 = 0.0;
    double Omega0 = 0.0;
    double Omega1 = 0.0;
    double gamma = 0.0;         // (m/alpha + xi)^2 - 1/4
    double lambda_exp = 0.0;    // wavefunction exponent at n = 0
    double sigma_exp = 0.0;     // (1 - s) exponent, equals Q2
    double Q1 = 0.0;
    double Q2 = 0.0;
    double Lambda = 0.0;        // hbar^2 delta^2 / 8 mu, eV
    double Q0 = 0.0;            // eV
    double p1 = 0.0;
    double p2 = 0.0;
    double omega_c_hbar = 0.0;  // eV
    int n_max = -1;             // -1 when Q1 < Q2^2

    [[nodiscard]] bool has_bound_states() const noexcept { return n_max >= 0; }

    // Closed-form level at (continuous) vibrational index n.
    [[nodiscard]] double energy(double n) const noexcept {
        const double u = n + Q2;
        const double g = Q1 / u - u;
        return Q0 - Lambda * g * g;
    }
};

// Same as derive_coefficients but never throws for an empty ladder: n_max is
// left at -1 instead. Parameter invariants are not checked, which lets the
// finite-difference engine step b_field and m across their admissible
// boundaries. Throws DomainError when Q2 would be complex.
inline DerivedCoefficients compute_coefficients(const MoleculeParams& mol,
                                                const FieldConfig& fields, double m,
                                                const PhysicalConstants& pc = default_constants()) {
    DerivedCoefficients c;
    const double alpha = fields.alpha;
    const double delta = mol.delta;
    const double k2 = pc.two_mu_over_hbar2(mol.mu);  // 2 mu / hbar^2

    c.m = m;
    c.omega_c_hbar = fields.b_conversion * fields.b_field / mol.mu;
    c.A = mol.q * mol.q * mol.D_e / alpha;
    c.B_coef = mol.D_e * mol.r_e * mol.r_e / alpha;
    c.C_coef = 2.0 * mol.q * mol.D_e * mol.r_e / alpha;
    c.rho0 = k2 * c.B_coef;
    c.rho1 = k2 * c.C_coef / delta;

    // mu*omega_c/hbar, in 1/A.
    const double w = 0.5 * k2 * c.omega_c_hbar;
    c.Omega0 = (2.0 * w / delta) * (m / (alpha * alpha) + fields.xi / alpha);
    c.Omega1 = (w * w) / (delta * delta);

    const double nu = m / alpha + fields.xi;
    c.gamma = nu * nu - 0.25;

    c.Q1 = c.rho0 + c.rho1 + c.Omega1 - c.gamma;
    const double radicand = c.rho0 + c.Omega1 + c.Omega0 + nu * nu;
    if (!(radicand >= 0.0))
        throw DomainError("complex Q2: rho0 + Omega1 + Omega0 + (m/alpha + xi)^2 < 0");
    c.Q2 = 0.5 + std::sqrt(radicand);
    c.sigma_exp = c.Q2;

    c.Lambda = delta * delta / (4.0 * k2);
    c.Q0 = c.A + 4.0 * c.Lambda * c.gamma;
    c.p1 = c.Q1 / c.Q2 - c.Q2;

    if (c.Q1 >= c.Q2 * c.Q2) {
        const double root = std::floor(std::sqrt(c.Q1) - c.Q2);
        c.n_max = root < 0.0 ? 0 : static_cast<int>(root);
    } else {
        c.n_max = -1;
    }
    const double top = c.n_max + 1 + c.Q2;
    c.p2 = c.Q1 / top - top;
    c.lambda_exp = 0.5 * c.p1;
    return c;
}

// Validates the inputs and derives every coefficient. Throws InvalidDefect,
// InvalidParameter, or NoBoundStates.
inline DerivedCoefficients derive_coefficients(const MoleculeParams& mol,
                                               const FieldConfig& fields, double m,
                                               const PhysicalConstants& pc = default_constants()) {
    fields.validate();
    mol.validate();
    DerivedCoefficients c = compute_coefficients(mol, fields, m, pc);
    if (!c.has_bound_states())
        throw NoBoundStates("no bound states: Q1 = " + std::to_string(c.Q1) +
                            " < Q2^2 = " + std::to_string(c.Q2 * c.Q2) + " for '" +
                            mol.name + "'");
    return c;
}

} // namespace smkp
