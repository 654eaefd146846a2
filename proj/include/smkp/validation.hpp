#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "smkp/io.hpp"
#include "smkp/spectrum.hpp"

namespace smkp {

class CalibrationFailure : public Error {
public:
    using Error::Error;
};

struct KappaFit {
    double kappa = 0.0;
    double rms_rel = 0.0;  // root-mean-square relative residual on the fit block
    double max_rel = 0.0;
    int iterations = 0;
};

namespace detail {

inline FieldConfig fields_of(const Table1Entry& e, double kappa) {
    FieldConfig f;
    f.b_field = e.b_field;
    f.xi = e.xi;
    f.alpha = e.alpha;
    f.b_conversion = kappa;
    return f;
}

inline std::vector<double> relative_residuals(const MoleculeParams& mol,
                                              const std::vector<Table1Entry>& block, double kappa,
                                              const PhysicalConstants& pc) {
    std::vector<double> r;
    r.reserve(block.size());
    for (const auto& e : block)
        r.push_back(energy_2d(mol, fields_of(e, kappa), e.n, e.m, pc).energy / e.energy - 1.0);
    return r;
}

inline double sum_squares(const std::vector<double>& r) {
    double s = 0.0;
    for (double x : r) s += x * x;
    return s;
}

} // namespace detail

// Least-squares fit of the single coupling kappa on one magnetic block:
// coarse scan in log10(kappa) over [0, 12], then Gauss-Newton in ln(kappa).
inline KappaFit calibrate_kappa(const MoleculeParams& mol, const std::vector<Table1Entry>& block,
                                const PhysicalConstants& pc = default_constants()) {
    if (block.empty()) throw CalibrationFailure("calibration block is empty");
    for (const auto& e : block)
        if (!e.magnetic()) throw CalibrationFailure("calibration block must have B > 0");

    auto ssr = [&](double kappa) {
        try {
            return detail::sum_squares(detail::relative_residuals(mol, block, kappa, pc));
        } catch (const Error&) {
            return std::numeric_limits<double>::infinity();
        }
    };
    double best_u = std::numeric_limits<double>::quiet_NaN();
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 240; ++i) {
        const double lg = 0.05 * i;
        const double s = ssr(std::pow(10.0, lg));
        if (s < best) {
            best = s;
            best_u = lg * std::log(10.0);
        }
    }
    if (!std::isfinite(best)) throw CalibrationFailure("no kappa in [1, 1e12] gives bound levels");

    double u = best_u;
    KappaFit fit;
    for (int it = 1; it <= 100; ++it) {
        constexpr double du = 1e-6;
        std::vector<double> r, rp, rm;
        try {
            r = detail::relative_residuals(mol, block, std::exp(u), pc);
            rp = detail::relative_residuals(mol, block, std::exp(u + du), pc);
            rm = detail::relative_residuals(mol, block, std::exp(u - du), pc);
        } catch (const Error& e) {
            throw CalibrationFailure(std::string("calibration left the bound region: ") + e.what());
        }
        double jr = 0.0, jj = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i) {
            const double j = (rp[i] - rm[i]) / (2.0 * du);
            jr += j * r[i];
            jj += j * j;
        }
        if (!(jj > 0.0)) throw CalibrationFailure("calibration: residuals do not depend on kappa");
        const double step = -jr / jj;
        u += step;
        fit.iterations = it;
        if (std::abs(step) < 1e-13) break;
        if (it == 100) throw CalibrationFailure("calibration did not converge in 100 iterations");
    }
    fit.kappa = std::exp(u);
    const auto r = detail::relative_residuals(mol, block, fit.kappa, pc);
    fit.rms_rel = std::sqrt(detail::sum_squares(r) / static_cast<double>(r.size()));
    for (double x : r) fit.max_rel = std::max(fit.max_rel, std::abs(x));
    if (!std::isfinite(fit.kappa) || !std::isfinite(fit.rms_rel))
        throw CalibrationFailure("calibration produced a non-finite result");
    return fit;
}

struct BlockReport {
    std::string label;
    int count = 0;
    double max_abs = 0.0;  // eV
    double max_rel = 0.0;
    double tolerance = 0.0;
    bool relative = true;  // tolerance applies to max_rel, else to max_abs
    bool skipped = false;
    bool pass = false;
    std::string note;
};

inline std::string table1_label(const Table1Entry& e) {
    return "table1 block " + std::to_string(e.block) + " (B=" + format_number(e.b_field) +
           " T, xi=" + format_number(e.xi) + ", alpha=" + format_number(e.alpha) + ")";
}

inline constexpr double table1_zero_field_tol = 1e-3;
inline constexpr double table1_magnetic_tol = 5e-3;
inline constexpr double table2_abs_tol = 1e-5;

namespace detail {
inline void accumulate(BlockReport& rep, double computed, double reference) {
    ++rep.count;
    const double d = std::abs(computed - reference);
    rep.max_abs = std::max(rep.max_abs, d);
    rep.max_rel = std::max(rep.max_rel, d / std::abs(reference));
}
inline void finish(BlockReport& rep) {
    rep.pass = !rep.skipped && (rep.relative ? rep.max_rel : rep.max_abs) <= rep.tolerance;
}
} // namespace detail

// One report per block, in block order. Magnetic blocks are skipped unless a
// kappa is supplied.
inline std::vector<BlockReport> validate_table1(const MoleculeParams& mol,
                                                const std::vector<Table1Entry>& entries,
                                                std::optional<double> kappa,
                                                const PhysicalConstants& pc = default_constants()) {
    std::map<int, BlockReport> blocks;
    for (const auto& e : entries) {
        auto [it, fresh] = blocks.try_emplace(e.block);
        BlockReport& rep = it->second;
        if (fresh) {
            rep.label = table1_label(e);
            rep.tolerance = e.magnetic() ? table1_magnetic_tol : table1_zero_field_tol;
            rep.skipped = e.magnetic() && !kappa;
            if (rep.skipped) rep.note = "magnetic block: pass --kappa or --calibrate-kappa";
        }
        if (rep.skipped) {
            ++rep.count;
            continue;
        }
        try {
            const auto f = detail::fields_of(e, kappa.value_or(kappa::table1));
            detail::accumulate(rep, energy_2d(mol, f, e.n, e.m, pc).energy, e.energy);
        } catch (const Error& err) {
            ++rep.count;
            rep.max_abs = rep.max_rel = std::numeric_limits<double>::infinity();
            rep.note = err.what();
        }
    }
    std::vector<BlockReport> out;
    for (auto& [_, rep] : blocks) {
        detail::finish(rep);
        out.push_back(std::move(rep));
    }
    return out;
}

// One report per q value, in file order.
inline std::vector<BlockReport> validate_table2(const MoleculeParams& mol,
                                                const std::vector<Table2Entry>& entries,
                                                const PhysicalConstants& pc = default_constants()) {
    std::vector<BlockReport> out;
    for (const auto& e : entries) {
        const std::string label = "table2 q=" + format_number(e.q);
        if (out.empty() || out.back().label != label) {
            BlockReport rep;
            rep.label = label;
            rep.tolerance = table2_abs_tol;
            rep.relative = false;
            out.push_back(rep);
        }
        BlockReport& rep = out.back();
        try {
            detail::accumulate(rep, energy_3d(mol, e.n, e.ell, e.q, pc).energy, e.energy);
        } catch (const Error& err) {
            ++rep.count;
            rep.max_abs = rep.max_rel = std::numeric_limits<double>::infinity();
            rep.note = err.what();
        }
    }
    for (auto& rep : out) detail::finish(rep);
    return out;
}

} // namespace smkp
