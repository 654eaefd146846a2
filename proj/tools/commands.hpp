#pragma once

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "smkp/io.hpp"
#include "smkp/smkp.hpp"
#include "smkp/validation.hpp"

#ifndef SMKP_DATA_DIR
#define SMKP_DATA_DIR "data"
#endif

namespace smkp::cli {

enum ExitCode : int { exit_ok = 0, exit_usage = 2, exit_domain = 3, exit_validation = 4 };

class UsageError : public Error {
public:
    using Error::Error;
};

// ---- argument grammar ------------------------------------------------------

// "a..b", "a", or a comma list of either: "-1,0,1", "0..3,7".
inline std::vector<int> parse_int_list(const std::string& spec) {
    std::vector<int> out;
    std::stringstream ss(spec);
    std::string item;
    auto to_int = [&](const std::string& s) {
        std::size_t pos = 0;
        int v = 0;
        try {
            v = std::stoi(s, &pos);
        } catch (const std::exception&) {
            pos = std::string::npos;
        }
        if (pos != s.size()) throw UsageError("not an integer: '" + s + "' in '" + spec + "'");
        return v;
    };
    while (std::getline(ss, item, ',')) {
        const auto dots = item.find("..", 1);
        if (dots == std::string::npos) {
            out.push_back(to_int(item));
            continue;
        }
        const int lo = to_int(item.substr(0, dots));
        const int hi = to_int(item.substr(dots + 2));
        if (hi < lo) throw UsageError("empty range '" + item + "'");
        for (int v = lo; v <= hi; ++v) out.push_back(v);
    }
    if (out.empty()) throw UsageError("empty list '" + spec + "'");
    return out;
}

inline double parse_real(const std::string& s) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        pos = std::string::npos;
    }
    if (pos != s.size()) throw UsageError("not a number: '" + s + "'");
    return v;
}

// A scalar "x" or a grid "lo:hi:count[:log]".
inline std::vector<double> parse_grid(const std::string& spec) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string p;
    while (std::getline(ss, p, ':')) parts.push_back(p);
    if (parts.size() == 1) return {parse_real(parts[0])};
    if (parts.size() < 3 || parts.size() > 4)
        throw UsageError("grid must be 'lo:hi:count[:log]', got '" + spec + "'");
    const double lo = parse_real(parts[0]);
    const double hi = parse_real(parts[1]);
    const double count = parse_real(parts[2]);
    if (count < 1 || count != std::floor(count))
        throw UsageError("grid count must be a positive integer in '" + spec + "'");
    if (count > 1 && !(hi > lo)) throw UsageError("grid needs hi > lo in '" + spec + "'");
    if (parts.size() == 4) {
        if (parts[3] != "log") throw UsageError("unknown grid spacing '" + parts[3] + "'");
        if (!(lo > 0.0)) throw UsageError("log grid needs lo > 0 in '" + spec + "'");
        return log_grid(lo, hi, static_cast<int>(count));
    }
    return linear_grid(lo, hi, static_cast<int>(count));
}

// ---- shared context ----------------------------------------------------------

struct CommonOptions {
    std::string molecule = "CO";
    std::string db;            // empty: $SMKP_DB, then the bundled database
    std::string constants = "default";
    std::string out;           // empty: stdout
};

inline std::string default_db_path() {
    if (const char* env = std::getenv("SMKP_DB"); env && *env) return env;
    return std::string(SMKP_DATA_DIR) + "/molecules.json";
}

inline PhysicalConstants resolve_constants(const std::string& name) {
    auto pc = constants_by_name(name);
    if (!pc) throw UsageError("unknown constants preset '" + name + "' (default|codata|tabulated)");
    return *pc;
}

inline MoleculeParams resolve_molecule(const CommonOptions& o, const PhysicalConstants& pc) {
    const std::string path = o.db.empty() ? default_db_path() : o.db;
    const auto all = load_molecules(path, pc);
    auto mol = find_molecule(all, o.molecule);
    if (!mol) throw UsageError("molecule '" + o.molecule + "' not found in '" + path + "'");
    return *mol;
}

// Writes the data section to --out (plus its manifest) or to stdout.
inline void emit(const CommonOptions& o, const std::string& data, RunManifest manifest,
                 std::ostream& stdout_) {
    if (o.out.empty()) {
        stdout_ << data;
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw IoError("cannot write '" + o.out + "'");
    f << data;
    manifest.timestamp = iso8601_now();
    write_manifest(manifest, o.out);
}

inline nlohmann::json molecule_json(const MoleculeParams& m) {
    return {{"name", m.name}, {"D_e_eV", m.D_e}, {"r_e_A", m.r_e},
            {"mu_eV", m.mu},  {"delta_A1", m.delta}, {"q", m.q}};
}

inline nlohmann::json constants_json(const PhysicalConstants& pc) {
    return {{"preset", pc.name}, {"hbar_c_eV_A", pc.hbar_c}, {"amu_eV", pc.amu},
            {"wavenumber_eV", pc.wavenumber}};
}

// ---- spectrum ------------------------------------------------------------------

struct SpectrumOptions {
    CommonOptions common;
    std::string mode = "2d";
    std::string n = "0..3";
    std::optional<std::string> m;
    std::optional<std::string> l;
    double b_field = 0.0;
    std::optional<double> kappa;
    double xi = 0.0;
    double alpha = 1.0;
    std::optional<double> q;
    bool full_triangle = false;  // 3d: emit ell > n as well
    bool fields_given = false;   // any of --B/--xi/--alpha/--kappa was passed
};

inline int cmd_spectrum(const SpectrumOptions& o, std::ostream& out, std::ostream& err) {
    if (o.mode != "2d" && o.mode != "3d") throw UsageError("--mode must be 2d or 3d");
    if (o.mode == "2d" && o.l) throw UsageError("--l requires --mode 3d");
    if (o.mode == "3d" && o.m) throw UsageError("--m requires --mode 2d");
    if (o.mode == "3d" && o.fields_given)
        throw UsageError("--mode 3d is field-free; drop --B/--xi/--alpha/--kappa");

    const auto pc = resolve_constants(o.common.constants);
    MoleculeParams mol = resolve_molecule(o.common, pc);
    if (o.q) mol.q = *o.q;
    const auto n_values = parse_int_list(o.n);

    FieldConfig fields;
    fields.b_field = o.b_field;
    fields.b_conversion = o.kappa.value_or(kappa::table1);
    fields.xi = o.xi;
    fields.alpha = o.alpha;

    SpectrumTable table;
    if (o.mode == "2d") {
        fields.validate();
        const auto m_list = parse_int_list(o.m.value_or("0"));
        table = spectrum_table(mol, fields, n_values, m_list, pc);
    } else {
        const auto l_list = parse_int_list(o.l.value_or("0"));
        table = spectrum_table_3d(mol, n_values, l_list, !o.full_triangle, pc);
    }

    std::ostringstream data;
    CsvWriter csv(data);
    csv.row({"n", "m_or_l", "E_eV", "bound"});
    bool failed = false;
    for (const auto& r : table.rows) {
        const double e = r.ok() && r.energy ? *r.energy : std::numeric_limits<double>::quiet_NaN();
        csv.row({std::to_string(r.n), std::to_string(static_cast<int>(r.angular)),
                 format_number(e), r.bound ? "1" : "0"});
        if (!r.ok()) {
            failed = true;
            err << "n=" << r.n << " " << (o.mode == "2d" ? "m=" : "l=")
                << static_cast<int>(r.angular) << ": " << r.error << '\n';
        }
    }

    RunManifest manifest;
    manifest.command = "spectrum";
    manifest.parameters = {{"molecule", molecule_json(mol)},
                           {"constants", constants_json(pc)},
                           {"mode", o.mode},
                           {"n", o.n},
                           {"angular", o.mode == "2d" ? o.m.value_or("0") : o.l.value_or("0")},
                           {"full_triangle", o.full_triangle}};
    if (o.mode == "2d")
        manifest.parameters["fields"] = {{"B_T", fields.b_field},
                                         {"kappa", fields.b_conversion},
                                         {"xi", fields.xi},
                                         {"alpha", fields.alpha}};
    emit(o.common, data.str(), manifest, out);
    return failed ? exit_domain : exit_ok;
}

// ---- thermo --------------------------------------------------------------------

struct ThermoOptions {
    CommonOptions common;
    std::string axis = "beta";
    std::optional<std::string> beta, alpha, b_field, xi;
    int m = 0;
    std::optional<double> kappa;
    std::string method = "both";
};

inline int cmd_thermo(const ThermoOptions& o, std::ostream& out, std::ostream&) {
    SweepAxis axis;
    if (o.axis == "beta") axis = SweepAxis::beta;
    else if (o.axis == "alpha") axis = SweepAxis::alpha;
    else if (o.axis == "B") axis = SweepAxis::b_field;
    else if (o.axis == "xi") axis = SweepAxis::xi;
    else throw UsageError("--axis must be beta|alpha|B|xi");

    std::vector<PartitionMethod> methods;
    if (o.method == "direct" || o.method == "both") methods.push_back(PartitionMethod::direct);
    if (o.method == "closed" || o.method == "both") methods.push_back(PartitionMethod::closed_form);
    if (methods.empty()) throw UsageError("--method must be direct|closed|both");

    const auto pc = resolve_constants(o.common.constants);
    SweepGrid grid;
    grid.axis = axis;
    grid.fixed.molecule = resolve_molecule(o.common, pc);
    grid.fixed.constants = pc;
    grid.fixed.m = o.m;
    grid.fixed.fields.b_conversion = o.kappa.value_or(kappa::table1);

    auto take = [&](const std::optional<std::string>& spec, SweepAxis which, double fallback,
                    const char* flag) {
        std::vector<double> v;
        if (spec) v = parse_grid(*spec);
        else if (which == SweepAxis::beta && axis == SweepAxis::beta) v = default_beta_grid();
        else v = {fallback};
        if (which == axis) {
            grid.values = v;
            return v.front();
        }
        if (v.size() != 1)
            throw UsageError(std::string(flag) + " is a grid but --axis is " + o.axis);
        return v.front();
    };
    grid.fixed.beta = take(o.beta, SweepAxis::beta, 1.0, "--beta");
    grid.fixed.fields.alpha = take(o.alpha, SweepAxis::alpha, 1.0, "--alpha");
    grid.fixed.fields.b_field = take(o.b_field, SweepAxis::b_field, 0.0, "--B");
    grid.fixed.fields.xi = take(o.xi, SweepAxis::xi, 0.0, "--xi");
    grid.validate();

    std::vector<std::vector<ThermoPoint>> results;
    for (auto meth : methods) results.push_back(thermo_sweep(grid, meth));

    std::ostringstream data;
    CsvWriter csv(data);
    csv.row({"axis_value", "method", "Z", "F", "U", "S", "C", "M", "chi", "I", "flags"});
    for (std::size_t i = 0; i < grid.values.size(); ++i) {
        for (const auto& series : results) {
            const ThermoPoint& p = series[i];
            csv.row({format_number(grid.values[i]), to_string(p.method), format_number(p.Z),
                     format_number(p.F), format_number(p.U), format_number(p.S),
                     format_number(p.C), format_number(p.M), format_number(p.chi),
                     format_number(p.I_current), flags_to_string(p.flags)});
        }
    }

    RunManifest manifest;
    manifest.command = "thermo";
    manifest.parameters = {{"molecule", molecule_json(grid.fixed.molecule)},
                           {"constants", constants_json(pc)},
                           {"axis", o.axis},
                           {"values", grid.values},
                           {"method", o.method},
                           {"m", o.m},
                           {"beta", grid.fixed.beta},
                           {"fields",
                            {{"B_T", grid.fixed.fields.b_field},
                             {"kappa", grid.fixed.fields.b_conversion},
                             {"xi", grid.fixed.fields.xi},
                             {"alpha", grid.fixed.fields.alpha}}}};
    emit(o.common, data.str(), manifest, out);
    return exit_ok;
}

// ---- potential -----------------------------------------------------------------

struct PotentialOptions {
    CommonOptions common;
    std::string r = "0.8:3:221";
    std::string mode = "greene_aldrich";
    int m = 0;
    double b_field = 0.0;
    std::optional<double> kappa;
    double xi = 0.0;
    double alpha = 1.0;
};

inline int cmd_potential(const PotentialOptions& o, std::ostream& out, std::ostream&) {
    CentrifugalMode mode;
    if (o.mode == "exact") mode = CentrifugalMode::exact;
    else if (o.mode == "greene_aldrich") mode = CentrifugalMode::greene_aldrich;
    else throw UsageError("--mode must be exact|greene_aldrich");

    const auto pc = resolve_constants(o.common.constants);
    const MoleculeParams mol = resolve_molecule(o.common, pc);
    FieldConfig fields;
    fields.b_field = o.b_field;
    fields.b_conversion = o.kappa.value_or(kappa::table1);
    fields.xi = o.xi;
    fields.alpha = o.alpha;
    const auto r = parse_grid(o.r);
    const RadialProfile prof = effective_potential_profile(mol, fields, o.m, r, mode, pc);

    std::ostringstream data;
    CsvWriter csv(data);
    csv.row({"r_A", "V_eff_eV"});
    for (std::size_t i = 0; i < r.size(); ++i)
        csv.row({format_number(prof.r_grid[i]), format_number(prof.values[i])});

    RunManifest manifest;
    manifest.command = "potential";
    manifest.parameters = {{"molecule", molecule_json(mol)},
                           {"constants", constants_json(pc)},
                           {"r", o.r},
                           {"mode", o.mode},
                           {"m", o.m},
                           {"fields",
                            {{"B_T", fields.b_field},
                             {"kappa", fields.b_conversion},
                             {"xi", fields.xi},
                             {"alpha", fields.alpha}}}};
    emit(o.common, data.str(), manifest, out);
    return exit_ok;
}

// ---- validate ------------------------------------------------------------------

struct ValidateOptions {
    CommonOptions common;
    std::string table = "all";
    std::optional<double> kappa;
    bool calibrate = false;
    std::string table1_path = std::string(SMKP_DATA_DIR) + "/table1.csv";
    std::string table2_path = std::string(SMKP_DATA_DIR) + "/table2.csv";
};

inline int cmd_validate(const ValidateOptions& o, std::ostream& out, std::ostream& err) {
    if (o.table != "1" && o.table != "2" && o.table != "all")
        throw UsageError("--table must be 1, 2 or all");
    if (o.kappa && o.calibrate) throw UsageError("--kappa and --calibrate-kappa are exclusive");

    const auto pc = resolve_constants(o.common.constants);
    const MoleculeParams mol = resolve_molecule(o.common, pc);

    std::ostringstream data;
    data << "# constants " << pc.name << "; kappa presets: si=" << format_number(kappa::si)
         << " table1=" << format_number(kappa::table1) << '\n';
    std::vector<BlockReport> reports;

    if (o.table == "1" || o.table == "all") {
        const auto entries = load_table1(o.table1_path);
        std::optional<double> kappa = o.kappa;
        if (o.calibrate) {
            std::vector<Table1Entry> fit_block;
            for (const auto& e : entries)
                if (e.b_field == 6.0 && e.xi == 0.0 && e.alpha == 1.0) fit_block.push_back(e);
            const KappaFit fit = calibrate_kappa(mol, fit_block, pc);
            kappa = fit.kappa;
            data << "# calibrated kappa=" << format_number(fit.kappa)
                 << " on B=6 T, xi=0, alpha=1 (rms_rel=" << format_number(fit.rms_rel)
                 << ", max_rel=" << format_number(fit.max_rel) << ", iterations="
                 << fit.iterations << ")\n";
        } else if (kappa) {
            data << "# kappa=" << format_number(*kappa) << '\n';
        }
        auto t1 = validate_table1(mol, entries, kappa, pc);
        reports.insert(reports.end(), t1.begin(), t1.end());
    }
    if (o.table == "2" || o.table == "all") {
        auto t2 = validate_table2(mol, load_table2(o.table2_path), pc);
        reports.insert(reports.end(), t2.begin(), t2.end());
    }

    CsvWriter csv(data);
    csv.row({"block", "count", "max_abs_eV", "max_rel", "tolerance", "status"});
    bool failed = false;
    for (const auto& r : reports) {
        const std::string status = r.skipped ? "skipped" : r.pass ? "pass" : "FAIL";
        failed = failed || (!r.skipped && !r.pass);
        csv.row({"\"" + r.label + "\"", std::to_string(r.count),
                 r.skipped ? "" : format_number(r.max_abs),
                 r.skipped ? "" : format_number(r.max_rel),
                 format_number(r.tolerance) + (r.relative ? " rel" : " eV"), status});
        if (!r.note.empty()) err << r.label << ": " << r.note << '\n';
    }

    RunManifest manifest;
    manifest.command = "validate";
    manifest.parameters = {{"molecule", molecule_json(mol)},
                           {"constants", constants_json(pc)},
                           {"table", o.table},
                           {"calibrate_kappa", o.calibrate},
                           {"table1", o.table1_path},
                           {"table2", o.table2_path}};
    if (o.kappa) manifest.parameters["kappa"] = *o.kappa;
    emit(o.common, data.str(), manifest, out);
    return failed ? exit_validation : exit_ok;
}

} // namespace smkp::cli
