#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

using namespace smkp;
using namespace smkp::cli;

namespace {

void add_common(CLI::App* sub, CommonOptions& c) {
    sub->add_option("--molecule", c.molecule, "Molecule name in the database")
        ->capture_default_str();
    sub->add_option("--db", c.db, "Molecule database (default: $SMKP_DB, then bundled file)");
    sub->add_option("--constants", c.constants, "Constants preset: default|codata|tabulated")
        ->capture_default_str();
    sub->add_option("--out", c.out, "Output CSV path (a .manifest.json sidecar is written)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Screened modified Kratzer spectra and thermo-magnetic properties"};
    app.require_subcommand(1);
    app.set_version_flag("--version", version_string);

    SpectrumOptions so;
    auto* spectrum = app.add_subcommand("spectrum", "Energy levels as CSV");
    add_common(spectrum, so.common);
    spectrum->add_option("--mode", so.mode, "2d (n, m) or 3d (n, l)")->capture_default_str();
    spectrum->add_option("--n", so.n, "Vibrational levels, e.g. 0..3")->capture_default_str();
    spectrum->add_option("--m", so.m, "Magnetic quantum numbers, e.g. -1,0,1 (2d)");
    spectrum->add_option("--l", so.l, "Rotational quantum numbers, e.g. 0..5 (3d)");
    auto* sb = spectrum->add_option("--B", so.b_field, "Magnetic field [T]");
    auto* sk = spectrum->add_option("--kappa", so.kappa, "Field coupling kappa");
    auto* sx = spectrum->add_option("--xi", so.xi, "Aharonov-Bohm flux ratio");
    auto* sa = spectrum->add_option("--alpha", so.alpha, "Defect parameter in (0, 1]");
    spectrum->add_option("--q", so.q, "Override the molecule's q");
    spectrum->add_flag("--full-triangle", so.full_triangle, "3d: also emit l > n");

    ThermoOptions to;
    auto* thermo = app.add_subcommand("thermo", "Thermo-magnetic observables as CSV");
    add_common(thermo, to.common);
    thermo->add_option("--axis", to.axis, "Swept axis: beta|alpha|B|xi")->capture_default_str();
    thermo->add_option("--beta", to.beta, "Scalar or lo:hi:count[:log], 1/eV");
    thermo->add_option("--alpha", to.alpha, "Scalar or lo:hi:count[:log]");
    thermo->add_option("--B", to.b_field, "Scalar or lo:hi:count[:log], T");
    thermo->add_option("--xi", to.xi, "Scalar or lo:hi:count[:log]");
    thermo->add_option("--m", to.m, "Magnetic quantum number")->capture_default_str();
    thermo->add_option("--kappa", to.kappa, "Field coupling kappa");
    thermo->add_option("--method", to.method, "direct|closed|both")->capture_default_str();

    PotentialOptions po;
    auto* potential = app.add_subcommand("potential", "Effective potential as CSV");
    add_common(potential, po.common);
    potential->add_option("--r", po.r, "Radial grid lo:hi:count, A")->capture_default_str();
    potential->add_option("--mode", po.mode, "exact|greene_aldrich")->capture_default_str();
    potential->add_option("--m", po.m, "Magnetic quantum number")->capture_default_str();
    potential->add_option("--B", po.b_field, "Magnetic field [T]");
    potential->add_option("--kappa", po.kappa, "Field coupling kappa");
    potential->add_option("--xi", po.xi, "Aharonov-Bohm flux ratio");
    potential->add_option("--alpha", po.alpha, "Defect parameter in (0, 1]");

    ValidateOptions vo;
    auto* validate = app.add_subcommand("validate", "Recompute the bundled reference tables");
    add_common(validate, vo.common);
    validate->add_option("--table", vo.table, "1|2|all")->capture_default_str();
    validate->add_option("--kappa", vo.kappa, "Field coupling for the magnetic blocks");
    validate->add_flag("--calibrate-kappa", vo.calibrate,
                       "Fit kappa on the B=6 T, xi=0, alpha=1 block first");
    validate->add_option("--table1", vo.table1_path, "Table 1 CSV")->capture_default_str();
    validate->add_option("--table2", vo.table2_path, "Table 2 CSV")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*spectrum) {
            so.fields_given = sb->count() + sk->count() + sx->count() + sa->count() > 0;
            return cmd_spectrum(so, std::cout, std::cerr);
        }
        if (*thermo) return cmd_thermo(to, std::cout, std::cerr);
        if (*potential) return cmd_potential(po, std::cout, std::cerr);
        if (*validate) return cmd_validate(vo, std::cout, std::cerr);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const CalibrationFailure& e) {
        std::cerr << "calibration failure: " << e.what() << '\n';
        return exit_validation;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_domain;
    }
    return exit_usage;
}
