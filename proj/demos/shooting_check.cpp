// Numerov eigenvalues against the closed-form levels, and the size of the
// Greene-Aldrich approximation for the ground state.
#include <cstdio>

#include "smkp/smkp.hpp"

int main() {
    const auto pc = smkp::default_constants();
    const smkp::MoleculeParams co{"CO", smkp::convert_wavenumber_to_ev(87471.43, pc), 1.1282,
                                  smkp::convert_amu_to_ev(6.860586, pc), 2.29940, 1.0};
    const smkp::FieldConfig fields;

    smkp::ShootingConfig cfg;
    const auto states = smkp::numerov_states(co, fields, 0, 4, cfg, pc);
    for (std::size_t n = 0; n < states.size(); ++n) {
        const double analytic = smkp::energy_2d(co, fields, static_cast<int>(n), 0, pc).energy;
        std::printf("n=%zu  numerov %.10f  analytic %.10f  nodes %d\n", n, states[n].energy,
                    analytic, states[n].nodes);
    }

    cfg.centrifugal_mode = smkp::CentrifugalMode::exact;
    const double exact = smkp::numerov_eigenvalues(co, fields, 0, 1, cfg, pc).front();
    std::printf("ground state with the exact centrifugal term: %.10f eV (shift %+.6f)\n", exact,
                exact - states.front().energy);
}
