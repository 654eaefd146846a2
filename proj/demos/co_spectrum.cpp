// Low-lying CO levels with and without the external fields.
#include <cstdio>

#include "smkp/smkp.hpp"

int main() {
    const auto pc = smkp::default_constants();
    smkp::MoleculeParams co{"CO", smkp::convert_wavenumber_to_ev(87471.43, pc), 1.1282,
                            smkp::convert_amu_to_ev(6.860586, pc), 2.29940, 1.0};

    smkp::FieldConfig free_space;
    smkp::FieldConfig triad;
    triad.b_field = 6.0;
    triad.xi = 6.0;
    triad.alpha = 0.6;

    std::printf("%3s %3s %12s %12s\n", "m", "n", "free [eV]", "B,xi,alpha");
    for (int m : {-1, 0, 1}) {
        for (int n = 0; n <= 3; ++n) {
            std::printf("%3d %3d %12.7f %12.7f\n", m, n,
                        smkp::energy_2d(co, free_space, n, m, pc).energy,
                        smkp::energy_2d(co, triad, n, m, pc).energy);
        }
    }

    const auto c = smkp::derive_coefficients(co, free_space, 0, pc);
    std::printf("\nn_max = %d (Q1 = %.3f, Q2 = %.3f)\n", c.n_max, c.Q1, c.Q2);
    std::printf("E_00 in 3D, q = 1: %.7f eV\n", smkp::energy_3d(co, 0, 0).energy);
}
