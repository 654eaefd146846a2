// Partition function and entropy along beta, both methods side by side.
#include <cstdio>

#include "smkp/smkp.hpp"

int main() {
    const auto pc = smkp::default_constants();
    smkp::SweepGrid grid;
    grid.axis = smkp::SweepAxis::beta;
    grid.values = smkp::log_grid(1e-3, 1e-1, 9);
    grid.fixed.molecule = {"CO", smkp::convert_wavenumber_to_ev(87471.43, pc), 1.1282,
                           smkp::convert_amu_to_ev(6.860586, pc), 2.29940, 1.0};

    const auto direct = smkp::thermo_sweep(grid, smkp::PartitionMethod::direct);
    const auto closed = smkp::thermo_sweep(grid, smkp::PartitionMethod::closed_form);

    std::printf("%10s %14s %14s %10s %10s\n", "beta", "Z direct", "Z closed", "rel dev", "S");
    for (std::size_t i = 0; i < grid.values.size(); ++i) {
        std::printf("%10.4g %14.8g %14.8g %10.2e %10.5f\n", grid.values[i], direct[i].Z,
                    closed[i].Z, closed[i].Z / direct[i].Z - 1.0, direct[i].S);
    }
}
