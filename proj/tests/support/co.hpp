#pragma once

#include <string>

#include "smkp/smkp.hpp"

namespace testing_support {

// CO ground-state constants, built without going through the JSON loader.
inline smkp::MoleculeParams co(const smkp::PhysicalConstants& pc = smkp::default_constants()) {
    return {"CO", smkp::convert_wavenumber_to_ev(87471.43, pc), 1.1282,
            smkp::convert_amu_to_ev(6.860586, pc), 2.29940, 1.0};
}

inline smkp::FieldConfig fields(double b = 0.0, double xi = 0.0, double alpha = 1.0,
                                double kappa = smkp::kappa::table1) {
    smkp::FieldConfig f;
    f.b_field = b;
    f.xi = xi;
    f.alpha = alpha;
    f.b_conversion = kappa;
    return f;
}

inline std::string data_path(const std::string& file) {
    return std::string(SMKP_DATA_DIR) + "/" + file;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

} // namespace testing_support
