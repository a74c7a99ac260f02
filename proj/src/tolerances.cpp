#include "bdim/tolerances.hpp"

#include "bdim/error.hpp"

namespace bdim {

Tolerances Tolerances::profile(std::string_view name) {
    Tolerances t;
    if (name == "default") return t;
    if (name == "strict") {
        t.boundary_residual = 1e-11;
        t.closest_pair_max_iter = 1000000;
        t.orbit_max_sweeps = 100000;
        t.support_samples_2d = 40000;
        t.support_samples_3d = 80000;
        t.curvature_samples_2d = 40000;
        t.curvature_samples_3d = 250000;
        t.name = "strict";
        return t;
    }
    if (name == "fast") {
        t.support_samples_2d = 2000;
        t.support_samples_3d = 5000;
        t.curvature_samples_2d = 2000;
        t.curvature_samples_3d = 20000;
        t.orbit_max_sweeps = 2000;
        t.name = "fast";
        return t;
    }
    raise(ErrorKind::invalid_input, "unknown tolerance profile '" + std::string(name) + "'");
}

}  // namespace bdim
