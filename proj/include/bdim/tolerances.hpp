#pragma once

#include <string>
#include <string_view>

namespace bdim {

/// Numerical tolerances and sampling budgets used across the library.
/// Defaults are the "default" profile; see profile() for the named variants.
struct Tolerances {
    // geometry
    double boundary_residual = 1e-9;      // implicit-equation residual accepted as "on the boundary"
    double projection_residual = 1e-12;   // residual guaranteed by project_to_boundary
    double closest_pair_step = 1e-12;     // alternating-projection movement threshold
    long closest_pair_max_iter = 100000;
    double hull_eps = 1e-9;               // signed-distance slack for hull membership
    int support_samples_2d = 10000;       // direction samples for support-function scans
    int support_samples_3d = 20000;

    // dynamics
    double tangent_discriminant = 1e-10;
    double grazing_cos = 1e-8;
    double flight_epsilon = 1e-9;         // roots below this are the departure point itself
    double k0_plus = 1e6;                 // point-source front curvature proxy

    // orbits
    double orbit_step = 1e-12;
    long orbit_max_sweeps = 10000;
    int orbit_inner_iter = 60;

    // constants
    int curvature_samples_2d = 10000;
    int curvature_samples_3d = 100000;

    std::string name = "default";

    static Tolerances profile(std::string_view name);
};

}  // namespace bdim
