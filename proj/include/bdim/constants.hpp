#pragma once

#include <string_view>
#include <vector>

#include "bdim/geometry.hpp"
#include "bdim/orbits.hpp"

namespace bdim {

enum class Mode { natural, adjusted };
std::string_view to_string(Mode m);

/// Which flight length bounds the per-pair collision angle:
/// cos phi_ij >= b_ij / d+_ij (pair) or b_ij / d_max (global).
enum class AngleFlightBound { pair, global };

struct ConstantsOptions {
    AngleFlightBound angle_bound = AngleFlightBound::pair;
    /// Cap natural-mode d+ by diam H.
    bool natural_dmax_from_hull = true;
};

/// Constants attached to the ordered pair (i, j): flights between K_i and
/// K_j, the angle bound at K_i for those flights, and curvature bounds of K_i.
struct PairConstants {
    std::size_t i = 0, j = 0;
    double d_minus = 0.0;
    double d_plus = 0.0;
    double b_minus = 0.0;
    double cos_phi_bound = 1.0;
    double kappa_minus_i = 0.0;
    double kappa_plus_i = 0.0;
};

struct ConstantsReport {
    Mode mode = Mode::natural;
    int dim = 2;
    std::size_t u = 0;
    std::vector<PairConstants> pairs;  // ordered pairs, (i, j) lexicographic, i != j
    double d_min = 0.0;
    double d_max = 0.0;
    double b_minus = 0.0;
    double cos_phi_plus = 1.0;
    double phi_plus = 0.0;
    double kappa_minus = 0.0;
    double kappa_plus = 0.0;
    double hull_diameter = 0.0;
    std::vector<double> kappa_minus_obstacle;
    std::vector<double> kappa_plus_obstacle;
    ClosestPairTable closest;
    ConvexPolytope hull;
    ConstantsOptions options;

    const PairConstants& pair(std::size_t i, std::size_t j) const;
};

ConstantsReport compute_constants(const Billiard& b, Mode mode, const ConstantsOptions& opts = {});

/// Curvature extremes of K over the boundary part inside `region`
/// (conservative: extremes include the sample ring just outside).
std::pair<double, double> restricted_curvature_range(const Obstacle& k, const ConvexPolytope& region,
                                                     const Tolerances& tol = {});

struct DomainRect {
    std::size_t i = 0, j = 0;
    double gamma_lo = 0.0, gamma_hi = 0.0;
    double theta_lo = 0.0, theta_hi = 0.0;
};

/// Which obstacle's curvature enters rectangle (i, j).
/// same: kappa_i with the angle bound at K_i (the rectangle as defined for the domain);
/// partner: kappa_j with the angle bound at K_i (literal reading of the g_max formula).
enum class CurvaturePairing { same, partner };

struct DomainD {
    int iota = 0;
    bool natural = false;
    std::vector<DomainRect> rects;
};

DomainD build_domain(const ConstantsReport& report, int dim,
                     CurvaturePairing pairing = CurvaturePairing::same);

}  // namespace bdim
