#pragma once

#include <string_view>
#include <vector>

#include "bdim/constants.hpp"
#include "bdim/dynamics.hpp"
#include "bdim/orbits.hpp"

namespace bdim {

/// x -> x / (1 + theta x) + 2 gamma.
double f_map(double gamma, double theta, double x);
/// Positive fixed point gamma + sqrt(gamma^2 + 2 gamma / theta).
double g(double gamma, double theta);

struct GPoint {
    double gamma = 0.0, theta = 0.0;
    std::size_t i = 0, j = 0;
};

struct GExtrema {
    double g_min = 0.0, g_max = 0.0;
    GPoint argmin, argmax;
};

/// g is non-decreasing in gamma and decreasing in theta, so the extremes over
/// a union of rectangles sit at the (gamma_lo, theta_hi) and (gamma_hi, theta_lo) corners.
GExtrema g_extrema(const DomainD& domain);

struct ConstantChain {
    double lambda1 = 0.0, mu1 = 0.0;
    double lambda0 = 0.0, mu0 = 0.0;
    double delta_minus = 0.0;
};

ConstantChain constant_chain(const GExtrema& gx, const ConstantsReport& report,
                             double k0_plus = Tolerances{}.k0_plus);

struct Interval {
    double lower = 0.0, upper = 0.0;
};

Interval dimension_bounds_eq1(std::size_t u, double lambda1, double mu1);

struct HolderAlpha {
    double raw = 0.0;    // 2 d_min ln mu1 / (d_max ln lambda1)
    double value = 0.0;  // min(raw, 1)
    bool clamped = false;
};

HolderAlpha holder_alpha(double d_min, double d_max, double lambda1, double mu1);
Interval dimension_bounds_eq2(std::size_t u, double lambda1, double mu1, double alpha);
/// The alpha-scaled estimate written out with the unclamped exponent.
Interval dimension_bounds_general(std::size_t u, double lambda1, double mu1, double d_min,
                                  double d_max);
/// lambda1^d_max < mu1^(2 d_min), evaluated in log form.
bool pinching_check(double lambda1, double mu1, double d_min, double d_max);

/// Hausdorff dimension of a cylinder of the one-sided shift on u symbols
/// under d_theta: -ln(u - 1) / ln theta.
double symbol_space_dim(std::size_t u, double theta);
/// d_theta on one-sided sequences: theta^n with n the length of the common prefix.
double symbol_distance(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b,
                       double theta);

/// Itinerary of the struck obstacles along a trajectory.
SymbolSequence code_trajectory(const Trajectory& t);

enum class Variant { two_sided_eq1, alpha_scaled_eq2, general_eq7 };
std::string_view to_string(Variant v);

struct DimensionBounds {
    Variant variant = Variant::two_sided_eq1;
    double lambda1 = 0.0, mu1 = 0.0;
    double alpha = 1.0;
    double lower = 0.0, upper = 0.0;
    bool pinching_satisfied = false;
    double lambda0 = 0.0, mu0 = 0.0, delta_minus = 0.0;
};

struct EstimateOptions {
    ConstantsOptions constants;
    CurvaturePairing pairing = CurvaturePairing::same;
    double k0_plus = Tolerances{}.k0_plus;
};

struct Estimate {
    ConstantsReport constants;
    DomainD domain;
    GExtrema extrema;
    ConstantChain chain;
    HolderAlpha alpha;
    bool pinching = false;
    std::vector<DimensionBounds> bounds;  // eq1, eq2, eq7

    const DimensionBounds& variant(Variant v) const;
};

/// Constants -> domain -> g extrema -> lambda/mu chain -> bounds.
Estimate estimate_dimension(const Billiard& b, Mode mode, const EstimateOptions& opts = {});
Estimate estimate_from_constants(ConstantsReport constants, const EstimateOptions& opts = {});

}  // namespace bdim
