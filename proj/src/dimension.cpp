#include <cmath>
#include <limits>

#include "bdim/dimension.hpp"
#include "bdim/error.hpp"

namespace bdim {

double f_map(double gamma, double theta, double x) { return x / (1.0 + theta * x) + 2.0 * gamma; }

double g(double gamma, double theta) {
    if (gamma < 0.0 || !(theta > 0.0)) raise(ErrorKind::invalid_input, "g requires gamma >= 0 and theta > 0");
    return gamma + std::sqrt(gamma * gamma + 2.0 * gamma / theta);
}

GExtrema g_extrema(const DomainD& domain) {
    if (domain.rects.empty()) raise(ErrorKind::invalid_input, "empty domain");
    GExtrema out;
    out.g_min = std::numeric_limits<double>::infinity();
    out.g_max = -std::numeric_limits<double>::infinity();
    for (const auto& r : domain.rects) {
        const double lo = g(r.gamma_lo, r.theta_hi);
        const double hi = g(r.gamma_hi, r.theta_lo);
        if (lo < out.g_min) {
            out.g_min = lo;
            out.argmin = {r.gamma_lo, r.theta_hi, r.i, r.j};
        }
        if (hi > out.g_max) {
            out.g_max = hi;
            out.argmax = {r.gamma_hi, r.theta_lo, r.i, r.j};
        }
    }
    return out;
}

ConstantChain constant_chain(const GExtrema& gx, const ConstantsReport& report, double k0_plus) {
    ConstantChain c;
    c.lambda1 = 1.0 / (1.0 + report.d_max * gx.g_max);
    c.mu1 = 1.0 / (1.0 + report.d_min * gx.g_min);
    c.lambda0 = 1.0 / (1.0 + report.d_max * (1.0 / report.d_min + 2.0 * report.kappa_plus / report.cos_phi_plus));
    c.mu0 = 1.0 / (1.0 + 2.0 * report.d_min * report.kappa_minus * report.cos_phi_plus);
    c.delta_minus = 1.0 / (1.0 + report.d_max * k0_plus);
    return c;
}

Interval dimension_bounds_eq1(std::size_t u, double lambda1, double mu1) {
    const double l = std::log(static_cast<double>(u) - 1.0);
    return {-2.0 * l / std::log(lambda1), -2.0 * l / std::log(mu1)};
}

HolderAlpha holder_alpha(double d_min, double d_max, double lambda1, double mu1) {
    HolderAlpha a;
    a.raw = 2.0 * d_min * std::log(mu1) / (d_max * std::log(lambda1));
    a.clamped = a.raw > 1.0;
    a.value = a.clamped ? 1.0 : a.raw;
    return a;
}

Interval dimension_bounds_eq2(std::size_t u, double lambda1, double mu1, double alpha) {
    if (!(alpha > 0.0) || alpha > 1.0) raise(ErrorKind::invalid_input, "alpha must lie in (0, 1]");
    const Interval e = dimension_bounds_eq1(u, lambda1, mu1);
    return {alpha * e.lower, e.upper / alpha};
}

Interval dimension_bounds_general(std::size_t u, double lambda1, double mu1, double d_min, double d_max) {
    const double l = std::log(static_cast<double>(u) - 1.0);
    const double ll = std::log(lambda1), lm = std::log(mu1);
    return {-4.0 * d_min * lm * l / (d_max * ll * ll), -d_max * ll * l / (d_min * lm * lm)};
}

bool pinching_check(double lambda1, double mu1, double d_min, double d_max) {
    return d_max * std::log(lambda1) < 2.0 * d_min * std::log(mu1);
}

double symbol_space_dim(std::size_t u, double theta) {
    if (u < 2 || !(theta > 0.0 && theta < 1.0))
        raise(ErrorKind::invalid_input, "symbol space dimension needs u >= 2 and theta in (0, 1)");
    return -std::log(static_cast<double>(u) - 1.0) / std::log(theta);
}

double symbol_distance(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b, double theta) {
    std::size_t n = 0;
    while (n < a.size() && n < b.size() && a[n] == b[n]) ++n;
    if (n == a.size() && n == b.size()) return 0.0;
    return std::pow(theta, static_cast<double>(n));
}

SymbolSequence code_trajectory(const Trajectory& t) {
    SymbolSequence s;
    s.periodic = false;
    for (const auto& step : t.steps) s.symbols.push_back(step.event.obstacle);
    if (!s.symbols.empty() && !s.admissible())
        raise(ErrorKind::inadmissible_sequence, "trajectory struck one obstacle twice in a row");
    return s;
}

std::string_view to_string(Variant v) {
    switch (v) {
        case Variant::two_sided_eq1: return "two_sided_eq1";
        case Variant::alpha_scaled_eq2: return "alpha_scaled_eq2";
        case Variant::general_eq7: return "general_eq7";
    }
    return "unknown";
}

const DimensionBounds& Estimate::variant(Variant v) const {
    for (const auto& b : bounds)
        if (b.variant == v) return b;
    raise(ErrorKind::invalid_input, "variant not computed");
}

Estimate estimate_from_constants(ConstantsReport constants, const EstimateOptions& opts) {
    Estimate e;
    e.constants = std::move(constants);
    const ConstantsReport& c = e.constants;
    e.domain = build_domain(c, c.dim, opts.pairing);
    e.extrema = g_extrema(e.domain);
    e.chain = constant_chain(e.extrema, c, opts.k0_plus);
    e.alpha = holder_alpha(c.d_min, c.d_max, e.chain.lambda1, e.chain.mu1);
    e.pinching = pinching_check(e.chain.lambda1, e.chain.mu1, c.d_min, c.d_max);

    auto make = [&](Variant v, double alpha, Interval iv) {
        DimensionBounds b;
        b.variant = v;
        b.lambda1 = e.chain.lambda1;
        b.mu1 = e.chain.mu1;
        b.alpha = alpha;
        b.lower = iv.lower;
        b.upper = iv.upper;
        b.pinching_satisfied = e.pinching;
        b.lambda0 = e.chain.lambda0;
        b.mu0 = e.chain.mu0;
        b.delta_minus = e.chain.delta_minus;
        return b;
    };
    e.bounds.push_back(make(Variant::two_sided_eq1, 1.0, dimension_bounds_eq1(c.u, e.chain.lambda1, e.chain.mu1)));
    e.bounds.push_back(make(Variant::alpha_scaled_eq2, e.alpha.value,
                            dimension_bounds_eq2(c.u, e.chain.lambda1, e.chain.mu1, e.alpha.value)));
    e.bounds.push_back(make(Variant::general_eq7, e.alpha.raw,
                            dimension_bounds_general(c.u, e.chain.lambda1, e.chain.mu1, c.d_min, c.d_max)));
    return e;
}

Estimate estimate_dimension(const Billiard& b, Mode mode, const EstimateOptions& opts) {
    return estimate_from_constants(compute_constants(b, mode, opts.constants), opts);
}

}  // namespace bdim
