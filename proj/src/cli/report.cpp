#include <fmt/format.h>

#include "bdim/cli/report.hpp"
#include "bdim/kernels.hpp"

#ifndef BDIM_VERSION
#define BDIM_VERSION "0.0.0"
#endif

namespace bdim::cli {

std::string_view version() { return BDIM_VERSION; }

namespace {

Json pair_tag(std::size_t i, std::size_t j) { return Json::array({i + 1, j + 1}); }

std::string vec_text(const Vec3& v, int dim) {
    return dim == 2 ? fmt::format("({:.9f}, {:.9f})", v.x(), v.y())
                    : fmt::format("({:.9f}, {:.9f}, {:.9f})", v.x(), v.y(), v.z());
}

std::string symbols_text(const SymbolSequence& s) {
    std::string out;
    for (std::size_t k = 0; k < s.size(); ++k) out += (k ? "," : "") + std::to_string(s.symbols[k] + 1);
    return out;
}

}  // namespace

Json to_json(const Vec3& v, int dim) {
    Json a = Json::array();
    for (int k = 0; k < dim; ++k) a.push_back(v[k]);
    return a;
}

Json provenance(const BilliardConfig& cfg, const std::string& command) {
    const Tolerances& t = cfg.tolerances;
    Json tol;
    tol["profile"] = t.name;
    tol["boundary_residual"] = t.boundary_residual;
    tol["projection_residual"] = t.projection_residual;
    tol["closest_pair_step"] = t.closest_pair_step;
    tol["closest_pair_max_iter"] = t.closest_pair_max_iter;
    tol["hull_eps"] = t.hull_eps;
    tol["support_samples_2d"] = t.support_samples_2d;
    tol["support_samples_3d"] = t.support_samples_3d;
    tol["tangent_discriminant"] = t.tangent_discriminant;
    tol["grazing_cos"] = t.grazing_cos;
    tol["flight_epsilon"] = t.flight_epsilon;
    tol["k0_plus"] = t.k0_plus;
    tol["orbit_step"] = t.orbit_step;
    tol["orbit_max_sweeps"] = t.orbit_max_sweeps;
    tol["orbit_inner_iter"] = t.orbit_inner_iter;
    tol["curvature_samples_2d"] = t.curvature_samples_2d;
    tol["curvature_samples_3d"] = t.curvature_samples_3d;
    Json p;
    p["tool"] = "bdim";
    p["version"] = version();
    p["command"] = command;
    p["config_name"] = cfg.name;
    p["config_hash"] = config_hash(cfg.source_text);
    p["schema_version"] = cfg.schema_version;
    p["kernel_backend"] = kernels::to_string(kernels::active_backend());
    p["tolerances"] = tol;
    return p;
}

Json to_json(const ConstantsReport& r) {
    Json j;
    j["mode"] = to_string(r.mode);
    j["dimension"] = r.dim;
    j["obstacles"] = r.u;
    j["d_min"] = r.d_min;
    j["d_max"] = r.d_max;
    j["b_minus"] = r.b_minus;
    j["cos_phi_plus"] = r.cos_phi_plus;
    j["phi_plus"] = r.phi_plus;
    j["kappa_minus"] = r.kappa_minus;
    j["kappa_plus"] = r.kappa_plus;
    j["hull_diameter"] = r.hull_diameter;
    j["kappa_minus_obstacle"] = r.kappa_minus_obstacle;
    j["kappa_plus_obstacle"] = r.kappa_plus_obstacle;
    j["options"] = {{"angle_bound", r.options.angle_bound == AngleFlightBound::pair ? "pair" : "global"},
                    {"natural_dmax", r.options.natural_dmax_from_hull ? "hull" : "boundary"}};
    Json pairs = Json::array();
    for (const auto& p : r.pairs) {
        Json e;
        e["pair"] = pair_tag(p.i, p.j);
        e["d_minus"] = p.d_minus;
        e["d_plus"] = p.d_plus;
        e["b_minus"] = p.b_minus;
        e["cos_phi_bound"] = p.cos_phi_bound;
        e["kappa_minus_i"] = p.kappa_minus_i;
        e["kappa_plus_i"] = p.kappa_plus_i;
        pairs.push_back(e);
    }
    j["pairs"] = pairs;
    return j;
}

Json to_json(const DomainD& d) {
    Json j;
    j["iota"] = d.iota;
    j["natural"] = d.natural;
    Json rects = Json::array();
    for (const auto& r : d.rects) {
        Json e;
        if (!d.natural) e["pair"] = pair_tag(r.i, r.j);
        e["gamma"] = {r.gamma_lo, r.gamma_hi};
        e["theta"] = {r.theta_lo, r.theta_hi};
        rects.push_back(e);
    }
    j["rectangles"] = rects;
    return j;
}

Json to_json(const Estimate& e, const std::vector<Variant>& variants) {
    Json j;
    j["mode"] = to_string(e.constants.mode);
    j["constants"] = to_json(e.constants);
    j["domain"] = to_json(e.domain);
    auto gp = [&](const GPoint& p) {
        Json o{{"gamma", p.gamma}, {"theta", p.theta}};
        if (!e.domain.natural) o["pair"] = pair_tag(p.i, p.j);
        return o;
    };
    j["g"] = {{"g_min", e.extrema.g_min}, {"g_max", e.extrema.g_max}, {"argmin", gp(e.extrema.argmin)},
              {"argmax", gp(e.extrema.argmax)}};
    j["chain"] = {{"lambda1", e.chain.lambda1}, {"mu1", e.chain.mu1},     {"lambda0", e.chain.lambda0},
                  {"mu0", e.chain.mu0},         {"delta_minus", e.chain.delta_minus}};
    j["alpha"] = {{"raw", e.alpha.raw}, {"value", e.alpha.value}, {"clamped", e.alpha.clamped}};
    j["pinching_satisfied"] = e.pinching;
    Json bounds = Json::array();
    for (Variant v : variants) {
        const DimensionBounds& b = e.variant(v);
        bounds.push_back({{"variant", to_string(v)}, {"lower", b.lower}, {"upper", b.upper}, {"alpha", b.alpha}});
    }
    j["bounds"] = bounds;
    return j;
}

Json to_json(const EclipseReport& r) {
    Json entries = Json::array();
    for (const auto& e : r.entries)
        entries.push_back({{"obstacle", e.k + 1}, {"hull_of", pair_tag(e.i, e.j)}, {"margin", e.margin}, {"pass", e.pass}});
    return {{"condition_H", r.all_pass}, {"triples", entries}};
}

Json to_json(const ConvexPolytope& h) {
    Json v = Json::array();
    for (const auto& p : h.vertices) v.push_back(to_json(p, h.ambient_dim));
    return {{"affine_dimension", h.affine_dim}, {"degenerate", h.degenerate()}, {"diameter", h.diameter()},
            {"vertices", v}};
}

Json to_json(const PeriodicOrbit& o, int dim) {
    Json seq = Json::array();
    for (auto s : o.sequence.symbols) seq.push_back(s + 1);
    Json pts = Json::array();
    for (const auto& p : o.points) pts.push_back(to_json(p, dim));
    return {{"sequence", seq},
            {"points", pts},
            {"length", o.length},
            {"boundary_residual", o.boundary_residual},
            {"reflection_residual", o.reflection_residual},
            {"sweeps", o.sweeps}};
}

Json to_json(const ConjectureReport& r) {
    Json worst = Json::array();
    for (auto s : r.worst.symbols) worst.push_back(s + 1);
    return {{"sequences", r.sequences},         {"orbits_tested", r.orbits_tested}, {"failures", r.failures},
            {"sampled", r.sampled},             {"max_violation", r.max_violation}, {"worst_sequence", worst}};
}

Json to_json(const Trajectory& t, int dim) {
    Json steps = Json::array();
    for (std::size_t n = 0; n < t.steps.size(); ++n) {
        const FrontStep& s = t.steps[n];
        const Vec2 ev = s.front.eigenvalues();
        Json eig = Json::array({ev(0)});
        if (s.front.front_dim() == 2) eig.push_back(ev(1));
        steps.push_back({{"j", n + 1},
                         {"obstacle", s.event.obstacle + 1},
                         {"q", to_json(s.event.q, dim)},
                         {"v_out", to_json(s.event.v_out, dim)},
                         {"phi", s.event.phi},
                         {"flight", s.event.flight},
                         {"k", s.k},
                         {"front_eigenvalues", eig},
                         {"delta", s.delta},
                         {"delta_product", s.delta_product}});
    }
    return {{"collisions", t.steps.size()}, {"escaped", t.escaped}, {"steps", steps}};
}

std::string text_validate(const EclipseReport& r) {
    std::string out = fmt::format("{:>8}  {:>9}  {:>14}  {}\n", "obstacle", "hull of", "margin", "status");
    for (const auto& e : r.entries)
        out += fmt::format("{:>8}  {:>9}  {:>14.9f}  {}\n", e.k + 1, fmt::format("({},{})", e.i + 1, e.j + 1), e.margin,
                           e.pass ? "pass" : "FAIL");
    out += fmt::format("no-eclipse condition: {}\n", r.all_pass ? "holds" : "violated");
    return out;
}

std::string text_estimate(const Estimate& e, const std::vector<Variant>& variants) {
    const ConstantsReport& c = e.constants;
    std::string out = fmt::format("[{}]\n", to_string(c.mode));
    out += fmt::format("  {:<14}{:>14.9f}    {:<14}{:>14.9f}\n", "d_min", c.d_min, "d_max", c.d_max);
    out += fmt::format("  {:<14}{:>14.9f}    {:<14}{:>14.9f}\n", "b_minus", c.b_minus, "cos phi+", c.cos_phi_plus);
    out += fmt::format("  {:<14}{:>14.9f}    {:<14}{:>14.9f}\n", "kappa_minus", c.kappa_minus, "kappa_plus", c.kappa_plus);
    out += fmt::format("  {:<14}{:>14.9f}    {:<14}{:>14.9f}\n", "g_min", e.extrema.g_min, "g_max", e.extrema.g_max);
    out += fmt::format("  {:<14}{:>14.9f}    {:<14}{:>14.9f}\n", "lambda1", e.chain.lambda1, "mu1", e.chain.mu1);
    out += fmt::format("  {:<14}{:>14.9f}    {:<14}{:>14.9f}\n", "lambda0", e.chain.lambda0, "mu0", e.chain.mu0);
    out += fmt::format("  {:<14}{:>14.6e}    {:<14}{:>14.9f}{}\n", "delta_minus", e.chain.delta_minus, "alpha",
                       e.alpha.value, e.alpha.clamped ? " (clamped)" : "");
    out += fmt::format("  {:<14}{:>14}\n", "pinching", e.pinching ? "satisfied" : "not satisfied");
    if (!e.domain.natural) {
        out += "  pair   d_minus        d_plus         cos_phi        gamma range\n";
        for (std::size_t k = 0; k < c.pairs.size(); ++k) {
            const auto& p = c.pairs[k];
            const auto& r = e.domain.rects[k];
            out += fmt::format("  ({},{})  {:<13.9f}  {:<13.9f}  {:<13.9f}  [{:.6f}, {:.6f}]\n", p.i + 1, p.j + 1, p.d_minus,
                               p.d_plus, p.cos_phi_bound, r.gamma_lo, r.gamma_hi);
        }
    }
    for (Variant v : variants) {
        const DimensionBounds& b = e.variant(v);
        out += fmt::format("  {:<18}{:>12.9f} <= dim_H <= {:.9f}\n", to_string(v), b.lower, b.upper);
    }
    return out;
}

std::string text_orbit(const PeriodicOrbit& o, int dim, double map_residual) {
    std::string out = fmt::format("sequence ({})  length {:.12f}  sweeps {}\n", symbols_text(o.sequence), o.length, o.sweeps);
    for (std::size_t k = 0; k < o.points.size(); ++k)
        out += fmt::format("  q{:<3} K{:<3} {}\n", k + 1, o.sequence.symbols[k] + 1, vec_text(o.points[k], dim));
    out += fmt::format("boundary residual {:.3e}  reflection residual {:.3e}  map residual {:.3e}\n", o.boundary_residual,
                       o.reflection_residual, map_residual);
    return out;
}

std::string text_hull(const ConvexPolytope& h, const ClosestPairTable& pairs, int dim) {
    std::string out = "closest-pair points\n";
    for (std::size_t i = 0; i < pairs.size(); ++i)
        for (std::size_t j = 0; j < pairs.size(); ++j)
            if (i != j) out += fmt::format("  p({},{})  {}\n", i + 1, j + 1, vec_text(pairs.point(i, j), dim));
    out += fmt::format("hull: {} vertices, affine dimension {}{}, diameter {:.9f}\n", h.vertices.size(), h.affine_dim,
                       h.degenerate() ? " (degenerate)" : "", h.diameter());
    for (const auto& v : h.vertices) out += "  " + vec_text(v, dim) + "\n";
    return out;
}

std::string text_conjecture(const ConjectureReport& r) {
    return fmt::format(
        "hull conjecture: {} sequences{}, {} orbits tested, {} solver failures\n"
        "max signed distance outside H: {:.3e} (sequence {})\n",
        r.sequences, r.sampled ? " (sampled)" : "", r.orbits_tested, r.failures, r.max_violation, symbols_text(r.worst));
}

std::string text_trajectory(const Trajectory& t, int dim) {
    std::string out = fmt::format("{:>4} {:>4}  {:<38} {:>10} {:>12} {:>14} {:>12} {:>12}\n", "j", "K", "q", "phi", "d_j",
                                  "k_j", "delta_j", "prod delta");
    for (std::size_t n = 0; n < t.steps.size(); ++n) {
        const FrontStep& s = t.steps[n];
        out += fmt::format("{:>4} {:>4}  {:<38} {:>10.6f} {:>12.6f} {:>14.8f} {:>12.6e} {:>12.6e}\n", n + 1,
                           s.event.obstacle + 1, vec_text(s.event.q, dim), s.event.phi, s.event.flight, s.k, s.delta,
                           s.delta_product);
    }
    out += t.escaped ? "trajectory escaped\n" : "step budget reached\n";
    return out;
}

}  // namespace bdim::cli
