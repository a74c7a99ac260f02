#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"

#include "bdim/cli/app.hpp"
#include "bdim/cli/config.hpp"
#include "bdim/cli/report.hpp"
#include "bdim/cli/svg.hpp"
#include "bdim/error.hpp"

namespace bdim::cli {
namespace {

struct Options {
    std::string config;
    std::string profile;
    std::string json_out;
    std::uint64_t seed = 1;

    std::string mode = "both";
    std::string variant = "all";
    std::size_t conjecture_period = 0;

    std::string sequence;
    long max_iter = 0;

    bool test_conjecture = false;
    std::size_t max_period = 6;
    std::size_t samples = 2000;

    std::string q, v;
    std::size_t steps = 20;

    std::string what = "billiard";
    std::string out_path;
};

int exit_code_for(ErrorKind k) {
    switch (k) {
        case ErrorKind::config_parse:
        case ErrorKind::inadmissible_sequence: return parse_failure;
        case ErrorKind::no_convergence: return no_convergence;
        default: return domain_failure;
    }
}

std::vector<std::size_t> parse_sequence(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::size_t used = 0;
        long v = 0;
        try {
            v = std::stol(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used]))) ++used;
        if (used != tok.size() || tok.empty() || v < 1)
            raise(ErrorKind::inadmissible_sequence, fmt::format("sequence entry '{}' is not a positive obstacle number", tok));
        out.push_back(static_cast<std::size_t>(v - 1));
    }
    if (out.empty()) raise(ErrorKind::inadmissible_sequence, "empty sequence");
    return out;
}

Vec3 parse_vector(const std::string& text, int dim, const char* flag) {
    std::vector<double> vals;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            vals.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            raise(ErrorKind::config_parse, fmt::format("{}: '{}' is not a number", flag, tok));
        }
    }
    if (static_cast<int>(vals.size()) != dim)
        raise(ErrorKind::config_parse, fmt::format("{}: expected {} comma-separated components", flag, dim));
    Vec3 v = Vec3::Zero();
    for (int k = 0; k < dim; ++k) v[k] = vals[k];
    return v;
}

std::vector<Mode> modes_for(const std::string& m) {
    if (m == "natural") return {Mode::natural};
    if (m == "adjusted") return {Mode::adjusted};
    return {Mode::natural, Mode::adjusted};
}

std::vector<Variant> variants_for(const std::string& v) {
    if (v == "eq1") return {Variant::two_sided_eq1};
    if (v == "eq2") return {Variant::alpha_scaled_eq2};
    if (v == "eq7") return {Variant::general_eq7};
    return {Variant::two_sided_eq1, Variant::alpha_scaled_eq2, Variant::general_eq7};
}

EstimateOptions estimate_options(const BilliardConfig& cfg) {
    EstimateOptions o;
    o.constants = cfg.constants;
    o.pairing = cfg.pairing;
    o.k0_plus = cfg.tolerances.k0_plus;
    return o;
}

OrbitOptions orbit_options(const Tolerances& t, long max_iter) {
    OrbitOptions o;
    o.step_tol = t.orbit_step;
    o.max_sweeps = max_iter > 0 ? max_iter : t.orbit_max_sweeps;
    o.inner_iter = t.orbit_inner_iter;
    return o;
}

// Largest distance between the orbit points and the collisions produced by
// the map when launched from the first point towards the second.
double map_residual(const Billiard& b, const PeriodicOrbit& o) {
    const std::size_t n = o.points.size();
    PhasePoint x{o.points[0], (o.points[1] - o.points[0]).normalized(), o.sequence.symbols[0]};
    double worst = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        const auto next = billiard_map(x, b);
        if (!next) return std::numeric_limits<double>::infinity();
        worst = std::max(worst, (next->first.q - o.points[k % n]).norm());
        if (next->second.obstacle != o.sequence.symbols[k % n]) return std::numeric_limits<double>::infinity();
        x = next->first;
    }
    return worst;
}

PhasePoint launch_point(const Billiard& b, const Options& opt) {
    if (opt.q.empty() || opt.v.empty()) raise(ErrorKind::config_parse, "--q and --v are both required");
    PhasePoint x;
    x.q = parse_vector(opt.q, b.dim(), "--q");
    const Vec3 v = parse_vector(opt.v, b.dim(), "--v");
    if (!(v.norm() > 0.0)) raise(ErrorKind::invalid_input, "--v must be non-zero");
    x.v = v.normalized();
    for (std::size_t i = 0; i < b.size(); ++i) {
        const double r = b[i].implicit(x.q);
        if (std::abs(r) <= b.tolerances().boundary_residual) {
            const Vec3 n = normal_and_curvatures(b[i], x.q, b.tolerances().boundary_residual).normal;
            if (n.dot(x.v) < 0.0) raise(ErrorKind::invalid_input, "velocity points into the obstacle at --q");
            x.last_obstacle = i;
        } else if (r < 0.0) {
            raise(ErrorKind::invalid_input, fmt::format("--q lies inside obstacle {}", i + 1));
        }
    }
    return x;
}

void write_file(const std::string& path, const std::string& data) {
    std::ofstream f(path, std::ios::binary);
    if (!f) raise(ErrorKind::invalid_input, "cannot write " + path);
    f << data;
}

void emit_json(const Options& opt, const BilliardConfig& cfg, const std::string& command, Json result) {
    if (opt.json_out.empty()) return;
    Json doc;
    doc["provenance"] = provenance(cfg, command);
    doc["result"] = std::move(result);
    write_file(opt.json_out, doc.dump(2) + "\n");
}

int cmd_validate(const Options& opt, const BilliardConfig& cfg, std::ostream& out) {
    const Billiard b = make_billiard(cfg);
    const EclipseReport rep = no_eclipse_check(b);
    out << text_validate(rep);
    emit_json(opt, cfg, "validate", to_json(rep));
    return rep.all_pass ? ok : domain_failure;
}

int cmd_bounds(const Options& opt, const BilliardConfig& cfg, std::ostream& out) {
    const Billiard b = make_billiard(cfg);
    const auto variants = variants_for(opt.variant);
    Json estimates = Json::array();
    std::string text;
    for (Mode m : modes_for(opt.mode)) {
        const Estimate e = estimate_dimension(b, m, estimate_options(cfg));
        text += text_estimate(e, variants);
        estimates.push_back(to_json(e, variants));
    }
    Json result;
    result["estimates"] = estimates;
    const ConvexPolytope h = hull_H(b);
    result["hull"] = to_json(h);
    if (opt.conjecture_period >= 2) {
        const ConjectureReport cr = test_hull_conjecture(b, opt.conjecture_period, opt.samples, opt.seed);
        text += text_conjecture(cr);
        result["conjecture"] = to_json(cr);
    } else {
        result["conjecture"] = nullptr;
    }
    out << text;
    emit_json(opt, cfg, "bounds", result);
    return ok;
}

int cmd_orbit(const Options& opt, const BilliardConfig& cfg, std::ostream& out) {
    const Billiard b = make_billiard(cfg);
    SymbolSequence seq{parse_sequence(opt.sequence), true};
    if (!seq.admissible_for(b.size()))
        raise(ErrorKind::inadmissible_sequence,
              fmt::format("sequence must use obstacles 1..{}, with no symbol repeated consecutively (cyclically)", b.size()));
    const PeriodicOrbit o = find_periodic_orbit(b, seq, orbit_options(b.tolerances(), opt.max_iter));
    const double res = map_residual(b, o);
    out << text_orbit(o, b.dim(), res);
    Json j = to_json(o, b.dim());
    j["map_residual"] = std::isfinite(res) ? Json(res) : Json(nullptr);
    emit_json(opt, cfg, "orbit", j);
    return ok;
}

int cmd_hull(const Options& opt, const BilliardConfig& cfg, std::ostream& out) {
    const Billiard b = make_billiard(cfg);
    const ClosestPairTable pairs = all_closest_pairs(b);
    const ConvexPolytope h = hull_H(b, pairs);
    std::string text = text_hull(h, pairs, b.dim());
    Json j;
    Json pts = Json::array();
    for (std::size_t i = 0; i < pairs.size(); ++i)
        for (std::size_t k = 0; k < pairs.size(); ++k)
            if (i != k) pts.push_back({{"pair", Json::array({i + 1, k + 1})}, {"point", to_json(pairs.point(i, k), b.dim())}});
    j["points"] = pts;
    j["hull"] = to_json(h);
    if (opt.test_conjecture) {
        const ConjectureReport cr = test_hull_conjecture(b, opt.max_period, opt.samples, opt.seed);
        text += text_conjecture(cr);
        j["conjecture"] = to_json(cr);
    }
    out << text;
    emit_json(opt, cfg, "hull", j);
    return ok;
}

int cmd_simulate(const Options& opt, const BilliardConfig& cfg, std::ostream& out) {
    const Billiard b = make_billiard(cfg);
    const PhasePoint x = launch_point(b, opt);
    const Trajectory t = simulate(x, b, opt.steps);
    out << text_trajectory(t, b.dim());
    emit_json(opt, cfg, "simulate", to_json(t, b.dim()));
    return ok;
}

int cmd_plot(const Options& opt, const BilliardConfig& cfg, std::ostream& out) {
    if (opt.out_path.empty()) raise(ErrorKind::config_parse, "--out is required");
    const Billiard b = make_billiard(cfg);
    std::string svg;
    if (opt.what == "domain") {
        const EstimateOptions eo = estimate_options(cfg);
        const Estimate nat = estimate_dimension(b, Mode::natural, eo);
        std::optional<DomainD> adj;
        try {
            adj = estimate_dimension(b, Mode::adjusted, eo).domain;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::degenerate_hull) throw;
        }
        svg = plot_domain(nat.domain, adj);
    } else {
        if (b.dim() != 2) raise(ErrorKind::unsupported, "billiard, hull and orbit plots need a planar billiard");
        const ConstantsReport adjusted = compute_constants(b, Mode::adjusted, cfg.constants);
        SceneLayers layers;
        if (opt.what == "billiard") {
            layers.hull = false;
        } else if (opt.what == "hull") {
            layers.hull = true;
        } else if (!opt.sequence.empty()) {
            const SymbolSequence seq{parse_sequence(opt.sequence), true};
            if (!seq.admissible_for(b.size())) raise(ErrorKind::inadmissible_sequence, "inadmissible sequence");
            layers.polylines.push_back(find_periodic_orbit(b, seq, orbit_options(b.tolerances(), opt.max_iter)).points);
            layers.hull = true;
        } else {
            const PhasePoint x = launch_point(b, opt);
            const Trajectory t = simulate(x, b, opt.steps);
            if (t.steps.empty()) raise(ErrorKind::invalid_input, "the trajectory hits no obstacle; nothing to plot");
            std::vector<Vec3> poly{x.q};
            for (const auto& s : t.steps) poly.push_back(s.event.q);
            if (t.escaped) poly.push_back(t.final_state.q + 3.0 * t.final_state.v);
            layers.polylines.push_back(poly);
            layers.closed = false;
        }
        svg = plot_billiard(b, adjusted, layers);
    }
    write_file(opt.out_path, svg);
    out << "wrote " << opt.out_path << "\n";
    return ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hausdorff dimension bounds for open billiards", "bdim"};
    app.set_version_flag("--version", std::string(version()));
    app.require_subcommand(1);
    app.fallthrough();
    Options opt;
    app.add_option("--config", opt.config, "billiard configuration (JSON)")->required();
    app.add_option("--tolerance-profile", opt.profile, "tolerance profile: default, strict or fast");
    app.add_option("--json", opt.json_out, "write the JSON report to this file");
    app.add_option("--seed", opt.seed, "seed for randomised sequence sampling");

    auto* validate = app.add_subcommand("validate", "check the no-eclipse condition");
    auto* bounds = app.add_subcommand("bounds", "run the full constants-to-bounds pipeline");
    bounds->add_option("--mode", opt.mode)->check(CLI::IsMember({"natural", "adjusted", "both"}));
    bounds->add_option("--variant", opt.variant)->check(CLI::IsMember({"eq1", "eq2", "eq7", "all"}));
    bounds->add_option("--conjecture-period", opt.conjecture_period, "also test the hull conjecture up to this period");
    bounds->add_option("--samples", opt.samples, "sequence cap for the conjecture test");
    auto* orbit = app.add_subcommand("orbit", "find a periodic orbit with a given itinerary");
    orbit->add_option("--sequence", opt.sequence, "obstacle itinerary, e.g. 1,2,3")->required();
    orbit->add_option("--max-iter", opt.max_iter, "sweep budget");
    auto* hull = app.add_subcommand("hull", "closest-pair points and their convex hull");
    hull->add_flag("--test-conjecture", opt.test_conjecture);
    hull->add_option("--max-period", opt.max_period)->check(CLI::Range(2, 64));
    hull->add_option("--samples", opt.samples, "sequence cap before random sampling");
    auto* sim = app.add_subcommand("simulate", "follow a trajectory and its front");
    sim->add_option("--q", opt.q, "start point, comma separated")->required();
    sim->add_option("--v", opt.v, "start direction, comma separated")->required();
    sim->add_option("--steps", opt.steps, "maximum number of reflections");
    auto* plot = app.add_subcommand("plot", "write an SVG figure");
    plot->add_option("--what", opt.what)->check(CLI::IsMember({"billiard", "hull", "orbit", "domain"}));
    plot->add_option("--out", opt.out_path, "output SVG file")->required();
    plot->add_option("--sequence", opt.sequence, "periodic itinerary for orbit plots");
    plot->add_option("--q", opt.q);
    plot->add_option("--v", opt.v);
    plot->add_option("--steps", opt.steps);
    plot->add_option("--max-iter", opt.max_iter);

    std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::CallForVersion&) {
        out << version() << "\n";
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return parse_failure;
    }

    try {
        const BilliardConfig cfg = load_config(opt.config, opt.profile);
        if (*validate) return cmd_validate(opt, cfg, out);
        if (*bounds) return cmd_bounds(opt, cfg, out);
        if (*orbit) return cmd_orbit(opt, cfg, out);
        if (*hull) return cmd_hull(opt, cfg, out);
        if (*sim) return cmd_simulate(opt, cfg, out);
        if (*plot) return cmd_plot(opt, cfg, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e.kind());
    }
    return parse_failure;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace bdim::cli
