#include <cstdint>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "bdim/cli/config.hpp"
#include "bdim/error.hpp"

#include "json.hpp"

namespace bdim::cli {
namespace {

using nlohmann::json;

[[noreturn]] void field_error(const std::string& origin, const std::string& ptr, const std::string& what) {
    raise(ErrorKind::config_parse, fmt::format("{}: field '{}': {}", origin, ptr.empty() ? "/" : ptr, what));
}

struct Reader {
    const std::string& origin;

    const json& member(const json& obj, const std::string& ptr, const char* key) const {
        const auto it = obj.find(key);
        if (it == obj.end()) field_error(origin, ptr + "/" + key, "required field is missing");
        return *it;
    }

    double number(const json& v, const std::string& ptr) const {
        if (!v.is_number()) field_error(origin, ptr, "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) field_error(origin, ptr, "number must be finite");
        return d;
    }

    std::string string(const json& v, const std::string& ptr) const {
        if (!v.is_string()) field_error(origin, ptr, "expected a string");
        return v.get<std::string>();
    }

    Vec3 vector(const json& v, const std::string& ptr, int n) const {
        if (!v.is_array() || static_cast<int>(v.size()) != n)
            field_error(origin, ptr, fmt::format("expected an array of {} numbers", n));
        Vec3 out = Vec3::Zero();
        for (int k = 0; k < n; ++k) out[k] = number(v[k], fmt::format("{}/{}", ptr, k));
        return out;
    }

    void only(const json& obj, const std::string& ptr, std::initializer_list<const char*> keys) const {
        for (const auto& [k, unused] : obj.items()) {
            bool known = false;
            for (const char* key : keys) known = known || k == key;
            if (!known) field_error(origin, ptr + "/" + k, "unknown field");
        }
    }
};

std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
    int line = 1, col = 1;
    for (std::size_t k = 0; k + 1 < byte && k < text.size(); ++k) {
        if (text[k] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

void apply_tolerances(const Reader& rd, const json& t, Tolerances& tol) {
    const std::string ptr = "/tolerances";
    if (!t.is_object()) field_error(rd.origin, ptr, "expected an object");
    auto real = [&](const char* key, double& slot) {
        if (t.contains(key)) {
            slot = rd.number(t[key], ptr + "/" + key);
            if (!(slot > 0.0)) field_error(rd.origin, ptr + "/" + key, "must be positive");
        }
    };
    auto count = [&](const char* key, auto& slot) {
        if (t.contains(key)) {
            const double v = rd.number(t[key], ptr + "/" + key);
            if (!(v >= 1.0) || v != std::floor(v)) field_error(rd.origin, ptr + "/" + key, "must be a positive integer");
            slot = static_cast<std::remove_reference_t<decltype(slot)>>(v);
        }
    };
    rd.only(t, ptr, {"profile", "boundary_residual", "projection_residual", "closest_pair_step",
                     "closest_pair_max_iter", "hull_eps", "support_samples_2d", "support_samples_3d",
                     "tangent_discriminant", "grazing_cos", "flight_epsilon", "k0_plus", "orbit_step",
                     "orbit_max_sweeps", "orbit_inner_iter", "curvature_samples_2d", "curvature_samples_3d"});
    real("boundary_residual", tol.boundary_residual);
    real("projection_residual", tol.projection_residual);
    real("closest_pair_step", tol.closest_pair_step);
    count("closest_pair_max_iter", tol.closest_pair_max_iter);
    real("hull_eps", tol.hull_eps);
    count("support_samples_2d", tol.support_samples_2d);
    count("support_samples_3d", tol.support_samples_3d);
    real("tangent_discriminant", tol.tangent_discriminant);
    real("grazing_cos", tol.grazing_cos);
    real("flight_epsilon", tol.flight_epsilon);
    real("k0_plus", tol.k0_plus);
    real("orbit_step", tol.orbit_step);
    count("orbit_max_sweeps", tol.orbit_max_sweeps);
    count("orbit_inner_iter", tol.orbit_inner_iter);
    count("curvature_samples_2d", tol.curvature_samples_2d);
    count("curvature_samples_3d", tol.curvature_samples_3d);
}

ObstacleSpec read_obstacle(const Reader& rd, const json& o, const std::string& ptr, int dim) {
    if (!o.is_object()) field_error(rd.origin, ptr, "expected an object");
    ObstacleSpec s;
    s.kind = rd.string(rd.member(o, ptr, "kind"), ptr + "/kind");
    if (s.kind != "disk" && s.kind != "ball" && s.kind != "ellipse" && s.kind != "ellipsoid")
        field_error(rd.origin, ptr + "/kind", "unknown obstacle kind '" + s.kind + "'");
    s.center = rd.vector(rd.member(o, ptr, "center"), ptr + "/center", dim);
    if (s.kind == "disk" || s.kind == "ball") {
        rd.only(o, ptr, {"kind", "center", "radius"});
        s.kind = dim == 2 ? "disk" : "ball";
        s.radius = rd.number(rd.member(o, ptr, "radius"), ptr + "/radius");
        if (!(s.radius > 0.0)) field_error(rd.origin, ptr + "/radius", "must be positive");
    } else if (s.kind == "ellipse") {
        if (dim != 2) field_error(rd.origin, ptr + "/kind", "ellipse obstacles need dimension 2");
        rd.only(o, ptr, {"kind", "center", "semi_axes", "angle"});
        s.semi_axes = rd.vector(rd.member(o, ptr, "semi_axes"), ptr + "/semi_axes", 2);
        if (o.contains("angle")) s.angle = rd.number(o["angle"], ptr + "/angle");
    } else if (s.kind == "ellipsoid") {
        if (dim != 3) field_error(rd.origin, ptr + "/kind", "ellipsoid obstacles need dimension 3");
        rd.only(o, ptr, {"kind", "center", "semi_axes", "axes"});
        s.semi_axes = rd.vector(rd.member(o, ptr, "semi_axes"), ptr + "/semi_axes", 3);
        if (o.contains("axes")) {
            const json& ax = o["axes"];
            if (!ax.is_array() || ax.size() != 3) field_error(rd.origin, ptr + "/axes", "expected three direction vectors");
            for (int c = 0; c < 3; ++c) s.frame.col(c) = rd.vector(ax[c], fmt::format("{}/axes/{}", ptr, c), 3);
        }
    }
    return s;
}

}  // namespace

BilliardConfig parse_config(const std::string& text, const std::string& origin, const std::string& profile_override) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_column(text, e.byte);
        std::string what = e.what();
        if (const auto p = what.find("parse error"); p != std::string::npos) what = what.substr(p);
        raise(ErrorKind::config_parse, fmt::format("{}:{}:{}: {}", origin, line, col, what));
    }
    const Reader rd{origin};
    if (!doc.is_object()) field_error(origin, "", "top level must be an object");
    rd.only(doc, "", {"schema_version", "name", "dimension", "obstacles", "tolerances", "options"});

    BilliardConfig cfg;
    cfg.source_text = text;
    const double sv = rd.number(rd.member(doc, "", "schema_version"), "/schema_version");
    if (sv != kSchemaVersion) field_error(origin, "/schema_version", fmt::format("unsupported version (expected {})", kSchemaVersion));
    if (doc.contains("name")) cfg.name = rd.string(doc["name"], "/name");
    const double dim = rd.number(rd.member(doc, "", "dimension"), "/dimension");
    if (dim != 2.0 && dim != 3.0) field_error(origin, "/dimension", "must be 2 or 3");
    cfg.dim = static_cast<int>(dim);

    std::string profile = "default";
    if (doc.contains("tolerances") && doc["tolerances"].is_object() && doc["tolerances"].contains("profile"))
        profile = rd.string(doc["tolerances"]["profile"], "/tolerances/profile");
    if (!profile_override.empty()) profile = profile_override;
    try {
        cfg.tolerances = Tolerances::profile(profile);
    } catch (const Error& e) {
        field_error(origin, "/tolerances/profile", "unknown tolerance profile '" + profile + "'");
    }
    if (doc.contains("tolerances")) apply_tolerances(rd, doc["tolerances"], cfg.tolerances);

    const json& obs = rd.member(doc, "", "obstacles");
    if (!obs.is_array()) field_error(origin, "/obstacles", "expected an array");
    for (std::size_t k = 0; k < obs.size(); ++k)
        cfg.obstacles.push_back(read_obstacle(rd, obs[k], fmt::format("/obstacles/{}", k), cfg.dim));
    if (obs.size() < 3) field_error(origin, "/obstacles", "at least three obstacles are required");

    if (doc.contains("options")) {
        const json& o = doc["options"];
        if (!o.is_object()) field_error(origin, "/options", "expected an object");
        rd.only(o, "/options", {"angle_bound", "natural_dmax", "curvature_pairing"});
        if (o.contains("angle_bound")) {
            const auto v = rd.string(o["angle_bound"], "/options/angle_bound");
            if (v == "pair") cfg.constants.angle_bound = AngleFlightBound::pair;
            else if (v == "global") cfg.constants.angle_bound = AngleFlightBound::global;
            else field_error(origin, "/options/angle_bound", "expected 'pair' or 'global'");
        }
        if (o.contains("natural_dmax")) {
            const auto v = rd.string(o["natural_dmax"], "/options/natural_dmax");
            if (v == "hull") cfg.constants.natural_dmax_from_hull = true;
            else if (v == "boundary") cfg.constants.natural_dmax_from_hull = false;
            else field_error(origin, "/options/natural_dmax", "expected 'hull' or 'boundary'");
        }
        if (o.contains("curvature_pairing")) {
            const auto v = rd.string(o["curvature_pairing"], "/options/curvature_pairing");
            if (v == "same") cfg.pairing = CurvaturePairing::same;
            else if (v == "partner") cfg.pairing = CurvaturePairing::partner;
            else field_error(origin, "/options/curvature_pairing", "expected 'same' or 'partner'");
        }
    }
    return cfg;
}

BilliardConfig load_config(const std::string& path, const std::string& profile_override) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorKind::config_parse, path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path, profile_override);
}

Billiard make_billiard(const BilliardConfig& cfg) {
    std::vector<Obstacle> obs;
    for (std::size_t k = 0; k < cfg.obstacles.size(); ++k) {
        const ObstacleSpec& s = cfg.obstacles[k];
        try {
            if (s.kind == "disk" || s.kind == "ball") {
                obs.push_back(Obstacle::ball(s.center, s.radius, cfg.dim));
            } else if (s.kind == "ellipse") {
                obs.push_back(Obstacle::ellipse(s.center.head<2>(), s.semi_axes.x(), s.semi_axes.y(), s.angle));
            } else {
                obs.push_back(Obstacle::ellipsoid(s.center, s.semi_axes, s.frame));
            }
        } catch (const Error& e) {
            raise(ErrorKind::config_parse, fmt::format("field '/obstacles/{}': {}", k, e.what()));
        }
    }
    return Billiard(cfg.dim, std::move(obs), cfg.tolerances);
}

std::string config_hash(const std::string& text) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return fmt::format("{:016x}", h);
}

}  // namespace bdim::cli
