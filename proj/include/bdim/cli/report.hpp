#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bdim/cli/config.hpp"
#include "bdim/dimension.hpp"
#include "bdim/orbits.hpp"

#include "json.hpp"

namespace bdim::cli {

using Json = nlohmann::ordered_json;

std::string_view version();

Json provenance(const BilliardConfig& cfg, const std::string& command);

Json to_json(const Vec3& v, int dim);
Json to_json(const ConstantsReport& r);
Json to_json(const DomainD& d);
Json to_json(const Estimate& e, const std::vector<Variant>& variants);
Json to_json(const EclipseReport& r);
Json to_json(const ConvexPolytope& h);
Json to_json(const PeriodicOrbit& o, int dim);
Json to_json(const ConjectureReport& r);
Json to_json(const Trajectory& t, int dim);

std::string text_validate(const EclipseReport& r);
std::string text_estimate(const Estimate& e, const std::vector<Variant>& variants);
std::string text_orbit(const PeriodicOrbit& o, int dim, double map_residual);
std::string text_hull(const ConvexPolytope& h, const ClosestPairTable& pairs, int dim);
std::string text_conjecture(const ConjectureReport& r);
std::string text_trajectory(const Trajectory& t, int dim);

}  // namespace bdim::cli
