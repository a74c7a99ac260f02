#pragma once

#include <string>
#include <vector>

#include "bdim/constants.hpp"
#include "bdim/geometry.hpp"

namespace bdim::cli {

inline constexpr int kSchemaVersion = 1;

struct ObstacleSpec {
    std::string kind;  // disk | ellipse | ball | ellipsoid
    Vec3 center = Vec3::Zero();
    double radius = 0.0;
    Vec3 semi_axes = Vec3::Zero();
    double angle = 0.0;
    Mat3 frame = Mat3::Identity();
};

/// A parsed configuration file. Tolerances start from a named profile and
/// individual entries may be overridden in the file.
struct BilliardConfig {
    int schema_version = kSchemaVersion;
    int dim = 2;
    std::string name;
    std::vector<ObstacleSpec> obstacles;
    Tolerances tolerances;
    ConstantsOptions constants;
    CurvaturePairing pairing = CurvaturePairing::same;
    std::string source_text;  // raw bytes, hashed into the provenance block
};

/// Parse a JSON document. Syntax errors carry line and column; semantic
/// errors name the offending field as a JSON pointer.
BilliardConfig parse_config(const std::string& text, const std::string& origin = "<config>",
                            const std::string& profile_override = "");
BilliardConfig load_config(const std::string& path, const std::string& profile_override = "");

Billiard make_billiard(const BilliardConfig& cfg);

/// 64-bit FNV-1a of the raw configuration, as 16 hex digits.
std::string config_hash(const std::string& text);

}  // namespace bdim::cli
