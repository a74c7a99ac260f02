#include "bdim/error.hpp"

namespace bdim {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::invalid_input: return "InvalidInput";
    case ErrorKind::degenerate_point: return "DegeneratePoint";
    case ErrorKind::point_off_boundary: return "PointOffBoundary";
    case ErrorKind::no_convergence: return "NoConvergence";
    case ErrorKind::eclipse_violation: return "EclipseViolation";
    case ErrorKind::degenerate_hull: return "DegenerateHull";
    case ErrorKind::tangent_ray: return "TangentRay";
    case ErrorKind::grazing_collision: return "GrazingCollision";
    case ErrorKind::basis_mismatch: return "BasisMismatch";
    case ErrorKind::inadmissible_sequence: return "InadmissibleSequence";
    case ErrorKind::config_parse: return "ConfigParse";
    case ErrorKind::unsupported: return "Unsupported";
    }
    return "Unknown";
}

void raise(ErrorKind kind, const std::string& what) {
    throw Error(kind, std::string(to_string(kind)) + ": " + what);
}

}  // namespace bdim
