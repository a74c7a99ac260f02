#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bdim/constants.hpp"
#include "bdim/geometry.hpp"

namespace bdim::cli {

struct SvgStyle {
    double px_per_unit = 40.0;
    double margin = 1.0;  // config units around the drawing
};

/// Obstacle outlines with the d- segments (solid) and d+ segments (dashed),
/// optionally the shaded hull and polylines (closed for periodic orbits).
struct SceneLayers {
    bool hull = false;
    bool distances = true;
    std::vector<std::vector<Vec3>> polylines;
    bool closed = true;
};

std::string plot_billiard(const Billiard& b, const ConstantsReport& adjusted, const SceneLayers& layers,
                          const SvgStyle& style = {});

/// (gamma, theta) plane: natural rectangle, adjusted rectangles and g
/// iso-contours sampled on a grid x grid lattice.
std::string plot_domain(const DomainD& natural, const std::optional<DomainD>& adjusted, int grid = 200,
                        const SvgStyle& style = {});

/// Line segments of the level set {f = level} by marching squares over a
/// regular lattice; values are row-major with rows along y.
struct Segment {
    double x0, y0, x1, y1;
};
std::vector<Segment> marching_squares(const std::vector<double>& values, int nx, int ny, double x_lo,
                                      double x_hi, double y_lo, double y_hi, double level);

}  // namespace bdim::cli
