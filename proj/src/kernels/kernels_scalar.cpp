#include <cmath>
#include <limits>

#include "bdim/kernels.hpp"

namespace bdim::kernels::scalar {

void quadric_support(Vec3Span dirs, const double center[3], const SymMat3& m,
                     std::span<double> out) {
    for (std::size_t k = 0; k < dirs.size(); ++k) {
        const double x = dirs.x[k], y = dirs.y[k], z = dirs.z[k];
        const double q = m.xx * x * x + m.yy * y * y + m.zz * z * z +
                         2.0 * (m.xy * x * y + m.xz * x * z + m.yz * y * z);
        out[k] = x * center[0] + y * center[1] + z * center[2] + std::sqrt(q);
    }
}

void fixed_point_g(std::span<const double> gamma, std::span<const double> theta,
                   std::span<double> out) {
    for (std::size_t k = 0; k < gamma.size(); ++k) {
        const double gm = gamma[k];
        out[k] = gm + std::sqrt(gm * gm + 2.0 * gm / theta[k]);
    }
}

void max_plane_distance(Vec3Span points, Vec3Span normals, std::span<const double> offsets,
                        std::span<double> out) {
    for (std::size_t p = 0; p < points.size(); ++p) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t f = 0; f < offsets.size(); ++f) {
            const double s = normals.x[f] * points.x[p] + normals.y[f] * points.y[p] +
                             normals.z[f] * points.z[p] - offsets[f];
            if (s > best) best = s;
        }
        out[p] = best;
    }
}

}  // namespace bdim::kernels::scalar
