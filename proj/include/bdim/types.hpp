#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace bdim {

// Planar billiards are embedded in the z = 0 plane so that a single 3-vector
// type serves both ambient dimensions.
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

inline Vec3 planar(double x, double y) { return Vec3(x, y, 0.0); }

}  // namespace bdim
