#pragma once

#include <array>
#include <optional>
#include <vector>

#include "bdim/tolerances.hpp"
#include "bdim/types.hpp"

namespace bdim {

enum class ObstacleKind { ball, ellipse2d, ellipsoid3d };

/// A strictly convex quadric obstacle: {c + R diag(a) u : |u| <= 1}.
/// Planar obstacles live in the z = 0 plane and only use the first two axes.
class Obstacle {
public:
    static Obstacle ball(const Vec3& center, double radius, int dim);
    /// Semi-axes a >= b > 0; `angle` rotates the a-axis off the x-axis.
    static Obstacle ellipse(const Vec2& center, double a, double b, double angle);
    /// Semi-axes a >= b >= c > 0; `frame` columns are the matching axis directions.
    static Obstacle ellipsoid(const Vec3& center, const Vec3& semi_axes, const Mat3& frame);

    ObstacleKind kind() const { return kind_; }
    int dim() const { return dim_; }
    const Vec3& center() const { return center_; }
    const Vec3& semi_axes() const { return axes_; }
    const Mat3& frame() const { return frame_; }
    double angle() const { return angle_; }
    bool is_ball() const { return kind_ == ObstacleKind::ball; }

    /// sum_i (y_i / a_i)^2 - 1 in body coordinates; zero on the boundary.
    double implicit(const Vec3& p) const;
    Vec3 to_body(const Vec3& p) const;
    Vec3 from_body(const Vec3& y) const;
    /// M = R diag(a^2) R^T, so that h(n) = <n, c> + sqrt(n^T M n).
    const Mat3& shape_matrix() const { return shape_; }
    double support(const Vec3& n) const;
    /// Boundary point with outward normal parallel to n.
    Vec3 support_point(const Vec3& n) const;

    /// Boundary parametrisations used for dense sampling.
    /// Planar: angle t in [0, 2 pi). Spatial: polar s in [0, pi], azimuth t.
    Vec3 boundary_point(double t) const;
    Vec3 boundary_point(double s, double t) const;

    double min_curvature_bound() const;  // closed-form extremes over the whole boundary
    double max_curvature_bound() const;

    /// Lexicographic key used to canonicalise argument order in pairwise routines.
    bool precedes(const Obstacle& other) const;

private:
    Obstacle(ObstacleKind kind, int dim, const Vec3& center, const Vec3& axes,
             const Mat3& frame, double angle);

    ObstacleKind kind_;
    int dim_;
    Vec3 center_;
    Vec3 axes_;
    Mat3 frame_;
    Mat3 shape_;
    double angle_ = 0.0;
};

/// Ordered obstacle list of a planar (D = 2) or spatial (D = 3) open billiard.
class Billiard {
public:
    /// Checks u >= 3, consistent dimensions and pairwise disjointness.
    Billiard(int dim, std::vector<Obstacle> obstacles, Tolerances tol = {});

    int dim() const { return dim_; }
    std::size_t size() const { return obstacles_.size(); }
    const Obstacle& operator[](std::size_t i) const { return obstacles_[i]; }
    const std::vector<Obstacle>& obstacles() const { return obstacles_; }
    const Tolerances& tolerances() const { return tol_; }

private:
    int dim_;
    std::vector<Obstacle> obstacles_;
    Tolerances tol_;
};

struct SurfaceFrame {
    Vec3 normal;
    std::vector<double> curvatures;  // ascending, D - 1 entries
    std::vector<Vec3> directions;    // principal directions matching `curvatures`
};

struct ClosestPair {
    Vec3 p_ij;
    Vec3 p_ji;
    double distance = 0.0;
};

/// Convex hull of a point set inside R^D, kept inside its affine hull so that
/// flat (lower-dimensional) hulls are still usable for membership tests.
struct ConvexPolytope {
    int ambient_dim = 2;
    int affine_dim = 0;
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> triangles;  // full-dimensional 3D hulls
    std::vector<int> loop;                      // planar hulls, counter-clockwise in the plane basis
    // Facet half-spaces <n, x> <= offset, with n in the affine hull.
    std::vector<Vec3> normals;
    std::vector<double> offsets;
    Vec3 origin = Vec3::Zero();
    std::vector<Vec3> basis;       // orthonormal basis of the affine hull directions
    std::vector<Vec3> complement;  // orthonormal complement within R^D

    bool degenerate() const { return affine_dim < ambient_dim; }
    /// Positive outside; for full-dimensional hulls the negative value inside is
    /// the distance to the nearest facet plane.
    double signed_distance(const Vec3& p) const;
    bool contains(const Vec3& p, double eps) const { return signed_distance(p) <= eps; }
    double diameter() const;
};

Vec3 project_to_boundary(const Obstacle& k, const Vec3& p);

SurfaceFrame normal_and_curvatures(const Obstacle& k, const Vec3& q,
                                   double residual_tol = Tolerances{}.boundary_residual);

ClosestPair closest_pair(const Obstacle& ki, const Obstacle& kj, const Tolerances& tol = {});

ConvexPolytope convex_hull(const std::vector<Vec3>& points, int dim, double eps = 1e-9);

/// Signed gap between the two bodies (negative when they overlap).
double separation(const Obstacle& ki, const Obstacle& kj, const Tolerances& tol = {});
/// max |x - y| over x in K_i, y in K_j.
double max_distance(const Obstacle& ki, const Obstacle& kj, const Tolerances& tol = {});

/// Signed distance from K to Cvx(K_i u K_j); non-positive means eclipse.
double hull_gap(const Obstacle& k, const Obstacle& ki, const Obstacle& kj,
                const Tolerances& tol = {});
/// As hull_gap, but raises EclipseViolation when the gap is not positive.
double distance_obstacle_to_hull(const Obstacle& k, const Obstacle& ki, const Obstacle& kj,
                                 const Tolerances& tol = {});

struct EclipseEntry {
    std::size_t k, i, j;  // obstacle k tested against Cvx(K_i u K_j), i < j
    double margin;
    bool pass;
};

struct EclipseReport {
    std::vector<EclipseEntry> entries;
    bool all_pass = true;
};

EclipseReport no_eclipse_check(const Billiard& b);

}  // namespace bdim
