#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "bdim/geometry.hpp"

namespace bdim {

/// A point of phase space: position, unit velocity, and the obstacle the
/// position lies on (if any). On a boundary the velocity points outwards.
struct PhasePoint {
    Vec3 q = Vec3::Zero();
    Vec3 v = Vec3::UnitX();
    std::optional<std::size_t> last_obstacle;
};

struct CollisionEvent {
    std::size_t obstacle = 0;
    Vec3 q = Vec3::Zero();
    Vec3 v_in = Vec3::Zero();
    Vec3 v_out = Vec3::Zero();
    Vec3 normal = Vec3::Zero();
    double phi = 0.0;     // collision angle, arccos <v_out, n>
    double flight = 0.0;  // distance travelled since the previous event
};

struct RayHit {
    std::size_t obstacle = 0;
    double t = 0.0;
    bool tangent = false;  // discriminant numerically zero
};

/// Second fundamental form of a wave front, expressed on an explicit
/// orthonormal basis of the plane orthogonal to the propagation direction.
/// For planar billiards the front is a curve and the operator is 1x1.
class FrontOperator {
public:
    FrontOperator() = default;
    FrontOperator(int front_dim, const Mat2& matrix, const std::array<Vec3, 2>& basis,
                  const Vec3& direction);

    /// Isotropic front with curvature k travelling along v (k large: point source).
    static FrontOperator isotropic(const Vec3& v, double k, int ambient_dim);

    int front_dim() const { return dim_; }
    const Mat2& matrix() const { return m_; }
    const std::array<Vec3, 2>& basis() const { return basis_; }
    const Vec3& direction() const { return dir_; }

    double operator()(int r, int c) const { return m_(r, c); }
    /// Eigenvalues in ascending order (front_dim entries valid).
    Vec2 eigenvalues() const;
    double min_eigenvalue() const;
    double max_eigenvalue() const;
    /// Operator norm (largest absolute eigenvalue).
    double norm() const;
    /// <B u, u> for a unit coordinate vector u on the stored basis.
    double directional(const Vec2& u) const;
    Vec2 apply(const Vec2& u) const;
    /// World-space vector for basis coordinates u (and back).
    Vec3 to_world(const Vec2& u) const;
    Vec2 to_coords(const Vec3& w) const;

    bool basis_orthonormal(double tol = 1e-10) const;

private:
    int dim_ = 1;
    Mat2 m_ = Mat2::Zero();
    std::array<Vec3, 2> basis_{Vec3::Zero(), Vec3::Zero()};
    Vec3 dir_ = Vec3::UnitX();
};

Vec3 reflect(const Vec3& v, const Vec3& n);

std::optional<RayHit> first_intersection(const PhasePoint& x, const Billiard& b);

/// One application of the billiard ball map; nullopt when the ray escapes.
/// Raises TangentRay when the next hit is grazing.
std::optional<std::pair<PhasePoint, CollisionEvent>> billiard_map(const PhasePoint& x,
                                                                  const Billiard& b);

/// Curvature increment Theta = <n, v> V* K V at a reflection, expressed on
/// `basis` (an orthonormal basis of the plane orthogonal to the outgoing v).
FrontOperator theta_operator(const SurfaceFrame& surface, const Vec3& n, const Vec3& v,
                             const std::array<Vec3, 2>& basis, int front_dim,
                             double grazing_cos = Tolerances{}.grazing_cos);

/// Free flight: B -> (B^{-1} + t I)^{-1}.
FrontOperator propagate_front(const FrontOperator& b, double t);

/// Carry a pre-collision front across the reflection isometry at normal n.
/// The matrix is unchanged; basis and direction are reflected and then
/// re-orthonormalised against the outgoing direction.
FrontOperator transport_across(const FrontOperator& before, const Vec3& n);

/// B+ = B- + 2 Theta. Both operators must share one orthonormal basis.
FrontOperator reflect_front(const FrontOperator& before, const FrontOperator& theta);

/// Convenience: transport, build Theta, and add.
FrontOperator collide_front(const FrontOperator& before, const SurfaceFrame& surface,
                            double grazing_cos = Tolerances{}.grazing_cos);

/// delta = 1 / (1 + d l) where (1 + d l)^2 = |u + d B u|^2.
double delta_factor(const FrontOperator& b, const Vec2& u, double flight);

struct FrontStep {
    CollisionEvent event;
    FrontOperator front;   // s.f.f. right after the reflection
    Vec2 tangent;          // unit tangent direction (front coordinates) after the reflection
    double k = 0.0;        // directional curvature <B u, u>
    double delta = 1.0;    // contraction factor of the flight ending at this event
    double delta_product = 1.0;
};

struct Trajectory {
    std::vector<FrontStep> steps;
    bool escaped = false;
    PhasePoint final_state;
};

struct FrontSeed {
    std::optional<FrontOperator> front;  // defaults to a point source of curvature k0_plus
    Vec2 tangent = Vec2(1.0, 0.0);
};

/// Follow x0 for up to n_max reflections, propagating the front alongside.
Trajectory simulate(const PhasePoint& x0, const Billiard& b, std::size_t n_max,
                    const FrontSeed& seed = {});

/// Propagate a front along externally supplied collision data (e.g. a
/// periodic orbit), starting just before the first event's flight.
Trajectory propagate_along(const std::vector<CollisionEvent>& events, const Billiard& b,
                           const FrontSeed& seed = {});

}  // namespace bdim
