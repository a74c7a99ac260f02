#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "bdim/dynamics.hpp"
#include "bdim/error.hpp"

namespace bdim {
namespace {

std::array<Vec3, 2> front_basis(const Vec3& v, int ambient_dim) {
    if (ambient_dim == 2) return {Vec3(-v.y(), v.x(), 0.0).normalized(), Vec3::Zero()};
    const Vec3 seed = std::abs(v.x()) < 0.8 ? Vec3::UnitX() : Vec3::UnitY();
    const Vec3 e1 = (seed - seed.dot(v) * v).normalized();
    return {e1, v.cross(e1).normalized()};
}

Mat2 restrict_dim(Mat2 m, int dim) {
    if (dim == 1) {
        m(0, 1) = m(1, 0) = m(1, 1) = 0.0;
    } else {
        const double off = 0.5 * (m(0, 1) + m(1, 0));
        m(0, 1) = m(1, 0) = off;
    }
    return m;
}

}  // namespace

FrontOperator::FrontOperator(int front_dim, const Mat2& matrix, const std::array<Vec3, 2>& basis,
                             const Vec3& direction)
    : dim_(front_dim), m_(restrict_dim(matrix, front_dim)), basis_(basis), dir_(direction) {
    if (front_dim != 1 && front_dim != 2) raise(ErrorKind::invalid_input, "front dimension must be 1 or 2");
    if (front_dim == 1) basis_[1] = Vec3::Zero();
}

FrontOperator FrontOperator::isotropic(const Vec3& v, double k, int ambient_dim) {
    const int fd = ambient_dim - 1;
    return FrontOperator(fd, k * Mat2::Identity(), front_basis(v.normalized(), ambient_dim), v.normalized());
}

Vec2 FrontOperator::eigenvalues() const {
    if (dim_ == 1) return Vec2(m_(0, 0), m_(0, 0));
    Eigen::SelfAdjointEigenSolver<Mat2> es(m_, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

double FrontOperator::min_eigenvalue() const { return eigenvalues()(0); }
double FrontOperator::max_eigenvalue() const { return eigenvalues()(1); }

double FrontOperator::norm() const {
    const Vec2 e = eigenvalues();
    return std::max(std::abs(e(0)), std::abs(e(1)));
}

double FrontOperator::directional(const Vec2& u) const { return u.dot(apply(u)); }

Vec2 FrontOperator::apply(const Vec2& u) const {
    if (dim_ == 1) return Vec2(m_(0, 0) * u(0), 0.0);
    return m_ * u;
}

Vec3 FrontOperator::to_world(const Vec2& u) const {
    return dim_ == 1 ? Vec3(u(0) * basis_[0]) : Vec3(u(0) * basis_[0] + u(1) * basis_[1]);
}

Vec2 FrontOperator::to_coords(const Vec3& w) const {
    return dim_ == 1 ? Vec2(basis_[0].dot(w), 0.0) : Vec2(basis_[0].dot(w), basis_[1].dot(w));
}

bool FrontOperator::basis_orthonormal(double tol) const {
    for (int a = 0; a < dim_; ++a) {
        if (std::abs(basis_[a].norm() - 1.0) > tol) return false;
        if (std::abs(basis_[a].dot(dir_)) > tol) return false;
    }
    if (dim_ == 2 && std::abs(basis_[0].dot(basis_[1])) > tol) return false;
    return true;
}

Vec3 reflect(const Vec3& v, const Vec3& n) { return v - 2.0 * v.dot(n) * n; }

std::optional<RayHit> first_intersection(const PhasePoint& x, const Billiard& b) {
    const Tolerances& tol = b.tolerances();
    std::optional<RayHit> best;
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (x.last_obstacle && *x.last_obstacle == i) continue;
        const Obstacle& k = b[i];
        const Vec3 y = k.to_body(x.q);
        const Vec3 w = k.frame().transpose() * x.v;
        double qa = 0.0, qb = 0.0, qc = -1.0;
        for (int d = 0; d < k.dim(); ++d) {
            const double s = 1.0 / (k.semi_axes()[d] * k.semi_axes()[d]);
            qa += w[d] * w[d] * s;
            qb += 2.0 * y[d] * w[d] * s;
            qc += y[d] * y[d] * s;
        }
        if (qa <= 0.0) continue;
        if (qc < -tol.flight_epsilon)
            raise(ErrorKind::invalid_input, "phase point lies inside an obstacle");
        const double disc = qb * qb - 4.0 * qa * qc;
        // Squared half chord relative to the obstacle size.
        const double amax = k.semi_axes().head(k.dim()).maxCoeff();
        const double chord = disc / (4.0 * qa * qa * amax * amax);
        RayHit hit{i, 0.0, false};
        if (std::abs(chord) <= tol.tangent_discriminant) {
            hit.t = -qb / (2.0 * qa);
            hit.tangent = true;
        } else if (chord < 0.0) {
            continue;
        } else {
            const double sq = std::sqrt(disc);
            const double q = -0.5 * (qb + std::copysign(sq, qb));
            double t0 = q / qa, t1 = qc / q;
            if (t0 > t1) std::swap(t0, t1);
            hit.t = t0 > tol.flight_epsilon ? t0 : t1;
        }
        if (!(hit.t > tol.flight_epsilon)) continue;
        if (!best || hit.t < best->t) best = hit;
    }
    return best;
}

std::optional<std::pair<PhasePoint, CollisionEvent>> billiard_map(const PhasePoint& x, const Billiard& b) {
    const auto hit = first_intersection(x, b);
    if (!hit) return std::nullopt;
    if (hit->tangent) raise(ErrorKind::tangent_ray, "ray is tangent to obstacle " + std::to_string(hit->obstacle));
    const Obstacle& k = b[hit->obstacle];
    CollisionEvent ev;
    ev.obstacle = hit->obstacle;
    ev.q = x.q + hit->t * x.v;
    ev.v_in = x.v;
    ev.flight = hit->t;
    const SurfaceFrame sf = normal_and_curvatures(k, ev.q, b.tolerances().boundary_residual);
    ev.normal = sf.normal;
    const double c = -ev.v_in.dot(ev.normal);
    if (c < b.tolerances().grazing_cos)
        raise(ErrorKind::grazing_collision, "grazing collision with obstacle " + std::to_string(hit->obstacle));
    ev.v_out = reflect(ev.v_in, ev.normal);
    ev.phi = std::acos(std::clamp(ev.v_out.dot(ev.normal), -1.0, 1.0));
    PhasePoint next{ev.q, ev.v_out, ev.obstacle};
    return std::make_pair(next, ev);
}

FrontOperator theta_operator(const SurfaceFrame& surface, const Vec3& n, const Vec3& v,
                             const std::array<Vec3, 2>& basis, int front_dim, double grazing_cos) {
    const double c = n.dot(v);
    if (!(c >= grazing_cos)) raise(ErrorKind::grazing_collision, "collision angle too close to tangency");
    if (static_cast<int>(surface.curvatures.size()) != front_dim)
        raise(ErrorKind::invalid_input, "surface curvature count does not match the front dimension");
    // V maps the front plane onto the tangent plane along v.
    Mat2 vm = Mat2::Zero();
    for (int b = 0; b < front_dim; ++b) {
        const Vec3 img = basis[b] - (basis[b].dot(n) / c) * v;
        for (int a = 0; a < front_dim; ++a) vm(a, b) = surface.directions[a].dot(img);
    }
    Mat2 kd = Mat2::Zero();
    for (int a = 0; a < front_dim; ++a) kd(a, a) = surface.curvatures[a];
    const Mat2 theta = c * vm.transpose() * kd * vm;
    return FrontOperator(front_dim, theta, basis, v);
}

FrontOperator propagate_front(const FrontOperator& b, double t) {
    if (t < 0.0) raise(ErrorKind::invalid_input, "flight length must be non-negative");
    Mat2 m;
    if (b.front_dim() == 1) {
        m = Mat2::Zero();
        m(0, 0) = b(0, 0) / (1.0 + t * b(0, 0));
    } else {
        // B (I + t B)^{-1}, well defined for semi-definite B as well.
        m = b.matrix() * (Mat2::Identity() + t * b.matrix()).inverse();
    }
    return FrontOperator(b.front_dim(), m, b.basis(), b.direction());
}

FrontOperator transport_across(const FrontOperator& before, const Vec3& n) {
    const Vec3 v = reflect(before.direction(), n).normalized();
    std::array<Vec3, 2> basis{Vec3::Zero(), Vec3::Zero()};
    Vec3 e0 = reflect(before.basis()[0], n);
    e0 = (e0 - e0.dot(v) * v).normalized();
    basis[0] = e0;
    if (before.front_dim() == 2) {
        Vec3 e1 = reflect(before.basis()[1], n);
        e1 = e1 - e1.dot(v) * v - e1.dot(e0) * e0;
        basis[1] = e1.normalized();
    }
    return FrontOperator(before.front_dim(), before.matrix(), basis, v);
}

FrontOperator reflect_front(const FrontOperator& before, const FrontOperator& theta) {
    if (!before.basis_orthonormal() || !theta.basis_orthonormal())
        raise(ErrorKind::basis_mismatch, "front basis is not orthonormal");
    if (before.front_dim() != theta.front_dim())
        raise(ErrorKind::basis_mismatch, "front dimensions differ");
    for (int a = 0; a < before.front_dim(); ++a)
        if ((before.basis()[a] - theta.basis()[a]).norm() > 1e-9)
            raise(ErrorKind::basis_mismatch, "operators are expressed on different bases");
    return FrontOperator(before.front_dim(), before.matrix() + 2.0 * theta.matrix(), before.basis(),
                         before.direction());
}

FrontOperator collide_front(const FrontOperator& before, const SurfaceFrame& surface, double grazing_cos) {
    const FrontOperator moved = transport_across(before, surface.normal);
    const FrontOperator theta =
        theta_operator(surface, surface.normal, moved.direction(), moved.basis(), moved.front_dim(), grazing_cos);
    return reflect_front(moved, theta);
}

double delta_factor(const FrontOperator& b, const Vec2& u, double flight) {
    if (b.front_dim() == 1) return 1.0 / (1.0 + flight * b(0, 0));
    const Vec2 w = u + flight * b.apply(u);
    return 1.0 / w.norm();
}

namespace {

struct FrontState {
    FrontOperator front;
    Vec2 u;
    double product = 1.0;
};

FrontStep advance(FrontState& st, const CollisionEvent& ev, const Billiard& b) {
    const Tolerances& tol = b.tolerances();
    FrontStep step;
    step.event = ev;
    step.delta = delta_factor(st.front, st.u, ev.flight);
    Vec2 u = st.u;
    if (st.front.front_dim() == 2) u = (u + ev.flight * st.front.apply(u)).normalized();
    const FrontOperator flown = propagate_front(st.front, ev.flight);
    const SurfaceFrame sf = normal_and_curvatures(b[ev.obstacle], ev.q, tol.boundary_residual);
    st.front = collide_front(flown, sf, tol.grazing_cos);
    st.u = u;
    st.product *= step.delta;
    step.front = st.front;
    step.tangent = u;
    step.k = st.front.directional(u);
    step.delta_product = st.product;
    return step;
}

FrontState seed_state(const FrontSeed& seed, const Vec3& v, const Billiard& b) {
    FrontState st{seed.front ? *seed.front : FrontOperator::isotropic(v, b.tolerances().k0_plus, b.dim()),
                  seed.tangent, 1.0};
    if ((st.front.direction() - v).norm() > 1e-9)
        raise(ErrorKind::basis_mismatch, "seed front does not travel along the initial velocity");
    if (st.front.front_dim() == 1) {
        st.u = Vec2(1.0, 0.0);
    } else {
        if (!(st.u.norm() > 0.0)) raise(ErrorKind::invalid_input, "seed tangent must be non-zero");
        st.u.normalize();
    }
    return st;
}

}  // namespace

Trajectory simulate(const PhasePoint& x0, const Billiard& b, std::size_t n_max, const FrontSeed& seed) {
    if (std::abs(x0.v.norm() - 1.0) > 1e-12) raise(ErrorKind::invalid_input, "velocity must be a unit vector");
    Trajectory out;
    FrontState st = seed_state(seed, x0.v, b);
    PhasePoint x = x0;
    for (std::size_t n = 0; n < n_max; ++n) {
        auto next = billiard_map(x, b);
        if (!next) {
            out.escaped = true;
            break;
        }
        out.steps.push_back(advance(st, next->second, b));
        x = next->first;
    }
    out.final_state = x;
    return out;
}

Trajectory propagate_along(const std::vector<CollisionEvent>& events, const Billiard& b, const FrontSeed& seed) {
    Trajectory out;
    if (events.empty()) return out;
    FrontState st = seed_state(seed, events.front().v_in.normalized(), b);
    for (const auto& ev : events) out.steps.push_back(advance(st, ev, b));
    const auto& last = events.back();
    out.final_state = {last.q, last.v_out, last.obstacle};
    return out;
}

}  // namespace bdim
