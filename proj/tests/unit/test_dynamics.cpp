#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "bdim/dynamics.hpp"
#include "bdim/error.hpp"
#include "bdim/orbits.hpp"
#include "oracles.hpp"

using namespace bdim;

namespace {

Obstacle disk(double x, double y, double r) { return Obstacle::ball(planar(x, y), r, 2); }

Billiard three_disk() { return Billiard(2, {disk(-4, 0, 2), disk(4, 0, 3), disk(0, 10, 1)}); }

// A unit disk at the origin plus two obstacles well away from the x-axis.
Billiard axis_billiard() { return Billiard(2, {disk(0, 0, 1), disk(0, 20, 1), disk(20, 20, 1)}); }

Vec3 random_unit(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> n(0, 1);
    Vec3 v(n(rng), n(rng), dim == 3 ? n(rng) : 0.0);
    return v.normalized();
}

SurfaceFrame planar_surface(double kappa, const Vec3& n) {
    return {n, {kappa}, {Vec3(-n.y(), n.x(), 0)}};
}

std::array<Vec3, 2> planar_basis(const Vec3& v) { return {Vec3(-v.y(), v.x(), 0), Vec3::Zero()}; }

}  // namespace

TEST_CASE("reflect examples") {
    CHECK((reflect(planar(0, -1), planar(0, 1)) - planar(0, 1)).norm() <= 1e-15);
    const Vec3 v = planar(1, -1) / std::sqrt(2.0);
    CHECK((reflect(v, planar(0, 1)) - planar(1, 1) / std::sqrt(2.0)).norm() <= 1e-15);
}

TEST_CASE("reflect flips the normal component and keeps the tangential one") {
    std::mt19937_64 rng(1);
    for (int k = 0; k < 1000; ++k) {
        const Vec3 v = random_unit(rng, 3), n = random_unit(rng, 3);
        const Vec3 r = reflect(v, n);
        CHECK(std::abs(r.norm() - 1) <= 1e-12);
        CHECK(std::abs(r.dot(n) + v.dot(n)) <= 1e-12);
        CHECK(((r - r.dot(n) * n) - (v - v.dot(n) * n)).norm() <= 1e-12);
        CHECK((reflect(r, n) - v).norm() <= 1e-12);
    }
}

TEST_CASE("first_intersection on the axis") {
    const Billiard b = axis_billiard();
    const auto hit = first_intersection({planar(-5, 0), planar(1, 0), std::nullopt}, b);
    REQUIRE(hit);
    CHECK(hit->obstacle == 0);
    CHECK(hit->t == doctest::Approx(4.0).epsilon(1e-14));
    CHECK_FALSE(first_intersection({planar(-5, 0), planar(-1, 0), std::nullopt}, b));
}

TEST_CASE("first_intersection agrees with ray marching") {
    const Billiard b = three_disk();
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> pos(-8, 12);
    int compared = 0;
    while (compared < 30) {
        const Vec3 q = planar(pos(rng), pos(rng) - 2);
        bool inside = false;
        for (const auto& o : b.obstacles()) inside = inside || o.implicit(q) <= 0.05;
        if (inside) continue;
        const Vec3 v = random_unit(rng, 2);
        const auto hit = first_intersection({q, v, std::nullopt}, b);
        const auto ref = oracle::march_ray(b, q, v, std::nullopt, 1e-4, 40.0);
        CHECK(hit.has_value() == ref.has_value());
        if (hit && ref) {
            CHECK(hit->obstacle == ref->first);
            CHECK(std::abs(hit->t - ref->second) <= 1e-3);
        }
        ++compared;
    }
}

TEST_CASE("tangent rays are flagged") {
    const Billiard b = axis_billiard();
    const auto hit = first_intersection({planar(-5, 1), planar(1, 0), std::nullopt}, b);
    REQUIRE(hit);
    CHECK(hit->tangent);
    try {
        billiard_map({planar(-5, 1), planar(1, 0), std::nullopt}, b);
        FAIL("expected TangentRay");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::tangent_ray);
    }
}

TEST_CASE("closest-pair segment is a period-2 orbit of the map") {
    const Billiard b = three_disk();
    const auto cp = closest_pair(b[0], b[1]);
    const PhasePoint x{cp.p_ij, (cp.p_ji - cp.p_ij).normalized(), 0};
    const auto y = billiard_map(x, b);
    REQUIRE(y);
    CHECK(y->first.last_obstacle == std::size_t{1});
    CHECK((y->first.q - cp.p_ji).norm() <= 1e-10);
    CHECK((y->first.v + x.v).norm() <= 1e-10);
    CHECK(y->second.phi <= 1e-7);
    const auto z = billiard_map(y->first, b);
    REQUIRE(z);
    CHECK((z->first.q - x.q).norm() <= 1e-10);
    CHECK((z->first.v - x.v).norm() <= 1e-10);
}

TEST_CASE("collision events satisfy the reflection law") {
    const Billiard b = three_disk();
    const auto orbit = find_periodic_orbit(b, SymbolSequence{{0, 1, 2}, true});
    PhasePoint x{orbit.points[0], (orbit.points[1] - orbit.points[0]).normalized(), 0};
    for (int k = 0; k < 6; ++k) {
        const auto y = billiard_map(x, b);
        REQUIRE(y);
        const auto& ev = y->second;
        CHECK((ev.v_out - (ev.v_in - 2 * ev.v_in.dot(ev.normal) * ev.normal)).norm() <= 1e-12);
        CHECK(std::abs(std::cos(ev.phi) - ev.v_out.dot(ev.normal)) <= 1e-12);
        CHECK(std::abs(ev.v_out.dot(ev.normal) + ev.v_in.dot(ev.normal)) <= 1e-12);
        CHECK(std::abs(ev.v_out.norm() - 1) <= 1e-12);
        CHECK(y->first.v.dot(ev.normal) >= 0);
        CHECK((ev.q - orbit.points[(k + 1) % 3]).norm() <= 1e-8);
        x = y->first;
    }
}

TEST_CASE("theta operator: planar normal incidence and the secant law") {
    const Vec3 n = planar(0, 1);
    const auto th = theta_operator(planar_surface(1.0, n), n, n, planar_basis(n), 1);
    CHECK(th(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ang(-1.5, 1.5), kap(0.1, 5);
    for (int k = 0; k < 1000; ++k) {
        const double phi = ang(rng), kappa = kap(rng);
        const Vec3 v = planar(std::sin(phi), std::cos(phi));
        const auto t = theta_operator(planar_surface(kappa, n), n, v, planar_basis(v), 1);
        CHECK(std::abs(t.norm() - kappa / std::cos(phi)) <= 1e-12 * std::max(1.0, kappa / std::cos(phi)));
    }
}

TEST_CASE("theta operator: unit sphere at normal incidence is the identity") {
    const Vec3 n(0, 0, 1);
    const SurfaceFrame sf{n, {1.0, 1.0}, {Vec3::UnitX(), Vec3::UnitY()}};
    const auto th = theta_operator(sf, n, n, {Vec3::UnitX(), Vec3::UnitY()}, 2);
    CHECK((th.matrix() - Mat2::Identity()).norm() <= 1e-15);
}

TEST_CASE("theta operator norm bounds on random ellipsoid frames") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> kap(0.1, 4), u01(0, 1);
    for (int k = 0; k < 10000; ++k) {
        const double k1 = kap(rng), k2 = kap(rng);
        const double kmin = std::min(k1, k2), kmax = std::max(k1, k2);
        const Vec3 n(0, 0, 1);
        const double rot = 2 * std::numbers::pi * u01(rng);
        const Vec3 d0(std::cos(rot), std::sin(rot), 0), d1(-std::sin(rot), std::cos(rot), 0);
        const double phi = std::acos(std::max(1e-3, u01(rng))), az = 2 * std::numbers::pi * u01(rng);
        const Vec3 v(std::sin(phi) * std::cos(az), std::sin(phi) * std::sin(az), std::cos(phi));
        const Vec3 e0 = (Vec3::UnitX() - Vec3::UnitX().dot(v) * v).normalized();
        const SurfaceFrame sf{n, {kmin, kmax}, {d0, d1}};
        const auto th = theta_operator(sf, n, v, {e0, v.cross(e0)}, 2);
        const double c = v.dot(n);
        CHECK(th.norm() >= kmin * c * (1 - 1e-12));
        CHECK(th.norm() <= kmax / c * (1 + 1e-12));
        CHECK(th.min_eigenvalue() >= kmin * c * (1 - 1e-12));
        CHECK(std::abs(th(0, 1) - th(1, 0)) <= 1e-12);
    }
}

TEST_CASE("grazing collisions are rejected") {
    const Vec3 n = planar(0, 1);
    const Vec3 v = planar(1, 1e-10).normalized();
    try {
        theta_operator(planar_surface(1.0, n), n, v, planar_basis(v), 1);
        FAIL("expected GrazingCollision");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::grazing_collision);
    }
}

TEST_CASE("propagate_front examples") {
    const Vec3 v = planar(1, 0);
    const auto b = FrontOperator::isotropic(v, 1.0, 2);
    CHECK(propagate_front(b, 1.0)(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(propagate_front(b, 0.0)(0, 0) == 1.0);
    Mat2 m = Mat2::Zero();
    m(0, 0) = 1;
    m(1, 1) = 2;
    const FrontOperator b3(2, m, {Vec3::UnitY(), Vec3::UnitZ()}, Vec3::UnitX());
    const auto p = propagate_front(b3, 1.0);
    CHECK(p(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p(1, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(std::abs(p(0, 1)) <= 1e-15);
    CHECK((propagate_front(b3, 0.0).matrix() - m).norm() == 0.0);
}

TEST_CASE("propagate_front maps eigenvalues by l -> l / (1 + t l)") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> d(-1, 1), t(0, 5);
    for (int k = 0; k < 200; ++k) {
        Mat2 a;
        a << d(rng), d(rng), d(rng), d(rng);
        const Mat2 m = a * a.transpose() + 0.1 * Mat2::Identity();
        const FrontOperator b(2, m, {Vec3::UnitY(), Vec3::UnitZ()}, Vec3::UnitX());
        const double s = t(rng);
        const Vec2 ev = b.eigenvalues(), ep = propagate_front(b, s).eigenvalues();
        CHECK(std::abs(ep(0) - ev(0) / (1 + s * ev(0))) <= 1e-12);
        CHECK(std::abs(ep(1) - ev(1) / (1 + s * ev(1))) <= 1e-12);
    }
}

TEST_CASE("reflect_front scalar examples") {
    const Vec3 n = planar(0, 1);
    const Vec3 v = n;
    const FrontOperator before(1, Mat2::Identity() * 0.5, planar_basis(v), v);
    const auto th = theta_operator(planar_surface(1.0, n), n, v, planar_basis(v), 1);
    CHECK(reflect_front(before, th)(0, 0) == doctest::Approx(2.5).epsilon(1e-15));
    const Vec3 w = planar(std::sin(std::numbers::pi / 3), std::cos(std::numbers::pi / 3));
    const FrontOperator zero(1, Mat2::Zero(), planar_basis(w), w);
    const auto th2 = theta_operator(planar_surface(2.0, n), n, w, planar_basis(w), 1);
    CHECK(reflect_front(zero, th2)(0, 0) == doctest::Approx(8.0).epsilon(1e-14));
}

TEST_CASE("reflect_front rejects non-orthonormal or mismatched bases") {
    const Vec3 v = Vec3::UnitX();
    const FrontOperator good(2, Mat2::Identity(), {Vec3::UnitY(), Vec3::UnitZ()}, v);
    const FrontOperator skew(2, Mat2::Identity(), {Vec3::UnitY(), Vec3(0, 1, 1)}, v);
    const FrontOperator other(2, Mat2::Identity(), {Vec3::UnitZ(), -Vec3::UnitY()}, v);
    for (const auto* bad : {&skew, &other}) {
        try {
            reflect_front(good, *bad);
            FAIL("expected BasisMismatch");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::basis_mismatch);
        }
    }
}

TEST_CASE("transport keeps the basis orthonormal and orthogonal to the new direction") {
    std::mt19937_64 rng(6);
    for (int k = 0; k < 500; ++k) {
        const Vec3 v = random_unit(rng, 3);
        Vec3 n = random_unit(rng, 3);
        if (n.dot(v) > 0) n = -n;
        const auto b = FrontOperator::isotropic(v, 2.0, 3);
        const auto t = transport_across(b, n);
        CHECK(t.basis_orthonormal());
        CHECK(std::abs(t.basis()[0].dot(t.direction())) <= 1e-12);
        CHECK(std::abs(t.basis()[1].dot(t.direction())) <= 1e-12);
        CHECK((t.direction() - reflect(v, n)).norm() <= 1e-12);
    }
}

TEST_CASE("delta_factor examples") {
    const auto k1 = FrontOperator::isotropic(planar(1, 0), 1.0, 2);
    CHECK(delta_factor(k1, Vec2(1, 0), 1.0) == doctest::Approx(0.5).epsilon(1e-15));
    const FrontOperator iso(2, Mat2::Identity(), {Vec3::UnitY(), Vec3::UnitZ()}, Vec3::UnitX());
    CHECK(delta_factor(iso, Vec2(0.6, 0.8), 2.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    Mat2 m = Mat2::Zero();
    m(0, 0) = 1;
    m(1, 1) = 3;
    const FrontOperator aniso(2, m, {Vec3::UnitY(), Vec3::UnitZ()}, Vec3::UnitX());
    CHECK(delta_factor(aniso, Vec2(0, 1), 1.0) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("simulate along a period-2 orbit gives constant rows") {
    const Billiard b = three_disk();
    const auto cp = closest_pair(b[0], b[2]);
    // The orbit is hyperbolic, so rounding drives the ray off it after a dozen or so bounces.
    const auto traj = simulate({cp.p_ij, (cp.p_ji - cp.p_ij).normalized(), 0}, b, 6);
    REQUIRE(traj.steps.size() == 6);
    CHECK_FALSE(traj.escaped);
    for (const auto& s : traj.steps) {
        CHECK(std::abs(s.event.flight - cp.distance) <= 1e-9);
        CHECK(s.event.phi <= 1e-6);
        CHECK(std::abs(s.event.v_out.norm() - 1) <= 1e-12);
        CHECK(s.delta > 0);
        CHECK(s.delta < 1);
    }
    // Front curvature settles on the two-cycle of the period-2 recursion.
    const double k = traj.steps.back().k;
    const double kp = traj.steps[traj.steps.size() - 3].k;
    CHECK(std::abs(k - kp) <= 1e-6 * k);
}

TEST_CASE("escaping ray is flagged") {
    const Billiard b = three_disk();
    const auto traj = simulate({planar(0, -20), planar(0, -1), std::nullopt}, b, 10);
    CHECK(traj.escaped);
    CHECK(traj.steps.empty());
    const auto once = simulate({planar(-30, 0), planar(1, 0), std::nullopt}, b, 10);
    CHECK(once.escaped);
    CHECK(once.steps.size() <= 2);
}

TEST_CASE("time reversal retraces the collision points") {
    const Billiard b = three_disk();
    std::mt19937_64 rng(8);
    const auto orbit = find_periodic_orbit(b, random_admissible(3, 12, true, rng));
    const Vec3 q0 = orbit.points[0];
    const Vec3 v0 = (orbit.points[1] - q0).normalized();
    const auto fwd = simulate({q0, v0, orbit.sequence.symbols[0]}, b, 6);
    REQUIRE(fwd.steps.size() == 6);
    const auto& last = fwd.steps.back().event;
    const auto back = simulate({last.q, -last.v_in, last.obstacle}, b, 6);
    REQUIRE(back.steps.size() == 6);
    for (std::size_t k = 0; k < 5; ++k) CHECK((back.steps[k].event.q - fwd.steps[4 - k].event.q).norm() <= 1e-8);
    CHECK((back.steps[5].event.q - q0).norm() <= 1e-8);
}

TEST_CASE("simulated fronts stay positive definite and symmetric in 3D") {
    const Billiard b(3, {Obstacle::ball(Vec3(0, 0, 0), 1, 3), Obstacle::ball(Vec3(6, 0, 0), 1.5, 3),
                         Obstacle::ball(Vec3(3, 5, 0.5), 1, 3), Obstacle::ball(Vec3(3, 2, 5), 1.2, 3)});
    const auto orbit = find_periodic_orbit(b, SymbolSequence{{0, 1, 2, 3}, true});
    const Vec3 q0 = orbit.points[0];
    FrontSeed seed;
    seed.tangent = Vec2(0.6, 0.8);
    const auto traj = simulate({q0, (orbit.points[1] - q0).normalized(), 0}, b, 12, seed);
    REQUIRE(traj.steps.size() == 12);
    for (const auto& s : traj.steps) {
        CHECK(s.front.min_eigenvalue() > 0);
        CHECK(std::abs(s.front(0, 1) - s.front(1, 0)) <= 1e-12);
        CHECK(s.front.basis_orthonormal());
        CHECK(std::abs(s.front.direction().dot(s.front.basis()[0])) <= 1e-10);
        CHECK(std::abs(s.tangent.norm() - 1) <= 1e-12);
    }
}
