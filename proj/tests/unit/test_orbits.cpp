#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "doctest.h"

#include "bdim/error.hpp"
#include "bdim/orbits.hpp"
#include "oracles.hpp"

using namespace bdim;

namespace {

Obstacle disk(double x, double y, double r) { return Obstacle::ball(planar(x, y), r, 2); }

Billiard three_disk() { return Billiard(2, {disk(-4, 0, 2), disk(4, 0, 3), disk(0, 10, 1)}); }

Billiard equilateral() {
    const double h = 10 * std::sqrt(3.0) / 2;
    return Billiard(2, {disk(0, 0, 1), disk(10, 0, 1), disk(5, h, 1)});
}

SymbolSequence seq(std::initializer_list<std::size_t> s) { return {std::vector<std::size_t>(s), true}; }

double cyclic_length(const std::vector<Vec3>& p) {
    double f = 0;
    for (std::size_t j = 0; j < p.size(); ++j) f += (p[(j + 1) % p.size()] - p[j]).norm();
    return f;
}

// Signed angle parameter of a point on a disk.
Vec3 rotate_on(const Obstacle& k, const Vec3& q, double arc) {
    const Vec3 d = q - k.center();
    const double r = k.semi_axes().x();
    const double a = std::atan2(d.y(), d.x()) + arc / r;
    return k.center() + planar(r * std::cos(a), r * std::sin(a));
}

}  // namespace

TEST_CASE("admissibility and canonical forms") {
    CHECK(seq({0, 1, 2}).admissible());
    CHECK_FALSE(seq({0, 1, 1}).admissible());
    CHECK_FALSE(seq({0, 1, 0}).admissible());
    CHECK(SymbolSequence{{0, 1, 0}, false}.admissible());
    CHECK_FALSE(seq({0, 3}).admissible_for(3));
    CHECK(canonical_rotation(seq({2, 0, 1})).symbols == std::vector<std::size_t>{0, 1, 2});
    CHECK(is_primitive(seq({0, 1, 2})));
    CHECK_FALSE(is_primitive(seq({0, 1, 0, 1})));
}

TEST_CASE("enumeration is canonical, primitive, and lexicographic") {
    const auto s3 = enumerate_periodic_sequences(3, 3);
    REQUIRE(s3.size() == 5);
    CHECK(s3[0].symbols == std::vector<std::size_t>{0, 1});
    CHECK(s3[3].symbols == std::vector<std::size_t>{0, 1, 2});
    CHECK(s3[4].symbols == std::vector<std::size_t>{0, 2, 1});
    const auto s = enumerate_periodic_sequences(4, 6);
    std::set<std::vector<std::size_t>> seen;
    for (const auto& x : s) {
        CHECK(x.admissible_for(4));
        CHECK(is_primitive(x));
        CHECK(canonical_rotation(x).symbols == x.symbols);
        CHECK(seen.insert(x.symbols).second);
    }
}

TEST_CASE("random admissible sequences are admissible") {
    std::mt19937_64 rng(1);
    for (int k = 0; k < 1000; ++k) {
        CHECK(random_admissible(3, 2 + k % 9, true, rng).admissible_for(3));
        CHECK(random_admissible(4, 1 + k % 9, false, rng).admissible_for(4));
    }
}

TEST_CASE("inadmissible sequences are refused") {
    try {
        find_periodic_orbit(three_disk(), seq({0, 1, 1}));
        FAIL("expected InadmissibleSequence");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::inadmissible_sequence);
    }
}

TEST_CASE("period-2 orbit is the closest pair") {
    const Billiard b = three_disk();
    const auto pairs = all_closest_pairs(b);
    CHECK(pairs.pair_count() == 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j) {
            const auto o = find_periodic_orbit(b, seq({i, j}));
            CHECK((o.points[0] - pairs.point(i, j)).norm() <= 1e-9);
            CHECK((o.points[1] - pairs.point(j, i)).norm() <= 1e-9);
            CHECK(std::abs(o.length - 2 * pairs.distance(i, j)) <= 1e-8);
        }
    const auto two = closest_pair(disk(0, 0, 1), disk(10, 0, 2));
    CHECK(two.distance == doctest::Approx(7.0));
}

TEST_CASE("equilateral triangle orbit sits on the inward bisectors") {
    const Billiard b = equilateral();
    const auto o = find_periodic_orbit(b, seq({0, 1, 2}));
    Vec3 centroid = Vec3::Zero();
    for (const auto& k : b.obstacles()) centroid += k.center() / 3.0;
    for (std::size_t j = 0; j < 3; ++j) {
        const Vec3 expect = b[j].center() + (centroid - b[j].center()).normalized();
        CHECK((o.points[j] - expect).norm() <= 1e-9);
    }
    const double d01 = (o.points[1] - o.points[0]).norm();
    CHECK(std::abs((o.points[2] - o.points[1]).norm() - d01) <= 1e-9);
    CHECK(std::abs((o.points[0] - o.points[2]).norm() - d01) <= 1e-9);
    const auto ref = oracle::dp_periodic_orbit(b, {0, 1, 2});
    for (std::size_t j = 0; j < 3; ++j) CHECK((o.points[j] - ref[j]).cwiseAbs().maxCoeff() <= 1e-5);
}

TEST_CASE("three-disk triangle orbit is invariant under the billiard map") {
    const Billiard b = three_disk();
    const auto o = find_periodic_orbit(b, seq({0, 1, 2}));
    CHECK(o.boundary_residual <= 1e-9);
    CHECK(o.reflection_residual <= 1e-8);
    PhasePoint x{o.points[0], (o.points[1] - o.points[0]).normalized(), 0};
    for (std::size_t k = 1; k <= 3; ++k) {
        const auto y = billiard_map(x, b);
        REQUIRE(y);
        CHECK((y->first.q - o.points[k % 3]).norm() <= 1e-8);
        x = y->first;
    }
    CHECK((x.v - (o.points[1] - o.points[0]).normalized()).norm() <= 1e-8);
}

TEST_CASE("orbit invariants, local minimality and cyclic invariance") {
    const Billiard b = three_disk();
    std::mt19937_64 rng(2);
    for (int t = 0; t < 10; ++t) {
        const auto s = random_admissible(3, 3 + t % 6, true, rng);
        const auto o = find_periodic_orbit(b, s);
        CHECK(o.boundary_residual <= 1e-9);
        CHECK(o.reflection_residual <= 1e-8);
        const double f0 = cyclic_length(o.points);
        CHECK(std::abs(f0 - o.length) <= 1e-9);
        for (std::size_t j = 0; j < o.points.size(); ++j)
            for (double arc : {1e-4, -1e-4}) {
                auto p = o.points;
                p[j] = rotate_on(b[s.symbols[j]], p[j], arc);
                CHECK(cyclic_length(p) >= f0 - 1e-10);
            }
        SymbolSequence rot = s;
        std::rotate(rot.symbols.begin(), rot.symbols.begin() + 1, rot.symbols.end());
        const auto o2 = find_periodic_orbit(b, rot);
        for (std::size_t j = 0; j < o.points.size(); ++j)
            CHECK((o2.points[j] - o.points[(j + 1) % o.points.size()]).norm() <= 1e-9);
        // One application of the map carries each orbit leg onto the next one.
        const std::size_t n = o.points.size();
        for (std::size_t k = 0; k < n; ++k) {
            const PhasePoint x{o.points[k], (o.points[(k + 1) % n] - o.points[k]).normalized(), s.symbols[k]};
            const auto y = billiard_map(x, b);
            REQUIRE(y);
            CHECK(y->second.obstacle == s.symbols[(k + 1) % n]);
            CHECK((y->first.q - o.points[(k + 1) % n]).norm() <= 1e-10);
            CHECK((y->first.v - (o.points[(k + 2) % n] - o.points[(k + 1) % n]).normalized()).norm() <= 1e-8);
        }
        // Launching from q1 toward q2 reproduces the whole orbit. The orbit is hyperbolic,
        // so the chained check is only held to 1e-8 for short periods.
        if (n <= 4) {
            PhasePoint x{o.points[0], (o.points[1] - o.points[0]).normalized(), s.symbols[0]};
            for (std::size_t k = 1; k <= n; ++k) {
                const auto y = billiard_map(x, b);
                REQUIRE(y);
                CHECK(y->second.obstacle == s.symbols[k % n]);
                CHECK((y->first.q - o.points[k % n]).norm() <= 1e-8);
                x = y->first;
            }
        }
    }
}

TEST_CASE("orbit events start with the reflection at the first point") {
    const Billiard b = three_disk();
    const auto o = find_periodic_orbit(b, seq({0, 1, 2}));
    const auto ev = orbit_events(b, o);
    REQUIRE(ev.size() == 3);
    CHECK(ev[0].obstacle == 0);
    CHECK((ev[0].q - o.points[0]).norm() == 0.0);
    CHECK(std::abs(ev[0].flight - (o.points[0] - o.points[2]).norm()) <= 1e-12);
    CHECK((ev[0].v_out - (o.points[1] - o.points[0]).normalized()).norm() <= 1e-8);
}

TEST_CASE("ellipse orbits satisfy the reflection law") {
    const Billiard b(2, {Obstacle::ellipse(Vec2(-5, 0), 2, 1, 0.4), Obstacle::ellipse(Vec2(5, 1), 1.5, 1, -0.3),
                         Obstacle::ellipse(Vec2(0, 8), 1.2, 0.6, 1.0)});
    for (const auto& s : enumerate_periodic_sequences(3, 5)) {
        const auto o = find_periodic_orbit(b, s);
        CHECK(o.boundary_residual <= 1e-9);
        CHECK(o.reflection_residual <= 1e-8);
    }
}

TEST_CASE("hull of the closest-pair points") {
    const Billiard b = three_disk();
    const auto pairs = all_closest_pairs(b);
    const auto pts = pairs.all_points();
    CHECK(pts.size() == 6);
    const auto h = hull_H(b, pairs);
    CHECK_FALSE(h.degenerate());
    CHECK(h.vertices.size() <= 6);
    for (const auto& p : pts) CHECK(h.signed_distance(p) <= 1e-9);
}

TEST_CASE("coplanar centres in 3D give a flat hull") {
    const Billiard b(3, {Obstacle::ball(Vec3(0, 0, 0), 1, 3), Obstacle::ball(Vec3(8, 0, 0), 1, 3),
                         Obstacle::ball(Vec3(0, 8, 0), 1, 3), Obstacle::ball(Vec3(8, 8, 0), 1, 3)});
    CHECK(hull_H(b).degenerate());
}

TEST_CASE("disk periodic orbits up to period 8 lie in H") {
    const auto rep = test_hull_conjecture(three_disk(), 8, 100000);
    CHECK_FALSE(rep.sampled);
    CHECK(rep.failures == 0);
    CHECK(rep.orbits_tested == rep.sequences);
    CHECK(rep.max_violation <= 1e-7);
}

TEST_CASE("sphere periodic orbits up to period 6 lie in H") {
    const Billiard b(3, {Obstacle::ball(Vec3(0, 0, 0), 1, 3), Obstacle::ball(Vec3(7, 0, 0), 1.5, 3),
                         Obstacle::ball(Vec3(3, 6, 0.5), 1, 3), Obstacle::ball(Vec3(3, 2, 6), 1.2, 3)});
    const auto rep = test_hull_conjecture(b, 6, 100000);
    CHECK(rep.failures == 0);
    CHECK(rep.max_violation <= 1e-7);
}

TEST_CASE("ellipse conjecture run produces a report") {
    const Billiard b(2, {Obstacle::ellipse(Vec2(-5, 0), 2, 1, 0.4), Obstacle::ellipse(Vec2(5, 1), 1.5, 1, -0.3),
                         Obstacle::ellipse(Vec2(0, 8), 1.2, 0.6, 1.0)});
    const auto rep = test_hull_conjecture(b, 6, 1000);
    CHECK(rep.sequences > 0);
    CHECK(rep.orbits_tested + rep.failures == rep.sequences);
    MESSAGE("ellipse billiard max violation: " << rep.max_violation);
}

TEST_CASE("sampling kicks in when the enumeration exceeds the cap") {
    const auto rep = test_hull_conjecture(three_disk(), 10, 50, 7);
    CHECK(rep.sampled);
    CHECK(rep.sequences == 50);
    const auto again = test_hull_conjecture(three_disk(), 10, 50, 7, 1);
    CHECK(again.max_violation == rep.max_violation);
    CHECK(again.worst.symbols == rep.worst.symbols);
}
