#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "bdim/dynamics.hpp"
#include "bdim/geometry.hpp"

namespace bdim {

/// Obstacle itinerary. Indices are zero-based internally; the CLI prints
/// and parses them one-based.
struct SymbolSequence {
    std::vector<std::size_t> symbols;
    bool periodic = true;

    std::size_t size() const { return symbols.size(); }
    bool admissible() const;
    bool admissible_for(std::size_t u) const;
};

/// Lexicographically smallest rotation.
SymbolSequence canonical_rotation(const SymbolSequence& s);
/// True when the sequence is not a repetition of a shorter block.
bool is_primitive(const SymbolSequence& s);

struct PeriodicOrbit {
    SymbolSequence sequence;
    std::vector<Vec3> points;
    double length = 0.0;
    double boundary_residual = 0.0;    // max |implicit(q_j)|
    double reflection_residual = 0.0;  // max angle between normal and bisector (radians)
    long sweeps = 0;
};

struct OrbitOptions {
    double step_tol = Tolerances{}.orbit_step;
    long max_sweeps = Tolerances{}.orbit_max_sweeps;
    int inner_iter = Tolerances{}.orbit_inner_iter;
};

/// Minimise the cyclic length F over the product of the boundaries named
/// by `seq` (cyclic coordinate descent, projected Newton per coordinate).
PeriodicOrbit find_periodic_orbit(const Billiard& b, const SymbolSequence& seq,
                                  const OrbitOptions& opts = {});

/// One lap of collision events, beginning with the reflection at points[0]
/// reached from points[n-1].
std::vector<CollisionEvent> orbit_events(const Billiard& b, const PeriodicOrbit& orbit);

class ClosestPairTable {
public:
    ClosestPairTable() = default;
    explicit ClosestPairTable(std::size_t u) : u_(u), pairs_(u * u) {}

    std::size_t size() const { return u_; }
    /// p_ij: point of K_i nearest K_j.
    const Vec3& point(std::size_t i, std::size_t j) const { return pairs_[i * u_ + j].p_ij; }
    double distance(std::size_t i, std::size_t j) const { return pairs_[i * u_ + j].distance; }
    const ClosestPair& pair(std::size_t i, std::size_t j) const { return pairs_[i * u_ + j]; }
    void set(std::size_t i, std::size_t j, const ClosestPair& p);
    std::size_t pair_count() const { return u_ * (u_ - 1) / 2; }
    /// All 2 * (u choose 2) points p_ij in (i, j) lexicographic order.
    std::vector<Vec3> all_points() const;

private:
    std::size_t u_ = 0;
    std::vector<ClosestPair> pairs_;
};

ClosestPairTable all_closest_pairs(const Billiard& b);

/// Cvx{p_ij}. Flat hulls are returned with degenerate() == true.
ConvexPolytope hull_H(const Billiard& b, const ClosestPairTable& pairs);
ConvexPolytope hull_H(const Billiard& b);

/// Canonical primitive admissible periodic sequences of period 2..max_period.
std::vector<SymbolSequence> enumerate_periodic_sequences(std::size_t u, std::size_t max_period);
/// Uniform random admissible sequence (periodic: last != first as well).
SymbolSequence random_admissible(std::size_t u, std::size_t n, bool periodic, std::mt19937_64& rng);

struct ConjectureReport {
    std::size_t sequences = 0;      // sequences attempted
    std::size_t orbits_tested = 0;  // orbits that converged and were checked
    std::size_t failures = 0;       // solver failures
    bool sampled = false;           // enumeration exceeded the sample cap
    double max_violation = 0.0;     // max signed distance of an orbit point to H
    SymbolSequence worst;
};

ConjectureReport test_hull_conjecture(const Billiard& b, std::size_t max_period,
                                      std::size_t samples, std::uint64_t seed = 1,
                                      unsigned threads = 0);

/// Worker count: BDIM_THREADS when set, otherwise hardware concurrency.
unsigned default_thread_count();

}  // namespace bdim
