#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>

#include <Eigen/Cholesky>

#include "bdim/error.hpp"
#include "bdim/orbits.hpp"

namespace bdim {

bool SymbolSequence::admissible() const {
    if (symbols.empty()) return false;
    for (std::size_t k = 0; k + 1 < symbols.size(); ++k)
        if (symbols[k] == symbols[k + 1]) return false;
    if (periodic && (symbols.size() < 2 || symbols.back() == symbols.front())) return false;
    return true;
}

bool SymbolSequence::admissible_for(std::size_t u) const {
    return admissible() && std::all_of(symbols.begin(), symbols.end(), [u](std::size_t s) { return s < u; });
}

SymbolSequence canonical_rotation(const SymbolSequence& s) {
    SymbolSequence best = s;
    const std::size_t n = s.size();
    for (std::size_t r = 1; r < n; ++r) {
        std::vector<std::size_t> rot(n);
        for (std::size_t k = 0; k < n; ++k) rot[k] = s.symbols[(k + r) % n];
        if (rot < best.symbols) best.symbols = rot;
    }
    return best;
}

bool is_primitive(const SymbolSequence& s) {
    const std::size_t n = s.size();
    for (std::size_t p = 1; p < n; ++p) {
        if (n % p) continue;
        bool repeat = true;
        for (std::size_t k = p; k < n && repeat; ++k) repeat = s.symbols[k] == s.symbols[k - p];
        if (repeat) return false;
    }
    return true;
}

namespace {

struct LocalFrame {
    std::vector<Vec3> e;
    Mat2 shape = Mat2::Zero();
    Vec3 n;
};

LocalFrame local_frame(const Obstacle& k, const Vec3& q) {
    const SurfaceFrame sf = normal_and_curvatures(k, q, 1e-6);
    LocalFrame lf{sf.directions, Mat2::Zero(), sf.normal};
    for (std::size_t a = 0; a < sf.curvatures.size(); ++a) lf.shape(a, a) = sf.curvatures[a];
    return lf;
}

double two_leg(const Vec3& a, const Vec3& q, const Vec3& b) { return (q - a).norm() + (q - b).norm(); }

// Length of the gradient of |q - a| + |q - b| along the tangent plane at q.
double tangential_gradient(const Obstacle& k, const Vec3& q, const Vec3& a, const Vec3& b) {
    const Vec3 n = normal_and_curvatures(k, q, 1e-6).normal;
    const Vec3 grad = (q - a).normalized() + (q - b).normalized();
    return (grad - grad.dot(n) * n).norm();
}

// Minimise |q - a| + |q - b| over the boundary of k starting from q.
Vec3 relax_point(const Obstacle& k, Vec3 q, const Vec3& a, const Vec3& b, const OrbitOptions& opts) {
    for (int it = 0; it < opts.inner_iter; ++it) {
        const LocalFrame lf = local_frame(k, q);
        const int m = static_cast<int>(lf.e.size());
        const Vec3 da = q - a, db = q - b;
        const double la = da.norm(), lb = db.norm();
        const Vec3 ua = da / la, ub = db / lb;
        const Vec3 grad = ua + ub;
        const Mat3 h = (Mat3::Identity() - ua * ua.transpose()) / la + (Mat3::Identity() - ub * ub.transpose()) / lb;
        Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic> hess(m, m);
        Eigen::VectorXd g(m);
        for (int r = 0; r < m; ++r) {
            g(r) = lf.e[r].dot(grad);
            for (int c = 0; c < m; ++c) hess(r, c) = lf.e[r].dot(h * lf.e[c]) - grad.dot(lf.n) * lf.shape(r, c);
        }
        Eigen::VectorXd step;
        Eigen::LLT<Eigen::MatrixXd> llt(hess);
        if (llt.info() == Eigen::Success) {
            step = -llt.solve(g);
        } else {
            step = -g * (0.5 * std::min(la, lb));
        }
        const double f0 = two_leg(a, q, b);
        // Close to the minimum the length is flat to rounding, so ties are
        // broken by the tangential gradient instead.
        const double flat = 8.0 * std::numeric_limits<double>::epsilon() * f0;
        const double g0 = g.norm();
        double scale = 1.0;
        Vec3 next = q;
        bool moved = false;
        for (int bt = 0; bt < 40; ++bt) {
            Vec3 trial = q;
            for (int r = 0; r < m; ++r) trial += scale * step(r) * lf.e[r];
            trial = project_to_boundary(k, trial);
            const double f1 = two_leg(a, trial, b);
            if (f1 < f0 || (f1 <= f0 + flat && tangential_gradient(k, trial, a, b) < g0)) {
                next = trial;
                moved = true;
                break;
            }
            scale *= 0.5;
        }
        if (!moved) break;
        const double dq = (next - q).norm();
        q = next;
        if (dq < 0.1 * opts.step_tol) break;
    }
    return q;
}

Vec3 initial_point(const Billiard& b, std::size_t i) {
    Vec3 c = Vec3::Zero();
    for (std::size_t k = 0; k < b.size(); ++k)
        if (k != i) c += b[k].center();
    c /= static_cast<double>(b.size() - 1);
    return project_to_boundary(b[i], c);
}

}  // namespace

PeriodicOrbit find_periodic_orbit(const Billiard& b, const SymbolSequence& seq, const OrbitOptions& opts) {
    if (!seq.periodic || !seq.admissible_for(b.size()))
        raise(ErrorKind::inadmissible_sequence, "sequence is not an admissible periodic itinerary");
    const std::size_t n = seq.size();
    PeriodicOrbit orbit;
    orbit.sequence = seq;
    orbit.points.resize(n);
    for (std::size_t j = 0; j < n; ++j) orbit.points[j] = initial_point(b, seq.symbols[j]);

    bool converged = false;
    for (long sweep = 0; sweep < opts.max_sweeps; ++sweep) {
        double moved = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const Vec3& prev = orbit.points[(j + n - 1) % n];
            const Vec3& next = orbit.points[(j + 1) % n];
            const Vec3 q = relax_point(b[seq.symbols[j]], orbit.points[j], prev, next, opts);
            moved = std::max(moved, (q - orbit.points[j]).norm());
            orbit.points[j] = q;
        }
        orbit.sweeps = sweep + 1;
        if (moved < opts.step_tol) {
            converged = true;
            break;
        }
    }
    if (!converged) raise(ErrorKind::no_convergence, "periodic orbit search exhausted its sweep budget");

    for (std::size_t j = 0; j < n; ++j) {
        const Vec3& q = orbit.points[j];
        const Vec3& prev = orbit.points[(j + n - 1) % n];
        const Vec3& next = orbit.points[(j + 1) % n];
        const Obstacle& k = b[seq.symbols[j]];
        orbit.length += (next - q).norm();
        orbit.boundary_residual = std::max(orbit.boundary_residual, std::abs(k.implicit(q)));
        const Vec3 nrm = normal_and_curvatures(k, q, 1e-6).normal;
        const Vec3 bis = ((prev - q).normalized() + (next - q).normalized()).normalized();
        const double ang = std::atan2(bis.cross(nrm).norm(), bis.dot(nrm));
        orbit.reflection_residual = std::max(orbit.reflection_residual, ang);
    }
    return orbit;
}

std::vector<CollisionEvent> orbit_events(const Billiard& b, const PeriodicOrbit& orbit) {
    const std::size_t n = orbit.points.size();
    std::vector<CollisionEvent> events;
    events.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
        const Vec3& q = orbit.points[j];
        const Vec3& prev = orbit.points[(j + n - 1) % n];
        CollisionEvent ev;
        ev.obstacle = orbit.sequence.symbols[j];
        ev.q = q;
        ev.flight = (q - prev).norm();
        ev.v_in = (q - prev) / ev.flight;
        ev.normal = normal_and_curvatures(b[ev.obstacle], q, b.tolerances().boundary_residual).normal;
        ev.v_out = reflect(ev.v_in, ev.normal);
        ev.phi = std::acos(std::clamp(ev.v_out.dot(ev.normal), -1.0, 1.0));
        events.push_back(ev);
    }
    return events;
}

void ClosestPairTable::set(std::size_t i, std::size_t j, const ClosestPair& p) {
    pairs_[i * u_ + j] = p;
    pairs_[j * u_ + i] = {p.p_ji, p.p_ij, p.distance};
}

std::vector<Vec3> ClosestPairTable::all_points() const {
    std::vector<Vec3> pts;
    for (std::size_t i = 0; i < u_; ++i)
        for (std::size_t j = 0; j < u_; ++j)
            if (i != j) pts.push_back(point(i, j));
    return pts;
}

ClosestPairTable all_closest_pairs(const Billiard& b) {
    ClosestPairTable t(b.size());
    for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t j = i + 1; j < b.size(); ++j) t.set(i, j, closest_pair(b[i], b[j], b.tolerances()));
    return t;
}

ConvexPolytope hull_H(const Billiard& b, const ClosestPairTable& pairs) {
    return convex_hull(pairs.all_points(), b.dim(), b.tolerances().hull_eps);
}

ConvexPolytope hull_H(const Billiard& b) { return hull_H(b, all_closest_pairs(b)); }

namespace {

void extend(std::vector<std::size_t>& cur, std::size_t u, std::size_t n, std::vector<SymbolSequence>& out) {
    if (cur.size() == n) {
        SymbolSequence s{cur, true};
        if (s.admissible() && is_primitive(s) && canonical_rotation(s).symbols == cur) out.push_back(s);
        return;
    }
    for (std::size_t a = cur.front(); a < u; ++a) {
        if (a == cur.back()) continue;
        cur.push_back(a);
        extend(cur, u, n, out);
        cur.pop_back();
    }
}

}  // namespace

std::vector<SymbolSequence> enumerate_periodic_sequences(std::size_t u, std::size_t max_period) {
    std::vector<SymbolSequence> out;
    for (std::size_t n = 2; n <= max_period; ++n) {
        for (std::size_t first = 0; first < u; ++first) {
            std::vector<std::size_t> cur{first};
            extend(cur, u, n, out);
        }
    }
    return out;
}

SymbolSequence random_admissible(std::size_t u, std::size_t n, bool periodic, std::mt19937_64& rng) {
    if (u < 2 || n == 0 || (periodic && n < 2))
        raise(ErrorKind::invalid_input, "no admissible sequence of the requested shape");
    std::uniform_int_distribution<std::size_t> any(0, u - 1), other(0, u - 2);
    for (;;) {
        SymbolSequence s;
        s.periodic = periodic;
        s.symbols.push_back(any(rng));
        while (s.symbols.size() < n) {
            std::size_t a = other(rng);
            if (a >= s.symbols.back()) ++a;
            s.symbols.push_back(a);
        }
        if (!periodic || s.symbols.back() != s.symbols.front()) return s;
    }
}

unsigned default_thread_count() {
    if (const char* env = std::getenv("BDIM_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

ConjectureReport test_hull_conjecture(const Billiard& b, std::size_t max_period, std::size_t samples,
                                      std::uint64_t seed, unsigned threads) {
    ConjectureReport rep;
    const ConvexPolytope h = hull_H(b);
    std::vector<SymbolSequence> seqs = enumerate_periodic_sequences(b.size(), max_period);
    if (seqs.size() > samples) {
        rep.sampled = true;
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::size_t> period(2, max_period);
        seqs.clear();
        while (seqs.size() < samples) {
            const SymbolSequence s = random_admissible(b.size(), period(rng), true, rng);
            if (is_primitive(s)) seqs.push_back(canonical_rotation(s));
        }
    }
    rep.sequences = seqs.size();

    struct Outcome {
        bool ok = false;
        double violation = -std::numeric_limits<double>::infinity();
    };
    std::vector<Outcome> results(seqs.size());
    OrbitOptions opts;
    opts.step_tol = b.tolerances().orbit_step;
    opts.max_sweeps = b.tolerances().orbit_max_sweeps;
    opts.inner_iter = b.tolerances().orbit_inner_iter;

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < seqs.size(); k = next++) {
            try {
                const PeriodicOrbit orbit = find_periodic_orbit(b, seqs[k], opts);
                Outcome o{true, -std::numeric_limits<double>::infinity()};
                for (const auto& p : orbit.points) o.violation = std::max(o.violation, h.signed_distance(p));
                results[k] = o;
            } catch (const Error&) {
                results[k] = Outcome{};
            }
        }
    };
    const unsigned nt = std::max(1u, std::min<unsigned>(threads ? threads : default_thread_count(),
                                                         static_cast<unsigned>(std::max<std::size_t>(1, seqs.size()))));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < nt; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    bool first = true;
    for (std::size_t k = 0; k < seqs.size(); ++k) {
        if (!results[k].ok) {
            ++rep.failures;
            continue;
        }
        ++rep.orbits_tested;
        if (first || results[k].violation > rep.max_violation) {
            rep.max_violation = results[k].violation;
            rep.worst = seqs[k];
            first = false;
        }
    }
    return rep;
}

}  // namespace bdim
