#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bdim/constants.hpp"
#include "bdim/error.hpp"
#include "bdim/kernels.hpp"

namespace bdim {

std::string_view to_string(Mode m) { return m == Mode::natural ? "natural" : "adjusted"; }

const PairConstants& ConstantsReport::pair(std::size_t i, std::size_t j) const {
    for (const auto& p : pairs)
        if (p.i == i && p.j == j) return p;
    raise(ErrorKind::invalid_input, "no constants stored for the requested pair");
}

namespace {

// Grid of boundary samples with their curvature extremes.
struct BoundaryGrid {
    std::size_t rows = 1, cols = 0;
    std::vector<double> x, y, z;
    std::vector<double> kmin, kmax;
};

BoundaryGrid sample_boundary(const Obstacle& k, const Tolerances& tol) {
    BoundaryGrid g;
    auto push = [&](const Vec3& p) {
        const SurfaceFrame sf = normal_and_curvatures(k, p, 1e-8);
        g.x.push_back(p.x());
        g.y.push_back(p.y());
        g.z.push_back(p.z());
        g.kmin.push_back(sf.curvatures.front());
        g.kmax.push_back(sf.curvatures.back());
    };
    if (k.dim() == 2) {
        g.cols = static_cast<std::size_t>(tol.curvature_samples_2d);
        for (std::size_t c = 0; c < g.cols; ++c)
            push(k.boundary_point(2.0 * std::numbers::pi * static_cast<double>(c) / static_cast<double>(g.cols)));
        return g;
    }
    const auto side = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(tol.curvature_samples_3d))));
    g.rows = side;
    g.cols = side;
    for (std::size_t r = 0; r < side; ++r) {
        // Cell-centred polar angles avoid duplicating the poles.
        const double s = std::numbers::pi * (static_cast<double>(r) + 0.5) / static_cast<double>(side);
        for (std::size_t c = 0; c < side; ++c)
            push(k.boundary_point(s, 2.0 * std::numbers::pi * static_cast<double>(c) / static_cast<double>(side)));
    }
    return g;
}

}  // namespace

std::pair<double, double> restricted_curvature_range(const Obstacle& k, const ConvexPolytope& region,
                                                     const Tolerances& tol) {
    if (k.is_ball()) return {1.0 / k.semi_axes().x(), 1.0 / k.semi_axes().x()};
    const BoundaryGrid g = sample_boundary(k, tol);
    const std::size_t n = g.x.size();

    std::vector<double> nx, ny, nz;
    for (const auto& v : region.normals) {
        nx.push_back(v.x());
        ny.push_back(v.y());
        nz.push_back(v.z());
    }
    std::vector<double> dist(n);
    kernels::max_plane_distance({g.x, g.y, g.z}, {nx, ny, nz}, region.offsets, dist);
    std::vector<char> inside(n, 0);
    for (std::size_t s = 0; s < n; ++s) {
        double off = 0.0;
        if (region.degenerate()) {
            const Vec3 d = Vec3(g.x[s], g.y[s], g.z[s]) - region.origin;
            for (const auto& e : region.complement) off = std::max(off, std::abs(e.dot(d)));
        }
        inside[s] = std::max(dist[s], off) <= tol.hull_eps;
    }

    // Include every sample adjacent to an inside sample so the true
    // extremes over the boundary arc are bracketed by the sampled ones.
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    auto take = [&](std::size_t s) {
        lo = std::min(lo, g.kmin[s]);
        hi = std::max(hi, g.kmax[s]);
    };
    for (std::size_t r = 0; r < g.rows; ++r) {
        for (std::size_t c = 0; c < g.cols; ++c) {
            if (!inside[r * g.cols + c]) continue;
            for (int dr = -1; dr <= 1; ++dr) {
                const long rr = static_cast<long>(r) + dr;
                if (rr < 0 || rr >= static_cast<long>(g.rows)) continue;
                for (int dc = -1; dc <= 1; ++dc) {
                    const std::size_t cc = (c + g.cols + static_cast<std::size_t>(dc + 1) - 1) % g.cols;
                    take(static_cast<std::size_t>(rr) * g.cols + cc);
                }
            }
        }
    }
    if (!(lo <= hi)) return {k.min_curvature_bound(), k.max_curvature_bound()};
    return {std::max(lo, k.min_curvature_bound()), std::min(hi, k.max_curvature_bound())};
}

ConstantsReport compute_constants(const Billiard& b, Mode mode, const ConstantsOptions& opts) {
    const Tolerances& tol = b.tolerances();
    const std::size_t u = b.size();
    ConstantsReport rep;
    rep.mode = mode;
    rep.dim = b.dim();
    rep.u = u;
    rep.options = opts;
    rep.closest = all_closest_pairs(b);
    rep.hull = hull_H(b, rep.closest);
    rep.hull_diameter = rep.hull.diameter();
    if (mode == Mode::adjusted && rep.hull.degenerate())
        raise(ErrorKind::degenerate_hull, "the hull of the closest-pair points is flat");

    // b_ij = min over k of dist(K_i, Cvx(K_j u K_k)).
    std::vector<double> bij(u * u, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < u; ++i)
        for (std::size_t j = 0; j < u; ++j) {
            if (i == j) continue;
            for (std::size_t k = 0; k < u; ++k) {
                if (k == i || k == j) continue;
                const double gap = distance_obstacle_to_hull(b[i], b[std::min(j, k)], b[std::max(j, k)], tol);
                bij[i * u + j] = std::min(bij[i * u + j], gap);
            }
        }

    rep.kappa_minus_obstacle.resize(u);
    rep.kappa_plus_obstacle.resize(u);
    for (std::size_t i = 0; i < u; ++i) {
        if (mode == Mode::natural) {
            rep.kappa_minus_obstacle[i] = b[i].min_curvature_bound();
            rep.kappa_plus_obstacle[i] = b[i].max_curvature_bound();
        } else {
            const auto [lo, hi] = restricted_curvature_range(b[i], rep.hull, tol);
            rep.kappa_minus_obstacle[i] = lo;
            rep.kappa_plus_obstacle[i] = hi;
        }
    }

    for (std::size_t i = 0; i < u; ++i)
        for (std::size_t j = 0; j < u; ++j) {
            if (i == j) continue;
            PairConstants p;
            p.i = i;
            p.j = j;
            p.b_minus = bij[i * u + j];
            p.kappa_minus_i = rep.kappa_minus_obstacle[i];
            p.kappa_plus_i = rep.kappa_plus_obstacle[i];
            if (mode == Mode::natural) {
                p.d_minus = separation(b[i], b[j], tol);
                p.d_plus = max_distance(b[i], b[j], tol);
                if (opts.natural_dmax_from_hull) p.d_plus = std::min(p.d_plus, rep.hull_diameter);
            } else {
                p.d_minus = rep.closest.distance(i, j);
                p.d_plus = 0.0;
                for (std::size_t k = 0; k < u; ++k)
                    for (std::size_t l = 0; l < u; ++l)
                        if (k != i && l != j)
                            p.d_plus = std::max(p.d_plus, (rep.closest.point(i, k) - rep.closest.point(j, l)).norm());
            }
            rep.pairs.push_back(p);
        }

    rep.d_min = std::numeric_limits<double>::infinity();
    rep.b_minus = std::numeric_limits<double>::infinity();
    rep.kappa_minus = std::numeric_limits<double>::infinity();
    for (const auto& p : rep.pairs) {
        rep.d_min = std::min(rep.d_min, p.d_minus);
        rep.d_max = std::max(rep.d_max, p.d_plus);
        rep.b_minus = std::min(rep.b_minus, p.b_minus);
    }
    for (std::size_t i = 0; i < u; ++i) {
        rep.kappa_minus = std::min(rep.kappa_minus, rep.kappa_minus_obstacle[i]);
        rep.kappa_plus = std::max(rep.kappa_plus, rep.kappa_plus_obstacle[i]);
    }
    rep.cos_phi_plus = std::min(1.0, rep.b_minus / rep.d_max);
    rep.phi_plus = std::acos(rep.cos_phi_plus);

    for (auto& p : rep.pairs) {
        const bool per_pair = mode == Mode::adjusted && opts.angle_bound == AngleFlightBound::pair;
        p.cos_phi_bound = per_pair ? std::min(1.0, p.b_minus / p.d_plus) : rep.cos_phi_plus;
        if (mode == Mode::adjusted && opts.angle_bound == AngleFlightBound::global)
            p.cos_phi_bound = std::min(1.0, p.b_minus / rep.d_max);
    }
    return rep;
}

DomainD build_domain(const ConstantsReport& report, int dim, CurvaturePairing pairing) {
    DomainD d;
    d.iota = dim == 2 ? 0 : 1;
    d.natural = report.mode == Mode::natural;
    const double ci = d.iota ? 1.0 : 0.0;
    if (d.natural) {
        const double c = report.cos_phi_plus;
        d.rects.push_back({0, 0, report.kappa_minus * std::pow(c, ci), report.kappa_plus / c, report.d_min,
                           report.d_max});
        return d;
    }
    for (const auto& p : report.pairs) {
        const std::size_t s = pairing == CurvaturePairing::same ? p.i : p.j;
        const double km = report.kappa_minus_obstacle[s];
        const double kp = report.kappa_plus_obstacle[s];
        const double c = p.cos_phi_bound;
        d.rects.push_back({p.i, p.j, km * std::pow(c, ci), kp / c, p.d_minus, p.d_plus});
    }
    return d;
}

}  // namespace bdim
