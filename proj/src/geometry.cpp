#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "bdim/error.hpp"
#include "bdim/geometry.hpp"
#include "search.hpp"

namespace bdim {
namespace {

// Unit vectors spanning the plane orthogonal to n.
std::array<Vec3, 2> orthonormal_complement(const Vec3& n) {
    const Vec3 seed = std::abs(n.x()) < 0.8 ? Vec3::UnitX() : Vec3::UnitY();
    Vec3 e1 = (seed - seed.dot(n) * n).normalized();
    Vec3 e2 = n.cross(e1).normalized();
    return {e1, e2};
}

Vec3 project_ball(const Obstacle& k, const Vec3& p) {
    const Vec3 d = p - k.center();
    const double r = d.norm();
    if (r <= 1e-14 * k.semi_axes().x())
        raise(ErrorKind::degenerate_point, "point coincides with the ball centre");
    return k.center() + d * (k.semi_axes().x() / r);
}

// Closest boundary point of the axis-aligned quadric sum (x_i / a_i)^2 = 1
// to z, where all z_i >= 0. Lagrange: x_i = a_i^2 z_i / (t + a_i^2).
Vec3 project_quadric_body(const Vec3& z, const Vec3& a, int dim) {
    const double amax = a.head(dim).maxCoeff();
    std::array<bool, 3> zero{false, false, false};
    bool any_nonzero = false;
    for (int i = 0; i < dim; ++i) {
        zero[i] = z[i] <= 1e-13 * amax;
        any_nonzero = any_nonzero || !zero[i];
    }
    if (!any_nonzero) raise(ErrorKind::degenerate_point, "point coincides with the obstacle centre");

    // Candidate t pinned at -a_k^2 for the smallest axis among the zero components.
    int kmin = -1;
    for (int i = 0; i < dim; ++i)
        if (zero[i] && (kmin < 0 || a[i] < a[kmin])) kmin = i;
    if (kmin >= 0) {
        const double tz = -a[kmin] * a[kmin];
        double s = 0.0;
        bool finite = true;
        for (int i = 0; i < dim; ++i) {
            if (zero[i]) continue;
            const double den = a[i] * a[i] + tz;
            if (den <= 0.0) {
                finite = false;
                break;
            }
            const double xi = a[i] * a[i] * z[i] / den;
            s += (xi / a[i]) * (xi / a[i]);
        }
        if (finite && s <= 1.0) {
            if (s < 1.0 - 1e-12)
                raise(ErrorKind::degenerate_point, "point lies on the medial set of the obstacle");
            Vec3 x = Vec3::Zero();
            for (int i = 0; i < dim; ++i)
                if (!zero[i]) x[i] = a[i] * a[i] * z[i] / (a[i] * a[i] + tz);
            return x;
        }
    }

    double amin_nz = std::numeric_limits<double>::infinity();
    double norm_az = 0.0;
    for (int i = 0; i < dim; ++i) {
        if (zero[i]) continue;
        amin_nz = std::min(amin_nz, a[i]);
        norm_az += (a[i] * z[i]) * (a[i] * z[i]);
    }
    auto f = [&](double t) {
        double s = 0.0;
        for (int i = 0; i < dim; ++i) {
            if (zero[i]) continue;
            const double r = a[i] * z[i] / (t + a[i] * a[i]);
            s += r * r;
        }
        return s - 1.0;
    };
    double lo = -amin_nz * amin_nz;
    double hi = std::sqrt(norm_az);
    for (int it = 0; it < 2000; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (f(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    const double t = 0.5 * (lo + hi);
    Vec3 x = Vec3::Zero();
    for (int i = 0; i < dim; ++i)
        if (!zero[i]) x[i] = a[i] * a[i] * z[i] / (t + a[i] * a[i]);
    return x;
}

// Scale a body-frame point onto the quadric to clean up the last few ulps.
Vec3 snap_body(const Vec3& x, const Vec3& a, int dim) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) s += (x[i] / a[i]) * (x[i] / a[i]);
    return s > 0.0 ? Vec3(x / std::sqrt(s)) : x;
}

}  // namespace

Vec3 project_to_boundary(const Obstacle& k, const Vec3& p) {
    if (k.is_ball()) return project_ball(k, p);
    const int dim = k.dim();
    const Vec3 y = k.to_body(p);
    Vec3 sign = Vec3::Ones();
    Vec3 z = Vec3::Zero();
    for (int i = 0; i < dim; ++i) {
        sign[i] = y[i] < 0.0 ? -1.0 : 1.0;
        z[i] = std::abs(y[i]);
    }
    const Vec3 x = snap_body(project_quadric_body(z, k.semi_axes(), dim), k.semi_axes(), dim);
    return k.from_body(x.cwiseProduct(sign));
}

SurfaceFrame normal_and_curvatures(const Obstacle& k, const Vec3& q, double residual_tol) {
    if (std::abs(k.implicit(q)) > residual_tol)
        raise(ErrorKind::point_off_boundary, "point is not on the obstacle boundary");
    SurfaceFrame out;
    const int dim = k.dim();
    if (k.is_ball()) {
        const double r = k.semi_axes().x();
        out.normal = (q - k.center()).normalized();
        if (dim == 2) {
            out.curvatures = {1.0 / r};
            out.directions = {Vec3(-out.normal.y(), out.normal.x(), 0.0)};
        } else {
            const auto e = orthonormal_complement(out.normal);
            out.curvatures = {1.0 / r, 1.0 / r};
            out.directions = {e[0], e[1]};
        }
        return out;
    }
    const Vec3& a = k.semi_axes();
    const Vec3 y = k.to_body(q);
    Vec3 grad = Vec3::Zero();
    Vec3 hess = Vec3::Zero();
    for (int i = 0; i < dim; ++i) {
        grad[i] = y[i] / (a[i] * a[i]);
        hess[i] = 1.0 / (a[i] * a[i]);
    }
    const double gn = grad.norm();
    const Vec3 nb = grad / gn;
    out.normal = (k.frame() * nb).normalized();
    if (dim == 2) {
        const Vec3 tb(-nb.y(), nb.x(), 0.0);
        out.curvatures = {tb.cwiseProduct(tb).dot(hess) / gn};
        out.directions = {k.frame() * tb};
        return out;
    }
    const auto e = orthonormal_complement(nb);
    Mat2 s;
    s(0, 0) = e[0].cwiseProduct(e[0]).dot(hess) / gn;
    s(1, 1) = e[1].cwiseProduct(e[1]).dot(hess) / gn;
    s(0, 1) = s(1, 0) = e[0].cwiseProduct(e[1]).dot(hess) / gn;
    Eigen::SelfAdjointEigenSolver<Mat2> es(s);
    out.curvatures = {es.eigenvalues()(0), es.eigenvalues()(1)};
    for (int c = 0; c < 2; ++c) {
        const Vec2 w = es.eigenvectors().col(c);
        out.directions.push_back((k.frame() * (w(0) * e[0] + w(1) * e[1])).normalized());
    }
    return out;
}

ClosestPair closest_pair(const Obstacle& ki, const Obstacle& kj, const Tolerances& tol) {
    if (kj.precedes(ki)) {
        const ClosestPair r = closest_pair(kj, ki, tol);
        return {r.p_ji, r.p_ij, r.distance};
    }
    if (ki.is_ball() && kj.is_ball()) {
        const Vec3 d = kj.center() - ki.center();
        const double len = d.norm();
        const double gap = len - ki.semi_axes().x() - kj.semi_axes().x();
        if (!(gap > 0.0)) raise(ErrorKind::invalid_input, "closest_pair requires disjoint obstacles");
        const Vec3 u = d / len;
        const Vec3 pi = ki.center() + ki.semi_axes().x() * u;
        const Vec3 pj = kj.center() - kj.semi_axes().x() * u;
        return {pi, pj, (pj - pi).norm()};
    }
    Vec3 pj = project_to_boundary(kj, ki.center());
    Vec3 pi = project_to_boundary(ki, pj);
    for (long it = 0; it < tol.closest_pair_max_iter; ++it) {
        const Vec3 nj = project_to_boundary(kj, pi);
        const Vec3 ni = project_to_boundary(ki, nj);
        const double moved = std::max((nj - pj).norm(), (ni - pi).norm());
        pi = ni;
        pj = nj;
        if (moved < tol.closest_pair_step) {
            if (ki.implicit(pj) <= 0.0 || kj.implicit(pi) <= 0.0)
                raise(ErrorKind::invalid_input, "closest_pair requires disjoint obstacles");
            return {pi, pj, (pj - pi).norm()};
        }
    }
    raise(ErrorKind::no_convergence, "alternating projection did not converge");
}

namespace {

int samples_for(int dim, const Tolerances& tol) {
    return dim == 2 ? tol.support_samples_2d : tol.support_samples_3d;
}

double step_scale(std::initializer_list<const Obstacle*> obs) {
    double s = 1.0;
    for (const Obstacle* o : obs) s += o->semi_axes().maxCoeff();
    return s;
}

}  // namespace

double separation(const Obstacle& ki, const Obstacle& kj, const Tolerances& tol) {
    const int dim = ki.dim();
    // dist(K_i, K_j) = max_n [ -h_j(-n) - h_i(n) ]
    const auto& d = detail::direction_samples(dim, samples_for(dim, tol));
    const auto hi = detail::support_values(ki, d, 1.0);
    const auto hj = detail::support_values(kj, d, -1.0);
    std::vector<double> vals(d.size());
    for (std::size_t k = 0; k < vals.size(); ++k) vals[k] = -hj[k] - hi[k];
    auto f = [&](const Vec3& n) { return -kj.support(-n) - ki.support(n); };
    if (dim == 2) return detail::refine_planar(f, d, vals);
    const auto best = static_cast<std::size_t>(std::max_element(vals.begin(), vals.end()) - vals.begin());
    auto vg = [&](const Vec3& n, Vec3& grad) {
        grad = kj.support_point(-n) - ki.support_point(n);
        return f(n);
    };
    const Vec3 n = detail::ascend_sphere(vg, d.at(best), step_scale({&ki, &kj}));
    return std::max(f(n), vals[best]);
}

double max_distance(const Obstacle& ki, const Obstacle& kj, const Tolerances& tol) {
    const int dim = ki.dim();
    // max |x - y| = max_n [ h_i(n) + h_j(-n) ]
    const auto& d = detail::direction_samples(dim, samples_for(dim, tol));
    const auto hi = detail::support_values(ki, d, 1.0);
    const auto hj = detail::support_values(kj, d, -1.0);
    std::vector<double> vals(d.size());
    for (std::size_t k = 0; k < vals.size(); ++k) vals[k] = hi[k] + hj[k];
    auto f = [&](const Vec3& n) { return ki.support(n) + kj.support(-n); };
    if (dim == 2) return detail::refine_planar(f, d, vals);
    const auto best = static_cast<std::size_t>(std::max_element(vals.begin(), vals.end()) - vals.begin());
    auto vg = [&](const Vec3& n, Vec3& grad) {
        grad = ki.support_point(n) - kj.support_point(-n);
        return f(n);
    };
    const Vec3 n = detail::ascend_sphere(vg, d.at(best), step_scale({&ki, &kj}));
    return std::max(f(n), vals[best]);
}

double hull_gap(const Obstacle& k, const Obstacle& ki, const Obstacle& kj, const Tolerances& tol) {
    const int dim = k.dim();
    // dist(K, Cvx(K_i u K_j)) = max_n [ -h_K(-n) - max(h_i(n), h_j(n)) ]
    const auto& d = detail::direction_samples(dim, samples_for(dim, tol));
    const auto hk = detail::support_values(k, d, -1.0);
    const auto hi = detail::support_values(ki, d, 1.0);
    const auto hj = detail::support_values(kj, d, 1.0);
    std::vector<double> vals(d.size());
    for (std::size_t s = 0; s < vals.size(); ++s) vals[s] = -hk[s] - std::max(hi[s], hj[s]);
    auto f = [&](const Vec3& n) { return -k.support(-n) - std::max(ki.support(n), kj.support(n)); };
    if (dim == 2) return detail::refine_planar(f, d, vals);

    // Spatial case: the hull is the union of the Minkowski combinations
    // (1 - t) K_i + t K_j, whose distance to K is convex in t and smooth in n.
    const auto best = static_cast<std::size_t>(std::max_element(vals.begin(), vals.end()) - vals.begin());
    Vec3 warm = d.at(best);
    const double scale = step_scale({&k, &ki, &kj});
    auto inner = [&](double t) {
        auto vg = [&](const Vec3& n, Vec3& grad) {
            grad = k.support_point(-n) - (1.0 - t) * ki.support_point(n) - t * kj.support_point(n);
            return -k.support(-n) - (1.0 - t) * ki.support(n) - t * kj.support(n);
        };
        warm = detail::ascend_sphere(vg, warm, scale);
        Vec3 g;
        return vg(warm, g);
    };
    const double t = detail::golden_min(inner, 0.0, 1.0);
    return std::max(inner(t), vals[best]);
}

double distance_obstacle_to_hull(const Obstacle& k, const Obstacle& ki, const Obstacle& kj,
                                 const Tolerances& tol) {
    const double gap = hull_gap(k, ki, kj, tol);
    if (!(gap > 0.0))
        raise(ErrorKind::eclipse_violation, "obstacle meets the convex hull of the other two");
    return gap;
}

EclipseReport no_eclipse_check(const Billiard& b) {
    EclipseReport rep;
    const std::size_t u = b.size();
    for (std::size_t k = 0; k < u; ++k) {
        for (std::size_t i = 0; i < u; ++i) {
            for (std::size_t j = i + 1; j < u; ++j) {
                if (i == k || j == k) continue;
                const double m = hull_gap(b[k], b[i], b[j], b.tolerances());
                rep.entries.push_back({k, i, j, m, m > 0.0});
                rep.all_pass = rep.all_pass && m > 0.0;
            }
        }
    }
    return rep;
}

}  // namespace bdim
