#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle {

using bdim::Vec2;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Unit outward normal of a planar obstacle from its implicit gradient.
Vec3 planar_normal(const Obstacle& k, const Vec3& p) {
    const Vec3 y = k.to_body(p);
    const Vec3 a = k.semi_axes();
    const Vec3 gb(y.x() / (a.x() * a.x()), y.y() / (a.y() * a.y()), 0.0);
    return (k.frame() * gb).normalized();
}

// Root of <p(t) - x, p'(t)> in [a, b] by bisection, starting from a bracket
// that straddles the nearest-point parameter.
double bisect_stationary(const Obstacle& k, const Vec3& x, double a, double b) {
    auto slope = [&](double t) {
        const Vec3 tangent = k.boundary_point(t + 1e-6) - k.boundary_point(t - 1e-6);
        return (k.boundary_point(t) - x).dot(tangent);
    };
    double fa = slope(a);
    if (fa * slope(b) > 0) return std::abs(fa) < std::abs(slope(b)) ? a : b;
    for (int it = 0; it < 200 && b - a > 1e-16; ++it) {
        const double m = 0.5 * (a + b), fm = slope(m);
        if ((fm < 0) == (fa < 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

double golden_min(const std::function<double(double)>& f, double a, double b, int iters) {
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = f(c), fd = f(d);
    for (int k = 0; k < iters && std::abs(b - a) > 1e-15 * (1.0 + std::abs(a)); ++k) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

Vec3 sweep_projection(const Obstacle& k, const Vec3& p, int samples) {
    double best = std::numeric_limits<double>::infinity(), tb = 0.0;
    for (int s = 0; s < samples; ++s) {
        const double t = kTwoPi * s / samples;
        const double d = (k.boundary_point(t) - p).squaredNorm();
        if (d < best) best = d, tb = t;
    }
    const double h = kTwoPi / samples;
    return k.boundary_point(bisect_stationary(k, p, tb - 2 * h, tb + 2 * h));
}

double fd_curvature(const Obstacle& k, double t, double h) {
    const double speed = (k.boundary_point(t + 1e-7) - k.boundary_point(t - 1e-7)).norm() / 2e-7;
    const double dt = h / speed;
    const Vec3 p0 = k.boundary_point(t - dt), p1 = k.boundary_point(t + dt);
    return (planar_normal(k, p1) - planar_normal(k, p0)).norm() / (p1 - p0).norm();
}

PairResult grid_closest_pair(const Obstacle& ki, const Obstacle& kj, int samples) {
    std::vector<Vec3> a(samples), b(samples);
    for (int s = 0; s < samples; ++s) {
        a[s] = ki.boundary_point(kTwoPi * s / samples);
        b[s] = kj.boundary_point(kTwoPi * s / samples);
    }
    double best = std::numeric_limits<double>::infinity();
    int ia = 0, ib = 0;
    for (int s = 0; s < samples; ++s)
        for (int r = 0; r < samples; ++r) {
            const double dx = a[s].x() - b[r].x(), dy = a[s].y() - b[r].y();
            const double d = dx * dx + dy * dy;
            if (d < best) best = d, ia = s, ib = r;
        }
    const double h = kTwoPi / samples;
    double s = kTwoPi * ia / samples, t = kTwoPi * ib / samples;
    for (int it = 0; it < 200; ++it) {
        s = bisect_stationary(ki, kj.boundary_point(t), s - 2 * h, s + 2 * h);
        t = bisect_stationary(kj, ki.boundary_point(s), t - 2 * h, t + 2 * h);
    }
    const Vec3 pa = ki.boundary_point(s), pb = kj.boundary_point(t);
    return {pa, pb, (pa - pb).norm()};
}

double ball_hull_gap(const Obstacle& k, const Obstacle& ki, const Obstacle& kj, int samples) {
    if (!k.is_ball() || !ki.is_ball() || !kj.is_ball()) throw std::invalid_argument("ball_hull_gap needs balls");
    auto f = [&](double t) {
        const Vec3 c = (1.0 - t) * ki.center() + t * kj.center();
        const double r = (1.0 - t) * ki.semi_axes().x() + t * kj.semi_axes().x();
        return (k.center() - c).norm() - r - k.semi_axes().x();
    };
    double best = std::numeric_limits<double>::infinity(), tb = 0.0;
    for (int s = 0; s <= samples; ++s) {
        const double t = static_cast<double>(s) / samples;
        const double v = f(t);
        if (v < best) best = v, tb = t;
    }
    const double h = 1.0 / samples;
    const double t = golden_min(f, std::max(0.0, tb - h), std::min(1.0, tb + h));
    return std::min(best, f(t));
}

ConvexPolygon monotone_chain(std::vector<Vec3> pts) {
    std::sort(pts.begin(), pts.end(), [](const Vec3& a, const Vec3& b) {
        return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
    });
    auto cross = [](const Vec3& o, const Vec3& a, const Vec3& b) {
        return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
    };
    std::vector<Vec3> h(2 * pts.size());
    std::size_t m = 0;
    for (const auto& p : pts) {
        while (m >= 2 && cross(h[m - 2], h[m - 1], p) <= 0) --m;
        h[m++] = p;
    }
    for (std::size_t i = pts.size() - 1, lower = m + 1; i-- > 0;) {
        while (m >= lower && cross(h[m - 2], h[m - 1], pts[i]) <= 0) --m;
        h[m++] = pts[i];
    }
    h.resize(m - 1);
    return {h};
}

double polygon_signed_distance(const ConvexPolygon& poly, const Vec3& p) {
    bool inside = true;
    double dmin = std::numeric_limits<double>::infinity();
    const std::size_t n = poly.v.size();
    for (std::size_t k = 0; k < n; ++k) {
        const Vec3& a = poly.v[k];
        const Vec3& b = poly.v[(k + 1) % n];
        const Vec3 ab = b - a, ap = p - a;
        if (ab.x() * ap.y() - ab.y() * ap.x() < 0) inside = false;
        const double t = std::clamp(ap.dot(ab) / ab.squaredNorm(), 0.0, 1.0);
        dmin = std::min(dmin, (ap - t * ab).norm());
    }
    return inside ? -dmin : dmin;
}

double polygon_hull_gap(const Obstacle& k, const Obstacle& ki, const Obstacle& kj, int samples) {
    std::vector<Vec3> pts;
    for (int s = 0; s < samples; ++s) {
        pts.push_back(ki.boundary_point(kTwoPi * s / samples));
        pts.push_back(kj.boundary_point(kTwoPi * s / samples));
    }
    const ConvexPolygon poly = monotone_chain(pts);
    // Coarse pass over K on a cheaper lattice, then refinement on the parameter.
    const int coarse = std::max(2000, samples / 10);
    double best = std::numeric_limits<double>::infinity(), tb = 0.0;
    for (int s = 0; s < coarse; ++s) {
        const double t = kTwoPi * s / coarse;
        const double d = polygon_signed_distance(poly, k.boundary_point(t));
        if (d < best) best = d, tb = t;
    }
    const double h = kTwoPi / coarse;
    const double t = golden_min([&](double x) { return polygon_signed_distance(poly, k.boundary_point(x)); }, tb - 2 * h,
                                tb + 2 * h);
    return std::min(best, polygon_signed_distance(poly, k.boundary_point(t)));
}

namespace {

// Cyclic DP over sampled parameters. params[j] are candidate angles for point j.
std::vector<std::size_t> cyclic_dp(const Billiard& b, const std::vector<std::size_t>& seq,
                                   const std::vector<std::vector<double>>& params) {
    const std::size_t n = seq.size();
    std::vector<std::vector<Vec3>> pts(n);
    for (std::size_t j = 0; j < n; ++j)
        for (double t : params[j]) pts[j].push_back(b[seq[j]].boundary_point(t));
    const std::size_t m = params[0].size();
    auto cost = [&](std::size_t j) {
        const auto& A = pts[j];
        const auto& B = pts[(j + 1) % n];
        std::vector<double> c(m * m);
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t c2 = 0; c2 < m; ++c2) c[a * m + c2] = (A[a] - B[c2]).norm();
        return c;
    };
    // acc[a][x] = best chain cost from point 0 at sample a to point j at sample x.
    std::vector<double> acc = cost(0);
    for (std::size_t j = 1; j + 1 < n; ++j) {
        const std::vector<double> c = cost(j);
        std::vector<double> next(m * m, std::numeric_limits<double>::infinity());
        for (std::size_t a = 0; a < m; ++a) {
            double* row = &next[a * m];
            for (std::size_t k = 0; k < m; ++k) {
                const double base = acc[a * m + k];
                const double* cr = &c[k * m];
                for (std::size_t x = 0; x < m; ++x) row[x] = std::min(row[x], base + cr[x]);
            }
        }
        acc.swap(next);
    }
    const std::vector<double> close = cost(n - 1);
    double best = std::numeric_limits<double>::infinity();
    std::size_t a0 = 0;
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t x = 0; x < m; ++x) {
            const double v = acc[a * m + x] + close[x * m + a];
            if (v < best) best = v, a0 = a;
        }
    // Forward DP with the first sample fixed, keeping back pointers.
    std::vector<std::vector<std::size_t>> back(n, std::vector<std::size_t>(m, 0));
    std::vector<double> val(m);
    for (std::size_t x = 0; x < m; ++x) val[x] = (pts[0][a0] - pts[1 % n][x]).norm();
    for (std::size_t j = 1; j + 1 < n; ++j) {
        std::vector<double> nv(m, std::numeric_limits<double>::infinity());
        for (std::size_t k = 0; k < m; ++k)
            for (std::size_t x = 0; x < m; ++x) {
                const double v = val[k] + (pts[j][k] - pts[j + 1][x]).norm();
                if (v < nv[x]) nv[x] = v, back[j + 1][x] = k;
            }
        val.swap(nv);
    }
    std::vector<std::size_t> idx(n, 0);
    idx[0] = a0;
    if (n >= 2) {
        double bv = std::numeric_limits<double>::infinity();
        for (std::size_t x = 0; x < m; ++x) {
            const double v = val[x] + (pts[n - 1][x] - pts[0][a0]).norm();
            if (v < bv) bv = v, idx[n - 1] = x;
        }
        if (n == 2) return idx;
        for (std::size_t j = n - 1; j >= 2; --j) idx[j - 1] = back[j][idx[j]];
    }
    return idx;
}

}  // namespace

std::vector<Vec3> dp_periodic_orbit(const Billiard& b, const std::vector<std::size_t>& seq, int samples) {
    const std::size_t n = seq.size();
    std::vector<std::vector<double>> params(n);
    for (auto& p : params)
        for (int s = 0; s < samples; ++s) p.push_back(kTwoPi * s / samples);
    std::vector<std::size_t> idx = cyclic_dp(b, seq, params);
    std::vector<double> centre(n);
    for (std::size_t j = 0; j < n; ++j) centre[j] = params[j][idx[j]];

    double w = 2.0 * kTwoPi / samples;
    constexpr int kWindow = 41;
    while (w > 1e-13) {
        for (std::size_t j = 0; j < n; ++j) {
            params[j].clear();
            for (int s = 0; s < kWindow; ++s) params[j].push_back(centre[j] - w + 2.0 * w * s / (kWindow - 1));
        }
        idx = cyclic_dp(b, seq, params);
        for (std::size_t j = 0; j < n; ++j) centre[j] = params[j][idx[j]];
        w *= 0.25;
    }
    std::vector<Vec3> out;
    for (std::size_t j = 0; j < n; ++j) out.push_back(b[seq[j]].boundary_point(centre[j]));
    return out;
}

std::optional<std::pair<std::size_t, double>> march_ray(const Billiard& b, const Vec3& q, const Vec3& v,
                                                        std::optional<std::size_t> skip, double step, double t_max) {
    std::optional<std::pair<std::size_t, double>> best;
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (skip && *skip == i) continue;
        double prev = b[i].implicit(q);
        for (double t = step; t <= t_max; t += step) {
            const double cur = b[i].implicit(q + t * v);
            if (prev > 0.0 && cur <= 0.0) {
                double lo = t - step, hi = t;
                for (int it = 0; it < 80; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    (b[i].implicit(q + mid * v) > 0.0 ? lo : hi) = mid;
                }
                if (!best || hi < best->second) best = std::make_pair(i, hi);
                break;
            }
            prev = cur;
        }
    }
    return best;
}

namespace {

using Real = boost::multiprecision::cpp_bin_float_50;

struct V2 {
    Real x, y;
    V2 operator+(const V2& o) const { return {x + o.x, y + o.y}; }
    V2 operator-(const V2& o) const { return {x - o.x, y - o.y}; }
    V2 operator*(const Real& s) const { return {x * s, y * s}; }
    Real dot(const V2& o) const { return x * o.x + y * o.y; }
    Real cross(const V2& o) const { return x * o.y - y * o.x; }
    Real norm() const { return boost::multiprecision::sqrt(dot(*this)); }
    V2 unit() const { return *this * (Real(1) / norm()); }
};

struct Quadric {
    V2 c;
    Real a, b, cs, sn;  // semi-axes and rotation
    V2 to_body(const V2& p) const {
        const V2 d = p - c;
        return {cs * d.x + sn * d.y, -sn * d.x + cs * d.y};
    }
    V2 dir_body(const V2& v) const { return {cs * v.x + sn * v.y, -sn * v.x + cs * v.y}; }
    V2 normal(const V2& p) const {
        const V2 y = to_body(p);
        const V2 gb{y.x / (a * a), y.y / (b * b)};
        return V2{cs * gb.x - sn * gb.y, sn * gb.x + cs * gb.y}.unit();
    }
};

struct MpRay {
    V2 q, v;
    std::optional<std::size_t> last;
};

std::pair<std::size_t, Real> hit(const std::vector<Quadric>& obs, const MpRay& r) {
    std::optional<std::pair<std::size_t, Real>> best;
    for (std::size_t i = 0; i < obs.size(); ++i) {
        if (r.last && *r.last == i) continue;
        const Quadric& k = obs[i];
        const V2 y = k.to_body(r.q), w = k.dir_body(r.v);
        const Real qa = w.x * w.x / (k.a * k.a) + w.y * w.y / (k.b * k.b);
        const Real qb = 2 * (y.x * w.x / (k.a * k.a) + y.y * w.y / (k.b * k.b));
        const Real qc = y.x * y.x / (k.a * k.a) + y.y * y.y / (k.b * k.b) - 1;
        const Real disc = qb * qb - 4 * qa * qc;
        if (disc <= 0) continue;
        const Real t = (-qb - boost::multiprecision::sqrt(disc)) / (2 * qa);
        if (t <= 0) continue;
        if (!best || t < best->second) best = std::make_pair(i, t);
    }
    if (!best) throw std::runtime_error("twin ray escaped");
    return *best;
}

}  // namespace

std::vector<double> twin_ratios(const Billiard& b, const Vec3& q, const Vec3& v, std::size_t start_obstacle, double k0,
                                std::size_t n, const char* eps_text) {
    std::vector<Quadric> obs;
    for (const auto& o : b.obstacles()) {
        const Real ang = o.is_ball() ? Real(0) : Real(o.angle());
        obs.push_back({{Real(o.center().x()), Real(o.center().y())},
                       Real(o.semi_axes().x()),
                       Real(o.semi_axes().y()),
                       boost::multiprecision::cos(ang),
                       boost::multiprecision::sin(ang)});
    }
    const Real eps(eps_text);
    const V2 q1{Real(q.x()), Real(q.y())};
    const V2 v1 = V2{Real(v.x()), Real(v.y())}.unit();
    const V2 e{-v1.y, v1.x};
    MpRay r1{q1, v1, start_obstacle};
    MpRay r2{q1 + e * eps, (v1 + e * (eps * Real(k0))).unit(), start_obstacle};
    const Real sep0 = boost::multiprecision::abs((r1.q - r2.q).cross(r2.v));

    std::vector<double> out;
    for (std::size_t step = 0; step < n; ++step) {
        const auto [i1, t1] = hit(obs, r1);
        const auto [i2, t2] = hit(obs, r2);
        if (i1 != i2) throw std::runtime_error("twin rays split");
        const V2 p1 = r1.q + r1.v * t1, p2 = r2.q + r2.v * t2;
        const Real sep = boost::multiprecision::abs((p1 - r2.q).cross(r2.v));
        out.push_back(static_cast<double>(sep0 / sep));
        const V2 n1 = obs[i1].normal(p1), n2 = obs[i2].normal(p2);
        r1 = {p1, r1.v - n1 * (2 * r1.v.dot(n1)), i1};
        r2 = {p2, r2.v - n2 * (2 * r2.v.dot(n2)), i2};
    }
    return out;
}

std::vector<Obstacle> random_disks(std::mt19937_64& rng, std::size_t u, double spread, double rmin, double rmax) {
    std::uniform_real_distribution<double> pos(-spread, spread), rad(rmin, rmax);
    for (;;) {
        std::vector<Obstacle> obs;
        for (std::size_t k = 0; k < u; ++k) obs.push_back(Obstacle::ball(bdim::planar(pos(rng), pos(rng)), rad(rng), 2));
        bool ok = true;
        for (std::size_t i = 0; i < u && ok; ++i)
            for (std::size_t j = i + 1; j < u && ok; ++j)
                ok = (obs[i].center() - obs[j].center()).norm() > obs[i].semi_axes().x() + obs[j].semi_axes().x() + 0.5;
        if (!ok) continue;
        const Billiard b(2, obs);
        const auto rep = bdim::no_eclipse_check(b);
        bool margin = rep.all_pass;
        for (const auto& e : rep.entries) margin = margin && e.margin > 0.25;
        if (margin) return obs;
    }
}

}  // namespace oracle
