#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <Eigen/SVD>

#include "bdim/error.hpp"
#include "bdim/geometry.hpp"

namespace bdim {
namespace {

struct Face {
    std::array<int, 3> v;
    Vec3 n;
    double off;
    bool alive = true;
};

Face make_face(const std::vector<Vec3>& p, int a, int b, int c, const Vec3& interior) {
    Face f{{a, b, c}, (p[b] - p[a]).cross(p[c] - p[a]), 0.0};
    f.n.normalize();
    f.off = f.n.dot(p[a]);
    if (f.n.dot(interior) > f.off) {
        std::swap(f.v[1], f.v[2]);
        f.n = -f.n;
        f.off = -f.off;
    }
    return f;
}

// Incremental hull of a point set known to span R^3.
void hull3(const std::vector<Vec3>& p, double eps, ConvexPolytope& out) {
    const int n = static_cast<int>(p.size());
    // Initial tetrahedron from extreme points.
    int i0 = 0;
    for (int i = 1; i < n; ++i)
        if (p[i].x() < p[i0].x()) i0 = i;
    int i1 = i0;
    for (int i = 0; i < n; ++i)
        if ((p[i] - p[i0]).norm() > (p[i1] - p[i0]).norm()) i1 = i;
    int i2 = i0;
    double best = -1.0;
    for (int i = 0; i < n; ++i) {
        const double a = (p[i1] - p[i0]).cross(p[i] - p[i0]).norm();
        if (a > best) best = a, i2 = i;
    }
    const Vec3 nrm = (p[i1] - p[i0]).cross(p[i2] - p[i0]).normalized();
    int i3 = i0;
    best = -1.0;
    for (int i = 0; i < n; ++i) {
        const double h = std::abs(nrm.dot(p[i] - p[i0]));
        if (h > best) best = h, i3 = i;
    }
    const Vec3 interior = 0.25 * (p[i0] + p[i1] + p[i2] + p[i3]);
    std::vector<Face> faces{make_face(p, i0, i1, i2, interior), make_face(p, i0, i1, i3, interior),
                            make_face(p, i0, i2, i3, interior), make_face(p, i1, i2, i3, interior)};

    for (int q = 0; q < n; ++q) {
        if (q == i0 || q == i1 || q == i2 || q == i3) continue;
        std::vector<std::size_t> visible;
        for (std::size_t f = 0; f < faces.size(); ++f)
            if (faces[f].alive && faces[f].n.dot(p[q]) - faces[f].off > eps) visible.push_back(f);
        if (visible.empty()) continue;
        // Directed edges of visible faces; the horizon is the set whose reverse is absent.
        std::map<std::pair<int, int>, int> edges;
        for (std::size_t f : visible) {
            const auto& v = faces[f].v;
            for (int e = 0; e < 3; ++e) edges[{v[e], v[(e + 1) % 3]}] += 1;
            faces[f].alive = false;
        }
        for (const auto& [e, cnt] : edges) {
            if (edges.count({e.second, e.first})) continue;
            faces.push_back(make_face(p, e.first, e.second, q, interior));
        }
    }

    std::vector<int> remap(n, -1);
    for (const Face& f : faces) {
        if (!f.alive) continue;
        std::array<int, 3> tri{};
        for (int k = 0; k < 3; ++k) {
            int& r = remap[f.v[k]];
            if (r < 0) {
                r = static_cast<int>(out.vertices.size());
                out.vertices.push_back(p[f.v[k]]);
            }
            tri[k] = r;
        }
        out.triangles.push_back(tri);
        out.normals.push_back(f.n);
        out.offsets.push_back(f.off);
    }
}

double cross2(const Vec2& o, const Vec2& a, const Vec2& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

}  // namespace

ConvexPolytope convex_hull(const std::vector<Vec3>& points, int dim, double eps) {
    if (points.empty()) raise(ErrorKind::invalid_input, "convex hull of an empty point set");
    if (dim != 2 && dim != 3) raise(ErrorKind::invalid_input, "hull dimension must be 2 or 3");
    ConvexPolytope out;
    out.ambient_dim = dim;
    const std::size_t n = points.size();
    Vec3 c = Vec3::Zero();
    for (const auto& p : points) c += p;
    c /= static_cast<double>(n);
    out.origin = c;

    Eigen::MatrixXd a(n, dim);
    for (std::size_t k = 0; k < n; ++k) a.row(k) = (points[k] - c).head(dim).transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double rms = std::sqrt(static_cast<double>(n));
    int rank = 0;
    for (int k = 0; k < sv.size(); ++k)
        if (sv(k) / rms > eps) ++rank;
    out.affine_dim = rank;
    for (int k = 0; k < dim; ++k) {
        Vec3 e = Vec3::Zero();
        e.head(dim) = svd.matrixV().col(k);
        (k < rank ? out.basis : out.complement).push_back(e);
    }

    if (rank == 0) {
        out.vertices.push_back(points.front());
        return out;
    }
    if (rank == 1) {
        const Vec3& e = out.basis[0];
        auto lo = points.begin(), hi = points.begin();
        for (auto it = points.begin(); it != points.end(); ++it) {
            if (e.dot(*it) < e.dot(*lo)) lo = it;
            if (e.dot(*it) > e.dot(*hi)) hi = it;
        }
        out.vertices = {*lo, *hi};
        out.loop = {0, 1};
        out.normals = {-e, e};
        out.offsets = {-e.dot(*lo), e.dot(*hi)};
        return out;
    }
    if (rank == 2) {
        const Vec3& e1 = out.basis[0];
        Vec3 e2 = out.basis[1];
        if (dim == 3 && !out.complement.empty() && e1.cross(e2).dot(out.complement[0]) < 0.0)
            out.complement[0] = -out.complement[0];
        std::vector<Vec2> uv(n);
        for (std::size_t k = 0; k < n; ++k) {
            const Vec3 d = points[k] - c;
            uv[k] = Vec2(e1.dot(d), e2.dot(d));
        }
        std::vector<int> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](int i, int j) {
            return uv[i].x() < uv[j].x() || (uv[i].x() == uv[j].x() && uv[i].y() < uv[j].y());
        });
        std::vector<int> h(2 * n);
        std::size_t m = 0;
        for (int i : idx) {
            while (m >= 2 && cross2(uv[h[m - 2]], uv[h[m - 1]], uv[i]) <= 0.0) --m;
            h[m++] = i;
        }
        const std::size_t lower = m + 1;
        for (auto it = idx.rbegin() + 1; it != idx.rend(); ++it) {
            while (m >= lower && cross2(uv[h[m - 2]], uv[h[m - 1]], uv[*it]) <= 0.0) --m;
            h[m++] = *it;
        }
        h.resize(m - 1);
        for (std::size_t k = 0; k < h.size(); ++k) {
            out.vertices.push_back(points[h[k]]);
            out.loop.push_back(static_cast<int>(k));
        }
        for (std::size_t k = 0; k < h.size(); ++k) {
            const Vec2& p = uv[h[k]];
            const Vec2& q = uv[h[(k + 1) % h.size()]];
            Vec2 en(q.y() - p.y(), p.x() - q.x());
            en.normalize();
            const Vec3 nw = en.x() * e1 + en.y() * e2;
            out.normals.push_back(nw);
            out.offsets.push_back(nw.dot(points[h[k]]));
        }
        return out;
    }
    hull3(points, eps * std::max(1.0, sv(0) / rms), out);
    return out;
}

double ConvexPolytope::signed_distance(const Vec3& p) const {
    const Vec3 d = p - origin;
    double off = 0.0;
    for (const auto& e : complement) off += e.dot(d) * e.dot(d);
    off = std::sqrt(off);
    if (affine_dim == 0) return (p - vertices.front()).norm();
    double inside = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < normals.size(); ++k)
        inside = std::max(inside, normals[k].dot(p) - offsets[k]);
    if (!degenerate()) return inside;
    return std::max(off, inside);
}

double ConvexPolytope::diameter() const {
    double d = 0.0;
    for (std::size_t i = 0; i < vertices.size(); ++i)
        for (std::size_t j = i + 1; j < vertices.size(); ++j) d = std::max(d, (vertices[i] - vertices[j]).norm());
    return d;
}

}  // namespace bdim
