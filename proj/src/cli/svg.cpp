#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "bdim/cli/svg.hpp"
#include "bdim/error.hpp"
#include "bdim/kernels.hpp"

namespace bdim::cli {
namespace {

struct Viewport {
    double x_lo, x_hi, y_lo, y_hi, scale;
    double px(double x) const { return (x - x_lo) * scale; }
    double py(double y) const { return (y_hi - y) * scale; }
    double width() const { return (x_hi - x_lo) * scale; }
    double height() const { return (y_hi - y_lo) * scale; }
};

std::string header(double w, double h) {
    return fmt::format(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.1f}\" height=\"{:.1f}\" viewBox=\"0 0 {:.1f} {:.1f}\">\n"
        "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
        w, h, w, h);
}

std::string line(const Viewport& vp, const Vec3& a, const Vec3& b, const char* style) {
    return fmt::format("<line x1=\"{:.3f}\" y1=\"{:.3f}\" x2=\"{:.3f}\" y2=\"{:.3f}\" {}/>\n", vp.px(a.x()), vp.py(a.y()),
                       vp.px(b.x()), vp.py(b.y()), style);
}

std::string points_attr(const Viewport& vp, const std::vector<Vec3>& pts) {
    std::string s;
    for (std::size_t k = 0; k < pts.size(); ++k)
        s += fmt::format("{}{:.3f},{:.3f}", k ? " " : "", vp.px(pts[k].x()), vp.py(pts[k].y()));
    return s;
}

}  // namespace

std::string plot_billiard(const Billiard& b, const ConstantsReport& adjusted, const SceneLayers& layers,
                          const SvgStyle& style) {
    if (b.dim() != 2) raise(ErrorKind::unsupported, "billiard, hull and orbit plots need a planar billiard");
    double x_lo = 1e300, x_hi = -1e300, y_lo = 1e300, y_hi = -1e300;
    for (const auto& o : b.obstacles()) {
        x_hi = std::max(x_hi, o.support(Vec3::UnitX()));
        x_lo = std::min(x_lo, -o.support(-Vec3::UnitX()));
        y_hi = std::max(y_hi, o.support(Vec3::UnitY()));
        y_lo = std::min(y_lo, -o.support(-Vec3::UnitY()));
    }
    const Viewport vp{x_lo - style.margin, x_hi + style.margin, y_lo - style.margin, y_hi + style.margin,
                      style.px_per_unit};
    std::string svg = header(vp.width(), vp.height());

    if (layers.hull && adjusted.hull.affine_dim == 2) {
        std::vector<Vec3> loop;
        for (int k : adjusted.hull.loop) loop.push_back(adjusted.hull.vertices[static_cast<std::size_t>(k)]);
        svg += fmt::format("<polygon points=\"{}\" fill=\"#4a90d9\" fill-opacity=\"0.25\" stroke=\"#4a90d9\"/>\n",
                           points_attr(vp, loop));
    }

    constexpr int kOutline = 256;
    for (std::size_t i = 0; i < b.size(); ++i) {
        std::string d;
        for (int s = 0; s < kOutline; ++s) {
            const Vec3 p = b[i].boundary_point(2.0 * std::numbers::pi * s / kOutline);
            d += fmt::format("{}{:.3f},{:.3f} ", s ? "L" : "M", vp.px(p.x()), vp.py(p.y()));
        }
        svg += fmt::format("<path d=\"{}Z\" fill=\"#dddddd\" stroke=\"black\" stroke-width=\"1.5\"/>\n", d);
        const Vec3 c = b[i].center();
        svg += fmt::format("<text x=\"{:.3f}\" y=\"{:.3f}\" font-size=\"14\" text-anchor=\"middle\">K{}</text>\n",
                           vp.px(c.x()), vp.py(c.y()) + 5.0, i + 1);
    }

    if (layers.distances) {
        const ClosestPairTable& t = adjusted.closest;
        for (std::size_t i = 0; i < t.size(); ++i)
            for (std::size_t j = i + 1; j < t.size(); ++j) {
                svg += line(vp, t.point(i, j), t.point(j, i), "stroke=\"black\" stroke-width=\"1.5\"");
                // Realising segment of d+_ij.
                double best = -1.0;
                Vec3 a, c;
                for (std::size_t k = 0; k < t.size(); ++k)
                    for (std::size_t l = 0; l < t.size(); ++l) {
                        if (k == i || l == j) continue;
                        const double d = (t.point(i, k) - t.point(j, l)).norm();
                        if (d > best) best = d, a = t.point(i, k), c = t.point(j, l);
                    }
                svg += line(vp, a, c, "stroke=\"#555555\" stroke-width=\"1\" stroke-dasharray=\"6,4\"");
            }
    }

    for (const auto& poly : layers.polylines) {
        if (poly.size() < 2) continue;
        svg += fmt::format("<{} points=\"{}\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.5\"/>\n",
                           layers.closed ? "polygon" : "polyline", points_attr(vp, poly));
    }
    svg += "</svg>\n";
    return svg;
}

std::vector<Segment> marching_squares(const std::vector<double>& v, int nx, int ny, double x_lo, double x_hi,
                                      double y_lo, double y_hi, double level) {
    std::vector<Segment> out;
    const double dx = (x_hi - x_lo) / (nx - 1), dy = (y_hi - y_lo) / (ny - 1);
    auto at = [&](int ix, int iy) { return v[static_cast<std::size_t>(iy) * nx + ix]; };
    auto lerp = [&](double a, double b) { return std::abs(b - a) > 0.0 ? (level - a) / (b - a) : 0.5; };
    for (int iy = 0; iy + 1 < ny; ++iy) {
        for (int ix = 0; ix + 1 < nx; ++ix) {
            // Corners counter-clockwise from the lower left.
            const double c[4] = {at(ix, iy), at(ix + 1, iy), at(ix + 1, iy + 1), at(ix, iy + 1)};
            int mask = 0;
            for (int k = 0; k < 4; ++k)
                if (c[k] >= level) mask |= 1 << k;
            if (mask == 0 || mask == 15) continue;
            const double x0 = x_lo + ix * dx, y0 = y_lo + iy * dy;
            // Edge crossing points: bottom, right, top, left.
            const double ex[4] = {x0 + lerp(c[0], c[1]) * dx, x0 + dx, x0 + lerp(c[3], c[2]) * dx, x0};
            const double ey[4] = {y0, y0 + lerp(c[1], c[2]) * dy, y0 + dy, y0 + lerp(c[0], c[3]) * dy};
            auto seg = [&](int a, int b) { out.push_back({ex[a], ey[a], ex[b], ey[b]}); };
            const bool centre_high = 0.25 * (c[0] + c[1] + c[2] + c[3]) >= level;
            switch (mask) {
                case 1: case 14: seg(3, 0); break;
                case 2: case 13: seg(0, 1); break;
                case 3: case 12: seg(3, 1); break;
                case 4: case 11: seg(1, 2); break;
                case 6: case 9: seg(0, 2); break;
                case 7: case 8: seg(3, 2); break;
                case 5:
                    if (centre_high) seg(3, 2), seg(0, 1);
                    else seg(3, 0), seg(1, 2);
                    break;
                case 10:
                    if (centre_high) seg(3, 0), seg(1, 2);
                    else seg(3, 2), seg(0, 1);
                    break;
                default: break;
            }
        }
    }
    return out;
}

std::string plot_domain(const DomainD& natural, const std::optional<DomainD>& adjusted, int grid,
                        const SvgStyle& style) {
    if (natural.rects.empty()) raise(ErrorKind::invalid_input, "natural domain is empty");
    if (grid < 2) raise(ErrorKind::invalid_input, "contour grid needs at least two samples per side");
    const DomainRect& n = natural.rects.front();
    const double gpad = 0.08 * (n.gamma_hi - n.gamma_lo), tpad = 0.08 * (n.theta_hi - n.theta_lo);
    const double g_lo = std::max(0.0, n.gamma_lo - gpad), g_hi = n.gamma_hi + gpad;
    const double t_lo = std::max(1e-9, n.theta_lo - tpad), t_hi = n.theta_hi + tpad;

    // Fixed canvas; axes scaled independently since gamma and theta carry different units.
    const double w = 640.0, h = 440.0, left = 70.0, bottom = 50.0, top = 20.0, right = 20.0;
    const double pw = w - left - right, ph = h - top - bottom;
    auto X = [&](double gm) { return left + (gm - g_lo) / (g_hi - g_lo) * pw; };
    auto Y = [&](double th) { return top + (t_hi - th) / (t_hi - t_lo) * ph; };
    (void)style;

    std::string svg = header(w, h);
    svg += fmt::format("<rect x=\"{:.3f}\" y=\"{:.3f}\" width=\"{:.3f}\" height=\"{:.3f}\" fill=\"none\" stroke=\"black\"/>\n",
                       left, top, pw, ph);

    // g on the lattice, through the vectorised kernel.
    std::vector<double> gam(static_cast<std::size_t>(grid) * grid), th(gam.size()), val(gam.size());
    for (int iy = 0; iy < grid; ++iy)
        for (int ix = 0; ix < grid; ++ix) {
            const std::size_t k = static_cast<std::size_t>(iy) * grid + ix;
            gam[k] = g_lo + (g_hi - g_lo) * ix / (grid - 1);
            th[k] = t_lo + (t_hi - t_lo) * iy / (grid - 1);
        }
    kernels::fixed_point_g(gam, th, val);
    const double v_hi = *std::max_element(val.begin(), val.end());
    const double v_lo = std::max(*std::min_element(val.begin(), val.end()), 1e-3 * v_hi);
    constexpr int kLevels = 10;
    for (int l = 1; l <= kLevels; ++l) {
        const double level = v_lo * std::pow(v_hi / v_lo, static_cast<double>(l) / (kLevels + 1));
        const auto segs = marching_squares(val, grid, grid, g_lo, g_hi, t_lo, t_hi, level);
        std::string d;
        for (const auto& s : segs)
            d += fmt::format("M{:.2f},{:.2f}L{:.2f},{:.2f}", X(s.x0), Y(s.y0), X(s.x1), Y(s.y1));
        svg += fmt::format("<path d=\"{}\" fill=\"none\" stroke=\"#999999\" stroke-width=\"0.7\" data-g=\"{:.6f}\"/>\n", d,
                           level);
    }

    auto rect = [&](const DomainRect& r, const char* style_attr) {
        return fmt::format("<rect x=\"{:.3f}\" y=\"{:.3f}\" width=\"{:.3f}\" height=\"{:.3f}\" {}/>\n", X(r.gamma_lo),
                           Y(r.theta_hi), X(r.gamma_hi) - X(r.gamma_lo), Y(r.theta_lo) - Y(r.theta_hi), style_attr);
    };
    svg += rect(n, "fill=\"#f5b041\" fill-opacity=\"0.25\" stroke=\"#b9770e\" stroke-width=\"1.5\"");
    if (adjusted)
        for (const auto& r : adjusted->rects)
            svg += rect(r, "fill=\"#2e86c1\" fill-opacity=\"0.3\" stroke=\"#1b4f72\" stroke-width=\"1\"");

    for (int k = 0; k <= 4; ++k) {
        const double gm = g_lo + (g_hi - g_lo) * k / 4.0, tt = t_lo + (t_hi - t_lo) * k / 4.0;
        svg += fmt::format("<text x=\"{:.3f}\" y=\"{:.3f}\" font-size=\"11\" text-anchor=\"middle\">{:.3g}</text>\n", X(gm),
                           h - bottom + 16.0, gm);
        svg += fmt::format("<text x=\"{:.3f}\" y=\"{:.3f}\" font-size=\"11\" text-anchor=\"end\">{:.3g}</text>\n", left - 6.0,
                           Y(tt) + 4.0, tt);
    }
    svg += fmt::format("<text x=\"{:.3f}\" y=\"{:.3f}\" font-size=\"13\" text-anchor=\"middle\">gamma</text>\n",
                       left + pw / 2, h - 12.0);
    svg += fmt::format("<text x=\"16\" y=\"{:.3f}\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.3f})\">theta</text>\n",
                       top + ph / 2, top + ph / 2);
    svg += "</svg>\n";
    return svg;
}

}  // namespace bdim::cli
