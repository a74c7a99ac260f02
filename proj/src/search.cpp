#include "search.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace bdim::detail {

const DirectionSamples& direction_samples(int dim, int count) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::unique_ptr<DirectionSamples>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{dim, count}];
    if (!slot) {
        auto d = std::make_unique<DirectionSamples>();
        d->dim = dim;
        d->x.resize(count);
        d->y.resize(count);
        d->z.resize(count);
        if (dim == 2) {
            d->angle.resize(count);
            for (int k = 0; k < count; ++k) {
                const double t = 2.0 * std::numbers::pi * k / count;
                d->angle[k] = t;
                d->x[k] = std::cos(t);
                d->y[k] = std::sin(t);
                d->z[k] = 0.0;
            }
        } else {
            const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
            for (int k = 0; k < count; ++k) {
                const double zz = 1.0 - (2.0 * k + 1.0) / count;
                const double r = std::sqrt(std::max(0.0, 1.0 - zz * zz));
                d->x[k] = r * std::cos(golden * k);
                d->y[k] = r * std::sin(golden * k);
                d->z[k] = zz;
            }
        }
        slot = std::move(d);
    }
    return *slot;
}

std::vector<double> support_values(const Obstacle& o, const DirectionSamples& d, double flip) {
    const Mat3& m = o.shape_matrix();
    const kernels::SymMat3 sm{m(0, 0), m(1, 1), m(2, 2), m(0, 1), m(0, 2), m(1, 2)};
    const double c[3] = {flip * o.center().x(), flip * o.center().y(), flip * o.center().z()};
    std::vector<double> out(d.size());
    kernels::quadric_support(d.span(), c, sm, out);
    return out;
}

double golden_max(const std::function<double(double)>& f, double a, double b) {
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - r * (b - a), x2 = a + r * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 200 && (b - a) > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        }
    }
    return f1 > f2 ? x1 : x2;
}

double golden_min(const std::function<double(double)>& f, double a, double b) {
    return golden_max([&](double t) { return -f(t); }, a, b);
}

Vec3 ascend_sphere(const std::function<double(const Vec3&, Vec3&)>& value_grad, Vec3 n,
                   double step_scale, int max_iter) {
    n.normalize();
    Vec3 grad;
    double val = value_grad(n, grad);
    double step = 1.0 / step_scale;
    for (int it = 0; it < max_iter; ++it) {
        const Vec3 gt = grad - grad.dot(n) * n;
        const double gn = gt.norm();
        if (gn < 1e-14) break;
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            const Vec3 cand = (n + step * gt).normalized();
            Vec3 cgrad;
            const double cval = value_grad(cand, cgrad);
            if (cval >= val + 1e-4 * step * gn * gn) {
                const double moved = (cand - n).norm();
                n = cand;
                val = cval;
                grad = cgrad;
                accepted = true;
                step *= 2.0;
                if (moved < 1e-15) return n;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
    }
    return n;
}

double refine_planar(const std::function<double(const Vec3&)>& f, const DirectionSamples& d,
                     const std::vector<double>& vals, Vec3* best_dir) {
    const auto best = static_cast<std::size_t>(std::max_element(vals.begin(), vals.end()) - vals.begin());
    const double h = 2.0 * std::numbers::pi / static_cast<double>(d.size());
    const double t0 = d.angle[best];
    auto along = [&](double t) { return f(planar_direction(t)); };
    const double t = golden_max(along, t0 - 1.5 * h, t0 + 1.5 * h);
    const double v = along(t);
    if (v >= vals[best]) {
        if (best_dir) *best_dir = planar_direction(t);
        return v;
    }
    if (best_dir) *best_dir = d.at(best);
    return vals[best];
}

}  // namespace bdim::detail
