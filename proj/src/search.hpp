#pragma once

// Internal helpers for support-function optimisation over unit directions.

#include <cmath>
#include <functional>
#include <vector>

#include "bdim/geometry.hpp"
#include "bdim/kernels.hpp"

namespace bdim::detail {

struct DirectionSamples {
    int dim = 2;
    std::vector<double> x, y, z;
    std::vector<double> angle;  // planar samples only

    std::size_t size() const { return x.size(); }
    Vec3 at(std::size_t k) const { return Vec3(x[k], y[k], z[k]); }
    kernels::Vec3Span span() const { return {x, y, z}; }
};

/// Uniform angles in the plane, Fibonacci lattice on the sphere.
const DirectionSamples& direction_samples(int dim, int count);

/// h_o(flip * n) for every sample direction n.
std::vector<double> support_values(const Obstacle& o, const DirectionSamples& d, double flip);

/// Argmax of a unimodal function on [a, b].
double golden_max(const std::function<double(double)>& f, double a, double b);
double golden_min(const std::function<double(double)>& f, double a, double b);

/// Projected gradient ascent on the unit sphere with Armijo backtracking.
/// `value_grad` returns f(n) and writes the ambient gradient.
Vec3 ascend_sphere(const std::function<double(const Vec3&, Vec3&)>& value_grad, Vec3 n,
                   double step_scale, int max_iter = 20000);

inline Vec3 planar_direction(double t) { return Vec3(std::cos(t), std::sin(t), 0.0); }

/// Maximise a planar direction objective: dense samples `vals` then golden refinement.
double refine_planar(const std::function<double(const Vec3&)>& f, const DirectionSamples& d,
                     const std::vector<double>& vals, Vec3* best_dir = nullptr);

}  // namespace bdim::detail
