#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference
// implementation and an AVX2/FMA variant; the variant is picked once at
// startup from CPU feature detection and can be overridden for testing.

#include <cstddef>
#include <span>
#include <string_view>

namespace bdim::kernels {

enum class Backend { scalar, avx2 };

std::string_view to_string(Backend backend);

/// Backend chosen for the running CPU (avx2 when the CPU supports AVX2+FMA
/// and the library was built for x86-64).
Backend detected_backend();
Backend active_backend();
/// Force a backend. Requesting avx2 on a CPU without it falls back to scalar
/// and returns false.
bool set_backend(Backend backend);

/// Structure-of-arrays view over 3-vectors.
struct Vec3Span {
    std::span<const double> x, y, z;
    std::size_t size() const { return x.size(); }
};

/// Symmetric 3x3 shape matrix, stored as its six distinct entries.
struct SymMat3 {
    double xx, yy, zz, xy, xz, yz;
};

/// Support function of an ellipsoid-type body {c + A u : |u| <= 1}:
/// out[k] = <n_k, c> + sqrt(n_k^T M n_k) with M = A A^T.
void quadric_support(Vec3Span dirs, const double center[3], const SymMat3& m,
                     std::span<double> out);

/// Positive fixed point of x -> x / (1 + theta x) + 2 gamma:
/// out[k] = gamma_k + sqrt(gamma_k^2 + 2 gamma_k / theta_k).
void fixed_point_g(std::span<const double> gamma, std::span<const double> theta,
                   std::span<double> out);

/// For each point, the largest signed distance n_f . p - offset_f over the
/// plane set (positive = outside at least one plane). Planes are given as
/// SoA normals plus offsets. With no planes the result is -infinity.
void max_plane_distance(Vec3Span points, Vec3Span normals,
                        std::span<const double> offsets, std::span<double> out);

namespace scalar {
void quadric_support(Vec3Span dirs, const double center[3], const SymMat3& m,
                     std::span<double> out);
void fixed_point_g(std::span<const double> gamma, std::span<const double> theta,
                   std::span<double> out);
void max_plane_distance(Vec3Span points, Vec3Span normals,
                        std::span<const double> offsets, std::span<double> out);
}  // namespace scalar

namespace avx2 {
bool available();
void quadric_support(Vec3Span dirs, const double center[3], const SymMat3& m,
                     std::span<double> out);
void fixed_point_g(std::span<const double> gamma, std::span<const double> theta,
                   std::span<double> out);
void max_plane_distance(Vec3Span points, Vec3Span normals,
                        std::span<const double> offsets, std::span<double> out);
}  // namespace avx2

}  // namespace bdim::kernels
