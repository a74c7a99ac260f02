#include <atomic>
#include <cstdlib>
#include <string_view>

#include "bdim/error.hpp"
#include "bdim/kernels.hpp"

namespace bdim::kernels {
namespace {

Backend detect() { return avx2::available() ? Backend::avx2 : Backend::scalar; }

Backend initial() {
    const char* env = std::getenv("BDIM_KERNELS");
    if (env && std::string_view(env) == "scalar") return Backend::scalar;
    return detect();
}

std::atomic<Backend>& current() {
    static std::atomic<Backend> backend{initial()};
    return backend;
}

void check_sizes(std::size_t a, std::size_t b) {
    if (a != b) raise(ErrorKind::invalid_input, "kernel input/output size mismatch");
}

}  // namespace

std::string_view to_string(Backend backend) {
    return backend == Backend::avx2 ? "avx2" : "scalar";
}

Backend detected_backend() { return detect(); }
Backend active_backend() { return current().load(std::memory_order_relaxed); }

bool set_backend(Backend backend) {
    if (backend == Backend::avx2 && !avx2::available()) {
        current().store(Backend::scalar);
        return false;
    }
    current().store(backend);
    return true;
}

void quadric_support(Vec3Span dirs, const double center[3], const SymMat3& m,
                     std::span<double> out) {
    check_sizes(dirs.size(), out.size());
    if (active_backend() == Backend::avx2)
        avx2::quadric_support(dirs, center, m, out);
    else
        scalar::quadric_support(dirs, center, m, out);
}

void fixed_point_g(std::span<const double> gamma, std::span<const double> theta,
                   std::span<double> out) {
    check_sizes(gamma.size(), theta.size());
    check_sizes(gamma.size(), out.size());
    if (active_backend() == Backend::avx2)
        avx2::fixed_point_g(gamma, theta, out);
    else
        scalar::fixed_point_g(gamma, theta, out);
}

void max_plane_distance(Vec3Span points, Vec3Span normals, std::span<const double> offsets,
                        std::span<double> out) {
    check_sizes(points.size(), out.size());
    check_sizes(normals.size(), offsets.size());
    if (active_backend() == Backend::avx2)
        avx2::max_plane_distance(points, normals, offsets, out);
    else
        scalar::max_plane_distance(points, normals, offsets, out);
}

}  // namespace bdim::kernels
