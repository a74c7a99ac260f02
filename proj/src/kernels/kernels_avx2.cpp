#include <cmath>
#include <limits>

#include "bdim/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define BDIM_X86 1
#include <immintrin.h>
#else
#define BDIM_X86 0
#endif

namespace bdim::kernels::avx2 {

#if BDIM_X86

#define BDIM_TARGET __attribute__((target("avx2,fma")))

bool available() {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

BDIM_TARGET void quadric_support(Vec3Span dirs, const double center[3], const SymMat3& m,
                                 std::span<double> out) {
    const std::size_t n = dirs.size();
    const __m256d cx = _mm256_set1_pd(center[0]);
    const __m256d cy = _mm256_set1_pd(center[1]);
    const __m256d cz = _mm256_set1_pd(center[2]);
    const __m256d mxx = _mm256_set1_pd(m.xx), myy = _mm256_set1_pd(m.yy), mzz = _mm256_set1_pd(m.zz);
    const __m256d mxy = _mm256_set1_pd(m.xy), mxz = _mm256_set1_pd(m.xz), myz = _mm256_set1_pd(m.yz);
    const __m256d two = _mm256_set1_pd(2.0);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d x = _mm256_loadu_pd(dirs.x.data() + k);
        const __m256d y = _mm256_loadu_pd(dirs.y.data() + k);
        const __m256d z = _mm256_loadu_pd(dirs.z.data() + k);
        __m256d diag = _mm256_mul_pd(_mm256_mul_pd(mxx, x), x);
        diag = _mm256_fmadd_pd(_mm256_mul_pd(myy, y), y, diag);
        diag = _mm256_fmadd_pd(_mm256_mul_pd(mzz, z), z, diag);
        __m256d off = _mm256_mul_pd(_mm256_mul_pd(mxy, x), y);
        off = _mm256_fmadd_pd(_mm256_mul_pd(mxz, x), z, off);
        off = _mm256_fmadd_pd(_mm256_mul_pd(myz, y), z, off);
        const __m256d q = _mm256_fmadd_pd(two, off, diag);
        __m256d lin = _mm256_mul_pd(x, cx);
        lin = _mm256_fmadd_pd(y, cy, lin);
        lin = _mm256_fmadd_pd(z, cz, lin);
        _mm256_storeu_pd(out.data() + k, _mm256_add_pd(lin, _mm256_sqrt_pd(q)));
    }
    if (k < n) {
        scalar::quadric_support({dirs.x.subspan(k), dirs.y.subspan(k), dirs.z.subspan(k)}, center, m,
                                out.subspan(k));
    }
}

BDIM_TARGET void fixed_point_g(std::span<const double> gamma, std::span<const double> theta,
                               std::span<double> out) {
    const std::size_t n = gamma.size();
    const __m256d two = _mm256_set1_pd(2.0);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d gm = _mm256_loadu_pd(gamma.data() + k);
        const __m256d th = _mm256_loadu_pd(theta.data() + k);
        const __m256d lin = _mm256_div_pd(_mm256_mul_pd(two, gm), th);
        const __m256d disc = _mm256_fmadd_pd(gm, gm, lin);
        _mm256_storeu_pd(out.data() + k, _mm256_add_pd(gm, _mm256_sqrt_pd(disc)));
    }
    if (k < n) scalar::fixed_point_g(gamma.subspan(k), theta.subspan(k), out.subspan(k));
}

BDIM_TARGET void max_plane_distance(Vec3Span points, Vec3Span normals,
                                    std::span<const double> offsets, std::span<double> out) {
    const std::size_t n = points.size();
    const std::size_t nf = offsets.size();
    std::size_t p = 0;
    for (; p + 4 <= n; p += 4) {
        const __m256d x = _mm256_loadu_pd(points.x.data() + p);
        const __m256d y = _mm256_loadu_pd(points.y.data() + p);
        const __m256d z = _mm256_loadu_pd(points.z.data() + p);
        __m256d best = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
        for (std::size_t f = 0; f < nf; ++f) {
            __m256d s = _mm256_mul_pd(_mm256_set1_pd(normals.x[f]), x);
            s = _mm256_fmadd_pd(_mm256_set1_pd(normals.y[f]), y, s);
            s = _mm256_fmadd_pd(_mm256_set1_pd(normals.z[f]), z, s);
            s = _mm256_sub_pd(s, _mm256_set1_pd(offsets[f]));
            best = _mm256_max_pd(best, s);
        }
        _mm256_storeu_pd(out.data() + p, best);
    }
    if (p < n) {
        scalar::max_plane_distance({points.x.subspan(p), points.y.subspan(p), points.z.subspan(p)},
                                   normals, offsets, out.subspan(p));
    }
}

#else

bool available() { return false; }

void quadric_support(Vec3Span dirs, const double center[3], const SymMat3& m, std::span<double> out) {
    scalar::quadric_support(dirs, center, m, out);
}
void fixed_point_g(std::span<const double> gamma, std::span<const double> theta, std::span<double> out) {
    scalar::fixed_point_g(gamma, theta, out);
}
void max_plane_distance(Vec3Span points, Vec3Span normals, std::span<const double> offsets,
                        std::span<double> out) {
    scalar::max_plane_distance(points, normals, offsets, out);
}

#endif

}  // namespace bdim::kernels::avx2
