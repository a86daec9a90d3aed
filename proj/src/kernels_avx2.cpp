#include "rbsde/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define RBSDE_HAVE_AVX2_BUILD 1
#include <immintrin.h>
#endif

#include <algorithm>
#include <cmath>

namespace rbsde::kernels {

#if RBSDE_HAVE_AVX2_BUILD

namespace {

// Reorders hadd output [a0+a1, b0+b1, a2+a3, b2+b3] back to memory order.
constexpr int kFoldPermute = 0b11011000;

void fold_avx2(const double* in, double* out, std::size_t pairs) {
    std::size_t i = 0;
    for (; i + 4 <= pairs; i += 4) {
        __m256d a = _mm256_loadu_pd(in + 2 * i);
        __m256d b = _mm256_loadu_pd(in + 2 * i + 4);
        __m256d h = _mm256_hadd_pd(a, b);
        h = _mm256_permute4x64_pd(h, kFoldPermute);
        _mm256_storeu_pd(out + i, h);
    }
    for (; i < pairs; ++i) {
        out[i] = in[2 * i] + in[2 * i + 1];
    }
}

void fold_mul_avx2(const double* a, const double* b, double* out,
                   std::size_t pairs) {
    std::size_t i = 0;
    for (; i + 4 <= pairs; i += 4) {
        __m256d p0 = _mm256_mul_pd(_mm256_loadu_pd(a + 2 * i),
                                   _mm256_loadu_pd(b + 2 * i));
        __m256d p1 = _mm256_mul_pd(_mm256_loadu_pd(a + 2 * i + 4),
                                   _mm256_loadu_pd(b + 2 * i + 4));
        __m256d h = _mm256_hadd_pd(p0, p1);
        h = _mm256_permute4x64_pd(h, kFoldPermute);
        _mm256_storeu_pd(out + i, h);
    }
    for (; i < pairs; ++i) {
        out[i] = a[2 * i] * b[2 * i] + a[2 * i + 1] * b[2 * i + 1];
    }
}

double max_abs_diff_avx2(const double* a, const double* b, std::size_t n) {
    const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(
        0x7fffffffffffffffLL));
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_max_pd(acc, _mm256_and_pd(d, abs_mask));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double m = std::max(std::max(lanes[0], lanes[1]),
                        std::max(lanes[2], lanes[3]));
    for (; i < n; ++i) {
        m = std::max(m, std::fabs(a[i] - b[i]));
    }
    return m;
}

void add_scaled_avx2(const double* a, const double* b, double s, double* out,
                     std::size_t n) {
    const __m256d vs = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d r = _mm256_add_pd(_mm256_loadu_pd(a + i),
                                  _mm256_mul_pd(vs, _mm256_loadu_pd(b + i)));
        _mm256_storeu_pd(out + i, r);
    }
    for (; i < n; ++i) {
        out[i] = a[i] + s * b[i];
    }
}

void clamp_avx2(const double* x, const double* lo, const double* hi,
                double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_max_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(lo + i));
        v = _mm256_min_pd(v, _mm256_loadu_pd(hi + i));
        _mm256_storeu_pd(out + i, v);
    }
    for (; i < n; ++i) {
        out[i] = std::min(std::max(x[i], lo[i]), hi[i]);
    }
}

const Backend kAvx2{"avx2",          fold_avx2,       fold_mul_avx2,
                    max_abs_diff_avx2, add_scaled_avx2, clamp_avx2};

}  // namespace

const Backend* avx2() {
    static const bool supported = __builtin_cpu_supports("avx2");
    return supported ? &kAvx2 : nullptr;
}

#else

const Backend* avx2() { return nullptr; }

#endif

}  // namespace rbsde::kernels
