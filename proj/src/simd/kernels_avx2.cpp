// AVX2+FMA dot-product kernels. This translation unit is compiled with
// -mavx2 -mfma; the dispatcher guarantees these functions only run on CPUs
// that report AVX2 and FMA support.

#if defined(__x86_64__) || defined(_M_X64)

#include "agentroute/simd/kernels.hpp"

#include <immintrin.h>

namespace agentroute::simd::detail {

bool avx2_supported() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

static inline float hsum256(__m256 v) {
    __m128 lo = _mm256_castps256_ps128(v);
    __m128 hi = _mm256_extractf128_ps(v, 1);
    lo = _mm_add_ps(lo, hi);
    lo = _mm_add_ps(lo, _mm_movehl_ps(lo, lo));
    lo = _mm_add_ss(lo, _mm_shuffle_ps(lo, lo, 0x55));
    return _mm_cvtss_f32(lo);
}

float dot_avx2(const float* a, const float* b, std::size_t n) {
    __m256 acc0 = _mm256_setzero_ps();
    __m256 acc1 = _mm256_setzero_ps();
    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i), acc0);
        acc1 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i + 8), _mm256_loadu_ps(b + i + 8), acc1);
    }
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i), acc0);
    }
    float total = hsum256(_mm256_add_ps(acc0, acc1));
    for (; i < n; ++i) {
        total += a[i] * b[i];
    }
    return total;
}

void dot_many_avx2(const float* query, const float* rows,
                   std::size_t row_count, std::size_t dim, float* out) {
    for (std::size_t r = 0; r < row_count; ++r) {
        out[r] = dot_avx2(query, rows + r * dim, dim);
    }
}

}  // namespace agentroute::simd::detail

#endif  // x86-64
