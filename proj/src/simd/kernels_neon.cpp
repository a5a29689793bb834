// NEON dot-product kernels for aarch64, where NEON is baseline.

#if defined(__aarch64__) || defined(__ARM_NEON)

#include "agentroute/simd/kernels.hpp"

#include <arm_neon.h>

namespace agentroute::simd::detail {

float dot_neon(const float* a, const float* b, std::size_t n) {
    float32x4_t acc0 = vdupq_n_f32(0.0f);
    float32x4_t acc1 = vdupq_n_f32(0.0f);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = vfmaq_f32(acc0, vld1q_f32(a + i), vld1q_f32(b + i));
        acc1 = vfmaq_f32(acc1, vld1q_f32(a + i + 4), vld1q_f32(b + i + 4));
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = vfmaq_f32(acc0, vld1q_f32(a + i), vld1q_f32(b + i));
    }
    float total = vaddvq_f32(vaddq_f32(acc0, acc1));
    for (; i < n; ++i) {
        total += a[i] * b[i];
    }
    return total;
}

void dot_many_neon(const float* query, const float* rows,
                   std::size_t row_count, std::size_t dim, float* out) {
    for (std::size_t r = 0; r < row_count; ++r) {
        out[r] = dot_neon(query, rows + r * dim, dim);
    }
}

}  // namespace agentroute::simd::detail

#endif  // aarch64 / NEON
