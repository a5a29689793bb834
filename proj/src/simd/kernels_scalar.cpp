#include "agentroute/simd/kernels.hpp"

#include <cmath>

namespace agentroute::simd::detail {

float dot_scalar(const float* a, const float* b, std::size_t n) {
    float acc = 0.0f;
    for (std::size_t i = 0; i < n; ++i) {
        acc += a[i] * b[i];
    }
    return acc;
}

void dot_many_scalar(const float* query, const float* rows,
                     std::size_t row_count, std::size_t dim, float* out) {
    for (std::size_t r = 0; r < row_count; ++r) {
        out[r] = dot_scalar(query, rows + r * dim, dim);
    }
}

}  // namespace agentroute::simd::detail

namespace agentroute::simd {

double l2_norm(std::span<const float> v) {
    double acc = 0.0;
    for (float x : v) {
        acc += static_cast<double>(x) * static_cast<double>(x);
    }
    return std::sqrt(acc);
}

}  // namespace agentroute::simd
