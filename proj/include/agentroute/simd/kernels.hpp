#pragma once

#include <cstddef>
#include <span>
#include <string>

// Data-parallel kernels behind the dense scoring path. Scalar reference
// implementations are always built; an AVX2 variant (x86-64) or a NEON
// variant (aarch64) is selected once at startup when the CPU supports it.
// All variants are equivalence-tested against the scalar kernels.

namespace agentroute::simd {

enum class Backend { scalar, avx2, neon };

// Backend chosen at startup. Honors the AGENTROUTE_SIMD environment
// variable ("scalar", "avx2", "neon") when set.
Backend active_backend();

const char* backend_name(Backend b);

// Testing hook. Throws std::invalid_argument if the CPU lacks the backend.
void force_backend(Backend b);

// Inner product of two float spans of equal length.
float dot(std::span<const float> a, std::span<const float> b);

// Inner products of `query` against `row_count` contiguous rows of length
// `dim` starting at `rows`. Writes one score per row into `out`. This is the
// hot loop of brute-force dense search.
void dot_many(std::span<const float> query, const float* rows,
              std::size_t row_count, std::size_t dim, std::span<float> out);

// L2 norm accumulated in double precision; not dispatched. Normalization
// runs once per vector at build time and feeds the unit-norm invariant, so
// accuracy wins over throughput here.
double l2_norm(std::span<const float> v);

namespace detail {

// Scalar reference kernels, always available (equivalence oracle).
float dot_scalar(const float* a, const float* b, std::size_t n);
void dot_many_scalar(const float* query, const float* rows,
                     std::size_t row_count, std::size_t dim, float* out);

#if defined(__x86_64__) || defined(_M_X64)
float dot_avx2(const float* a, const float* b, std::size_t n);
void dot_many_avx2(const float* query, const float* rows,
                   std::size_t row_count, std::size_t dim, float* out);
bool avx2_supported();
#endif

#if defined(__aarch64__) || defined(__ARM_NEON)
float dot_neon(const float* a, const float* b, std::size_t n);
void dot_many_neon(const float* query, const float* rows,
                   std::size_t row_count, std::size_t dim, float* out);
#endif

}  // namespace detail

}  // namespace agentroute::simd
