#include "agentroute/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

namespace agentroute::simd {

namespace {

bool backend_available(Backend b) {
    switch (b) {
        case Backend::scalar:
            return true;
        case Backend::avx2:
#if defined(__x86_64__) || defined(_M_X64)
            return detail::avx2_supported();
#else
            return false;
#endif
        case Backend::neon:
#if defined(__aarch64__) || defined(__ARM_NEON)
            return true;
#else
            return false;
#endif
    }
    return false;
}

Backend detect() {
    if (const char* env = std::getenv("AGENTROUTE_SIMD")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
        if (std::strcmp(env, "avx2") == 0 && backend_available(Backend::avx2)) return Backend::avx2;
        if (std::strcmp(env, "neon") == 0 && backend_available(Backend::neon)) return Backend::neon;
        // Unknown or unsupported request falls back to scalar.
        return Backend::scalar;
    }
    if (backend_available(Backend::avx2)) return Backend::avx2;
    if (backend_available(Backend::neon)) return Backend::neon;
    return Backend::scalar;
}

std::atomic<Backend> g_backend{detect()};

}  // namespace

Backend active_backend() {
    return g_backend.load(std::memory_order_relaxed);
}

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
        case Backend::neon: return "neon";
    }
    return "unknown";
}

void force_backend(Backend b) {
    if (!backend_available(b)) {
        throw std::invalid_argument(std::string("simd backend not available on this CPU: ") +
                                    backend_name(b));
    }
    g_backend.store(b, std::memory_order_relaxed);
}

float dot(std::span<const float> a, std::span<const float> b) {
    switch (active_backend()) {
#if defined(__x86_64__) || defined(_M_X64)
        case Backend::avx2:
            return detail::dot_avx2(a.data(), b.data(), a.size());
#endif
#if defined(__aarch64__) || defined(__ARM_NEON)
        case Backend::neon:
            return detail::dot_neon(a.data(), b.data(), a.size());
#endif
        default:
            return detail::dot_scalar(a.data(), b.data(), a.size());
    }
}

void dot_many(std::span<const float> query, const float* rows,
              std::size_t row_count, std::size_t dim, std::span<float> out) {
    switch (active_backend()) {
#if defined(__x86_64__) || defined(_M_X64)
        case Backend::avx2:
            detail::dot_many_avx2(query.data(), rows, row_count, dim, out.data());
            return;
#endif
#if defined(__aarch64__) || defined(__ARM_NEON)
        case Backend::neon:
            detail::dot_many_neon(query.data(), rows, row_count, dim, out.data());
            return;
#endif
        default:
            detail::dot_many_scalar(query.data(), rows, row_count, dim, out.data());
            return;
    }
}

}  // namespace agentroute::simd
