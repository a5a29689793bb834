#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace agentroute {

// FNV-1a, 64-bit. Platform-stable (unlike std::hash), which matters because
// hash values end up in cache filenames and in the deterministic embedder.
inline std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0) {
    std::uint64_t h = 14695981039346656037ull ^ seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// splitmix64 finalizer; spreads low-entropy seeds across all 64 bits.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// 128-bit content key as lowercase hex, built from two independently seeded
// FNV-1a passes. Used for cache filenames and run-metadata content hashes.
std::string content_key(std::string_view data);

}  // namespace agentroute
