#include "agentroute/hashing.hpp"

namespace agentroute {

std::string content_key(std::string_view data) {
    static const char* hex = "0123456789abcdef";
    const std::uint64_t h1 = fnv1a64(data, 0);
    const std::uint64_t h2 = fnv1a64(data, 0x9e3779b97f4a7c15ull);
    std::string out;
    out.reserve(32);
    for (std::uint64_t h : {h1, h2}) {
        for (int i = 60; i >= 0; i -= 4) {
            out.push_back(hex[(h >> i) & 0xf]);
        }
    }
    return out;
}

}  // namespace agentroute
