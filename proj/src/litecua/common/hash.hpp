#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace litecua {

inline constexpr std::uint64_t kFnv64Offset = 14695981039346656037ull;
inline constexpr std::uint64_t kFnv64Prime = 1099511628211ull;

// FNV-1a, the project-wide 64-bit content hash (screenshots, states, snapshots).
inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = kFnv64Offset) {
    std::uint64_t h = seed;
    for (unsigned char c : bytes) {
        h ^= static_cast<std::uint64_t>(c);
        h *= kFnv64Prime;
    }
    return h;
}

inline std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t seed = kFnv64Offset) {
    return fnv1a64(std::string_view(static_cast<const char*>(data), len), seed);
}

// 16 lowercase hex digits, zero padded.
inline std::string hash_hex(std::uint64_t h) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xF];
        h >>= 4;
    }
    return out;
}

}  // namespace litecua
