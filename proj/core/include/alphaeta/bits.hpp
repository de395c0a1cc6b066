#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "alphaeta/errors.hpp"

namespace alphaeta {

using Bit = std::uint8_t; // always 0 or 1
using BitVec = std::vector<Bit>;

/// Parse a hex string into bits, MSB-first within each nibble.
/// Result has 4*strlen bits; callers truncate to the key length they need.
inline BitVec bits_from_hex(const std::string& hex) {
    BitVec out;
    out.reserve(hex.size() * 4);
    for (char c : hex) {
        int v;
        if (c >= '0' && c <= '9') v = c - '0';
        else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
        else throw ConfigError(std::string("invalid hex digit '") + c + "' in key");
        for (int b = 3; b >= 0; --b) out.push_back(static_cast<Bit>((v >> b) & 1));
    }
    return out;
}

/// Bits of a byte stream, MSB-first within each byte.
inline BitVec bits_from_bytes(const std::vector<std::uint8_t>& bytes) {
    BitVec out;
    out.reserve(bytes.size() * 8);
    for (std::uint8_t byte : bytes)
        for (int b = 7; b >= 0; --b) out.push_back(static_cast<Bit>((byte >> b) & 1));
    return out;
}

/// Low `n_bits` of `value` as a bit vector, MSB-first.
inline BitVec bits_from_uint(std::uint64_t value, int n_bits) {
    BitVec out(static_cast<std::size_t>(n_bits));
    for (int i = 0; i < n_bits; ++i)
        out[static_cast<std::size_t>(i)] = static_cast<Bit>((value >> (n_bits - 1 - i)) & 1);
    return out;
}

inline std::uint64_t uint_from_bits(const BitVec& bits) {
    std::uint64_t v = 0;
    for (Bit b : bits) v = (v << 1) | b;
    return v;
}

inline bool all_zero(const BitVec& bits) {
    for (Bit b : bits)
        if (b) return false;
    return true;
}

inline bool is_power_of_two(std::uint64_t x) { return x != 0 && (x & (x - 1)) == 0; }

/// log2 of a power of two.
inline int log2_exact(std::uint64_t x) {
    int n = 0;
    while (x > 1) {
        x >>= 1;
        ++n;
    }
    return n;
}

} // namespace alphaeta
