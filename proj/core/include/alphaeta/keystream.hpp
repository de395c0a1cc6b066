#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "alphaeta/bits.hpp"

namespace alphaeta {

/// L-bit secret key. Bit 0 is the first bit the generator emits.
struct SecretKey {
    BitVec bits;

    int length() const { return static_cast<int>(bits.size()); }

    static SecretKey from_bits(BitVec b);
    /// First `key_bits` bits of the hex string, MSB-first per nibble.
    static SecretKey from_hex(const std::string& hex, int key_bits);
    static SecretKey from_uint(std::uint64_t value, int key_bits);
};

/// Half-circle basis index k in [0, M/2).
struct BasisIndex {
    int value = 0;
};

/**
 * Fibonacci LFSR over GF(2).
 *
 * Taps are polynomial exponents, a subset of {1..L} that must contain L.
 * The emitted stream obeys s_t = XOR over taps tau of s_{t-tau}, with
 * s_0..s_{L-1} equal to the seed bits. Example: taps {4,3} gives
 * s_t = s_{t-4} ^ s_{t-3}, maximal with period 15.
 */
class KeystreamGenerator {
public:
    /// Throws DegenerateSeedError on an all-zero key, InvalidTapsError on a
    /// bad tap set.
    KeystreamGenerator(const SecretKey& key, const std::vector<int>& taps);

    Bit next_bit();
    BitVec next_bits(std::size_t n);

    /// Consume log2(M/2) bits, MSB-first, as the next basis index.
    /// M must be a power of two >= 4.
    BasisIndex next_basis(int M);

    std::uint64_t emitted_count() const { return emitted_; }
    int length() const { return static_cast<int>(window_.size()); }
    const std::vector<int>& taps() const { return taps_; }

    /// Current register contents, oldest pending output bit first.
    BitVec state() const;

private:
    BitVec window_;          // ring buffer of the next L output bits
    std::size_t head_ = 0;   // index of the oldest bit
    std::vector<int> taps_;
    std::uint64_t emitted_ = 0;
};

/// Maximal-length tap sets for L in [2,16], verified by brute force in tests.
/// Index by L; entries outside the range are empty.
const std::vector<int>& maximal_taps(int key_bits);

/// Validate taps against {1..L} membership and presence of L.
void check_taps(const std::vector<int>& taps, int key_bits);

} // namespace alphaeta
