#include "alphaeta/keystream.hpp"

#include <algorithm>
#include <map>

#include "alphaeta/errors.hpp"

namespace alphaeta {

SecretKey SecretKey::from_bits(BitVec b) {
    if (b.empty()) throw std::invalid_argument("key must have L >= 1 bits");
    for (Bit bit : b)
        if (bit > 1) throw std::invalid_argument("key bits must be 0 or 1");
    return SecretKey{std::move(b)};
}

SecretKey SecretKey::from_hex(const std::string& hex, int key_bits) {
    if (key_bits < 1) throw std::invalid_argument("key must have L >= 1 bits");
    BitVec all = bits_from_hex(hex);
    if (static_cast<int>(all.size()) < key_bits)
        throw std::invalid_argument("hex key too short: " + std::to_string(all.size()) +
                                    " bits available, " + std::to_string(key_bits) + " required");
    all.resize(static_cast<std::size_t>(key_bits));
    return SecretKey{std::move(all)};
}

SecretKey SecretKey::from_uint(std::uint64_t value, int key_bits) {
    if (key_bits < 1 || key_bits > 64)
        throw std::invalid_argument("from_uint supports 1..64 key bits");
    return SecretKey{bits_from_uint(value, key_bits)};
}

void check_taps(const std::vector<int>& taps, int key_bits) {
    if (taps.empty())
        throw InvalidTapsError("tap set must not be empty");
    for (int t : taps)
        if (t < 1 || t > key_bits)
            throw InvalidTapsError("tap position " + std::to_string(t) +
                                   " outside {1.." + std::to_string(key_bits) + "}");
    if (std::find(taps.begin(), taps.end(), key_bits) == taps.end())
        throw InvalidTapsError("tap set must include the register length " +
                               std::to_string(key_bits));
    std::vector<int> sorted = taps;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw InvalidTapsError("tap positions must be distinct");
}

KeystreamGenerator::KeystreamGenerator(const SecretKey& key, const std::vector<int>& taps)
    : window_(key.bits), taps_(taps) {
    check_taps(taps_, key.length());
    if (all_zero(window_))
        throw DegenerateSeedError("all-zero key is a fixed point of the LFSR feedback");
}

Bit KeystreamGenerator::next_bit() {
    const std::size_t L = window_.size();
    const Bit out = window_[head_];
    Bit feedback = 0;
    // window_[head_ + i] holds s_{t+i}; tap tau contributes s_{t+L-tau}
    for (int tau : taps_)
        feedback ^= window_[(head_ + L - static_cast<std::size_t>(tau)) % L];
    window_[head_] = feedback;
    head_ = (head_ + 1) % L;
    ++emitted_;
    return out;
}

BitVec KeystreamGenerator::next_bits(std::size_t n) {
    BitVec out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = next_bit();
    return out;
}

BasisIndex KeystreamGenerator::next_basis(int M) {
    if (M < 4 || !is_power_of_two(static_cast<std::uint64_t>(M)))
        throw std::invalid_argument("M must be a power of two >= 4, got " + std::to_string(M));
    const int chunk = log2_exact(static_cast<std::uint64_t>(M)) - 1; // log2(M/2)
    int value = 0;
    for (int i = 0; i < chunk; ++i) value = (value << 1) | next_bit();
    return BasisIndex{value};
}

BitVec KeystreamGenerator::state() const {
    const std::size_t L = window_.size();
    BitVec out(L);
    for (std::size_t i = 0; i < L; ++i) out[i] = window_[(head_ + i) % L];
    return out;
}

const std::vector<int>& maximal_taps(int key_bits) {
    // primitive over GF(2) for the recurrence s_t = XOR s_{t-tau}
    static const std::map<int, std::vector<int>> table = {
        {2, {2, 1}},          {3, {3, 2}},
        {4, {4, 3}},          {5, {5, 3}},
        {6, {6, 5}},          {7, {7, 6}},
        {8, {8, 6, 5, 4}},    {9, {9, 5}},
        {10, {10, 7}},        {11, {11, 9}},
        {12, {12, 11, 8, 6}}, {13, {13, 12, 10, 9}},
        {14, {14, 13, 8, 4}}, {15, {15, 14}},
        {16, {16, 15, 13, 4}},
    };
    static const std::vector<int> empty;
    auto it = table.find(key_bits);
    return it == table.end() ? empty : it->second;
}

} // namespace alphaeta
