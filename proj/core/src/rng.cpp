#include "alphaeta/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace alphaeta {

namespace {

constexpr std::uint64_t kPhiloxM0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kPhiloxM1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
    const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
}

inline void philox_round(std::array<std::uint64_t, 4>& ctr, const std::array<std::uint64_t, 2>& key) {
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
    mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

} // namespace

std::array<std::uint64_t, 4> Philox::block(const std::array<std::uint64_t, 2>& key,
                                           const std::array<std::uint64_t, 4>& counter) {
    std::array<std::uint64_t, 4> ctr = counter;
    std::array<std::uint64_t, 2> k = key;
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            k[0] += kWeyl0;
            k[1] += kWeyl1;
        }
        philox_round(ctr, k);
    }
    return ctr;
}

Philox::Philox(std::uint64_t key0, std::uint64_t key1) : key_{key0, key1} {}

void Philox::refill() {
    buffer_ = block(key_, counter_);
    index_ = 0;
    // 256-bit little-endian counter increment
    for (auto& word : counter_)
        if (++word != 0) break;
}

std::uint64_t Philox::next_u64() {
    if (index_ >= 4) refill();
    return buffer_[static_cast<std::size_t>(index_++)];
}

double Philox::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Philox::next_uniform(double lo, double hi) {
    return lo + next_double() * (hi - lo);
}

double Philox::next_normal(double sigma) {
    if (has_spare_) {
        has_spare_ = false;
        return spare_normal_ * sigma;
    }
    // u1 in (0,1] so log stays finite
    const double u1 = 1.0 - next_double();
    const double u2 = next_double();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_normal_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle) * sigma;
}

std::uint64_t Philox::next_below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("next_below: n must be >= 1");
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return x % n;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

Philox make_stream(std::uint64_t master_seed, Role role, std::uint64_t trial) {
    const std::uint64_t sub = splitmix64(static_cast<std::uint64_t>(role) ^ splitmix64(trial));
    return Philox(master_seed, sub);
}

} // namespace alphaeta
