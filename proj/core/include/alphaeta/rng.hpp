#pragma once

#include <array>
#include <cstdint>

namespace alphaeta {

/**
 * Counter-based random source: Philox-4x64 with 10 rounds (Salmon et al.,
 * "Parallel Random Numbers: As Easy as 1, 2, 3"), bit-compatible with
 * numpy.random.Philox. Streams never overlap: every (seed, role, trial)
 * triple maps to its own key, and the block counter walks 2^256 states.
 *
 * Derived variates are fixed transforms of the raw 64-bit outputs:
 *   uniform double in [0,1):  (x >> 11) * 2^-53
 *   normal:                   Box-Muller on two uniforms, cosine branch
 *                             first, sine branch cached
 * so a (seed, role, trial) triple pins every draw exactly.
 */
class Philox {
public:
    Philox(std::uint64_t key0, std::uint64_t key1);

    std::uint64_t next_u64();

    /// Uniform on [0,1), 53-bit resolution.
    double next_double();

    /// Uniform on [lo, hi).
    double next_uniform(double lo, double hi);

    /// Normal(0, sigma^2) via Box-Muller.
    double next_normal(double sigma);

    /// Unbiased integer in [0, n), n >= 1, by rejection.
    std::uint64_t next_below(std::uint64_t n);

    /// One raw 4-word block for the given counter; does not touch stream state.
    static std::array<std::uint64_t, 4> block(const std::array<std::uint64_t, 2>& key,
                                              const std::array<std::uint64_t, 4>& counter);

private:
    void refill();

    std::array<std::uint64_t, 2> key_;
    std::array<std::uint64_t, 4> counter_{};
    std::array<std::uint64_t, 4> buffer_{};
    int index_ = 4; // buffered words consumed
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

/// SplitMix64 output mix; used only to derive stream keys.
std::uint64_t splitmix64(std::uint64_t x);

/// Role tags for domain-separated sub-streams of one master seed.
enum class Role : std::uint64_t {
    BobNoise = 1,
    EveNoise = 2,
    Message = 3,
    Dsr = 4,
    KeyDraw = 5,
    Symbol = 6,
};

/// Stream for (master seed, role, trial): key = (seed, splitmix64(role ^ splitmix64(trial))).
Philox make_stream(std::uint64_t master_seed, Role role, std::uint64_t trial = 0);

} // namespace alphaeta
