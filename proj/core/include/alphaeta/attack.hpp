#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "alphaeta/infotheory.hpp"

namespace alphaeta {

/// Exhaustive Bayesian key-recovery setup. The candidate space defaults to
/// every nonzero g-bit seed.
struct AttackConfig {
    int g = 8;                         // key bits to learn (= L for a raw LFSR)
    std::vector<int> taps;
    ChannelParams params;
    MessageModel message;              // known / unknown / repetition
    std::vector<std::uint64_t> key_space; // empty -> all nonzero seeds
    int trials = 100;
    double success_threshold = 0.99;
    int symbol_budget = 0;             // 0 -> ceil(4 g / U)

    std::vector<std::uint64_t> candidates() const;
    int default_budget() const;
    void validate() const;
};

struct AttackReport {
    int g = 0;
    double u = 0.0;             // closed-form key rate for these params
    double bound_s0 = 0.0;      // g / U
    double known_floor = 0.0;   // g / (U + 1), the known-plaintext floor
    double threshold = 0.99;
    int symbol_budget = 0;
    std::vector<int> s0_trials;          // first crossing per trial, -1 if never
    double median_s0 = -1.0;             // over recovered trials
    double median_s0_at_090 = -1.0;      // threshold sensitivity
    double median_s0_at_0999 = -1.0;
    double success_rate = 0.0;
    std::vector<double> mean_entropy;    // key-posterior entropy vs symbol count
    std::vector<std::vector<double>> entropy_trajectories; // per trial, index = symbols seen
    std::uint64_t ties = 0;              // equal-likelihood top pairs seen
};

/// Sum over symbols of the log channel density of the observation given the
/// candidate's implied symbol; unknown message bits enter as a 1/2-1/2
/// mixture, repeated bits as a shared mixture per group.
double log_likelihood(const SecretKey& candidate, const std::vector<double>& observations,
                      const ChannelParams& params, const std::vector<int>& taps,
                      const MessageModel& message);

/// Softmax of candidate log-likelihoods under a uniform prior.
Posterior key_posterior(const std::vector<double>& observations, const AttackConfig& config);

/// Incremental version of the same computation, one symbol at a time.
class AttackEngine {
public:
    explicit AttackEngine(const AttackConfig& config);

    void observe(double j_received);

    std::size_t n_observed() const { return n_observed_; }
    const std::vector<std::uint64_t>& candidates() const { return candidates_; }

    Posterior posterior() const;
    double entropy() const;
    double posterior_of(std::uint64_t seed) const;

    /// Index of the most likely candidate; exact ties go to the smallest seed.
    std::size_t top_candidate() const;
    bool tie_at_top() const;

private:
    std::vector<double> posterior_weights() const; // normalized, linear scale

    AttackConfig config_;
    std::vector<std::uint64_t> candidates_;
    std::vector<KeystreamGenerator> generators_;
    std::vector<double> loglik_;
    // open repetition group, per candidate: log-products for bit 0 and 1
    std::vector<double> group_lp0_, group_lp1_;
    int group_fill_ = 0;
    std::size_t n_observed_ = 0;
};

/// Per trial: draw a key and message, transmit, and feed symbols to the
/// engine until the true key's posterior exceeds the success threshold.
AttackReport measure_s0(const AttackConfig& config, std::uint64_t seed);

/// XOR ciphertext and plaintext to expose running-key bits, then solve the
/// register state over GF(2). Needs at least L consecutive bits.
SecretKey known_plaintext_attack_additive(const BitVec& ciphertext, const BitVec& plaintext,
                                          const std::vector<int>& taps, int key_bits);

/// Solve the seed from `key_bits` consecutive keystream bits starting at
/// stream position `offset`. Throws NeedsMoreDataError on a singular system.
SecretKey recover_seed_from_keystream(const BitVec& window, std::size_t offset,
                                      const std::vector<int>& taps, int key_bits);

} // namespace alphaeta
