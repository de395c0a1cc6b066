#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "alphaeta/channel.hpp"
#include "alphaeta/protocol.hpp"

namespace alphaeta {

/// Discrete probability vector over a finite outcome space. Normalized on
/// construction; sums to 1 within 1e-12.
class Posterior {
public:
    Posterior(std::vector<double> probs, std::string label);

    const std::vector<double>& probs() const { return probs_; }
    const std::string& label() const { return label_; }
    std::size_t size() const { return probs_.size(); }
    double operator[](std::size_t i) const { return probs_[i]; }

private:
    std::vector<double> probs_;
    std::string label_;
};

/// Shannon entropy in bits, with 0 log 0 = 0.
double entropy_bits(const std::vector<double>& probs);
double entropy_bits(const Posterior& p);

/// Posterior over the sent symbol given a measurement, uniform prior.
/// Bin m gets the channel density integrated over [m-1/2, m+1/2).
Posterior symbol_posterior(double j_received, const ChannelParams& params);

/// entropy_bits(symbol_posterior(...)) without materializing far-tail bins
/// whose mass is below double precision. Matches the full form to 1e-12.
double symbol_posterior_entropy(double j_received, const ChannelParams& params);

/// Per-symbol information gain on j: log2(M / (sigma sqrt(2 pi e))).
double info_gain_closed_form(const ChannelParams& params);

/// The wideband approximation (1/2) log2(eta N) + 1.6.
double info_gain_approx(const ChannelParams& params);

struct InfoReport {
    double h0 = 0.0;          // log2 M
    double h1 = 0.0;          // log2(sigma sqrt(2 pi e))
    double gain_per_symbol = 0.0;
    double gain_approx = 0.0;
    double key_gain_per_symbol = 0.0; // U = gain - 1, clamped at 0
    double unicity_n0 = 0.0;          // L / U, +inf when U == 0
    double alpha = 0.0;               // 2 sqrt(eta N)
    int key_bits = 0;
    bool in_analysis_regime = true;
};

/// U and the unicity distance n0 = L/U for an L-bit key.
InfoReport key_rate_and_unicity(const ChannelParams& params, int key_bits);

// --- Monte-Carlo estimates --------------------------------------------------

struct MonteCarloGain {
    double mean_gain = 0.0;
    double stderr = 0.0;
    std::uint64_t trials = 0;
};

/// Mean of h0 - entropy(symbol_posterior(transmit(j))) over uniform random
/// symbols; the empirical counterpart of info_gain_closed_form.
MonteCarloGain mc_info_gain(const ChannelParams& params, std::uint64_t trials,
                            std::uint64_t seed);

struct BerEstimate {
    double bob_ber = 0.0;
    double eve_ber = 0.0;
    double bob_analytic = 0.0;
    double eve_analytic = 0.0;
    double bob_stderr = 0.0;
    double eve_stderr = 0.0;
    std::uint64_t trials = 0;
};

/// Monte-Carlo bit error rates for the keyed and keyless decoders, with the
/// analytic predictions alongside. Bob and Eve see independent noise.
/// message_pattern cycles as the plaintext; empty means random bits.
BerEstimate ber_curves(const ChannelParams& params, const SecretKey& key,
                       const std::vector<int>& taps, std::uint64_t trials,
                       std::uint64_t seed, const BitVec& message_pattern = {});

/// P(|wrapped deviation| > M/4): the keyed decoder's exact error probability.
double bob_ber_analytic(const ChannelParams& params);

/// Exact error probability of the keyless decoder under uniform (k, b).
double eve_ber_analytic(const ChannelParams& params);

// --- exact enumeration oracles ----------------------------------------------

/// How Eve models the message during enumeration and attacks.
struct MessageModel {
    enum class Kind { UnknownUniform, Known, Repetition };
    Kind kind = Kind::UnknownUniform;
    BitVec known_bits;  // Kind::Known: the plaintext itself
    int repetition = 1; // Kind::Repetition: each message bit sent this many times

    static MessageModel unknown() { return {}; }
    static MessageModel known(BitVec bits) {
        return {Kind::Known, std::move(bits), 1};
    }
    static MessageModel repeated(int factor) {
        return {Kind::Repetition, {}, factor};
    }
};

/// A system small enough to enumerate every key against a discretized
/// observation grid.
struct EnumSystem {
    int key_bits = 8;            // <= 16
    std::vector<int> taps;
    ChannelParams params;        // M <= 64
    MessageModel message;
};

/// I(K; J'_1..J'_n) in bits by exhaustive enumeration: every nonzero seed,
/// exact per-cell observation probabilities, full joint over the grid of
/// cells_per_symbol^n observation cells. Throws InfeasibleSizeError when
/// keys * cells^n * n exceeds the budget.
double exact_key_mutual_info(const EnumSystem& system, int n_symbols, int cells_per_symbol,
                             std::uint64_t budget = 400'000'000ULL);

/// I(J; J') for one symbol drawn uniformly from [0, M).
double exact_symbol_mutual_info(const ChannelParams& params, int cells_per_symbol);

/// I(K; ciphertext) for the additive stream cipher with an unknown uniform
/// message, by brute-force enumeration of keys x messages.
double additive_key_mutual_info(int key_bits, const std::vector<int>& taps, int n_bits,
                                std::uint64_t budget = 100'000'000ULL);

} // namespace alphaeta
