#pragma once

#include <optional>
#include <vector>

#include "alphaeta/rng.hpp"

namespace alphaeta {

/**
 * Classical model of the measured phase: the sent symbol plus Gaussian
 * noise of standard deviation sigma = M / (4 pi sqrt(eta N)), reduced mod M.
 * With DSR enabled a uniform half-circle offset beta in [-M/4, M/4) is added
 * as well, and dsr_sigma_zero forces the Gaussian part to zero.
 */
struct ChannelParams {
    int M = 4096;             // symbol count, power of two >= 4
    double N = 40000.0;       // mean photon number
    double eta = 1.0;         // total efficiency in (0, 1]
    bool dsr_enabled = false;
    bool dsr_sigma_zero = false;

    double sigma() const;          // M / (4 pi sqrt(eta N))
    double alpha() const;          // 2 sqrt(eta N)
    bool in_analysis_regime() const; // M/sigma >= 16 and sigma >= 2 (reported, never enforced)

    void validate() const; // throws std::invalid_argument naming the violated rule

    /// Params with the photon number chosen so sigma() equals the given value.
    static ChannelParams for_sigma(int M, double sigma, bool dsr = false, bool dsr_sigma_zero = false);
};

/// One draw of channel noise, exposed for tests and trace tooling.
struct NoiseDraw {
    double w = 0.0;              // Gaussian part, symbol units
    std::optional<double> beta;  // DSR offset, present iff dsr_enabled
};

NoiseDraw draw_noise(const ChannelParams& params, Philox& rng);

/// j' = (j + w [+ beta]) mod M, real-valued in [0, M).
double transmit(int j, const ChannelParams& params, Philox& rng);

/// Product of efficiency factors, each required to lie in (0, 1].
double compose_eta(const std::vector<double>& factors);

/// Signed deviation wrapped to (-M/2, M/2].
double wrap_deviation(double delta, int M);

// --- wrapped distribution helpers -----------------------------------------
//
// All take the deviation x = j_received - j_sent (any real; they wrap
// internally) and describe the channel noise law of the given params.

/// Density of the channel deviation at x.
double noise_pdf(double x, const ChannelParams& params);

/// P(deviation in [a, b]) for a <= b with b - a <= M.
double noise_interval_prob(double a, double b, const ChannelParams& params);

/// Standard normal CDF.
double normal_cdf(double z);

/// Upper tail of the standard normal, erfc-based for small-probability accuracy.
double normal_sf(double z);

/// Wrapped-normal P(deviation in [a, b]) with explicit sigma (no DSR).
double wrapped_normal_interval_prob(double a, double b, double sigma, int M);

} // namespace alphaeta
