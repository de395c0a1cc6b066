#include "alphaeta/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "alphaeta/bits.hpp"

namespace alphaeta {

namespace {

// wraps needed so the neglected Gaussian tail is < 1e-15
int wrap_count(double sigma, int M) {
    const int w = static_cast<int>(std::ceil(9.0 * sigma / static_cast<double>(M)));
    return std::max(3, w + 1);
}

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI); }

// integral of the standard normal CDF: G(z) = z Phi(z) + phi(z)
double cdf_integral(double z) { return z * normal_cdf(z) + normal_pdf(z); }

} // namespace

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

void ChannelParams::validate() const {
    if (M < 4 || !is_power_of_two(static_cast<std::uint64_t>(M)))
        throw std::invalid_argument("M must be a power of two >= 4, got " + std::to_string(M));
    if (!(N > 0.0))
        throw std::invalid_argument("N must be > 0, got " + std::to_string(N));
    if (!(eta > 0.0) || eta > 1.0)
        throw std::invalid_argument("eta must be in (0, 1], got " + std::to_string(eta));
    if (dsr_sigma_zero && !dsr_enabled)
        throw std::invalid_argument("dsr_sigma_zero requires dsr enabled");
}

double ChannelParams::sigma() const {
    return static_cast<double>(M) / (4.0 * M_PI * std::sqrt(eta * N));
}

double ChannelParams::alpha() const { return 2.0 * std::sqrt(eta * N); }

bool ChannelParams::in_analysis_regime() const {
    const double s = sigma();
    return s >= 2.0 && static_cast<double>(M) / s >= 16.0;
}

ChannelParams ChannelParams::for_sigma(int M, double sigma, bool dsr, bool dsr_sigma_zero) {
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be > 0");
    ChannelParams p;
    p.M = M;
    p.eta = 1.0;
    const double root = static_cast<double>(M) / (4.0 * M_PI * sigma);
    p.N = root * root;
    p.dsr_enabled = dsr;
    p.dsr_sigma_zero = dsr_sigma_zero;
    p.validate();
    return p;
}

NoiseDraw draw_noise(const ChannelParams& params, Philox& rng) {
    NoiseDraw draw;
    if (!(params.dsr_enabled && params.dsr_sigma_zero))
        draw.w = rng.next_normal(params.sigma());
    if (params.dsr_enabled) {
        const double quarter = static_cast<double>(params.M) / 4.0;
        draw.beta = rng.next_uniform(-quarter, quarter);
    }
    return draw;
}

double transmit(int j, const ChannelParams& params, Philox& rng) {
    const NoiseDraw draw = draw_noise(params, rng);
    const double Md = static_cast<double>(params.M);
    double out = std::fmod(static_cast<double>(j) + draw.w + draw.beta.value_or(0.0), Md);
    if (out < 0.0) out += Md;
    if (out >= Md) out = 0.0; // fmod can land on M after rounding
    return out;
}

double compose_eta(const std::vector<double>& factors) {
    double product = 1.0;
    for (double f : factors) {
        if (!(f > 0.0) || f > 1.0)
            throw std::invalid_argument("efficiency factor must be in (0, 1], got " +
                                        std::to_string(f));
        product *= f;
    }
    return product;
}

double wrap_deviation(double delta, int M) {
    const double Md = static_cast<double>(M);
    double d = std::fmod(delta, Md);
    if (d > Md / 2.0) d -= Md;
    if (d <= -Md / 2.0) d += Md;
    return d;
}

double wrapped_normal_interval_prob(double a, double b, double sigma, int M) {
    const double Md = static_cast<double>(M);
    const int W = wrap_count(sigma, M);
    double p = 0.0;
    for (int w = -W; w <= W; ++w) {
        const double shift = static_cast<double>(w) * Md;
        p += normal_cdf((b + shift) / sigma) - normal_cdf((a + shift) / sigma);
    }
    return p;
}

double noise_interval_prob(double a, double b, const ChannelParams& params) {
    const double Md = static_cast<double>(params.M);
    const double quarter = Md / 4.0;
    if (!params.dsr_enabled) return wrapped_normal_interval_prob(a, b, params.sigma(), params.M);
    if (params.dsr_sigma_zero) {
        // exact overlap of [a, b] with the uniform support [-M/4, M/4), wrapped
        double p = 0.0;
        for (int w = -2; w <= 2; ++w) {
            const double lo = std::max(a + w * Md, -quarter);
            const double hi = std::min(b + w * Md, quarter);
            if (hi > lo) p += (hi - lo) / (Md / 2.0);
        }
        return p;
    }
    // Gaussian convolved with the uniform offset: the CDF is
    // (2 sigma / M) [G((t + M/4)/sigma) - G((t - M/4)/sigma)]
    const double sigma = params.sigma();
    const int W = wrap_count(sigma, params.M);
    auto cdf = [&](double t) {
        return 2.0 * sigma / Md *
               (cdf_integral((t + quarter) / sigma) - cdf_integral((t - quarter) / sigma));
    };
    double p = 0.0;
    for (int w = -W; w <= W; ++w) {
        const double shift = static_cast<double>(w) * Md;
        p += cdf(b + shift) - cdf(a + shift);
    }
    return p;
}

double noise_pdf(double x, const ChannelParams& params) {
    const double Md = static_cast<double>(params.M);
    const double quarter = Md / 4.0;
    if (params.dsr_enabled && params.dsr_sigma_zero) {
        const double d = wrap_deviation(x, params.M);
        return (d >= -quarter && d < quarter) ? 2.0 / Md : 0.0;
    }
    const double sigma = params.sigma();
    const int W = wrap_count(sigma, params.M);
    double f = 0.0;
    if (!params.dsr_enabled) {
        for (int w = -W; w <= W; ++w) {
            const double z = (x + w * Md) / sigma;
            f += normal_pdf(z) / sigma;
        }
        return f;
    }
    for (int w = -W; w <= W; ++w) {
        const double t = x + w * Md;
        f += (normal_cdf((t + quarter) / sigma) - normal_cdf((t - quarter) / sigma)) * 2.0 / Md;
    }
    return f;
}

} // namespace alphaeta
