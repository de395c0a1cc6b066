// Independent reference implementations used to derive expected values.
// Everything here is deliberately written from the definitions, not by
// calling the library code it checks.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracle {

// direct recurrence s_t = XOR over taps tau of s_{t-tau}, seed = s_0..s_{L-1}
inline std::vector<std::uint8_t> lfsr_stream(std::vector<std::uint8_t> seed,
                                             const std::vector<int>& taps, std::size_t n) {
    const std::size_t L = seed.size();
    std::vector<std::uint8_t> s = std::move(seed);
    while (s.size() < n + L) {
        std::uint8_t bit = 0;
        const std::size_t t = s.size();
        for (int tau : taps) bit ^= s[t - static_cast<std::size_t>(tau)];
        s.push_back(bit);
    }
    s.resize(n);
    return s;
}

// smallest p > 0 with state(t + p) == state(t); caps at limit
inline std::uint64_t lfsr_period(const std::vector<std::uint8_t>& seed,
                                 const std::vector<int>& taps, std::uint64_t limit) {
    const std::size_t L = seed.size();
    std::vector<std::uint8_t> window = seed;
    std::uint64_t steps = 0;
    while (steps < limit) {
        std::uint8_t bit = 0;
        for (int tau : taps) bit ^= window[L - static_cast<std::size_t>(tau)];
        window.erase(window.begin());
        window.push_back(bit);
        ++steps;
        if (window == seed) return steps;
    }
    return 0;
}

// composite Simpson quadrature
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n % 2 == 1) ++n;
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

inline double gauss_pdf(double x, double mu, double sigma) {
    const double z = (x - mu) / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * M_PI));
}

// wrapped-Gaussian mass of [lo, hi] by quadrature over many wraps
inline double wrapped_gauss_mass(double lo, double hi, double sigma, int M, int wraps = 6,
                                 int grid = 4000) {
    double total = 0.0;
    for (int w = -wraps; w <= wraps; ++w)
        total += simpson([&](double x) { return gauss_pdf(x + w * static_cast<double>(M), 0.0, sigma); },
                         lo, hi, grid);
    return total;
}

} // namespace oracle
