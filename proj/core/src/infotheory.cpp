#include "alphaeta/infotheory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "alphaeta/errors.hpp"

namespace alphaeta {

namespace {

double xlog2x(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

// bin probability for the sent symbol m given a measurement at j_received
double bin_prob(int m, double j_received, const ChannelParams& params) {
    const double d = j_received - static_cast<double>(m);
    return noise_interval_prob(d - 0.5, d + 0.5, params);
}

} // namespace

Posterior::Posterior(std::vector<double> probs, std::string label)
    : probs_(std::move(probs)), label_(std::move(label)) {
    if (probs_.empty()) throw std::invalid_argument("posterior over empty outcome space");
    double sum = 0.0;
    for (double p : probs_) {
        if (!(p >= 0.0)) throw std::invalid_argument("posterior entries must be >= 0");
        sum += p;
    }
    if (!(sum > 0.0)) throw std::invalid_argument("posterior has zero total mass");
    for (double& p : probs_) p /= sum;
}

double entropy_bits(const std::vector<double>& probs) {
    double h = 0.0;
    for (double p : probs) h -= xlog2x(p);
    return h;
}

double entropy_bits(const Posterior& p) { return entropy_bits(p.probs()); }

Posterior symbol_posterior(double j_received, const ChannelParams& params) {
    std::vector<double> probs(static_cast<std::size_t>(params.M));
    for (int m = 0; m < params.M; ++m)
        probs[static_cast<std::size_t>(m)] = bin_prob(m, j_received, params);
    return Posterior(std::move(probs), "symbol");
}

double symbol_posterior_entropy(double j_received, const ChannelParams& params) {
    const int M = params.M;
    // beyond 12 sigma a bin's mass is < 1e-31 and its p log p is negligible
    int radius = M; // DSR support spans the circle, keep every bin
    if (!params.dsr_enabled)
        radius = static_cast<int>(std::ceil(12.0 * params.sigma())) + 1;
    if (2 * radius + 1 >= M) {
        return entropy_bits(symbol_posterior(j_received, params));
    }
    const int center = round_symbol(j_received, M);
    std::vector<double> probs;
    probs.reserve(static_cast<std::size_t>(2 * radius + 1));
    for (int d = -radius; d <= radius; ++d) {
        const int m = ((center + d) % M + M) % M;
        probs.push_back(bin_prob(m, j_received, params));
    }
    double sum = 0.0;
    for (double p : probs) sum += p;
    double h = 0.0;
    for (double p : probs) h -= xlog2x(p / sum);
    return h;
}

double info_gain_closed_form(const ChannelParams& params) {
    return std::log2(static_cast<double>(params.M) /
                     (params.sigma() * std::sqrt(2.0 * M_PI * M_E)));
}

double info_gain_approx(const ChannelParams& params) {
    return 0.5 * std::log2(params.eta * params.N) + 1.6;
}

InfoReport key_rate_and_unicity(const ChannelParams& params, int key_bits) {
    if (key_bits < 1) throw std::invalid_argument("key_bits must be >= 1");
    InfoReport r;
    r.h0 = std::log2(static_cast<double>(params.M));
    r.gain_per_symbol = info_gain_closed_form(params);
    r.h1 = r.h0 - r.gain_per_symbol;
    r.gain_approx = info_gain_approx(params);
    r.key_gain_per_symbol = std::max(0.0, r.gain_per_symbol - 1.0);
    r.unicity_n0 = r.key_gain_per_symbol > 0.0
                       ? static_cast<double>(key_bits) / r.key_gain_per_symbol
                       : std::numeric_limits<double>::infinity();
    r.alpha = params.alpha();
    r.key_bits = key_bits;
    r.in_analysis_regime = params.in_analysis_regime();
    return r;
}

MonteCarloGain mc_info_gain(const ChannelParams& params, std::uint64_t trials,
                            std::uint64_t seed) {
    if (trials == 0) throw std::invalid_argument("trials must be >= 1");
    Philox symbol_rng = make_stream(seed, Role::Symbol);
    Philox noise_rng = make_stream(seed, Role::EveNoise);
    const double h0 = std::log2(static_cast<double>(params.M));
    double sum = 0.0, sumsq = 0.0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const int j = static_cast<int>(symbol_rng.next_below(static_cast<std::uint64_t>(params.M)));
        const double jr = transmit(j, params, noise_rng);
        const double gain = h0 - symbol_posterior_entropy(jr, params);
        sum += gain;
        sumsq += gain * gain;
    }
    MonteCarloGain out;
    out.trials = trials;
    out.mean_gain = sum / static_cast<double>(trials);
    const double var =
        std::max(0.0, sumsq / static_cast<double>(trials) - out.mean_gain * out.mean_gain);
    out.stderr = std::sqrt(var / static_cast<double>(trials));
    return out;
}

double bob_ber_analytic(const ChannelParams& params) {
    const double quarter = static_cast<double>(params.M) / 4.0;
    return 1.0 - noise_interval_prob(-quarter, quarter, params);
}

double eve_ber_analytic(const ChannelParams& params) {
    const int M = params.M;
    // message bit carried by each symbol index
    std::vector<Bit> bit_of(static_cast<std::size_t>(M));
    for (int j = 0; j < M; ++j)
        bit_of[static_cast<std::size_t>(j)] = eve_naive_decode(static_cast<double>(j), M);
    double err = 0.0;
    for (int e = 0; e < M; ++e) {
        double flip = 0.0;
        for (int j = 0; j < M; ++j)
            flip += bit_of[static_cast<std::size_t>((j + e) % M)] != bit_of[static_cast<std::size_t>(j)];
        flip /= static_cast<double>(M);
        const double pe = noise_interval_prob(static_cast<double>(e) - 0.5,
                                              static_cast<double>(e) + 0.5, params);
        err += pe * flip;
    }
    return err;
}

BerEstimate ber_curves(const ChannelParams& params, const SecretKey& key,
                       const std::vector<int>& taps, std::uint64_t trials,
                       std::uint64_t seed, const BitVec& message_pattern) {
    if (trials == 0) throw std::invalid_argument("trials must be >= 1");
    KeystreamGenerator gen(key, taps);
    Philox message_rng = make_stream(seed, Role::Message);
    Philox bob_rng = make_stream(seed, Role::BobNoise);
    Philox eve_rng = make_stream(seed, Role::EveNoise);

    std::uint64_t bob_errors = 0, eve_errors = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const int k = gen.next_basis(params.M).value;
        const Bit b = message_pattern.empty()
                          ? static_cast<Bit>(message_rng.next_u64() & 1)
                          : message_pattern[t % message_pattern.size()];
        const int j = encode_symbol(k, b, params.M);
        const double j_bob = transmit(j, params, bob_rng);
        const double j_eve = transmit(j, params, eve_rng);
        bob_errors += bob_decode(k, j_bob, params.M) != b;
        eve_errors += eve_naive_decode(j_eve, params.M) != b;
    }
    BerEstimate out;
    out.trials = trials;
    const double n = static_cast<double>(trials);
    out.bob_ber = static_cast<double>(bob_errors) / n;
    out.eve_ber = static_cast<double>(eve_errors) / n;
    out.bob_analytic = bob_ber_analytic(params);
    out.eve_analytic = eve_ber_analytic(params);
    out.bob_stderr = std::sqrt(std::max(0.0, out.bob_ber * (1.0 - out.bob_ber)) / n);
    out.eve_stderr = std::sqrt(std::max(0.0, out.eve_ber * (1.0 - out.eve_ber)) / n);
    return out;
}

// --- exact enumeration ------------------------------------------------------

namespace {

// observation probability table: cell_prob[j][g] = P(measurement in cell g | sent j)
std::vector<std::vector<double>> cell_table(const ChannelParams& params, int cells) {
    const double width = static_cast<double>(params.M) / static_cast<double>(cells);
    std::vector<std::vector<double>> table(static_cast<std::size_t>(params.M),
                                           std::vector<double>(static_cast<std::size_t>(cells)));
    for (int j = 0; j < params.M; ++j)
        for (int g = 0; g < cells; ++g) {
            const double lo = g * width - static_cast<double>(j);
            table[static_cast<std::size_t>(j)][static_cast<std::size_t>(g)] =
                noise_interval_prob(lo, lo + width, params);
        }
    return table;
}

struct KeySymbols {
    // per symbol, the sent j for message bit 0 and 1
    std::vector<std::array<int, 2>> j_of_bit;
};

std::vector<KeySymbols> expand_keys(const EnumSystem& sys, int n_symbols) {
    const std::uint64_t n_keys = (1ULL << sys.key_bits) - 1;
    std::vector<KeySymbols> keys;
    keys.reserve(n_keys);
    for (std::uint64_t seed = 1; seed <= n_keys; ++seed) {
        KeystreamGenerator gen(SecretKey::from_uint(seed, sys.key_bits), sys.taps);
        KeySymbols ks;
        ks.j_of_bit.resize(static_cast<std::size_t>(n_symbols));
        for (int q = 0; q < n_symbols; ++q) {
            const int k = gen.next_basis(sys.params.M).value;
            ks.j_of_bit[static_cast<std::size_t>(q)] = {encode_symbol(k, 0, sys.params.M),
                                                        encode_symbol(k, 1, sys.params.M)};
        }
        keys.push_back(std::move(ks));
    }
    return keys;
}

// p(cells | key) under the system's message model
double observation_prob(const KeySymbols& ks, const std::vector<int>& cells,
                        const std::vector<std::vector<double>>& table,
                        const MessageModel& msg) {
    const int n = static_cast<int>(cells.size());
    switch (msg.kind) {
    case MessageModel::Kind::Known: {
        double p = 1.0;
        for (int q = 0; q < n; ++q) {
            const Bit b = msg.known_bits[static_cast<std::size_t>(q)];
            const int j = ks.j_of_bit[static_cast<std::size_t>(q)][b];
            p *= table[static_cast<std::size_t>(j)][static_cast<std::size_t>(cells[static_cast<std::size_t>(q)])];
        }
        return p;
    }
    case MessageModel::Kind::UnknownUniform: {
        double p = 1.0;
        for (int q = 0; q < n; ++q) {
            const auto& jb = ks.j_of_bit[static_cast<std::size_t>(q)];
            const std::size_t g = static_cast<std::size_t>(cells[static_cast<std::size_t>(q)]);
            p *= 0.5 * (table[static_cast<std::size_t>(jb[0])][g] +
                        table[static_cast<std::size_t>(jb[1])][g]);
        }
        return p;
    }
    case MessageModel::Kind::Repetition: {
        const int r = msg.repetition;
        double p = 1.0;
        for (int start = 0; start < n; start += r) {
            const int end = std::min(start + r, n);
            double p0 = 1.0, p1 = 1.0;
            for (int q = start; q < end; ++q) {
                const auto& jb = ks.j_of_bit[static_cast<std::size_t>(q)];
                const std::size_t g = static_cast<std::size_t>(cells[static_cast<std::size_t>(q)]);
                p0 *= table[static_cast<std::size_t>(jb[0])][g];
                p1 *= table[static_cast<std::size_t>(jb[1])][g];
            }
            p *= 0.5 * (p0 + p1);
        }
        return p;
    }
    }
    return 0.0;
}

} // namespace

double exact_key_mutual_info(const EnumSystem& sys, int n_symbols, int cells_per_symbol,
                             std::uint64_t budget) {
    if (sys.key_bits < 1 || sys.key_bits > 16)
        throw std::invalid_argument("enumeration supports key_bits in [1, 16]");
    if (sys.params.M > 64)
        throw std::invalid_argument("enumeration supports M <= 64");
    if (n_symbols < 1) throw std::invalid_argument("n_symbols must be >= 1");
    if (cells_per_symbol < 2) throw std::invalid_argument("cells_per_symbol must be >= 2");
    if (sys.message.kind == MessageModel::Kind::Known &&
        static_cast<int>(sys.message.known_bits.size()) < n_symbols)
        throw std::invalid_argument("known-plaintext model needs n_symbols bits");
    if (sys.message.kind == MessageModel::Kind::Repetition && sys.message.repetition < 1)
        throw std::invalid_argument("repetition factor must be >= 1");
    sys.params.validate();

    const std::uint64_t n_keys = (1ULL << sys.key_bits) - 1;
    double grid = 1.0;
    for (int q = 0; q < n_symbols; ++q) grid *= static_cast<double>(cells_per_symbol);
    const double ops = grid * static_cast<double>(n_keys) * static_cast<double>(n_symbols);
    if (ops > static_cast<double>(budget))
        throw InfeasibleSizeError("enumeration needs ~" + std::to_string(ops) +
                                  " operations, budget is " + std::to_string(budget) +
                                  "; shrink key_bits, M, n_symbols or the grid");

    const auto table = cell_table(sys.params, cells_per_symbol);
    const auto keys = expand_keys(sys, n_symbols);

    // I = E_k sum_cells p log2(p / pbar); the ratio form returns an exact 0
    // whenever every key induces the same observation law
    const double keys_d = static_cast<double>(n_keys);
    double info = 0.0;
    std::vector<int> cells(static_cast<std::size_t>(n_symbols), 0);
    std::vector<double> p_given(keys.size());
    while (true) {
        double sum = 0.0;
        for (std::size_t ki = 0; ki < keys.size(); ++ki) {
            const double p = observation_prob(keys[ki], cells, table, sys.message);
            p_given[ki] = p;
            sum += p;
        }
        const double pbar = sum / keys_d;
        if (pbar > 0.0)
            for (double p : p_given)
                if (p > 0.0) info += p * std::log2(p / pbar) / keys_d;

        // odometer
        int d = n_symbols - 1;
        while (d >= 0 && ++cells[static_cast<std::size_t>(d)] == cells_per_symbol) {
            cells[static_cast<std::size_t>(d)] = 0;
            --d;
        }
        if (d < 0) break;
    }
    return info;
}

double exact_symbol_mutual_info(const ChannelParams& params, int cells_per_symbol) {
    params.validate();
    if (cells_per_symbol < 2) throw std::invalid_argument("cells_per_symbol must be >= 2");
    const auto table = cell_table(params, cells_per_symbol);
    const double m_d = static_cast<double>(params.M);
    double info = 0.0;
    for (int g = 0; g < cells_per_symbol; ++g) {
        double sum = 0.0;
        for (int j = 0; j < params.M; ++j)
            sum += table[static_cast<std::size_t>(j)][static_cast<std::size_t>(g)];
        const double pbar = sum / m_d;
        if (pbar <= 0.0) continue;
        for (int j = 0; j < params.M; ++j) {
            const double p = table[static_cast<std::size_t>(j)][static_cast<std::size_t>(g)];
            if (p > 0.0) info += p * std::log2(p / pbar) / m_d;
        }
    }
    return info;
}

double additive_key_mutual_info(int key_bits, const std::vector<int>& taps, int n_bits,
                                std::uint64_t budget) {
    if (key_bits < 1 || key_bits > 16)
        throw std::invalid_argument("enumeration supports key_bits in [1, 16]");
    if (n_bits < 1 || n_bits > 24) throw std::invalid_argument("n_bits must be in [1, 24]");
    const std::uint64_t n_keys = (1ULL << key_bits) - 1;
    const std::uint64_t n_patterns = 1ULL << n_bits;
    if (n_keys * n_patterns > budget)
        throw InfeasibleSizeError("additive enumeration exceeds budget; shrink key_bits or n_bits");

    // p(ciphertext | key) accumulated over every equally likely message;
    // two passes over the key space keep memory at O(2^n)
    const double msg_prob = 1.0 / static_cast<double>(n_patterns);
    const double keys_d = static_cast<double>(n_keys);
    std::vector<double> row(n_patterns);
    auto fill_row = [&](std::uint64_t seed) {
        KeystreamGenerator gen(SecretKey::from_uint(seed, key_bits), taps);
        std::uint64_t run = 0;
        for (int q = 0; q < n_bits; ++q) run = (run << 1) | gen.next_bit();
        std::fill(row.begin(), row.end(), 0.0);
        for (std::uint64_t msg = 0; msg < n_patterns; ++msg) row[msg ^ run] += msg_prob;
    };
    std::vector<double> marginal(n_patterns, 0.0);
    for (std::uint64_t seed = 1; seed <= n_keys; ++seed) {
        fill_row(seed);
        for (std::uint64_t c = 0; c < n_patterns; ++c) marginal[c] += row[c];
    }
    for (double& m : marginal) m /= keys_d;
    double info = 0.0;
    for (std::uint64_t seed = 1; seed <= n_keys; ++seed) {
        fill_row(seed);
        for (std::uint64_t c = 0; c < n_patterns; ++c) {
            const double p = row[c];
            if (p > 0.0 && marginal[c] > 0.0) info += p * std::log2(p / marginal[c]) / keys_d;
        }
    }
    return info;
}

} // namespace alphaeta
