#include "alphaeta/attack.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "alphaeta/errors.hpp"

namespace alphaeta {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add_exp(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double hi = std::max(a, b);
    return hi + std::log(std::exp(a - hi) + std::exp(b - hi));
}

double safe_log(double x) { return x > 0.0 ? std::log(x) : kNegInf; }

double median_of(std::vector<int> values) {
    if (values.empty()) return -1.0;
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

} // namespace

std::vector<std::uint64_t> AttackConfig::candidates() const {
    if (!key_space.empty()) return key_space;
    std::vector<std::uint64_t> all;
    const std::uint64_t count = (1ULL << g) - 1;
    all.reserve(count);
    for (std::uint64_t s = 1; s <= count; ++s) all.push_back(s);
    return all;
}

int AttackConfig::default_budget() const {
    const double u = key_rate_and_unicity(params, g).key_gain_per_symbol;
    if (u <= 0.0) return 64 * g;
    return static_cast<int>(std::ceil(4.0 * static_cast<double>(g) / u));
}

void AttackConfig::validate() const {
    if (g < 1 || g > 16)
        throw std::invalid_argument("attack key size g must be in [1, 16], got " +
                                    std::to_string(g));
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (!(success_threshold > 0.0) || !(success_threshold < 1.0))
        throw std::invalid_argument("success_threshold must be in (0, 1)");
    params.validate();
    const std::uint64_t n_candidates = key_space.empty() ? (1ULL << g) - 1 : key_space.size();
    if (n_candidates == 0) throw std::invalid_argument("key space must be non-empty");
    if (n_candidates > (1ULL << 16))
        throw InfeasibleSizeError("key space of " + std::to_string(n_candidates) +
                                  " candidates exceeds the exhaustive-ranking budget");
}

double log_likelihood(const SecretKey& candidate, const std::vector<double>& observations,
                      const ChannelParams& params, const std::vector<int>& taps,
                      const MessageModel& message) {
    if (observations.empty()) throw std::invalid_argument("observations must be non-empty");
    if (message.kind == MessageModel::Kind::Known &&
        message.known_bits.size() < observations.size())
        throw std::invalid_argument("known-plaintext model needs one bit per observation");

    KeystreamGenerator gen(candidate, taps);
    const int M = params.M;
    double total = 0.0;
    if (message.kind == MessageModel::Kind::Repetition) {
        const int r = message.repetition;
        const int n = static_cast<int>(observations.size());
        for (int start = 0; start < n; start += r) {
            const int end = std::min(start + r, n);
            double lp0 = 0.0, lp1 = 0.0;
            for (int q = start; q < end; ++q) {
                const int k = gen.next_basis(M).value;
                lp0 += safe_log(noise_pdf(observations[static_cast<std::size_t>(q)] -
                                          encode_symbol(k, 0, M), params));
                lp1 += safe_log(noise_pdf(observations[static_cast<std::size_t>(q)] -
                                          encode_symbol(k, 1, M), params));
            }
            total += log_add_exp(lp0, lp1) + std::log(0.5);
        }
        return total;
    }
    for (std::size_t q = 0; q < observations.size(); ++q) {
        const int k = gen.next_basis(M).value;
        if (message.kind == MessageModel::Kind::Known) {
            const int j = encode_symbol(k, message.known_bits[q], M);
            total += safe_log(noise_pdf(observations[q] - j, params));
        } else {
            const double f0 = noise_pdf(observations[q] - encode_symbol(k, 0, M), params);
            const double f1 = noise_pdf(observations[q] - encode_symbol(k, 1, M), params);
            total += safe_log(0.5 * (f0 + f1));
        }
    }
    return total;
}

AttackEngine::AttackEngine(const AttackConfig& config)
    : config_(config), candidates_(config.candidates()) {
    config_.validate();
    generators_.reserve(candidates_.size());
    for (std::uint64_t seed : candidates_)
        generators_.emplace_back(SecretKey::from_uint(seed, config_.g), config_.taps);
    loglik_.assign(candidates_.size(), 0.0);
    if (config_.message.kind == MessageModel::Kind::Repetition) {
        group_lp0_.assign(candidates_.size(), 0.0);
        group_lp1_.assign(candidates_.size(), 0.0);
    }
}

void AttackEngine::observe(double j_received) {
    const int M = config_.params.M;
    const auto& msg = config_.message;
    for (std::size_t i = 0; i < candidates_.size(); ++i) {
        const int k = generators_[i].next_basis(M).value;
        switch (msg.kind) {
        case MessageModel::Kind::Known: {
            if (msg.known_bits.size() <= n_observed_)
                throw std::invalid_argument("known-plaintext model ran out of bits");
            const int j = encode_symbol(k, msg.known_bits[n_observed_], M);
            loglik_[i] += safe_log(noise_pdf(j_received - j, config_.params));
            break;
        }
        case MessageModel::Kind::UnknownUniform: {
            const double f0 = noise_pdf(j_received - encode_symbol(k, 0, M), config_.params);
            const double f1 = noise_pdf(j_received - encode_symbol(k, 1, M), config_.params);
            loglik_[i] += safe_log(0.5 * (f0 + f1));
            break;
        }
        case MessageModel::Kind::Repetition: {
            group_lp0_[i] += safe_log(noise_pdf(j_received - encode_symbol(k, 0, M), config_.params));
            group_lp1_[i] += safe_log(noise_pdf(j_received - encode_symbol(k, 1, M), config_.params));
            break;
        }
        }
    }
    ++n_observed_;
    if (msg.kind == MessageModel::Kind::Repetition && ++group_fill_ == msg.repetition) {
        for (std::size_t i = 0; i < candidates_.size(); ++i) {
            loglik_[i] += log_add_exp(group_lp0_[i], group_lp1_[i]) + std::log(0.5);
            group_lp0_[i] = 0.0;
            group_lp1_[i] = 0.0;
        }
        group_fill_ = 0;
    }
}

std::vector<double> AttackEngine::posterior_weights() const {
    std::vector<double> logp = loglik_;
    if (group_fill_ > 0) {
        // fold the open repetition group's partial evidence in
        for (std::size_t i = 0; i < logp.size(); ++i)
            logp[i] += log_add_exp(group_lp0_[i], group_lp1_[i]) + std::log(0.5);
    }
    const double hi = *std::max_element(logp.begin(), logp.end());
    std::vector<double> w(logp.size(), 0.0);
    if (hi == kNegInf) {
        // every candidate annihilated only happens on inconsistent input
        std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(w.size()));
        return w;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < logp.size(); ++i) {
        w[i] = logp[i] == kNegInf ? 0.0 : std::exp(logp[i] - hi);
        sum += w[i];
    }
    for (double& x : w) x /= sum;
    return w;
}

Posterior AttackEngine::posterior() const { return Posterior(posterior_weights(), "key"); }

double AttackEngine::entropy() const { return entropy_bits(posterior_weights()); }

double AttackEngine::posterior_of(std::uint64_t seed) const {
    const auto w = posterior_weights();
    for (std::size_t i = 0; i < candidates_.size(); ++i)
        if (candidates_[i] == seed) return w[i];
    throw std::invalid_argument("seed not in the candidate space");
}

std::size_t AttackEngine::top_candidate() const {
    const auto w = posterior_weights();
    std::size_t best = 0;
    for (std::size_t i = 1; i < w.size(); ++i)
        if (w[i] > w[best]) best = i; // strict: ties stay with the smaller seed
    return best;
}

bool AttackEngine::tie_at_top() const {
    const auto w = posterior_weights();
    const std::size_t best = top_candidate();
    for (std::size_t i = 0; i < w.size(); ++i)
        if (i != best && w[i] == w[best]) return true;
    return false;
}

Posterior key_posterior(const std::vector<double>& observations, const AttackConfig& config) {
    AttackEngine engine(config);
    for (double j : observations) engine.observe(j);
    return engine.posterior();
}

AttackReport measure_s0(const AttackConfig& config, std::uint64_t seed) {
    config.validate();
    AttackReport report;
    report.g = config.g;
    const InfoReport info = key_rate_and_unicity(config.params, config.g);
    report.u = info.key_gain_per_symbol;
    report.bound_s0 = report.u > 0.0 ? static_cast<double>(config.g) / report.u
                                     : std::numeric_limits<double>::infinity();
    report.known_floor = static_cast<double>(config.g) / (report.u + 1.0);
    report.threshold = config.success_threshold;
    report.symbol_budget =
        config.symbol_budget > 0 ? config.symbol_budget : config.default_budget();

    const int budget = report.symbol_budget;
    report.mean_entropy.assign(static_cast<std::size_t>(budget) + 1, 0.0);
    report.entropy_trajectories.assign(static_cast<std::size_t>(config.trials),
                                       std::vector<double>(static_cast<std::size_t>(budget) + 1, 0.0));
    std::vector<int> s0_090(static_cast<std::size_t>(config.trials), -1);
    std::vector<int> s0_0999(static_cast<std::size_t>(config.trials), -1);
    report.s0_trials.assign(static_cast<std::size_t>(config.trials), -1);

    const auto candidates = config.candidates();
    for (int trial = 0; trial < config.trials; ++trial) {
        const auto t = static_cast<std::uint64_t>(trial);
        Philox key_rng = make_stream(seed, Role::KeyDraw, t);
        Philox msg_rng = make_stream(seed, Role::Message, t);
        Philox eve_rng = make_stream(seed, Role::EveNoise, t);

        const std::uint64_t true_seed =
            candidates[key_rng.next_below(candidates.size())];
        KeystreamGenerator true_gen(SecretKey::from_uint(true_seed, config.g), config.taps);

        AttackConfig trial_config = config;
        BitVec message(static_cast<std::size_t>(budget));
        if (config.message.kind == MessageModel::Kind::Repetition) {
            const int r = config.message.repetition;
            for (int q = 0; q < budget; ++q)
                message[static_cast<std::size_t>(q)] =
                    q % r == 0 ? static_cast<Bit>(msg_rng.next_u64() & 1)
                               : message[static_cast<std::size_t>(q - 1)];
        } else {
            for (auto& b : message) b = static_cast<Bit>(msg_rng.next_u64() & 1);
            if (config.message.kind == MessageModel::Kind::Known)
                trial_config.message.known_bits = message;
        }

        AttackEngine engine(trial_config);
        auto& trajectory = report.entropy_trajectories[static_cast<std::size_t>(trial)];
        trajectory[0] = engine.entropy();
        report.mean_entropy[0] += trajectory[0];
        for (int n = 1; n <= budget; ++n) {
            const int k = true_gen.next_basis(config.params.M).value;
            const int j = encode_symbol(k, message[static_cast<std::size_t>(n - 1)], config.params.M);
            engine.observe(transmit(j, config.params, eve_rng));
            trajectory[static_cast<std::size_t>(n)] = engine.entropy();
            report.mean_entropy[static_cast<std::size_t>(n)] += trajectory[static_cast<std::size_t>(n)];

            const double p_true = engine.posterior_of(true_seed);
            auto& s0_main = report.s0_trials[static_cast<std::size_t>(trial)];
            if (s0_main < 0 && p_true > config.success_threshold) {
                s0_main = n;
                if (engine.tie_at_top()) ++report.ties;
            }
            if (s0_090[static_cast<std::size_t>(trial)] < 0 && p_true > 0.9)
                s0_090[static_cast<std::size_t>(trial)] = n;
            if (s0_0999[static_cast<std::size_t>(trial)] < 0 && p_true > 0.999)
                s0_0999[static_cast<std::size_t>(trial)] = n;
        }
    }
    for (double& h : report.mean_entropy) h /= static_cast<double>(config.trials);

    std::vector<int> recovered;
    for (int s : report.s0_trials)
        if (s > 0) recovered.push_back(s);
    report.success_rate =
        static_cast<double>(recovered.size()) / static_cast<double>(config.trials);
    report.median_s0 = median_of(recovered);

    auto median_recovered = [](const std::vector<int>& all) {
        std::vector<int> rec;
        for (int s : all)
            if (s > 0) rec.push_back(s);
        return median_of(rec);
    };
    report.median_s0_at_090 = median_recovered(s0_090);
    report.median_s0_at_0999 = median_recovered(s0_0999);
    return report;
}

// --- additive-cipher known-plaintext attack ----------------------------------

namespace {

// rows expressing keystream bits as GF(2) combinations of the seed bits
std::vector<std::uint64_t> symbolic_rows(std::size_t offset, std::size_t count,
                                         const std::vector<int>& taps, int key_bits) {
    const std::size_t L = static_cast<std::size_t>(key_bits);
    // window[i] = coefficient mask of stream bit (t + i) over seed bits
    std::vector<std::uint64_t> window(L);
    for (std::size_t i = 0; i < L; ++i) window[i] = 1ULL << i;
    auto step = [&]() {
        std::uint64_t feedback = 0;
        for (int tau : taps) feedback ^= window[L - static_cast<std::size_t>(tau)];
        for (std::size_t i = 0; i + 1 < L; ++i) window[i] = window[i + 1];
        window[L - 1] = feedback;
    };
    for (std::size_t i = 0; i < offset; ++i) step();
    std::vector<std::uint64_t> rows;
    rows.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        rows.push_back(window[0]);
        step();
    }
    return rows;
}

} // namespace

SecretKey recover_seed_from_keystream(const BitVec& window, std::size_t offset,
                                      const std::vector<int>& taps, int key_bits) {
    if (key_bits < 1 || key_bits > 64)
        throw std::invalid_argument("linear solve supports key_bits in [1, 64]");
    check_taps(taps, key_bits);
    const std::size_t L = static_cast<std::size_t>(key_bits);
    if (window.size() < L)
        throw NeedsMoreDataError("need " + std::to_string(L) + " keystream bits, got " +
                                 std::to_string(window.size()));

    auto rows = symbolic_rows(offset, window.size(), taps, key_bits);
    std::vector<std::uint64_t> a(rows);
    BitVec rhs(window);

    // Gauss-Jordan over GF(2)
    std::size_t rank = 0;
    for (int col = 0; col < key_bits && rank < a.size(); ++col) {
        const std::uint64_t mask = 1ULL << col;
        std::size_t pivot = rank;
        while (pivot < a.size() && !(a[pivot] & mask)) ++pivot;
        if (pivot == a.size()) continue;
        std::swap(a[rank], a[pivot]);
        std::swap(rhs[rank], rhs[pivot]);
        for (std::size_t r = 0; r < a.size(); ++r) {
            if (r != rank && (a[r] & mask)) {
                a[r] ^= a[rank];
                rhs[r] ^= rhs[rank];
            }
        }
        ++rank;
    }
    if (rank < L)
        throw NeedsMoreDataError("keystream window leaves the seed underdetermined (rank " +
                                 std::to_string(rank) + " of " + std::to_string(L) + ")");
    for (std::size_t r = rank; r < a.size(); ++r)
        if (rhs[r]) throw NeedsMoreDataError("inconsistent keystream window");

    BitVec seed_bits(L, 0);
    for (std::size_t r = 0; r < rank; ++r) {
        // after elimination each pivot row has a single bit set
        if (rhs[r]) seed_bits[static_cast<std::size_t>(std::countr_zero(a[r]))] = 1;
    }
    return SecretKey::from_bits(std::move(seed_bits));
}

SecretKey known_plaintext_attack_additive(const BitVec& ciphertext, const BitVec& plaintext,
                                          const std::vector<int>& taps, int key_bits) {
    const std::size_t L = static_cast<std::size_t>(key_bits);
    const std::size_t have = std::min(ciphertext.size(), plaintext.size());
    if (have < L)
        throw NeedsMoreDataError("known-plaintext attack needs " + std::to_string(L) +
                                 " aligned bits, got " + std::to_string(have));
    BitVec keystream(L);
    for (std::size_t q = 0; q < L; ++q) keystream[q] = ciphertext[q] ^ plaintext[q];
    return recover_seed_from_keystream(keystream, 0, taps, key_bits);
}

} // namespace alphaeta
