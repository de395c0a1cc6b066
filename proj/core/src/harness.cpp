#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "alphaeta/errors.hpp"
#include "alphaeta/harness.hpp"

namespace alphaeta {

namespace {

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

SecretKey resolve_key(const ExperimentConfig& cfg) {
    if (!cfg.key_hex.empty()) return SecretKey::from_hex(cfg.key_hex, cfg.key_bits);
    Philox rng = make_stream(cfg.seed, Role::KeyDraw);
    BitVec bits(static_cast<std::size_t>(cfg.key_bits));
    do {
        for (auto& b : bits) b = static_cast<Bit>(rng.next_u64() & 1);
    } while (all_zero(bits));
    return SecretKey::from_bits(bits);
}

std::vector<int> resolve_taps(const ExperimentConfig& cfg) {
    return cfg.taps.empty() ? maximal_taps(cfg.key_bits) : cfg.taps;
}

BitVec resolve_message_pattern(const ExperimentConfig& cfg) {
    switch (cfg.message.kind) {
    case MessageSpec::Kind::Random: return {};
    case MessageSpec::Kind::Zeros: return BitVec{0};
    case MessageSpec::Kind::File: {
        std::ifstream in(cfg.message.path, std::ios::binary);
        if (!in) throw ConfigError("cannot open message file: " + cfg.message.path);
        std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
        if (bytes.empty()) throw ConfigError("message file is empty: " + cfg.message.path);
        return bits_from_bytes(bytes);
    }
    }
    return {};
}

ExperimentReport make_report(const ExperimentConfig& cfg) {
    ExperimentReport report;
    report.scenario = scenario_name(cfg.scenario);
    report.seed = cfg.seed;
    report.config_echo = cfg.echo();
    const bool sigma_matters = cfg.scenario != Scenario::AdditiveBaseline &&
                               !(cfg.channel.dsr_enabled && cfg.channel.dsr_sigma_zero);
    if (sigma_matters && !cfg.channel.in_analysis_regime())
        report.warnings.push_back("outside the analysis regime M >> sigma >> 1 (sigma=" +
                                  fmt(cfg.channel.sigma()) + ", M/sigma=" +
                                  fmt(cfg.channel.M / cfg.channel.sigma()) +
                                  "); closed forms are approximations here");
    return report;
}

void add_channel_metrics(ExperimentReport& report, const ChannelParams& params) {
    const double s = params.sigma();
    report.metrics.push_back({"sigma", s, s, {}, "M/(4 pi sqrt(eta N))"});
    report.metrics.push_back({"alpha", params.alpha(), params.alpha(), {}, "2 sqrt(eta N)"});
    report.metrics.push_back({"eta", params.eta, params.eta, {}, ""});
}

void add_info_metrics(ExperimentReport& report, const ExperimentConfig& cfg, bool with_key) {
    const InfoReport info = key_rate_and_unicity(cfg.channel, with_key ? cfg.key_bits : 1);
    report.metrics.push_back({"h0", info.h0, info.h0, {}, "log2 M"});
    report.metrics.push_back({"h1", info.h1, info.h1, {}, "log2(sigma sqrt(2 pi e))"});
    report.metrics.push_back(
        {"gain_per_symbol", info.gain_per_symbol, info.gain_per_symbol, {}, "h0 - h1"});
    report.metrics.push_back({"gain_approx", info.gain_approx, info.gain_approx,
                              {},
                              "0.5 log2(eta N) + 1.6"});
    report.metrics.push_back({"key_gain_per_symbol", info.key_gain_per_symbol,
                              info.key_gain_per_symbol,
                              {},
                              "U = gain - 1, clamped at 0"});
    if (with_key) {
        report.metrics.push_back({"unicity_n0", info.unicity_n0, info.unicity_n0, {},
                                  "L/U; M-independent since sigma scales with M"});
    }
}

void add_mc_gain(ExperimentReport& report, const ExperimentConfig& cfg) {
    const MonteCarloGain mc = mc_info_gain(cfg.channel, cfg.effective_trials(), cfg.seed);
    report.metrics.push_back({"gain_mc", mc.mean_gain, info_gain_closed_form(cfg.channel),
                              mc.stderr,
                              std::to_string(mc.trials) + " symbols"});
}

struct LineFit {
    double slope = 0.0, intercept = 0.0, r_squared = 1.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        syy += y[i] * y[i];
    }
    LineFit fit;
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) return fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss_res = 0.0;
    const double mean_y = sy / n;
    double ss_tot = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double pred = fit.slope * x[i] + fit.intercept;
        ss_res += (y[i] - pred) * (y[i] - pred);
        ss_tot += (y[i] - mean_y) * (y[i] - mean_y);
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

int attack_budget(const ExperimentConfig& cfg, int g) {
    const double u = key_rate_and_unicity(cfg.channel, g).key_gain_per_symbol;
    if (u <= 0.0) return 64 * g;
    return static_cast<int>(std::ceil(cfg.budget_factor * static_cast<double>(g) / u));
}

// --- scenarios ---------------------------------------------------------------

ExperimentReport run_unicity(const ExperimentConfig& cfg) {
    ExperimentReport report = make_report(cfg);
    add_channel_metrics(report, cfg.channel);
    add_info_metrics(report, cfg, /*with_key=*/true);
    add_mc_gain(report, cfg);
    return report;
}

ExperimentReport run_info_gain(const ExperimentConfig& cfg) {
    ExperimentReport report = make_report(cfg);
    add_channel_metrics(report, cfg.channel);
    add_info_metrics(report, cfg, /*with_key=*/false);
    add_mc_gain(report, cfg);
    return report;
}

ExperimentReport run_ber(const ExperimentConfig& cfg) {
    ExperimentReport report = make_report(cfg);
    add_channel_metrics(report, cfg.channel);
    const SecretKey key = resolve_key(cfg);
    const std::vector<int> taps = resolve_taps(cfg);
    const BitVec pattern = resolve_message_pattern(cfg);
    const BerEstimate ber =
        ber_curves(cfg.channel, key, taps, cfg.effective_trials(), cfg.seed, pattern);
    report.metrics.push_back(
        {"bob_ber", ber.bob_ber, ber.bob_analytic, ber.bob_stderr, "keyed decoder"});
    report.metrics.push_back(
        {"eve_ber", ber.eve_ber, ber.eve_analytic, ber.eve_stderr, "keyless decoder"});
    if (cfg.dump_trace) {
        KeystreamGenerator gen(key, taps);
        Philox msg_rng = make_stream(cfg.seed, Role::Message, 1);
        Philox noise_rng = make_stream(cfg.seed, Role::BobNoise, 1);
        ReportTable trace{"trace", {"q", "k", "b", "j", "j_received"}, {}};
        for (int q = 0; q < cfg.trace_limit; ++q) {
            const int k = gen.next_basis(cfg.channel.M).value;
            const Bit b = pattern.empty()
                              ? static_cast<Bit>(msg_rng.next_u64() & 1)
                              : pattern[static_cast<std::size_t>(q) % pattern.size()];
            const int j = encode_symbol(k, b, cfg.channel.M);
            trace.rows.push_back({static_cast<double>(q), static_cast<double>(k),
                                  static_cast<double>(b), static_cast<double>(j),
                                  transmit(j, cfg.channel, noise_rng)});
        }
        report.tables.push_back(std::move(trace));
    }
    return report;
}

ExperimentReport run_attack_sweep(const ExperimentConfig& cfg) {
    ExperimentReport report = make_report(cfg);
    add_channel_metrics(report, cfg.channel);
    const double u = key_rate_and_unicity(cfg.channel, 1).key_gain_per_symbol;
    report.metrics.push_back({"key_gain_per_symbol", u, u, {}, "U"});

    ReportTable sweep{"attack_sweep",
                      {"g", "median_s0", "bound_s0", "known_floor", "ratio_to_bound",
                       "success_rate", "min_s0", "ties"},
                      {}};
    ReportTable trajectory{"entropy_trajectory", {"g", "trial", "n", "entropy_bits"}, {}};
    std::vector<double> gs, medians;
    for (int g : cfg.attack_g) {
        AttackConfig attack;
        attack.g = g;
        attack.taps = maximal_taps(g);
        attack.params = cfg.channel;
        attack.message = cfg.plaintext_known ? MessageModel::known({}) : MessageModel::unknown();
        attack.trials = static_cast<int>(cfg.effective_trials());
        attack.success_threshold = cfg.success_threshold;
        attack.symbol_budget = attack_budget(cfg, g);
        const AttackReport result = measure_s0(attack, splitmix64(cfg.seed ^ static_cast<std::uint64_t>(g)));

        int min_s0 = -1;
        for (int s : result.s0_trials)
            if (s > 0 && (min_s0 < 0 || s < min_s0)) min_s0 = s;
        sweep.rows.push_back({static_cast<double>(g), result.median_s0, result.bound_s0,
                              result.known_floor,
                              result.bound_s0 > 0 ? result.median_s0 / result.bound_s0 : 0.0,
                              result.success_rate, static_cast<double>(min_s0),
                              static_cast<double>(result.ties)});
        for (std::size_t trial = 0; trial < result.entropy_trajectories.size(); ++trial)
            for (std::size_t n = 0; n < result.entropy_trajectories[trial].size(); ++n)
                trajectory.rows.push_back({static_cast<double>(g), static_cast<double>(trial),
                                           static_cast<double>(n),
                                           result.entropy_trajectories[trial][n]});
        gs.push_back(static_cast<double>(g));
        medians.push_back(result.median_s0);
    }
    const LineFit fit = least_squares(gs, medians);
    report.metrics.push_back({"s0_vs_g_slope", fit.slope, {}, {}, "least squares on medians"});
    report.metrics.push_back({"s0_vs_g_intercept", fit.intercept, {}, {}, ""});
    report.metrics.push_back({"s0_vs_g_r_squared", fit.r_squared, {}, {}, ""});
    report.tables.push_back(std::move(sweep));
    report.tables.push_back(std::move(trajectory));
    return report;
}

ExperimentReport run_dsr(const ExperimentConfig& cfg) {
    ExperimentReport report = make_report(cfg);
    add_channel_metrics(report, cfg.channel);

    const double ber_analytic = bob_ber_analytic(cfg.channel);
    const SecretKey key = resolve_key(cfg);
    const std::vector<int> taps = resolve_taps(cfg);
    const BerEstimate ber =
        ber_curves(cfg.channel, key, taps, cfg.effective_trials(), cfg.seed,
                   resolve_message_pattern(cfg));
    report.metrics.push_back(
        {"bob_ber", ber.bob_ber, ber_analytic, ber.bob_stderr, "under randomization"});

    if (cfg.key_bits <= 16 && cfg.channel.M <= 64) {
        EnumSystem system;
        system.key_bits = cfg.key_bits;
        system.taps = taps;
        system.params = cfg.channel;
        system.message = MessageModel::unknown();
        const double i_key = exact_key_mutual_info(system, cfg.enum_symbols, cfg.enum_cells);
        const double i_symbol = exact_symbol_mutual_info(cfg.channel, cfg.enum_cells);
        std::optional<double> key_expect, sym_expect;
        if (cfg.channel.dsr_sigma_zero) {
            key_expect = 0.0;
            sym_expect = 1.0;
        }
        report.metrics.push_back({"mi_key_observations", i_key, key_expect, {},
                                  std::to_string(cfg.enum_symbols) + " symbols, exact enumeration"});
        report.metrics.push_back(
            {"mi_symbol_measurement", i_symbol, sym_expect, {}, "I(J; J'), exact enumeration"});
    } else {
        report.warnings.push_back("key_bits > 16 or M > 64: exact enumeration skipped");
    }

    if (cfg.repetition > 1) {
        AttackConfig attack;
        attack.g = cfg.key_bits;
        attack.taps = taps;
        attack.params = cfg.channel;
        attack.message = MessageModel::repeated(cfg.repetition);
        attack.trials = static_cast<int>(std::min<std::uint64_t>(cfg.effective_trials(), 1000));
        attack.success_threshold = cfg.success_threshold;
        attack.symbol_budget = cfg.symbols > 0 ? cfg.symbols : attack_budget(cfg, cfg.key_bits);
        const AttackReport result = measure_s0(attack, cfg.seed);
        const double h_first = result.mean_entropy.front();
        const double h_last = result.mean_entropy.back();
        report.metrics.push_back({"entropy_initial", h_first, static_cast<double>(cfg.key_bits),
                                  {},
                                  "log2 of nonzero seeds, approximately key_bits"});
        report.metrics.push_back({"entropy_final", h_last, {}, {}, ""});
        report.metrics.push_back({"entropy_drop", h_first - h_last, {}, {},
                                  "redundancy leaks key information despite randomization"});
        ReportTable trajectory{"entropy_trajectory", {"trial", "n", "entropy_bits"}, {}};
        for (std::size_t trial = 0; trial < result.entropy_trajectories.size(); ++trial)
            for (std::size_t n = 0; n < result.entropy_trajectories[trial].size(); ++n)
                trajectory.rows.push_back({static_cast<double>(trial), static_cast<double>(n),
                                           result.entropy_trajectories[trial][n]});
        report.tables.push_back(std::move(trajectory));
    }
    return report;
}

ExperimentReport run_additive_baseline(const ExperimentConfig& cfg) {
    ExperimentReport report = make_report(cfg);
    const std::vector<int> taps = resolve_taps(cfg);
    if (cfg.key_bits > 16)
        throw ConfigError("additive_baseline enumeration needs key_bits <= 16");

    ReportTable mi_table{"mi_vs_n", {"n", "mi_bits"}, {}};
    double mi_final = 0.0;
    for (int n = 1; n <= cfg.enum_symbols; ++n) {
        mi_final = additive_key_mutual_info(cfg.key_bits, taps, n);
        mi_table.rows.push_back({static_cast<double>(n), mi_final});
    }
    report.metrics.push_back({"mi_key_ciphertext", mi_final, 0.0, {},
                              "unknown uniform message; key entropy does not decrease"});

    // known-plaintext recovery from exactly L consecutive bits
    const SecretKey key = resolve_key(cfg);
    Philox msg_rng = make_stream(cfg.seed, Role::Message);
    BitVec message(static_cast<std::size_t>(2 * cfg.key_bits));
    for (auto& b : message) b = static_cast<Bit>(msg_rng.next_u64() & 1);
    const BitVec ciphertext = additive_encrypt_message(key, taps, message);
    const BitVec prefix_c(ciphertext.begin(), ciphertext.begin() + cfg.key_bits);
    const BitVec prefix_p(message.begin(), message.begin() + cfg.key_bits);
    const SecretKey recovered = known_plaintext_attack_additive(prefix_c, prefix_p, taps, cfg.key_bits);
    const bool key_match = recovered.bits == key.bits;
    const bool cipher_match = additive_encrypt_message(recovered, taps, message) == ciphertext;
    report.metrics.push_back({"kpa_key_recovered", key_match ? 1.0 : 0.0, 1.0, {},
                              "exactly L consecutive plaintext bits"});
    report.metrics.push_back({"kpa_ciphertext_regenerated", cipher_match ? 1.0 : 0.0, 1.0, {}, ""});
    report.tables.push_back(std::move(mi_table));
    return report;
}

} // namespace

ExperimentReport run(const ExperimentConfig& config) {
    config.validate();
    switch (config.scenario) {
    case Scenario::Ber: return run_ber(config);
    case Scenario::InfoGain: return run_info_gain(config);
    case Scenario::Unicity: return run_unicity(config);
    case Scenario::AttackSweep: return run_attack_sweep(config);
    case Scenario::Dsr: return run_dsr(config);
    case Scenario::AdditiveBaseline: return run_additive_baseline(config);
    }
    throw std::logic_error("unhandled scenario");
}

std::string write_report(const ExperimentReport& report, const ExperimentConfig& config) {
    const std::string text =
        config.format == ReportFormat::Csv ? report.to_csv() : report.to_json();
    if (config.output.empty()) return text;

    std::filesystem::path path(config.output);
    if (path.is_relative()) {
        if (const char* dir = std::getenv("ALPHAETA_OUTPUT_DIR")) path = std::filesystem::path(dir) / path;
    }
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write report to " + path.string());
    out << text;
    return text;
}

} // namespace alphaeta
