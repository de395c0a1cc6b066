#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "alphaeta/attack.hpp"

namespace alphaeta {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

enum class Scenario { Ber, InfoGain, Unicity, AttackSweep, Dsr, AdditiveBaseline };

std::string scenario_name(Scenario s);
Scenario scenario_from_name(const std::string& name);

enum class ReportFormat { Csv, Json };

/// Message source for scenarios that encode one.
struct MessageSpec {
    enum class Kind { Random, Zeros, File } kind = Kind::Random;
    std::string path; // Kind::File

    static MessageSpec parse(const std::string& text);
    std::string describe() const;
};

struct ExperimentConfig {
    Scenario scenario = Scenario::Unicity;
    ChannelParams channel;
    std::vector<double> eta_factors; // when set, channel.eta is their product
    int key_bits = 16;
    std::string key_hex;             // empty -> key drawn from the seed
    std::vector<int> taps;           // empty -> maximal_taps(key_bits)
    MessageSpec message;
    std::uint64_t trials = 0;        // 0 -> scenario default
    std::uint64_t seed = 1;
    std::string output;              // empty -> stdout
    ReportFormat format = ReportFormat::Csv;
    bool quiet = false;

    // scenario knobs
    std::vector<int> attack_g = {6, 8, 10, 12};
    double success_threshold = 0.99;
    double budget_factor = 4.0;      // symbol budget = factor * g / U
    bool plaintext_known = false;
    int repetition = 1;              // dsr: repetition-code factor
    int enum_cells = 64;             // enumeration grid cells per symbol
    int enum_symbols = 1;            // enumeration symbol count
    int symbols = 0;                 // dsr attack demo: symbols per trial (0 -> budget)
    bool dump_trace = false;         // ber: include a q,k,b,j,j_received table
    int trace_limit = 64;

    std::uint64_t effective_trials() const;
    void validate() const; // throws ConfigError naming the violated rule

    /// Normalized key/value view, used for the report echo.
    std::vector<std::pair<std::string, std::string>> echo() const;
};

/// Parse the flat key = value config format (strings, numbers, booleans,
/// [lists]; # comments). Unknown keys are errors.
ExperimentConfig parse_config_text(const std::string& text, const std::string& origin);
ExperimentConfig parse_config_file(const std::string& path);

std::vector<std::string> preset_names();
bool has_preset(const std::string& name);
std::string preset_text(const std::string& name);
ExperimentConfig preset_config(const std::string& name);

// --- reports -----------------------------------------------------------------

struct ReportMetric {
    std::string name;
    double estimate = 0.0;
    std::optional<double> analytic;
    std::optional<double> stderr_value;
    std::string note;
};

struct ReportTable {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct ExperimentReport {
    int schema_version = kReportSchemaVersion;
    std::string tool_version = kToolVersion;
    std::string scenario;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> config_echo;
    std::vector<std::string> warnings;
    std::vector<ReportMetric> metrics;
    std::vector<ReportTable> tables;

    /// CSV body; deterministic for a fixed (config, seed).
    std::string to_csv() const;
    /// JSON document; generated_at is the one run-dependent field.
    std::string to_json(bool with_timestamp = true) const;

    const ReportMetric* find_metric(const std::string& name) const;
    const ReportTable* find_table(const std::string& name) const;
};

/// Execute the configured scenario deterministically from the master seed.
ExperimentReport run(const ExperimentConfig& config);

/// Render per `format` and write to `config.output` (stdout when empty,
/// ALPHAETA_OUTPUT_DIR prefixes relative paths). Returns the rendered text.
std::string write_report(const ExperimentReport& report, const ExperimentConfig& config);

} // namespace alphaeta
