#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "alphaeta/errors.hpp"
#include "alphaeta/harness.hpp"

namespace {

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> trials;
    std::optional<std::string> output;
    std::optional<std::string> format;
    bool quiet = false;

    void apply(alphaeta::ExperimentConfig& cfg) const {
        if (seed) cfg.seed = *seed;
        if (trials) cfg.trials = *trials;
        if (output) cfg.output = *output;
        if (format) {
            if (*format == "csv") cfg.format = alphaeta::ReportFormat::Csv;
            else if (*format == "json") cfg.format = alphaeta::ReportFormat::Json;
            else throw alphaeta::ConfigError("--format must be csv or json");
        }
        cfg.quiet = quiet;
    }
};

void add_override_flags(CLI::App* cmd, Overrides& ov) {
    cmd->add_option("--seed", ov.seed, "Master seed override");
    cmd->add_option("--trials", ov.trials, "Trial/symbol count override");
    cmd->add_option("--output", ov.output, "Report path (default: stdout)");
    cmd->add_option("--format", ov.format, "Report format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_flag("--quiet", ov.quiet, "Suppress progress on stderr");
}

int execute(alphaeta::ExperimentConfig cfg, const Overrides& ov) {
    ov.apply(cfg);
    if (!cfg.quiet)
        std::cerr << "alphaeta: running " << alphaeta::scenario_name(cfg.scenario)
                  << " (seed " << cfg.seed << ", " << cfg.effective_trials() << " trials)\n";
    const alphaeta::ExperimentReport report = alphaeta::run(cfg);
    const std::string text = alphaeta::write_report(report, cfg);
    if (cfg.output.empty()) {
        std::cout << text;
    } else if (!cfg.quiet) {
        std::cerr << "alphaeta: report written to " << cfg.output << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"alpha-eta stream-cipher simulator and key-leakage analysis toolkit"};
    app.require_subcommand(1);

    std::string config_path, preset_name, validate_path;
    Overrides run_ov, preset_ov;
    bool show_preset = false;

    CLI::App* cmd_run = app.add_subcommand("run", "Run an experiment from a config file");
    cmd_run->add_option("config", config_path, "Config file (flat key = value)")->required();
    add_override_flags(cmd_run, run_ov);

    CLI::App* cmd_preset = app.add_subcommand("preset", "Run a named built-in experiment");
    cmd_preset->add_option("name", preset_name, "Preset name (see list-presets)")->required();
    cmd_preset->add_flag("--show", show_preset, "Print the preset config instead of running");
    add_override_flags(cmd_preset, preset_ov);

    CLI::App* cmd_list = app.add_subcommand("list-presets", "List built-in experiment presets");

    CLI::App* cmd_validate =
        app.add_subcommand("validate", "Parse and validate a config file, run nothing");
    cmd_validate->add_option("config", validate_path, "Config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (cmd_run->parsed()) return execute(alphaeta::parse_config_file(config_path), run_ov);
        if (cmd_preset->parsed()) {
            if (show_preset) {
                std::cout << alphaeta::preset_text(preset_name);
                return 0;
            }
            return execute(alphaeta::preset_config(preset_name), preset_ov);
        }
        if (cmd_list->parsed()) {
            for (const auto& name : alphaeta::preset_names()) std::cout << name << "\n";
            return 0;
        }
        if (cmd_validate->parsed()) {
            alphaeta::parse_config_file(validate_path);
            std::cout << "OK: " << validate_path << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "alphaeta: error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
