#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>

#include "alphaeta/errors.hpp"
#include "alphaeta/harness.hpp"

using namespace alphaeta;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& contents) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path, std::ios::binary);
    out << contents;
    return path;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(ALPHAETA_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

} // namespace

TEST_CASE("config text round trip") {
    const char* text = R"(
# comment line
scenario = "ber"
m = 64
n_photon = 1000.5
eta = 0.25
key_bits = 12
taps = [12, 11, 8, 6]
trials = 5000
seed = 99
message = "zeros"
format = "json"
)";
    const ExperimentConfig cfg = parse_config_text(text, "test");
    CHECK(cfg.scenario == Scenario::Ber);
    CHECK(cfg.channel.M == 64);
    CHECK(cfg.channel.N == doctest::Approx(1000.5));
    CHECK(cfg.channel.eta == doctest::Approx(0.25));
    CHECK(cfg.key_bits == 12);
    CHECK(cfg.taps == std::vector<int>{12, 11, 8, 6});
    CHECK(cfg.trials == 5000);
    CHECK(cfg.seed == 99);
    CHECK(cfg.message.kind == MessageSpec::Kind::Zeros);
    CHECK(cfg.format == ReportFormat::Json);
}

TEST_CASE("config errors are specific") {
    CHECK_THROWS_WITH_AS(parse_config_text("scenario = \"nope\"\n", "t"),
                         doctest::Contains("unknown scenario"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("scenario = \"ber\"\nbogus = 1\n", "t"),
                         doctest::Contains("unknown key"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("scenario = \"ber\"\neta = 1.5\n", "t"),
                         doctest::Contains("eta"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("scenario = \"ber\"\nm = 100\n", "t"),
                         doctest::Contains("power of two"), ConfigError);
    CHECK_THROWS_WITH_AS(
        parse_config_text("scenario = \"ber\"\neta = 0.5\neta_factors = [0.5]\n", "t"),
        doctest::Contains("not both"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("scenario = \"ber\"\nseed = 1\nseed = 2\n", "t"),
                         doctest::Contains("duplicate"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("scenario\n", "t"), doctest::Contains("key = value"),
                         ConfigError);
    // taps are validated for scenarios that run the keystream
    CHECK_THROWS_WITH_AS(parse_config_text("scenario = \"ber\"\nkey_bits = 40\n", "t"),
                         doctest::Contains("taps"), ConfigError);
    // dsr_sigma_zero without dsr violates the channel invariant
    CHECK_THROWS_WITH_AS(parse_config_text("scenario = \"ber\"\ndsr_sigma_zero = true\n", "t"),
                         doctest::Contains("dsr"), ConfigError);
}

TEST_CASE("eta_factors compose into eta") {
    const ExperimentConfig cfg =
        parse_config_text("scenario = \"unicity\"\neta_factors = [0.1, 0.5, 0.8]\n", "t");
    CHECK(cfg.channel.eta == doctest::Approx(0.04).epsilon(1e-12));
}

TEST_CASE("preset registry") {
    const auto names = preset_names();
    for (const char* expected :
         {"paper-example", "eta-bob", "dsr-noiseless", "attack-toy", "additive-baseline"})
        CHECK(std::find(names.begin(), names.end(), expected) != names.end());
    CHECK(has_preset("paper-example"));
    CHECK_FALSE(has_preset("nope"));
    CHECK_THROWS_AS(preset_config("nope"), ConfigError);

    // worked-example fidelity
    const ExperimentConfig paper = preset_config("paper-example");
    CHECK(paper.key_bits == 4400);
    CHECK(paper.channel.N == 40000.0);
    CHECK(paper.channel.eta == 0.1);
    CHECK(paper.channel.M == 4096);
    CHECK(paper.scenario == Scenario::Unicity);

    // every preset parses and validates
    for (const auto& name : preset_names()) CHECK_NOTHROW(preset_config(name));
}

TEST_CASE("unicity run reproduces the headline numbers") {
    ExperimentConfig cfg = preset_config("paper-example");
    cfg.trials = 4000; // keep the unit test fast; acceptance runs the full size
    const ExperimentReport report = run(cfg);
    CHECK(report.find_metric("gain_per_symbol")->estimate == doctest::Approx(7.5873).epsilon(2e-5));
    CHECK(report.find_metric("key_gain_per_symbol")->estimate ==
          doctest::Approx(6.5873).epsilon(2e-5));
    CHECK(report.find_metric("unicity_n0")->estimate == doctest::Approx(667.95).epsilon(1e-4));
    const ReportMetric* mc = report.find_metric("gain_mc");
    REQUIRE(mc != nullptr);
    CHECK(std::fabs(mc->estimate - *mc->analytic) / *mc->analytic < 0.01);
    CHECK(report.scenario == "unicity");
}

TEST_CASE("eta-bob run echoes the composed efficiency") {
    ExperimentConfig cfg = preset_config("eta-bob");
    cfg.trials = 2000;
    const ExperimentReport report = run(cfg);
    CHECK(report.find_metric("eta")->estimate == doctest::Approx(0.04).epsilon(1e-12));
    bool echoed = false;
    for (const auto& [k, v] : report.config_echo)
        if (k == "eta" && v.substr(0, 4) == "0.04") echoed = true;
    CHECK(echoed);
}

TEST_CASE("reports carry analytic annotations for monte-carlo metrics") {
    ExperimentConfig cfg = preset_config("eta-bob");
    cfg.trials = 2000;
    const ExperimentReport report = run(cfg);
    for (const char* name : {"bob_ber", "eve_ber"}) {
        const ReportMetric* m = report.find_metric(name);
        REQUIRE(m != nullptr);
        CHECK(m->analytic.has_value());
        CHECK(m->stderr_value.has_value());
    }
}

TEST_CASE("csv bodies are byte-identical across runs") {
    ExperimentConfig cfg = preset_config("dsr-noiseless");
    const std::string a = run(cfg).to_csv();
    const std::string b = run(cfg).to_csv();
    CHECK(a == b);

    ExperimentConfig toy = preset_config("attack-toy");
    toy.attack_g = {6};
    toy.trials = 10;
    CHECK(run(toy).to_csv() == run(toy).to_csv());
}

TEST_CASE("json differs only in the timestamp") {
    ExperimentConfig cfg = preset_config("dsr-noiseless");
    const std::string a = run(cfg).to_json(false);
    const std::string b = run(cfg).to_json(false);
    CHECK(a == b);
    const std::string stamped = run(cfg).to_json(true);
    CHECK(stamped.find("generated_at") != std::string::npos);
    CHECK(a.find("generated_at") == std::string::npos);
    CHECK(stamped.find("\"schema_version\": 1") != std::string::npos);
}

TEST_CASE("trace table follows the configured message") {
    ExperimentConfig cfg = parse_config_text("scenario = \"ber\"\nm = 16\nn_photon = 1000000\n"
                                             "key_bits = 8\ntrials = 64\nmessage = \"zeros\"\n"
                                             "dump_trace = true\ntrace_limit = 16\n",
                                             "t");
    const ExperimentReport report = run(cfg);
    const ReportTable* trace = report.find_table("trace");
    REQUIRE(trace != nullptr);
    CHECK(trace->columns == std::vector<std::string>{"q", "k", "b", "j", "j_received"});
    REQUIRE(trace->rows.size() == 16);
    for (const auto& row : trace->rows) {
        CHECK(row[2] == 0.0); // zeros message
        CHECK(row[3] == static_cast<double>(encode_symbol(static_cast<int>(row[1]), 0, 16)));
        CHECK(row[4] >= 0.0);
        CHECK(row[4] < 16.0);
    }
}

TEST_CASE("report files land where configured") {
    const auto dir = std::filesystem::temp_directory_path() / "alphaeta_test_out";
    std::filesystem::remove_all(dir);
    ExperimentConfig cfg = preset_config("dsr-noiseless");
    cfg.output = (dir / "r.csv").string();
    const std::string rendered = write_report(run(cfg), cfg);
    CHECK(slurp(dir / "r.csv") == rendered);

    // relative paths are resolved against ALPHAETA_OUTPUT_DIR
    setenv("ALPHAETA_OUTPUT_DIR", dir.c_str(), 1);
    cfg.output = "rel.csv";
    write_report(run(cfg), cfg);
    unsetenv("ALPHAETA_OUTPUT_DIR");
    CHECK(std::filesystem::exists(dir / "rel.csv"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("cli exit codes") {
    CHECK(run_cli("list-presets") == 0);
    CHECK(run_cli("preset dsr-noiseless --quiet") == 0);
    CHECK(run_cli("preset no-such-preset") == 1);
    CHECK(run_cli("definitely-not-a-subcommand") == 2);
    CHECK(run_cli("run") == 2);       // missing argument
    CHECK(run_cli("--help") == 0);
    CHECK(run_cli("run /nonexistent/config.toml") == 1);

    const auto good = temp_file("alphaeta_good.toml",
                                "scenario = \"dsr\"\nm = 16\nn_photon = 100\ndsr = true\n"
                                "dsr_sigma_zero = true\nkey_bits = 8\nseed = 3\n");
    CHECK(run_cli("validate " + good.string()) == 0);

    const auto bad = temp_file("alphaeta_bad.toml", "scenario = \"ber\"\neta = 1.5\n");
    CHECK(run_cli("validate " + bad.string()) == 1);
    CHECK(run_cli("run " + bad.string()) == 1);
}

TEST_CASE("cli run writes deterministic reports") {
    const auto dir = std::filesystem::temp_directory_path() / "alphaeta_cli_out";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    const auto cfg = temp_file("alphaeta_det.toml",
                               "scenario = \"ber\"\nm = 64\nn_photon = 2000\neta = 0.5\n"
                               "key_bits = 8\ntrials = 20000\nseed = 17\n");
    const std::string out1 = (dir / "a.csv").string();
    const std::string out2 = (dir / "b.csv").string();
    CHECK(run_cli("run " + cfg.string() + " --quiet --output " + out1) == 0);
    CHECK(run_cli("run " + cfg.string() + " --quiet --output " + out2) == 0);
    CHECK(slurp(out1) == slurp(out2));
    CHECK(slurp(out1).find("bob_ber") != std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("cli overrides reach the config") {
    const auto dir = std::filesystem::temp_directory_path() / "alphaeta_cli_ov";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    const std::string out = (dir / "o.json").string();
    CHECK(run_cli("preset dsr-noiseless --quiet --seed 42 --format json --output " + out) == 0);
    const std::string text = slurp(out);
    CHECK(text.find("\"seed\": 42") != std::string::npos);
    std::filesystem::remove_all(dir);
}
