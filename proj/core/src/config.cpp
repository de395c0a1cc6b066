#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "alphaeta/errors.hpp"
#include "alphaeta/harness.hpp"

namespace alphaeta {

std::string scenario_name(Scenario s) {
    switch (s) {
    case Scenario::Ber: return "ber";
    case Scenario::InfoGain: return "info_gain";
    case Scenario::Unicity: return "unicity";
    case Scenario::AttackSweep: return "attack_sweep";
    case Scenario::Dsr: return "dsr";
    case Scenario::AdditiveBaseline: return "additive_baseline";
    }
    return "?";
}

Scenario scenario_from_name(const std::string& name) {
    if (name == "ber") return Scenario::Ber;
    if (name == "info_gain") return Scenario::InfoGain;
    if (name == "unicity") return Scenario::Unicity;
    if (name == "attack_sweep") return Scenario::AttackSweep;
    if (name == "dsr") return Scenario::Dsr;
    if (name == "additive_baseline") return Scenario::AdditiveBaseline;
    throw ConfigError("unknown scenario \"" + name +
                      "\" (expected ber|info_gain|unicity|attack_sweep|dsr|additive_baseline)");
}

MessageSpec MessageSpec::parse(const std::string& text) {
    MessageSpec spec;
    if (text == "random") {
        spec.kind = Kind::Random;
    } else if (text == "zeros") {
        spec.kind = Kind::Zeros;
    } else if (text.rfind("file:", 0) == 0) {
        spec.kind = Kind::File;
        spec.path = text.substr(5);
        if (spec.path.empty()) throw ConfigError("message = \"file:<path>\" needs a path");
    } else {
        throw ConfigError("message must be \"random\", \"zeros\" or \"file:<path>\", got \"" +
                          text + "\"");
    }
    return spec;
}

std::string MessageSpec::describe() const {
    switch (kind) {
    case Kind::Random: return "random";
    case Kind::Zeros: return "zeros";
    case Kind::File: return "file:" + path;
    }
    return "?";
}

namespace {

struct RawValue {
    std::string text;
    bool is_string = false;
    bool is_list = false;
    std::vector<std::string> items;
    int line = 0;
};

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// flat TOML-style "key = value" lines; # starts a comment outside quotes
std::map<std::string, RawValue> parse_kv(const std::string& text, const std::string& origin) {
    std::map<std::string, RawValue> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string stripped;
        bool in_quotes = false;
        for (char c : line) {
            if (c == '"') in_quotes = !in_quotes;
            if (c == '#' && !in_quotes) break;
            stripped.push_back(c);
        }
        stripped = trim(stripped);
        if (stripped.empty()) continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": expected \"key = value\", got \"" + stripped + "\"");
        const std::string key = trim(stripped.substr(0, eq));
        std::string value = trim(stripped.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key or value");
        if (out.count(key))
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key \"" + key +
                              "\"");
        RawValue raw;
        raw.line = lineno;
        if (value.front() == '"') {
            if (value.size() < 2 || value.back() != '"')
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": unterminated string");
            raw.is_string = true;
            raw.text = value.substr(1, value.size() - 2);
        } else if (value.front() == '[') {
            if (value.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": unterminated list");
            raw.is_list = true;
            std::string inner = value.substr(1, value.size() - 2);
            std::string item;
            std::istringstream items(inner);
            while (std::getline(items, item, ',')) {
                item = trim(item);
                if (!item.empty()) raw.items.push_back(item);
            }
        } else {
            raw.text = value;
        }
        out[key] = raw;
    }
    return out;
}

class ConfigReader {
public:
    ConfigReader(std::map<std::string, RawValue> kv, std::string origin)
        : kv_(std::move(kv)), origin_(std::move(origin)) {}

    bool has(const std::string& key) const { return kv_.count(key) > 0; }

    std::string get_string(const std::string& key) {
        const RawValue& raw = require(key);
        if (raw.is_list) fail(key, "expected a string, got a list");
        return raw.text;
    }

    double get_double(const std::string& key) {
        const RawValue& raw = require(key);
        if (raw.is_list || raw.is_string) fail(key, "expected a number");
        try {
            std::size_t pos = 0;
            const double v = std::stod(raw.text, &pos);
            if (pos != raw.text.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            fail(key, "\"" + raw.text + "\" is not a number");
        }
        return 0.0;
    }

    std::uint64_t get_u64(const std::string& key) {
        const RawValue& raw = require(key);
        if (raw.is_list || raw.is_string) fail(key, "expected an integer");
        try {
            std::size_t pos = 0;
            const std::uint64_t v = std::stoull(raw.text, &pos);
            if (pos != raw.text.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            fail(key, "\"" + raw.text + "\" is not a non-negative integer");
        }
        return 0;
    }

    int get_int(const std::string& key) {
        const std::uint64_t v = get_u64(key);
        if (v > 1'000'000'000ULL) fail(key, "value too large");
        return static_cast<int>(v);
    }

    bool get_bool(const std::string& key) {
        const RawValue& raw = require(key);
        if (raw.text == "true") return true;
        if (raw.text == "false") return false;
        fail(key, "expected true or false, got \"" + raw.text + "\"");
        return false;
    }

    std::vector<int> get_int_list(const std::string& key) {
        const RawValue& raw = require(key);
        if (!raw.is_list) fail(key, "expected a list like [4, 3]");
        std::vector<int> out;
        for (const std::string& item : raw.items) {
            try {
                out.push_back(std::stoi(item));
            } catch (const std::exception&) {
                fail(key, "\"" + item + "\" is not an integer");
            }
        }
        return out;
    }

    std::vector<double> get_double_list(const std::string& key) {
        const RawValue& raw = require(key);
        if (!raw.is_list) fail(key, "expected a list like [0.1, 0.5]");
        std::vector<double> out;
        for (const std::string& item : raw.items) {
            try {
                out.push_back(std::stod(item));
            } catch (const std::exception&) {
                fail(key, "\"" + item + "\" is not a number");
            }
        }
        return out;
    }

    void mark_used(const std::string& key) { used_.insert(key); }

    void check_unknown() const {
        for (const auto& [key, raw] : kv_)
            if (!used_.count(key))
                throw ConfigError(origin_ + ":" + std::to_string(raw.line) + ": unknown key \"" +
                                  key + "\"");
    }

private:
    const RawValue& require(const std::string& key) {
        auto it = kv_.find(key);
        if (it == kv_.end()) throw ConfigError(origin_ + ": missing key \"" + key + "\"");
        used_.insert(key);
        return it->second;
    }

    [[noreturn]] void fail(const std::string& key, const std::string& why) {
        throw ConfigError(origin_ + ": key \"" + key + "\": " + why);
    }

    std::map<std::string, RawValue> kv_;
    std::set<std::string> used_;
    std::string origin_;
};

} // namespace

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
    ConfigReader reader(parse_kv(text, origin), origin);
    ExperimentConfig cfg;

    cfg.scenario = scenario_from_name(reader.get_string("scenario"));
    if (reader.has("m")) cfg.channel.M = reader.get_int("m");
    if (reader.has("n_photon")) cfg.channel.N = reader.get_double("n_photon");
    if (reader.has("eta")) cfg.channel.eta = reader.get_double("eta");
    if (reader.has("eta_factors")) {
        if (reader.has("eta"))
            throw ConfigError(origin + ": give eta or eta_factors, not both");
        cfg.eta_factors = reader.get_double_list("eta_factors");
        cfg.channel.eta = compose_eta(cfg.eta_factors);
    }
    if (reader.has("dsr")) cfg.channel.dsr_enabled = reader.get_bool("dsr");
    if (reader.has("dsr_sigma_zero")) cfg.channel.dsr_sigma_zero = reader.get_bool("dsr_sigma_zero");
    if (reader.has("key_bits")) cfg.key_bits = reader.get_int("key_bits");
    if (reader.has("key_hex")) cfg.key_hex = reader.get_string("key_hex");
    if (reader.has("taps")) cfg.taps = reader.get_int_list("taps");
    if (reader.has("message")) cfg.message = MessageSpec::parse(reader.get_string("message"));
    if (reader.has("trials")) cfg.trials = reader.get_u64("trials");
    if (reader.has("seed")) cfg.seed = reader.get_u64("seed");
    if (reader.has("output")) cfg.output = reader.get_string("output");
    if (reader.has("format")) {
        const std::string f = reader.get_string("format");
        if (f == "csv") cfg.format = ReportFormat::Csv;
        else if (f == "json") cfg.format = ReportFormat::Json;
        else throw ConfigError(origin + ": format must be \"csv\" or \"json\", got \"" + f + "\"");
    }
    if (reader.has("attack_g")) cfg.attack_g = reader.get_int_list("attack_g");
    if (reader.has("success_threshold")) cfg.success_threshold = reader.get_double("success_threshold");
    if (reader.has("budget_factor")) cfg.budget_factor = reader.get_double("budget_factor");
    if (reader.has("plaintext_known")) cfg.plaintext_known = reader.get_bool("plaintext_known");
    if (reader.has("repetition")) cfg.repetition = reader.get_int("repetition");
    if (reader.has("enum_cells")) cfg.enum_cells = reader.get_int("enum_cells");
    if (reader.has("enum_symbols")) cfg.enum_symbols = reader.get_int("enum_symbols");
    if (reader.has("symbols")) cfg.symbols = reader.get_int("symbols");
    if (reader.has("dump_trace")) cfg.dump_trace = reader.get_bool("dump_trace");
    if (reader.has("trace_limit")) cfg.trace_limit = reader.get_int("trace_limit");

    reader.check_unknown();
    cfg.validate();
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

std::uint64_t ExperimentConfig::effective_trials() const {
    if (trials > 0) return trials;
    switch (scenario) {
    case Scenario::Ber: return 1'000'000;
    case Scenario::InfoGain: return 100'000;
    case Scenario::Unicity: return 100'000;
    case Scenario::AttackSweep: return 100;
    case Scenario::Dsr: return 100'000;
    case Scenario::AdditiveBaseline: return 1;
    }
    return 1;
}

namespace {

bool scenario_runs_keystream(Scenario s) {
    return s == Scenario::Ber || s == Scenario::Dsr || s == Scenario::AdditiveBaseline;
}

} // namespace

void ExperimentConfig::validate() const {
    try {
        channel.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("channel: ") + e.what());
    }
    if (key_bits < 1) throw ConfigError("key_bits must be >= 1, got " + std::to_string(key_bits));
    if (scenario_runs_keystream(scenario)) {
        std::vector<int> effective = taps.empty() ? maximal_taps(key_bits) : taps;
        if (effective.empty())
            throw ConfigError("no built-in taps for key_bits = " + std::to_string(key_bits) +
                              "; give taps = [...] explicitly");
        try {
            check_taps(effective, key_bits);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("taps: ") + e.what());
        }
    }
    if (scenario == Scenario::AttackSweep) {
        if (attack_g.empty()) throw ConfigError("attack_sweep needs a non-empty attack_g list");
        for (int g : attack_g)
            if (g < 2 || g > 16)
                throw ConfigError("attack_g entries must be in [2, 16], got " + std::to_string(g));
    }
    if (!(success_threshold > 0.0) || !(success_threshold < 1.0))
        throw ConfigError("success_threshold must be in (0, 1), got " +
                          std::to_string(success_threshold));
    if (!(budget_factor > 0.0)) throw ConfigError("budget_factor must be > 0");
    if (repetition < 1) throw ConfigError("repetition must be >= 1");
    if (enum_cells < 2) throw ConfigError("enum_cells must be >= 2");
    if (enum_symbols < 1) throw ConfigError("enum_symbols must be >= 1");
    if (symbols < 0) throw ConfigError("symbols must be >= 0");
    if (!key_hex.empty()) {
        try {
            SecretKey::from_hex(key_hex, key_bits); // throws on malformed/short hex
        } catch (const std::exception& e) {
            throw ConfigError(std::string("key_hex: ") + e.what());
        }
    }
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::echo() const {
    std::vector<std::pair<std::string, std::string>> kv;
    auto num = [](double v) {
        std::ostringstream s;
        s.precision(12);
        s << v;
        return s.str();
    };
    kv.emplace_back("scenario", scenario_name(scenario));
    kv.emplace_back("m", std::to_string(channel.M));
    kv.emplace_back("n_photon", num(channel.N));
    kv.emplace_back("eta", num(channel.eta));
    if (!eta_factors.empty()) {
        std::string list;
        for (double f : eta_factors) list += (list.empty() ? "" : ",") + num(f);
        kv.emplace_back("eta_factors", list);
    }
    kv.emplace_back("dsr", channel.dsr_enabled ? "true" : "false");
    kv.emplace_back("dsr_sigma_zero", channel.dsr_sigma_zero ? "true" : "false");
    kv.emplace_back("key_bits", std::to_string(key_bits));
    if (!key_hex.empty()) kv.emplace_back("key_hex", key_hex);
    if (!taps.empty()) {
        std::string list;
        for (int t : taps) list += (list.empty() ? "" : ",") + std::to_string(t);
        kv.emplace_back("taps", list);
    }
    kv.emplace_back("message", message.describe());
    kv.emplace_back("trials", std::to_string(effective_trials()));
    kv.emplace_back("seed", std::to_string(seed));
    if (scenario == Scenario::AttackSweep) {
        std::string list;
        for (int g : attack_g) list += (list.empty() ? "" : ",") + std::to_string(g);
        kv.emplace_back("attack_g", list);
        kv.emplace_back("success_threshold", num(success_threshold));
        kv.emplace_back("budget_factor", num(budget_factor));
        kv.emplace_back("plaintext_known", plaintext_known ? "true" : "false");
    }
    if (scenario == Scenario::Dsr) {
        kv.emplace_back("repetition", std::to_string(repetition));
        kv.emplace_back("enum_cells", std::to_string(enum_cells));
        kv.emplace_back("enum_symbols", std::to_string(enum_symbols));
    }
    if (scenario == Scenario::AdditiveBaseline)
        kv.emplace_back("enum_symbols", std::to_string(enum_symbols));
    return kv;
}

// --- presets -------------------------------------------------------------------

namespace {

struct Preset {
    const char* name;
    const char* text;
};

// the worked fiber-demo example: L = 4400 bit key, N = 40000 photons,
// eavesdropper efficiency 0.1; M is free (U does not depend on it), fixed 4096
constexpr const char* kPaperExample = R"(scenario = "unicity"
m = 4096
n_photon = 40000
eta = 0.1
key_bits = 4400
trials = 100000
seed = 20030227
)";

constexpr const char* kEtaBob = R"(# receiver chain: 10 dB fiber loss, heterodyne, 80% quantum efficiency
scenario = "ber"
m = 4096
n_photon = 40000
eta_factors = [0.1, 0.5, 0.8]
key_bits = 16
taps = [16, 15, 13, 4]
trials = 200000
seed = 20030228
)";

constexpr const char* kDsrNoiseless = R"(# randomized half-circle with the Gaussian noise term forced to zero
scenario = "dsr"
m = 16
n_photon = 100
eta = 1.0
dsr = true
dsr_sigma_zero = true
key_bits = 8
taps = [8, 6, 5, 4]
enum_cells = 64
enum_symbols = 2
seed = 20030229
)";

constexpr const char* kDsrFiber = R"(# randomization on top of the fiber-demo noise level
scenario = "dsr"
m = 4096
n_photon = 40000
eta_factors = [0.1, 0.5, 0.8]
dsr = true
key_bits = 16
taps = [16, 15, 13, 4]
trials = 200000
seed = 20030233
)";

constexpr const char* kDsrRepetition = R"(# repetition-coded message leaks key information despite randomization
scenario = "dsr"
m = 16
n_photon = 0.7205061947899576  # sigma = 1.5
eta = 1.0
dsr = true
key_bits = 8
taps = [8, 6, 5, 4]
repetition = 4
trials = 100
symbols = 64
enum_cells = 64
enum_symbols = 1
seed = 20030230
)";

constexpr const char* kAttackToy = R"(# exhaustive Bayesian ranking at toy scale: M = 16, sigma = 1.5
scenario = "attack_sweep"
m = 16
n_photon = 0.7205061947899576
eta = 1.0
attack_g = [6, 8, 10, 12]
trials = 100
plaintext_known = true
success_threshold = 0.99
budget_factor = 4.0
seed = 20030231
)";

constexpr const char* kAdditiveBaseline = R"(scenario = "additive_baseline"
key_bits = 12
taps = [12, 11, 8, 6]
enum_symbols = 12
seed = 20030232
)";

constexpr Preset kPresets[] = {
    {"paper-example", kPaperExample},
    {"eta-bob", kEtaBob},
    {"dsr-noiseless", kDsrNoiseless},
    {"dsr-fiber", kDsrFiber},
    {"dsr-repetition", kDsrRepetition},
    {"attack-toy", kAttackToy},
    {"additive-baseline", kAdditiveBaseline},
};

} // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const Preset& p : kPresets) names.emplace_back(p.name);
    return names;
}

bool has_preset(const std::string& name) {
    for (const Preset& p : kPresets)
        if (name == p.name) return true;
    return false;
}

std::string preset_text(const std::string& name) {
    for (const Preset& p : kPresets)
        if (name == p.name) return p.text;
    throw ConfigError("unknown preset \"" + name + "\"; see list-presets");
}

ExperimentConfig preset_config(const std::string& name) {
    return parse_config_text(preset_text(name), "preset:" + name);
}

} // namespace alphaeta
