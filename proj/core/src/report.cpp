#include <chrono>
#include <cstdio>
#include <ctime>
#include <sstream>

#include <nlohmann/json.hpp>

#include "alphaeta/harness.hpp"

namespace alphaeta {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string iso_utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace

const ReportMetric* ExperimentReport::find_metric(const std::string& name) const {
    for (const auto& m : metrics)
        if (m.name == name) return &m;
    return nullptr;
}

const ReportTable* ExperimentReport::find_table(const std::string& name) const {
    for (const auto& t : tables)
        if (t.name == name) return &t;
    return nullptr;
}

std::string ExperimentReport::to_csv() const {
    std::ostringstream out;
    out << "# alphaeta report\n";
    out << "# schema_version," << schema_version << "\n";
    out << "# tool_version," << tool_version << "\n";
    out << "# scenario," << scenario << "\n";
    out << "# seed," << seed << "\n";
    for (const auto& [key, value] : config_echo) out << "# config." << key << "," << value << "\n";
    for (const auto& w : warnings) out << "# warning," << w << "\n";
    out << "metric,estimate,analytic,stderr,note\n";
    for (const auto& m : metrics) {
        out << m.name << "," << fmt_double(m.estimate) << ",";
        if (m.analytic) out << fmt_double(*m.analytic);
        out << ",";
        if (m.stderr_value) out << fmt_double(*m.stderr_value);
        out << "," << m.note << "\n";
    }
    for (const auto& t : tables) {
        out << "\ntable," << t.name << "\n";
        for (std::size_t c = 0; c < t.columns.size(); ++c)
            out << (c ? "," : "") << t.columns[c];
        out << "\n";
        for (const auto& row : t.rows) {
            for (std::size_t c = 0; c < row.size(); ++c)
                out << (c ? "," : "") << fmt_double(row[c]);
            out << "\n";
        }
    }
    return out.str();
}

std::string ExperimentReport::to_json(bool with_timestamp) const {
    nlohmann::ordered_json doc;
    doc["schema_version"] = schema_version;
    doc["tool_version"] = tool_version;
    doc["scenario"] = scenario;
    doc["seed"] = seed;
    if (with_timestamp) doc["generated_at"] = iso_utc_now();
    nlohmann::ordered_json cfg;
    for (const auto& [key, value] : config_echo) cfg[key] = value;
    doc["config"] = cfg;
    doc["warnings"] = warnings;
    nlohmann::ordered_json ms = nlohmann::ordered_json::array();
    for (const auto& m : metrics) {
        nlohmann::ordered_json j;
        j["name"] = m.name;
        j["estimate"] = m.estimate;
        if (m.analytic) j["analytic"] = *m.analytic;
        if (m.stderr_value) j["stderr"] = *m.stderr_value;
        if (!m.note.empty()) j["note"] = m.note;
        ms.push_back(j);
    }
    doc["metrics"] = ms;
    nlohmann::ordered_json ts = nlohmann::ordered_json::array();
    for (const auto& t : tables) {
        nlohmann::ordered_json j;
        j["name"] = t.name;
        j["columns"] = t.columns;
        j["rows"] = t.rows;
        ts.push_back(j);
    }
    doc["tables"] = ts;
    return doc.dump(2) + "\n";
}

} // namespace alphaeta
