#include "diracheun/report.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <sstream>

#include <json.hpp>

namespace diracheun {

using ordered_json = nlohmann::ordered_json;

std::optional<Format> format_from_string(std::string_view name) {
    if (name == "json") return Format::Json;
    if (name == "csv") return Format::Csv;
    return std::nullopt;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 16);
    return std::string(buf, res.ptr);
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

namespace {

ordered_json params_json(const SystemParams& p, double j) {
    ordered_json out;
    out["mass"] = p.m;
    out["coupling"] = p.e;
    out["j"] = j;
    out["nu"] = p.nu;
    out["parity"] = p.parity;
    return out;
}

// NaN has no JSON representation.
ordered_json number(double v) {
    return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr);
}

} // namespace

std::string spectrum_json(const SpectrumReport& report) {
    ordered_json out;
    out["params"] = params_json(report.params, report.j);
    ordered_json levels = ordered_json::array();
    for (const auto& row : report.rows) {
        ordered_json level;
        level["n"] = row.level.n;
        level["j"] = report.j;
        level["parity"] = row.level.parity;
        level["route"] = std::string(to_string(row.route));
        level["E"] = number(row.level.E);
        level["E_over_m"] = number(row.level.E_over_m);
        level["bound_state"] = row.bound_state;
        if (row.max_pairwise_deviation) {
            level["max_pairwise_deviation"] = number(*row.max_pairwise_deviation);
        }
        levels.push_back(std::move(level));
    }
    out["levels"] = std::move(levels);
    if (report.timestamp) out["timestamp"] = *report.timestamp;
    return out.dump(2) + "\n";
}

std::string spectrum_csv(const SpectrumReport& report) {
    std::string out = "n,j,parity,route,E,E_over_m,bound_state,max_pairwise_deviation\n";
    for (const auto& row : report.rows) {
        out += std::to_string(row.level.n) + "," + format_double(report.j) + "," +
               std::to_string(row.level.parity) + "," + std::string(to_string(row.route)) + "," +
               format_double(row.level.E) + "," + format_double(row.level.E_over_m) + "," +
               (row.bound_state ? "true" : "false") + "," +
               (row.max_pairwise_deviation ? format_double(*row.max_pairwise_deviation) : "") +
               "\n";
    }
    return out;
}

std::string wavefunction_csv(const WavefunctionReport& report) {
    const auto& s = report.solution;
    std::string out;
    out += "# route=" + std::string(to_string(report.route)) + "\n";
    out += "# mass=" + format_double(s.system.m) + "\n";
    out += "# coupling=" + format_double(s.system.e) + "\n";
    out += "# j=" + format_double(report.j) + "\n";
    out += "# parity=" + std::to_string(s.system.parity) + "\n";
    out += "# n=" + std::to_string(s.level.n) + "\n";
    out += "# E=" + format_double(s.level.E) + "\n";
    out += "# residual=" + format_double(report.residual) + "\n";
    if (report.timestamp) out += "# timestamp=" + *report.timestamp + "\n";
    out += "r,f,g\n";
    for (std::size_t i = 0; i < s.grid.size(); ++i) {
        out += format_double(s.grid.r[i]) + "," + format_double(s.f[i]) + "," +
               format_double(s.g[i]) + "\n";
    }
    return out;
}

std::string wavefunction_json(const WavefunctionReport& report) {
    const auto& s = report.solution;
    ordered_json out;
    out["params"] = params_json(s.system, report.j);
    out["route"] = std::string(to_string(report.route));
    out["n"] = s.level.n;
    out["E"] = number(s.level.E);
    out["E_over_m"] = number(s.level.E_over_m);
    out["residual"] = number(report.residual);
    ordered_json points = ordered_json::array();
    for (std::size_t i = 0; i < s.grid.size(); ++i) {
        points.push_back({{"r", s.grid.r[i]}, {"f", number(s.f[i])}, {"g", number(s.g[i])}});
    }
    out["points"] = std::move(points);
    if (report.timestamp) out["timestamp"] = *report.timestamp;
    return out.dump(2) + "\n";
}

std::string verification_json(const std::vector<CheckResult>& results, bool passed) {
    ordered_json out;
    out["passed"] = passed;
    ordered_json checks = ordered_json::array();
    for (const auto& r : results) {
        ordered_json c;
        c["id"] = r.id;
        c["description"] = r.description;
        c["passed"] = r.passed;
        c["audit_only"] = r.audit_only;
        c["measured"] = number(r.measured);
        c["threshold"] = number(r.threshold);
        c["detail"] = r.detail;
        checks.push_back(std::move(c));
    }
    out["checks"] = std::move(checks);
    return out.dump(2) + "\n";
}

std::string verification_text(const std::vector<CheckResult>& results) {
    std::ostringstream os;
    for (const auto& r : results) {
        const char* tag = r.audit_only ? "AUDIT" : (r.passed ? "PASS" : "FAIL");
        os << tag << " " << r.id << " measured=" << format_double(r.measured)
           << " threshold=" << format_double(r.threshold) << " " << r.description;
        if (!r.detail.empty()) os << " [" << r.detail << "]";
        os << "\n";
    }
    return os.str();
}

} // namespace diracheun
