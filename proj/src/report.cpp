#include "sparsedom/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sparsedom {

using nlohmann::json;

bool ExperimentReport::passed() const {
    for (const auto& c : checks) {
        if (!c.pass) return false;
    }
    return true;
}

void ExperimentReport::check(std::string name, bool pass, std::string detail) {
    checks.push_back({std::move(name), pass, std::move(detail)});
}

void ExperimentReport::add(CaseRow row) {
    if (std::isfinite(row.ratio)) max_ratio = std::max(max_ratio, row.ratio);
    rows.push_back(std::move(row));
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

namespace {

// JSON has no inf/nan; keep them readable as strings.
json number_json(double v) {
    if (std::isfinite(v)) return v;
    return format_number(v);
}

}  // namespace

json to_json(const ExperimentReport& r) {
    json j;
    j["experiment"] = r.id;
    j["config"] = r.config;
    json rows = json::array();
    for (const auto& row : r.rows) {
        rows.push_back({{"case_id", row.case_id},
                        {"seed", row.seed},
                        {"N", row.n},
                        {"p", number_json(row.p)},
                        {"r", number_json(row.r)},
                        {"a_exponent", number_json(row.a_exponent)},
                        {"ratio", number_json(row.ratio)},
                        {"fitted_C", number_json(row.fitted_c)},
                        {"verdict", row.verdict}});
    }
    j["cases"] = rows;
    j["fitted"] = r.fitted;
    j["max_ratio"] = number_json(r.max_ratio);
    json checks = json::array();
    for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    j["checks"] = checks;
    j["passed"] = r.passed();
    j["wall_seconds"] = r.wall_seconds;
    return j;
}

std::string to_csv(const ExperimentReport& r) {
    std::ostringstream os;
    os << "case_id,seed,N,p,r,a_exponent,ratio,fitted_C,verdict\n";
    for (const auto& row : r.rows) {
        os << row.case_id << ',' << row.seed << ',' << row.n << ',' << format_number(row.p) << ','
           << format_number(row.r) << ',' << format_number(row.a_exponent) << ',' << format_number(row.ratio) << ','
           << format_number(row.fitted_c) << ',' << row.verdict << '\n';
    }
    return os.str();
}

void write_report(const std::string& dir, const ExperimentReport& report) {
    std::filesystem::create_directories(dir);
    const auto base = std::filesystem::path(dir) / report.id;
    std::ofstream js(base.string() + ".json");
    std::ofstream csv(base.string() + ".csv");
    if (!js || !csv) throw std::runtime_error("cannot write report files under " + dir);
    js << to_json(report).dump(2) << '\n';
    csv << to_csv(report);
}

}  // namespace sparsedom
