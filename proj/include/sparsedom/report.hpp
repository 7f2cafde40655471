#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace sparsedom {

/// One table row; the CSV columns are exactly these fields.
struct CaseRow {
    std::string case_id;
    std::uint64_t seed = 0;
    int n = 0;
    double p = 0.0;
    double r = 0.0;
    double a_exponent = 0.0;
    double ratio = 0.0;
    double fitted_c = 0.0;
    std::string verdict;  // "pass", "fail" or "info"
};

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ExperimentReport {
    std::string id;
    nlohmann::json config;   // echo of the run configuration
    std::vector<CaseRow> rows;
    nlohmann::json fitted = nlohmann::json::object();  // named fitted constants and other scalar findings
    double max_ratio = 0.0;
    std::vector<Check> checks;
    double wall_seconds = 0.0;

    bool passed() const;
    void check(std::string name, bool pass, std::string detail = {});
    void add(CaseRow row);
};

nlohmann::json to_json(const ExperimentReport& report);
std::string to_csv(const ExperimentReport& report);

/// Fixed-format number used in CSV cells, so identical runs give identical bytes.
std::string format_number(double v);

/// Writes <dir>/<id>.json and <dir>/<id>.csv, creating dir if needed.
void write_report(const std::string& dir, const ExperimentReport& report);

}  // namespace sparsedom
