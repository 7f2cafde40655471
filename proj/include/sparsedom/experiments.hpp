#pragma once

#include <string>
#include <vector>

#include "sparsedom/config.hpp"
#include "sparsedom/report.hpp"

namespace sparsedom {

struct SuiteInfo {
    std::string name;
    std::string summary;
};

/// All verify suites in a fixed order.
const std::vector<SuiteInfo>& suites();
bool is_suite(const std::string& name);

/**
 * Runs one suite under cfg. Suites that check N-stability repeat their ensemble
 * on the refined domain (2N) when cfg.refine is set. Throws std::invalid_argument
 * for an unknown suite name.
 */
ExperimentReport run_suite(const std::string& name, const RunConfig& cfg);

/// Factor by which two positive maxima differ (>= 1); +inf if exactly one is zero.
double stability_factor(double a, double b);

}  // namespace sparsedom
