#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sparsedom/grid.hpp"
#include "sparsedom/singular.hpp"
#include "sparsedom/sparse.hpp"
#include "sparsedom/weights.hpp"

namespace sparsedom {

struct WeightSpec {
    std::string type = "constant";  // "power" | "constant"
    double exponent = 0.0;
    double value = 1.0;             // constant weights
    std::array<double, 2> center{0.0, 0.0};

    Weight build(const Domain& dom) const;
};

/// Logarithmic grid; for lambda grids low/high are relative to max |Uf|.
struct LogGridSpec {
    int points = 10;
    double low = 1e-3;
    double high = 1.0;
};

struct RunConfig {
    int dimension = 1;
    int n = 64;
    double side = 1.0;
    std::array<KernelSpec, 2> kernels{};
    WeightSpec weight;
    std::vector<double> sweep;  // power-weight exponents; empty = the suite's own sweep
    double p = 2.0;
    double r = 1.25;
    double beta = 1.0;
    LogGridSpec lambda_grid{10, 1e-3, 1.0};
    LogGridSpec rescalings{7, 1e-3, 1e3};
    std::vector<std::uint64_t> seeds;
    std::vector<std::string> experiments;
    Calibration calibration = Calibration::minimal;
    bool refine = true;  // repeat N-stability suites at 2N
    std::string output_dir = "sparsedom-out";
    int threads = 0;

    int depth() const;
    Domain domain() const;
    Domain refined_domain() const;
    KernelOmega kernel(int which) const;
};

/// Schema violation or malformed JSON; the message names the field (or line/column).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);
nlohmann::json to_json(const RunConfig& cfg);

/// RunConfig with seeds 0..19 and everything else at its default.
RunConfig default_config(int dimension, int n);

/// The output directory after the SPARSEDOM_OUTPUT_DIR override.
std::string resolve_output_dir(const RunConfig& cfg);

}  // namespace sparsedom
