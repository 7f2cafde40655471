#include "sparsedom/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "sparsedom/experiments.hpp"

namespace sparsedom {

using nlohmann::json;

namespace {

// Field access with the path kept for diagnostics; every object rejects keys it does not know.
class Fields {
public:
    Fields(const json& j, std::string path, std::set<std::string> allowed) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) fail(path_.empty() ? "<root>" : path_, "expected an object");
        for (const auto& item : j_.items()) {
            if (!allowed.count(item.key())) fail(at(item.key()), "unknown key");
        }
    }

    bool has(const std::string& key) const { return j_.contains(key); }
    const json& raw(const std::string& key) const { return j_.at(key); }
    std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    double number(const std::string& key, double fallback) const {
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_number()) fail(at(key), "expected a number");
        return v.get<double>();
    }
    int integer(const std::string& key, int fallback) const {
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_number_integer()) fail(at(key), "expected an integer");
        return v.get<int>();
    }
    bool boolean(const std::string& key, bool fallback) const {
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_boolean()) fail(at(key), "expected true or false");
        return v.get<bool>();
    }
    std::string string(const std::string& key, const std::string& fallback) const {
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_string()) fail(at(key), "expected a string");
        return v.get<std::string>();
    }

    [[noreturn]] static void fail(const std::string& field, const std::string& what) {
        throw ConfigError(field + ": " + what);
    }

private:
    const json& j_;
    std::string path_;
};

KernelSpec parse_kernel(const json& j, const std::string& path, int dim) {
    Fields f(j, path, {"kind", "axis", "harmonic", "seed", "samples"});
    KernelSpec k;
    const std::string kind = f.string("kind", "riesz");
    if (kind == "riesz" || kind == "hilbert") {
        k.kind = KernelKind::riesz;
    } else if (kind == "odd_harmonic") {
        k.kind = KernelKind::odd_harmonic;
    } else if (kind == "random_mean_zero") {
        k.kind = KernelKind::random_mean_zero;
    } else {
        Fields::fail(f.at("kind"), "unknown kernel kind '" + kind + "'");
    }
    if (kind == "hilbert" && dim != 1) Fields::fail(f.at("kind"), "hilbert kernel requires dimension 1");
    k.axis = f.integer("axis", 0);
    if (k.axis < 0 || k.axis >= dim) Fields::fail(f.at("axis"), "axis out of range");
    k.harmonic = f.integer("harmonic", 1);
    if (k.kind == KernelKind::odd_harmonic && (k.harmonic < 1 || k.harmonic % 2 == 0))
        Fields::fail(f.at("harmonic"), "harmonic must be odd and positive");
    if (f.has("seed")) {
        const json& s = f.raw("seed");
        if (!s.is_number_unsigned()) Fields::fail(f.at("seed"), "expected a non-negative integer");
        k.seed = s.get<std::uint64_t>();
    }
    k.samples = f.integer("samples", 256);
    if (k.samples < 4 || k.samples % 2 != 0) Fields::fail(f.at("samples"), "samples must be even and at least 4");
    return k;
}

json kernel_json(const KernelSpec& k) {
    json j;
    switch (k.kind) {
        case KernelKind::riesz: j["kind"] = "riesz"; j["axis"] = k.axis; break;
        case KernelKind::odd_harmonic: j["kind"] = "odd_harmonic"; j["harmonic"] = k.harmonic; break;
        case KernelKind::random_mean_zero: j["kind"] = "random_mean_zero"; j["seed"] = k.seed; break;
    }
    j["samples"] = k.samples;
    return j;
}

LogGridSpec parse_grid(const json& j, const std::string& path, LogGridSpec fallback) {
    Fields f(j, path, {"points", "low", "high"});
    LogGridSpec g;
    g.points = f.integer("points", fallback.points);
    g.low = f.number("low", fallback.low);
    g.high = f.number("high", fallback.high);
    if (g.points < 1) Fields::fail(f.at("points"), "must be at least 1");
    if (!(g.low > 0.0)) Fields::fail(f.at("low"), "must be positive");
    if (!(g.high >= g.low)) Fields::fail(f.at("high"), "must be at least low");
    return g;
}

json grid_json(const LogGridSpec& g) { return {{"points", g.points}, {"low", g.low}, {"high", g.high}}; }

}  // namespace

Weight WeightSpec::build(const Domain& dom) const {
    if (type == "constant") return Weight(GridFunction(dom, value));
    return power_weight(dom, exponent, center);
}

int RunConfig::depth() const {
    int m = 0;
    while ((1 << m) < n) ++m;
    return m;
}

Domain RunConfig::domain() const { return Domain::centered(dimension, side, depth()); }
Domain RunConfig::refined_domain() const { return Domain::centered(dimension, side, depth() + 1); }
KernelOmega RunConfig::kernel(int which) const { return make_kernel(dimension, kernels[std::size_t(which)]); }

RunConfig parse_config(const json& j) {
    Fields f(j, "", {"dimension", "N", "side", "kernels", "weight", "sweep", "p", "r", "beta", "lambda_grid",
                     "rescalings", "seeds", "experiments", "calibration", "refine", "output_dir", "threads"});
    RunConfig c;
    c.dimension = f.integer("dimension", 1);
    if (c.dimension != 1 && c.dimension != 2) Fields::fail("dimension", "must be 1 or 2");
    c.n = f.integer("N", 64);
    const int n_max = c.dimension == 1 ? 1024 : 256;
    if (c.n < 8 || c.n > n_max || (c.n & (c.n - 1)) != 0)
        Fields::fail("N", "must be a power of two in [8, " + std::to_string(n_max) + "]");
    c.side = f.number("side", 1.0);
    if (!(c.side > 0.0)) Fields::fail("side", "must be positive");

    if (f.has("kernels")) {
        const json& ks = f.raw("kernels");
        if (!ks.is_array() || ks.size() != 2) Fields::fail("kernels", "expected an array of two kernel specs");
        for (std::size_t i = 0; i < 2; ++i) c.kernels[i] = parse_kernel(ks[i], "kernels[" + std::to_string(i) + "]", c.dimension);
    }
    if (f.has("weight")) {
        Fields w(f.raw("weight"), "weight", {"type", "exponent", "value", "center"});
        c.weight.type = w.string("type", "constant");
        if (c.weight.type != "power" && c.weight.type != "constant")
            Fields::fail("weight.type", "must be 'power' or 'constant'");
        c.weight.exponent = w.number("exponent", 0.0);
        if (c.weight.type == "power" && !(c.weight.exponent > -c.dimension))
            Fields::fail("weight.exponent", "must exceed -dimension");
        c.weight.value = w.number("value", 1.0);
        if (!(c.weight.value > 0.0)) Fields::fail("weight.value", "must be positive");
        if (w.has("center")) {
            const json& ctr = w.raw("center");
            if (!ctr.is_array() || ctr.size() != std::size_t(c.dimension))
                Fields::fail("weight.center", "expected " + std::to_string(c.dimension) + " coordinates");
            for (std::size_t i = 0; i < ctr.size(); ++i) {
                if (!ctr[i].is_number()) Fields::fail("weight.center", "expected numbers");
                c.weight.center[i] = ctr[i].get<double>();
            }
        }
    }
    if (f.has("sweep")) {
        const json& s = f.raw("sweep");
        if (!s.is_array()) Fields::fail("sweep", "expected an array of exponents");
        for (const auto& a : s) {
            if (!a.is_number() || !(a.get<double>() > -c.dimension)) Fields::fail("sweep", "exponents must exceed -dimension");
            c.sweep.push_back(a.get<double>());
        }
    }
    c.p = f.number("p", 2.0);
    if (!(c.p > 1.0)) Fields::fail("p", "must exceed 1");
    c.r = f.number("r", 1.25);
    if (!(c.r > 1.0 && c.r <= 1.5)) Fields::fail("r", "r outside (1, 3/2]");
    c.beta = f.number("beta", 1.0);
    if (!(c.beta >= 0.0)) Fields::fail("beta", "must be non-negative");
    if (f.has("lambda_grid")) c.lambda_grid = parse_grid(f.raw("lambda_grid"), "lambda_grid", c.lambda_grid);
    if (f.has("rescalings")) c.rescalings = parse_grid(f.raw("rescalings"), "rescalings", c.rescalings);

    if (f.has("seeds")) {
        const json& s = f.raw("seeds");
        if (s.is_array()) {
            for (const auto& v : s) {
                if (!v.is_number_unsigned()) Fields::fail("seeds", "expected non-negative integers");
                c.seeds.push_back(v.get<std::uint64_t>());
            }
        } else {
            Fields range(s, "seeds", {"first", "count"});
            const int first = range.integer("first", 0), count = range.integer("count", 20);
            if (first < 0 || count < 0) Fields::fail("seeds", "first and count must be non-negative");
            for (int i = 0; i < count; ++i) c.seeds.push_back(std::uint64_t(first + i));
        }
    } else {
        for (std::uint64_t s = 0; s < 20; ++s) c.seeds.push_back(s);
    }
    if (f.has("experiments")) {
        const json& e = f.raw("experiments");
        if (!e.is_array()) Fields::fail("experiments", "expected an array of suite names");
        for (const auto& v : e) {
            if (!v.is_string()) Fields::fail("experiments", "expected suite names");
            if (!is_suite(v.get<std::string>())) Fields::fail("experiments", "unknown suite '" + v.get<std::string>() + "'");
            c.experiments.push_back(v.get<std::string>());
        }
    }
    const std::string cal = f.string("calibration", "minimal");
    if (cal == "minimal") {
        c.calibration = Calibration::minimal;
    } else if (cal == "doubling") {
        c.calibration = Calibration::doubling;
    } else {
        Fields::fail("calibration", "must be 'minimal' or 'doubling'");
    }
    c.refine = f.boolean("refine", true);
    c.output_dir = f.string("output_dir", c.output_dir);
    c.threads = f.integer("threads", 0);
    if (c.threads < 0) Fields::fail("threads", "must be non-negative");
    return c;
}

RunConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        // nlohmann reports "at line L, column C" in the message.
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    return parse_config(j);
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

json to_json(const RunConfig& c) {
    json j;
    j["dimension"] = c.dimension;
    j["N"] = c.n;
    j["side"] = c.side;
    j["kernels"] = json::array({kernel_json(c.kernels[0]), kernel_json(c.kernels[1])});
    json w = {{"type", c.weight.type}};
    if (c.weight.type == "power") {
        w["exponent"] = c.weight.exponent;
        w["center"] = c.dimension == 1 ? json::array({c.weight.center[0]})
                                        : json::array({c.weight.center[0], c.weight.center[1]});
    } else {
        w["value"] = c.weight.value;
    }
    j["weight"] = w;
    j["sweep"] = c.sweep;
    j["p"] = c.p;
    j["r"] = c.r;
    j["beta"] = c.beta;
    j["lambda_grid"] = grid_json(c.lambda_grid);
    j["rescalings"] = grid_json(c.rescalings);
    j["seeds"] = c.seeds;
    j["experiments"] = c.experiments;
    j["calibration"] = c.calibration == Calibration::minimal ? "minimal" : "doubling";
    j["refine"] = c.refine;
    j["output_dir"] = c.output_dir;
    j["threads"] = c.threads;
    return j;
}

RunConfig default_config(int dimension, int n) {
    RunConfig c;
    c.dimension = dimension;
    c.n = n;
    for (std::uint64_t s = 0; s < 20; ++s) c.seeds.push_back(s);
    return c;
}

std::string resolve_output_dir(const RunConfig& cfg) {
    if (const char* env = std::getenv("SPARSEDOM_OUTPUT_DIR"); env && *env) return env;
    return cfg.output_dir;
}

}  // namespace sparsedom
