// Runs the twelve acceptance criteria and prints one PASS/FAIL line per criterion.
// Usage: acceptance [output dir]. Exit 0 iff every criterion passes.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "sparsedom/config.hpp"
#include "sparsedom/experiments.hpp"
#include "sparsedom/report.hpp"

using namespace sparsedom;

namespace {

constexpr double reconstruction_budget_s = 120.0;
constexpr double d1_budget_s = 300.0;
constexpr double total_budget_s = 1200.0;

std::string out_dir = "acceptance-out";
double d1_seconds = 0.0;
double d2_seconds = 0.0;

RunConfig config(int dim, int n, int seeds) {
    RunConfig c = default_config(dim, n);
    c.seeds.clear();
    for (int s = 0; s < seeds; ++s) c.seeds.push_back(std::uint64_t(s));
    return c;
}

ExperimentReport run(const std::string& suite, const RunConfig& cfg) {
    const ExperimentReport rep = run_suite(suite, cfg);
    const std::string label = suite + "_d" + std::to_string(cfg.dimension) + "_N" + std::to_string(cfg.n);
    ExperimentReport named = rep;
    named.id = label;
    write_report(out_dir, named);
    (cfg.dimension == 1 ? d1_seconds : d2_seconds) += rep.wall_seconds;
    std::printf("  %-34s %s  %.1f s\n", label.c_str(), rep.passed() ? "pass" : "FAIL", rep.wall_seconds);
    for (const auto& c : rep.checks)
        if (!c.pass) std::printf("      failed: %s %s\n", c.name.c_str(), c.detail.c_str());
    std::fflush(stdout);
    return rep;
}

struct Line {
    int id;
    std::string name;
    bool pass;
    std::string detail;
};

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) out_dir = argv[1];
    std::filesystem::create_directories(out_dir);
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<Line> lines;

    const RunConfig d1 = config(1, 128, 20);
    const RunConfig d2 = config(2, 64, 5);

    {
        const auto a = run("reconstruction", d1);
        const auto b = run("reconstruction", d2);
        const double t = a.wall_seconds + b.wall_seconds;
        lines.push_back({1, "reconstruction H1 + H2 = T1 T2 f", a.passed() && b.passed() && t <= reconstruction_budget_s,
                         "worst d=1 " + num(a.max_ratio) + ", d=2 " + num(b.max_ratio) + ", " + num(t) + " s"});
    }
    {
        const auto a = run("sparsity", d1);
        const auto b = run("sparsity", d2);
        lines.push_back({2, "sparsity certificates", a.passed() && b.passed(), "global and per-tree, d = 1 and 2"});
    }
    {
        const auto a = run("cz_sandwich", d1);
        const auto b = run("cz_sandwich", d2);
        lines.push_back({3, "Calderon-Zygmund sandwich", a.passed() && b.passed(), ""});
    }
    {
        const auto a = run("rubio_de_francia", d1);
        lines.push_back({4, "Rubio de Francia R >= h, ||R|| <= 2||h||", a.passed(),
                         std::to_string(a.rows.size()) + " cases, max norm ratio " + num(a.max_ratio)});
    }
    {
        RunConfig c = config(1, 256, 1);
        c.sweep = {-0.5, 0.0, 0.5, 1.0};
        const auto a = run("reverse_holder", c);
        lines.push_back({5, "reverse Hoelder inequality", a.passed(), "d=1 N=256"});
    }
    {
        const auto a = run("orlicz", config(1, 128, 5));
        const auto b = run("orlicz", config(2, 32, 5));
        lines.push_back({6, "Luxemburg norm identities", a.passed() && b.passed(), ""});
    }
    {
        const auto a = run("quadrature", config(1, 256, 1));
        lines.push_back({7, "quadrature against the spectral oracle", a.passed(),
                         "rel L2 error " + num(a.max_ratio) + " at N=256"});
    }
    {
        const auto a = run("sparse_domination", config(1, 64, 20));
        lines.push_back({8, "sparse domination ratios", a.passed(),
                         "stability " + num(a.fitted.value("max_ratio1_stability", 0.0)) + ", " +
                             num(a.fitted.value("max_ratio2_stability", 0.0))});
    }
    {
        const auto a = run("weak_type", config(1, 64, 20));
        lines.push_back({9, "weak-type modular ratios", a.passed(), ""});
    }
    {
        RunConfig c = config(1, 128, 1);
        c.sweep = {-0.5, 0.0, 0.5, 1.0};
        const auto a = run("formulas", c);
        lines.push_back({10, "bound formulas", a.passed(), ""});
    }
    {
        const auto a = run("sparse_form_eps", config(1, 64, 20));
        lines.push_back({11, "eps-indexed sparse form constant", a.passed(),
                         "stability " + num(a.fitted.value("fitted_C_stability", 0.0))});
    }
    // The remaining suites count toward the time budget only.
    for (const char* s : {"strong_type", "weighted_maximal", "local_average", "composite_grand_maximal"}) run(s, config(1, 64, 20));
    // d = 2 runs of the other suites are informational: their criteria are stated for d = 1.
    std::vector<std::string> d2_failures;
    for (const char* s : {"rubio_de_francia", "reverse_holder", "quadrature", "sparse_domination", "weak_type",
                          "formulas", "sparse_form_eps", "strong_type", "weighted_maximal", "local_average", "composite_grand_maximal"}) {
        if (!run(s, config(2, 32, 5)).passed()) d2_failures.push_back(s);
    }
    {
        const double total = d1_seconds + d2_seconds;
        lines.push_back({12, "wall time", d1_seconds <= d1_budget_s && total <= total_budget_s,
                         "d=1 " + num(d1_seconds) + " s (<= 300), with d=2 " + num(total) + " s (<= 1200)"});
    }

    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("\n");
    bool all = true;
    for (const auto& l : lines) {
        all = all && l.pass;
        std::printf("criterion %2d  %-4s  %s%s%s\n", l.id, l.pass ? "PASS" : "FAIL", l.name.c_str(),
                    l.detail.empty() ? "" : ": ", l.detail.c_str());
    }
    if (!d2_failures.empty()) {
        std::printf("\ninfo: d=2 N=32 suites outside the criteria that fail:");
        for (const auto& f : d2_failures) std::printf(" %s", f.c_str());
        std::printf("\n");
    }
    std::printf("\n%s in %.1f s; reports in %s\n", all ? "all criteria pass" : "some criteria FAIL", elapsed,
                out_dir.c_str());
    return all ? 0 : 1;
}
