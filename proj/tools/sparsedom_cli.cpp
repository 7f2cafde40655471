// sparsedom: run experiment configs, certify family files, list suites.
// Exit codes: 0 success, 1 config/parse/runtime error, 2 assertion failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "sparsedom/config.hpp"
#include "sparsedom/experiments.hpp"
#include "sparsedom/family_io.hpp"
#include "sparsedom/parallel.hpp"
#include "sparsedom/sparse.hpp"

using namespace sparsedom;

namespace {

void print_suites() {
    for (const auto& s : suites()) std::printf("%-18s %s\n", s.name.c_str(), s.summary.c_str());
}

int run(const std::string& path) {
    RunConfig cfg;
    try {
        cfg = load_config(path);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    }
    set_thread_count(cfg.threads);
    const std::string dir = resolve_output_dir(cfg);
    nlohmann::json summary = {{"config", to_json(cfg)}, {"experiments", nlohmann::json::array()}};
    bool all_pass = true;
    try {
        std::filesystem::create_directories(dir);
        for (const auto& name : cfg.experiments) {
            const ExperimentReport rep = run_suite(name, cfg);
            write_report(dir, rep);
            all_pass = all_pass && rep.passed();
            std::printf("%-18s %s  (%.1f s)\n", name.c_str(), rep.passed() ? "PASS" : "FAIL", rep.wall_seconds);
            for (const auto& c : rep.checks) {
                if (!c.pass) std::printf("    failed: %s %s\n", c.name.c_str(), c.detail.c_str());
            }
            summary["experiments"].push_back({{"experiment", name}, {"passed", rep.passed()}});
        }
        std::ofstream(std::filesystem::path(dir) / "summary.json") << summary.dump(2) << '\n';
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return all_pass ? 0 : 2;
}

int certify(const std::string& path, const std::string& eta_text, bool exact) {
    ParsedFamily pf;
    Density eta;
    try {
        pf = load_family(path);
        eta = Density::parse(eta_text);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    const auto& fam = pf.family;
    const auto greedy = certify_greedy(fam.cubes, eta, fam.dim);
    if (greedy.ok) {
        std::printf("certified: %zu cubes, eta = %s (greedy)\n", fam.cubes.size(), eta.str().c_str());
        return 0;
    }
    if (pf.has_certificate) {
        SparseFamily stored = fam;
        stored.eta = eta;
        const auto check = verify_certificate(stored);
        if (check.ok) {
            std::printf("certified: %zu cubes, eta = %s (stored certificate)\n", fam.cubes.size(), eta.str().c_str());
            return 0;
        }
    }
    if (exact) {
        const auto matched = certify_matching(fam.cubes, eta, fam.dim);
        if (matched.ok) {
            std::printf("certified: %zu cubes, eta = %s (matching)\n", fam.cubes.size(), eta.str().c_str());
            return 0;
        }
    }
    const std::size_t bad = greedy.violating.value_or(0);
    std::printf("not certified at eta = %s: cube %zu %s (%s)\n", eta.str().c_str(), bad,
                bad < fam.cubes.size() ? fam.cubes[bad].str().c_str() : "?", greedy.message.c_str());
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse domination toolkit for compositions of rough singular integrals"};
    app.require_subcommand(0, 1);
    bool list_flag = false;
    app.add_flag("--list-suites", list_flag, "List the verify suites and exit");

    std::string config_path;
    auto* run_cmd = app.add_subcommand("run", "Run the experiments listed in a JSON config");
    run_cmd->add_option("config", config_path, "Config file")->required();

    std::string family_path, eta_text;
    bool exact = false;
    auto* cert_cmd = app.add_subcommand("certify", "Certify sparsity of a family file");
    cert_cmd->add_option("family", family_path, "Family file")->required();
    cert_cmd->add_option("--eta", eta_text, "Sparsity constant, e.g. 1/2 or 0.5")->required();
    cert_cmd->add_flag("--exact", exact, "Fall back to an exact cell matching when the greedy certificate fails");

    auto* list_cmd = app.add_subcommand("list-suites", "List the verify suites");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    if (list_flag || list_cmd->parsed()) {
        print_suites();
        return 0;
    }
    if (run_cmd->parsed()) return run(config_path);
    if (cert_cmd->parsed()) return certify(family_path, eta_text, exact);
    std::cout << app.help();
    return 1;
}
