#include <doctest.h>

#include <stdexcept>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "sparsedom/ensemble.hpp"
#include "sparsedom/family_io.hpp"
#include "sparsedom/sparse.hpp"

using namespace sparsedom;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code = -1;
    std::string out;
};

Outcome run_cli(const std::string& args, const fs::path& dir) {
    const fs::path log = dir / "cli.log";
    const std::string cmd = std::string(SPARSEDOM_CLI) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    Outcome o;
    o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(log);
    std::stringstream ss;
    ss << in.rdbuf();
    o.out = ss.str();
    return o;
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("sparsedom-test-" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("certify command") {
    const fs::path dir = scratch("certify");
    const std::string data = SPARSEDOM_TEST_DATA;
    auto o = run_cli("certify " + data + "/singleton.fam --eta 1", dir);
    CHECK(o.code == 0);
    o = run_cli("certify " + data + "/nested_pair.fam --eta 0.6", dir);
    CHECK(o.code == 2);
    CHECK(o.out.find("cube 0") != std::string::npos);
    o = run_cli("certify " + data + "/nested_pair.fam --eta 0.5", dir);
    CHECK(o.code == 0);
    o = run_cli("certify " + data + "/nested_pair.fam --eta 0.6 --exact", dir);
    CHECK(o.code == 0);
    o = run_cli("certify " + data + "/malformed.fam --eta 0.5", dir);
    CHECK(o.code == 1);
    CHECK(o.out.find("line 5") != std::string::npos);
    o = run_cli("certify " + data + "/singleton.fam", dir);
    CHECK(o.code == 1);
}

TEST_CASE("certify accepts decomposition output at the global density") {
    const fs::path dir = scratch("engine");
    for (int dim : {1, 2}) {
        const Domain dom = Domain::centered(dim, 1.0, dim == 1 ? 6 : 4);
        const KernelOmega om = riesz_kernel(dim);
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            const auto split = split_composition(om, om, make_f(dom, seed), 1.25);
            const fs::path fam = dir / ("family" + std::to_string(dim) + "_" + std::to_string(seed) + ".fam");
            save_family(fam.string(), split.decomposition.family, dom.depth());
            const auto o = run_cli("certify " + fam.string() + " --eta " + global_density(dim).str(), dir);
            CHECK(o.code == 0);
        }
    }
}

TEST_CASE("run command") {
    const fs::path dir = scratch("run");
    const fs::path out = dir / "out";
    write(dir / "smoke.json", R"({"dimension": 1, "N": 64,
        "kernels": [{"kind": "hilbert"}, {"kind": "hilbert"}],
        "experiments": ["reconstruction"], "output_dir": ")" + out.string() + R"("})");
    const auto t0 = std::chrono::steady_clock::now();
    auto o = run_cli("run " + (dir / "smoke.json").string(), dir);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(o.code == 0);
    CHECK(secs < 10.0);
    REQUIRE(fs::exists(out / "reconstruction.csv"));
    CHECK(fs::exists(out / "reconstruction.json"));
    CHECK(fs::exists(out / "summary.json"));
    CHECK(slurp(out / "reconstruction.json").find("\"config\"") != std::string::npos);
    const std::string first = slurp(out / "reconstruction.csv");
    CHECK(first.rfind("case_id,seed,N,p,r,a_exponent,ratio,fitted_C,verdict", 0) == 0);

    // identical config, identical CSV bytes, also under the env override
    const fs::path other = dir / "other";
    setenv("SPARSEDOM_OUTPUT_DIR", other.string().c_str(), 1);
    o = run_cli("run " + (dir / "smoke.json").string(), dir);
    unsetenv("SPARSEDOM_OUTPUT_DIR");
    CHECK(o.code == 0);
    CHECK(slurp(other / "reconstruction.csv") == first);

    write(dir / "empty.json", R"({"experiments": [], "output_dir": ")" + (dir / "empty").string() + R"("})");
    CHECK(run_cli("run " + (dir / "empty.json").string(), dir).code == 0);

    write(dir / "bad_r.json", R"({"r": 1.6, "experiments": ["reconstruction"]})");
    o = run_cli("run " + (dir / "bad_r.json").string(), dir);
    CHECK(o.code == 1);
    CHECK(o.out.find("r outside (1, 3/2]") != std::string::npos);

    write(dir / "broken.json", "{\n  \"N\": 64,\n  ]\n");
    o = run_cli("run " + (dir / "broken.json").string(), dir);
    CHECK(o.code == 1);
    CHECK(o.out.find("line 3") != std::string::npos);

    CHECK(run_cli("run " + (dir / "missing.json").string(), dir).code == 1);
    CHECK(run_cli("--bogus-flag", dir).code == 1);
}

TEST_CASE("suite listing") {
    const fs::path dir = scratch("list");
    const auto a = run_cli("list-suites", dir);
    const auto b = run_cli("--list-suites", dir);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("reconstruction") != std::string::npos);
    CHECK(a.out.find("sparse_domination") != std::string::npos);
}
