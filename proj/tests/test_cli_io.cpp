#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "wkg/errors.hpp"
#include "wkg/pipelines.hpp"
#include "wkg/run_config.hpp"

using namespace wkg;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream is(p);
    REQUIRE(is.good());
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

RunConfig small_config(const std::string& out) {
    RunConfig cfg;
    cfg.grid_n = 12;
    cfg.box_length = 6.0 * 3.14159265358979323846;
    cfg.eps = 0.02;
    cfg.t_end = 3.0;
    cfg.dt = 0.05;
    cfg.snapshot_stride = 20;
    cfg.t_max = 12.0;
    cfg.phase_samples = 20000;
    cfg.oracle_grid_n = 8;
    cfg.output_dir = out;
    return cfg;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("config parsing: defaults, overrides, unknown keys, validation") {
    RunConfig def = RunConfig::from_json_text("{}");
    CHECK(def.grid_n == 32);
    CHECK(def.eps == 0.01);

    RunConfig c = RunConfig::from_json_text(R"({
        "grid": {"n": 16, "box_length": 25.0},
        "eps": 0.005,
        "data": {"preset": "two-mode", "seed": 9},
        "solver": {"dt": 0.025, "t_end": 10.0},
        "t_max": 50.0,
        "construct": {"tol": 1e-7, "max_iter": 6}
    })");
    CHECK(c.grid_n == 16);
    CHECK(c.preset == "two-mode");
    CHECK(c.seed == 9);
    CHECK(c.dt == 0.025);
    CHECK(c.tol == 1e-7);

    CHECK_THROWS_AS(RunConfig::from_json_text(R"({"grid": {"m": 16}})"), config_error);
    CHECK_THROWS_AS(RunConfig::from_json_text(R"({"grdi": {}})"), config_error);
    CHECK_THROWS_AS(RunConfig::from_json_text(R"({"solver": {"dt": 0.5}})"), config_error);
    CHECK_THROWS_AS(RunConfig::from_json_text(R"({"grid": {"n": 13}})"), config_error);
    CHECK_THROWS_AS(RunConfig::from_json_text("not json"), config_error);

    // round trip through the serialized form
    RunConfig back = RunConfig::from_json_text(c.to_json());
    CHECK(back.grid_n == c.grid_n);
    CHECK(back.t_max == c.t_max);
}

TEST_CASE("simulate: artifacts, determinism, zero data") {
    TempDir dir("wkg_sim_test");
    RunConfig cfg = small_config((dir.path / "a").string());
    CHECK(cmd_simulate(cfg) == kExitOk);
    CHECK(fs::exists(dir.path / "a" / "manifest.json"));
    CHECK(fs::exists(dir.path / "a" / "diagnostics.csv"));
    CHECK(fs::exists(dir.path / "a" / "snapshot_kg_0000.wkgs"));

    // identical config and seed give byte-identical artifacts
    RunConfig cfg2 = small_config((dir.path / "b").string());
    CHECK(cmd_simulate(cfg2) == kExitOk);
    CHECK(slurp(dir.path / "a" / "diagnostics.csv") == slurp(dir.path / "b" / "diagnostics.csv"));

    // eps = 0 runs and reports all-zero diagnostics
    RunConfig zero = small_config((dir.path / "z").string());
    zero.eps = 0.0;
    CHECK(cmd_simulate(zero) == kExitOk);
    std::string csv = slurp(dir.path / "z" / "diagnostics.csv");
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line);
    while (std::getline(is, line)) {
        auto last = line.rfind(',');
        CHECK(std::stod(line.substr(last + 1)) == 0.0);
    }
}

TEST_CASE("construct: artifacts and exit codes") {
    TempDir dir("wkg_con_test");
    RunConfig cfg = small_config((dir.path / "c").string());
    CHECK(cmd_construct(cfg) == kExitOk);
    for (const char* f : {"manifest.json", "contraction.csv", "residuals.csv", "norms.json"})
        CHECK(fs::exists(dir.path / "c" / f));
    CHECK(fs::exists(dir.path / "c" / "cache" / "cache_manifest.json"));
    CHECK(fs::exists(dir.path / "c" / "cache" / "h_0000.wkgs"));
    CHECK(fs::exists(dir.path / "c" / "cache" / "B_0000.wkgs"));

    std::string man = slurp(dir.path / "c" / "manifest.json");
    CHECK(man.find("\"status\": \"converged\"") != std::string::npos);

    // an unreachable tolerance within one iteration exits with the
    // non-contraction code
    RunConfig hard = small_config((dir.path / "d").string());
    hard.tol = 1e-30;
    hard.max_iter = 1;
    CHECK(cmd_construct(hard) == kExitNonContraction);

    // trivial fixed point at zero amplitude
    RunConfig zero = small_config((dir.path / "e").string());
    zero.eps = 0.0;
    CHECK(cmd_construct(zero) == kExitOk);
}

TEST_CASE("plotdata emits the documented series") {
    TempDir dir("wkg_plot_test");
    RunConfig cfg = small_config((dir.path / "c").string());
    REQUIRE(cmd_construct(cfg) == kExitOk);
    RunConfig sim = small_config((dir.path / "s").string());
    REQUIRE(cmd_simulate(sim) == kExitOk);

    std::string out = (dir.path / "p.csv").string();
    CHECK(cmd_plotdata((dir.path / "c").string(), "residuals", out) == kExitOk);
    {
        std::string csv = slurp(out);
        CHECK(csv.rfind("t,r_wa,r_kg,r_kg_uncorrected\n", 0) == 0);
    }
    CHECK(cmd_plotdata((dir.path / "c").string(), "contraction", out) == kExitOk);
    CHECK(slurp(out).rfind("iter,ratio\n", 0) == 0);
    CHECK(cmd_plotdata((dir.path / "s").string(), "decay", out) == kExitOk);
    {
        std::string csv = slurp(out);
        CHECK(csv.rfind("t,sup_v,sup_u\n", 0) == 0);
        CHECK(csv.find("fit_exponent") != std::string::npos);
    }
    CHECK(cmd_plotdata((dir.path / "s").string(), "shells", out) == kExitOk);
    CHECK(slurp(out).rfind("t,series,value\n", 0) == 0);

    CHECK_THROWS_AS(cmd_plotdata((dir.path / "s").string(), "nope", out), config_error);
    CHECK_THROWS_AS(cmd_plotdata((dir.path / "missing").string(), "decay", out), input_error);
}

TEST_CASE("oracle command compares engine and brute force") {
    TempDir dir("wkg_oracle_test");
    RunConfig cfg = small_config((dir.path / "o").string());
    CHECK(cmd_oracle(cfg) == kExitOk);
    std::string csv = slurp(dir.path / "o" / "oracle.csv");
    CHECK(csv.rfind("kind,s1,s2,seed,rel_err\n", 0) == 0);
    // 8 cases x 20 seeds plus the header
    std::size_t rows = std::count(csv.begin(), csv.end(), '\n');
    CHECK(rows == 161);
}

TEST_CASE("verify: pass by default, fail under the broken-bump hook") {
    TempDir dir("wkg_verify_test");
    RunConfig cfg = small_config((dir.path / "v").string());
    CHECK(cmd_verify(cfg) == kExitOk);
    std::string rep = slurp(dir.path / "v" / "verify.json");
    CHECK(rep.find("\"all_pass\": true") != std::string::npos);

    RunConfig broken = small_config((dir.path / "w").string());
    broken.break_bump = true;
    CHECK(cmd_verify(broken) == kExitVerifyFail);
    std::string rep2 = slurp(dir.path / "w" / "verify.json");
    CHECK(rep2.find("\"all_pass\": false") != std::string::npos);
    CHECK(rep2.find("lp_sum_pk_identity") != std::string::npos);
}
