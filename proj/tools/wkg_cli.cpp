// Batch front end: simulate | construct | verify | oracle | plotdata.
// Configuration comes from one JSON document; flags override single fields.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <string>

#include "wkg/errors.hpp"
#include "wkg/pipelines.hpp"
#include "wkg/run_config.hpp"

namespace {

struct Overrides {
    std::string config_path;
    double eps = -1.0, t_end = -1.0, t_max = -1.0, box_length = -1.0;
    int grid_n = 0, threads = -1, seed = -1, max_iter = 0;
    std::string preset, out;

    void add_common(CLI::App* cmd) {
        cmd->add_option("-c,--config", config_path, "JSON configuration file");
        cmd->add_option("--eps", eps, "data amplitude");
        cmd->add_option("--preset", preset, "data recipe (gaussian-kg, gaussian-both, two-mode)");
        cmd->add_option("--seed", seed, "data seed");
        cmd->add_option("--grid-n", grid_n, "points per axis");
        cmd->add_option("--box-length", box_length, "periodic box length");
        cmd->add_option("--t-end", t_end, "forward integration end time");
        cmd->add_option("--t-max", t_max, "backward horizon");
        cmd->add_option("--max-iter", max_iter, "fixed-point iteration cap");
        cmd->add_option("--threads", threads, "worker threads (0 = all cores)");
        cmd->add_option("-o,--out", out, "output directory");
    }

    wkg::RunConfig resolve() const {
        wkg::RunConfig cfg;
        if (!config_path.empty()) cfg = wkg::RunConfig::from_json_file(config_path);
        if (const char* env = std::getenv("WKG_OUTPUT_ROOT"); env && *env)
            cfg.output_dir = std::string(env) + "/" + cfg.output_dir;
        if (eps >= 0.0) cfg.eps = eps;
        if (!preset.empty()) cfg.preset = preset;
        if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
        if (grid_n > 0) cfg.grid_n = grid_n;
        if (box_length > 0.0) cfg.box_length = box_length;
        if (t_end > 0.0) cfg.t_end = t_end;
        if (t_max > 0.0) cfg.t_max = t_max;
        if (max_iter > 0) cfg.max_iter = max_iter;
        if (threads >= 0) cfg.threads = threads;
        if (!out.empty()) cfg.output_dir = out;
        cfg.validate();
        return cfg;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wave-Klein-Gordon scattering laboratory"};
    app.require_subcommand(1);

    Overrides ov;
    auto* sim = app.add_subcommand("simulate", "integrate the profile equations forward");
    auto* con = app.add_subcommand("construct", "build the modified wave operator backward");
    auto* ver = app.add_subcommand("verify", "run the cross-module property suite");
    auto* ora = app.add_subcommand("oracle", "brute-force bilinear comparisons only");
    for (auto* c : {sim, con, ver, ora}) ov.add_common(c);

    auto* plot = app.add_subcommand("plotdata", "emit tidy CSV series from run artifacts");
    std::string art_dir, which, plot_out = "plot.csv";
    plot->add_option("dir", art_dir, "artifact directory")->required();
    plot->add_option("which", which, "decay | residuals | contraction | shells")->required();
    plot->add_option("-o,--out", plot_out, "output CSV path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return wkg::cmd_simulate(ov.resolve());
        if (con->parsed()) return wkg::cmd_construct(ov.resolve());
        if (ver->parsed()) return wkg::cmd_verify(ov.resolve());
        if (ora->parsed()) return wkg::cmd_oracle(ov.resolve());
        if (plot->parsed()) return wkg::cmd_plotdata(art_dir, which, plot_out);
    } catch (const wkg::config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return wkg::kExitConfig;
    } catch (const wkg::blow_up_error& e) {
        std::fprintf(stderr, "blow-up: %s (last good t = %g)\n", e.what(), e.last_good_time);
        return wkg::kExitBlowUp;
    } catch (const wkg::non_contraction_error& e) {
        std::fprintf(stderr, "non-contraction: %s\n", e.what());
        return wkg::kExitNonContraction;
    } catch (const wkg::input_error& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return wkg::kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
