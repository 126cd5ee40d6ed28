#include "wkg/run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "wkg/errors.hpp"

namespace wkg {

namespace {

using json = nlohmann::ordered_json;

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
    for (const auto& [key, _] : j.items())
        if (!known.count(key))
            throw config_error("unknown config key '" + key + "' in " + where);
}

}  // namespace

RunConfig RunConfig::from_json_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw config_error("cannot open config file " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return from_json_text(ss.str());
}

RunConfig RunConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw config_error(std::string("config is not valid JSON: ") + e.what());
    }
    RunConfig c;
    reject_unknown(j, {"grid", "eps", "data", "solver", "t_max", "cache", "construct",
                       "norms", "verify", "threads", "output_dir", "test_hooks"},
                   "the top level");
    if (j.contains("grid")) {
        reject_unknown(j["grid"], {"n", "box_length"}, "grid");
        c.grid_n = j["grid"].value("n", c.grid_n);
        c.box_length = j["grid"].value("box_length", c.box_length);
    }
    c.eps = j.value("eps", c.eps);
    if (j.contains("data")) {
        reject_unknown(j["data"], {"preset", "seed"}, "data");
        c.preset = j["data"].value("preset", c.preset);
        c.seed = j["data"].value("seed", c.seed);
    }
    if (j.contains("solver")) {
        reject_unknown(j["solver"],
                       {"dt", "t_end", "snapshot_stride", "dealiasing", "nonlinearity_scale"},
                       "solver");
        c.dt = j["solver"].value("dt", c.dt);
        c.t_end = j["solver"].value("t_end", c.t_end);
        c.snapshot_stride = j["solver"].value("snapshot_stride", c.snapshot_stride);
        c.dealiasing = j["solver"].value("dealiasing", c.dealiasing);
        c.nonlinearity_scale = j["solver"].value("nonlinearity_scale", c.nonlinearity_scale);
    }
    c.t_max = j.value("t_max", c.t_max);
    if (j.contains("cache")) {
        reject_unknown(j["cache"], {"t_min", "per_octave", "refine", "substep"}, "cache");
        c.cache_t_min = j["cache"].value("t_min", c.cache_t_min);
        c.cache_per_octave = j["cache"].value("per_octave", c.cache_per_octave);
        c.cache_refine = j["cache"].value("refine", c.cache_refine);
        c.substep = j["cache"].value("substep", c.substep);
    }
    if (j.contains("construct")) {
        reject_unknown(j["construct"], {"tol", "max_iter"}, "construct");
        c.tol = j["construct"].value("tol", c.tol);
        c.max_iter = j["construct"].value("max_iter", c.max_iter);
    }
    if (j.contains("norms")) {
        reject_unknown(j["norms"], {"cap"}, "norms");
        c.norm_cap = j["norms"].value("cap", c.norm_cap);
    }
    if (j.contains("verify")) {
        reject_unknown(j["verify"], {"phase_samples", "oracle_grid_n"}, "verify");
        c.phase_samples = j["verify"].value("phase_samples", c.phase_samples);
        c.oracle_grid_n = j["verify"].value("oracle_grid_n", c.oracle_grid_n);
    }
    if (j.contains("test_hooks")) {
        reject_unknown(j["test_hooks"], {"break_bump"}, "test_hooks");
        c.break_bump = j["test_hooks"].value("break_bump", c.break_bump);
    }
    c.threads = j.value("threads", c.threads);
    c.output_dir = j.value("output_dir", c.output_dir);
    c.validate();
    return c;
}

std::string RunConfig::to_json() const {
    json j;
    j["grid"] = {{"n", grid_n}, {"box_length", box_length}};
    j["eps"] = eps;
    j["data"] = {{"preset", preset}, {"seed", seed}};
    j["solver"] = {{"dt", dt},
                   {"t_end", t_end},
                   {"snapshot_stride", snapshot_stride},
                   {"dealiasing", dealiasing},
                   {"nonlinearity_scale", nonlinearity_scale}};
    j["t_max"] = t_max;
    j["cache"] = {{"t_min", cache_t_min},
                  {"per_octave", cache_per_octave},
                  {"refine", cache_refine},
                  {"substep", substep}};
    j["construct"] = {{"tol", tol}, {"max_iter", max_iter}};
    j["norms"] = {{"cap", norm_cap}};
    j["verify"] = {{"phase_samples", phase_samples}, {"oracle_grid_n", oracle_grid_n}};
    j["threads"] = threads;
    j["output_dir"] = output_dir;
    return j.dump(2);
}

void RunConfig::validate() const {
    if (grid_n < 8 || grid_n % 2 != 0) throw config_error("grid.n must be even and >= 8");
    if (!(box_length > 0.0)) throw config_error("grid.box_length must be positive");
    if (!(eps >= 0.0)) throw config_error("eps must be >= 0");
    if (!(dt > 0.0) || dt > 0.1) throw config_error("solver.dt must lie in (0, 0.1]");
    if (!(t_end > 0.0)) throw config_error("solver.t_end must be positive");
    if (snapshot_stride < 1) throw config_error("solver.snapshot_stride must be >= 1");
    if (!(t_max > cache_t_min)) throw config_error("t_max must exceed cache.t_min");
    if (cache_per_octave < 1 || cache_refine < 1)
        throw config_error("cache.per_octave and cache.refine must be >= 1");
    if (!(substep > 0.0)) throw config_error("cache.substep must be positive");
    if (!(tol > 0.0)) throw config_error("construct.tol must be positive");
    if (max_iter < 1) throw config_error("construct.max_iter must be >= 1");
    if (norm_cap < 0 || norm_cap > 2) throw config_error("norms.cap must be 0, 1 or 2");
    if (oracle_grid_n > 12) throw config_error("verify.oracle_grid_n is capped at 12");
    if (threads < 0) throw config_error("threads must be >= 0");
    if (output_dir.empty()) throw config_error("output_dir must not be empty");
}

}  // namespace wkg
