#pragma once

#include <cstdint>
#include <string>

namespace wkg {

/** One JSON document drives every command; command-line flags override
 * individual fields.  Unknown keys are rejected up front. */
struct RunConfig {
    int grid_n = 32;
    double box_length = 50.26548245743669;  // 16*pi

    double eps = 0.01;
    std::string preset = "gaussian-kg";
    std::uint64_t seed = 1;

    // forward solver
    double dt = 0.05;
    double t_end = 50.0;
    int snapshot_stride = 20;
    bool dealiasing = true;
    double nonlinearity_scale = 1.0;

    // backward construction
    double t_max = 200.0;
    double cache_t_min = 0.25;
    int cache_per_octave = 4;
    int cache_refine = 1;
    double substep = 0.0625;
    double tol = 1e-8;
    int max_iter = 12;

    // norm evaluation
    int norm_cap = 1;

    // verify command
    std::size_t phase_samples = 200000;
    int oracle_grid_n = 8;
    bool break_bump = false;  // fault-injection hook

    int threads = 0;  // 0 = all cores
    std::string output_dir = "out";

    static RunConfig from_json_file(const std::string& path);
    static RunConfig from_json_text(const std::string& text);
    std::string to_json() const;

    void validate() const;
};

}  // namespace wkg
