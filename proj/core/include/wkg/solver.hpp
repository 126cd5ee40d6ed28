#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wkg/bilinear.hpp"
#include "wkg/lp.hpp"
#include "wkg/states.hpp"

namespace wkg {

/** Time integration controls.  The unknowns are profiles, so the linear flow
 * is exact and the only scheme is classical RK4 on the nonlinear terms. */
struct SolverConfig {
    double dt = 0.05;
    double t_end = 1.0;
    int snapshot_stride = 20;
    bool dealiasing = true;
    double nonlinearity_scale = 1.0;
    double blow_up_threshold = 1e8;
};

struct DiagnosticsRow {
    std::string name;
    double value;
};

struct Trajectory {
    std::vector<double> times;                 // snapshot times
    std::vector<ProfileState> states;          // strided snapshots
    std::vector<std::vector<DiagnosticsRow>> diagnostics;  // one list per snapshot
};

// One classical RK4 step on d/dt V = rhs_profiles(V, t).
ProfileState step(const FftEngine& eng, const ProfileState& s, double dt,
                  const SolverConfig& cfg);

Trajectory solve_forward(const FftEngine& eng, const LittlewoodPaley& lp,
                         const ProfileState& init, const SolverConfig& cfg);

// sup|v|, sup|u|, H^N norms of the normalized solutions, per-shell L2 of the
// profiles.
std::vector<DiagnosticsRow> diagnostics(const FftEngine& eng, const LittlewoodPaley& lp,
                                        const ProfileState& s);

}  // namespace wkg
