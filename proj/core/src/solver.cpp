#include "wkg/solver.hpp"

#include <cmath>

#include "wkg/errors.hpp"

namespace wkg {

namespace {

void check_finite(const ProfileState& s, double threshold, double last_good) {
    for (const SpectralField* f : {&s.Vwa, &s.Vkg})
        for (const auto& z : f->v)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) ||
                std::abs(z) > threshold)
                throw blow_up_error("solution exceeded the blow-up threshold", last_good);
}

}  // namespace

ProfileState step(const FftEngine& eng, const ProfileState& s, double dt,
                  const SolverConfig& cfg) {
    // negative steps are allowed (the profile equations run backward too);
    // the magnitude guard keeps the scheme in its accuracy regime
    if (dt == 0.0 || std::abs(dt) > 0.1)
        throw config_error("solver |dt| must lie in (0, 0.1] at the supported grids");
    auto rhs = [&](const ProfileState& y) {
        return rhs_profiles(eng, y, cfg.dealiasing, cfg.nonlinearity_scale);
    };
    auto advanced = [&](const ProfileState& base, const ProfileRhs& k, double h) {
        ProfileState y = base;
        y.t = s.t + h;
        axpy(h, k.wa, y.Vwa);
        axpy(h, k.kg, y.Vkg);
        return y;
    };

    ProfileRhs k1 = rhs(s);
    ProfileState s2 = advanced(s, k1, 0.5 * dt);
    ProfileRhs k2 = rhs(s2);
    ProfileState s3 = advanced(s, k2, 0.5 * dt);
    ProfileRhs k3 = rhs(s3);
    ProfileState s4 = advanced(s, k3, dt);
    ProfileRhs k4 = rhs(s4);

    ProfileState out = s;
    out.t = s.t + dt;
    double w = dt / 6.0;
    for (std::size_t i = 0; i < out.Vwa.size(); ++i) {
        out.Vwa[i] += w * (k1.wa[i] + 2.0 * k2.wa[i] + 2.0 * k3.wa[i] + k4.wa[i]);
        out.Vkg[i] += w * (k1.kg[i] + 2.0 * k2.kg[i] + 2.0 * k3.kg[i] + k4.kg[i]);
    }
    check_finite(out, cfg.blow_up_threshold, s.t);
    return out;
}

Trajectory solve_forward(const FftEngine& eng, const LittlewoodPaley& lp,
                         const ProfileState& init, const SolverConfig& cfg) {
    if (!(cfg.t_end > init.t)) throw config_error("solve_forward: t_end must exceed the initial time");
    Trajectory traj;
    auto record = [&](const ProfileState& s) {
        traj.times.push_back(s.t);
        traj.states.push_back(s);
        traj.diagnostics.push_back(diagnostics(eng, lp, s));
    };
    ProfileState cur = init;
    record(cur);
    long step_index = 0;
    while (cur.t + 0.5 * cfg.dt < cfg.t_end) {
        cur = step(eng, cur, cfg.dt, cfg);
        ++step_index;
        if (step_index % cfg.snapshot_stride == 0 || !(cur.t + 0.5 * cfg.dt < cfg.t_end))
            record(cur);
    }
    return traj;
}

std::vector<DiagnosticsRow> diagnostics(const FftEngine& eng, const LittlewoodPaley& lp,
                                        const ProfileState& s) {
    std::vector<DiagnosticsRow> rows;
    NormalizedState u = from_profile(s);
    PhysicalState phys = recover(eng, u);
    rows.push_back({"sup_v", sup_norm(phys.v)});
    rows.push_back({"sup_u", sup_norm(phys.u)});

    const auto& g = *s.Vwa.grid;
    for (int N : {0, 2, 40}) {
        double acc_wa = 0.0, acc_kg = 0.0;
        for (std::size_t i = 0; i < u.Uwa.size(); ++i) {
            double w = std::pow(1.0 + dot3(g.xi(i), g.xi(i)), N);
            acc_wa += w * std::norm(u.Uwa[i]);
            acc_kg += w * std::norm(u.Ukg[i]);
        }
        double m = g.freq_spacing();
        rows.push_back({"h" + std::to_string(N) + "_Uwa", std::sqrt(acc_wa * m * m * m)});
        rows.push_back({"h" + std::to_string(N) + "_Ukg", std::sqrt(acc_kg * m * m * m)});
    }
    for (int k = lp.k_min(); k <= lp.k_max(); ++k) {
        rows.push_back({"shell_wa_k" + std::to_string(k), l2_norm(lp.project_pk(s.Vwa, k))});
        rows.push_back({"shell_kg_k" + std::to_string(k), l2_norm(lp.project_pk(s.Vkg, k))});
    }
    return rows;
}

}  // namespace wkg
