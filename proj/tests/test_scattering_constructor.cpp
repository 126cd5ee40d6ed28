#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wkg/errors.hpp"
#include "wkg/solver.hpp"
#include "wkg/wave_operator.hpp"

using namespace wkg;

namespace {
constexpr double pi = std::numbers::pi;

struct Bench {
    GridPtr grid;
    FftEngine eng;
    ScatteringData data;
    CacheTimeGrid tg;

    Bench(int n, double Lfac, double eps, double t_max, std::uint64_t seed = 3)
        : grid(make_grid(n, Lfac * pi)),
          eng(grid),
          data(make_preset(grid, "gaussian-both", eps, seed)),
          tg(CacheTimeGrid::geometric(t_max, 0.25, 4)) {}
};
}  // namespace

TEST_CASE("the map sends zero data and zero perturbation to zero") {
    Bench b(12, 6.0, 0.0, 20.0);
    for (auto& z : b.data.Vwa_inf.v) z = 0.0;
    for (auto& z : b.data.Vkg_inf.v) z = 0.0;
    ResonantCache cache = ResonantCache::build(b.eng, b.data, b.tg);
    PerturbationPair G = PerturbationPair::zeros(cache);
    PerturbationPair out = apply_T(b.eng, cache, G);
    for (std::size_t i = 0; i < out.size(); ++i) {
        CHECK(l2_norm(out.Gwa[i]) == 0.0);
        CHECK(l2_norm(out.Gkg[i]) == 0.0);
    }

    FixedPointResult fp = iterate_to_fixed_point(b.eng, cache, 1e-8, 4);
    CHECK(fp.log.status == ContractionLog::Status::converged);
    CHECK(fp.log.iterations == 1);
    CHECK(fp.log.final_residual == 0.0);
}

TEST_CASE("output final data vanish bitwise") {
    Bench b(12, 6.0, 0.03, 20.0);
    ResonantCache cache = ResonantCache::build(b.eng, b.data, b.tg);
    PerturbationPair G = PerturbationPair::zeros(cache);
    // even from a nonzero perturbation the final data stay exactly zero
    for (auto& f : G.Gkg.back().v) f = 0.0;
    G.Gkg[2][5] = cplx(1e-3, 2e-3);
    PerturbationPair out = apply_T(b.eng, cache, G);
    for (const auto& z : out.Gwa.back().v) CHECK(z == cplx(0.0));
    for (const auto& z : out.Gkg.back().v) CHECK(z == cplx(0.0));
}

TEST_CASE("time-grid mismatch is rejected") {
    Bench b(12, 6.0, 0.03, 20.0);
    ResonantCache cache = ResonantCache::build(b.eng, b.data, b.tg);
    PerturbationPair G = PerturbationPair::zeros(cache);
    G.Gwa.pop_back();
    G.Gkg.pop_back();
    CHECK_THROWS_AS(apply_T(b.eng, cache, G), config_error);
}

TEST_CASE("derivative of the map matches the differential form to quadrature order") {
    // The interpolated data terms are second-order accurate at panel
    // midpoints, so the ladder anchors the probe there.  The non-resonant
    // pass is disabled for the order fit: at a truncated horizon its
    // differential-form cancellation holds only to tail order (measured
    // separately below), which would otherwise floor the ladder.
    const double h = 0.0002;  // small enough that the h^2 FD floor sits
                              // below the finest quadrature error
    const std::vector<double> probes = {1.3, 2.1, 3.0, 4.4, 6.8};
    auto mismatch_at = [&](int ppo, bool nonres) {
        Bench b(12, 6.0, 0.05, 20.0);
        CacheTimeGrid tg = CacheTimeGrid::geometric(20.0, 0.25, ppo);
        CacheOptions copts;
        copts.build_nonresonant = nonres;
        ResonantCache cache = ResonantCache::build(b.eng, b.data, tg, copts);
        PerturbationPair G = iterate_to_fixed_point(b.eng, cache, 1e-10, 3).G;

        const auto& ts = cache.time_grid().times;
        std::vector<double> t0s, extras;
        for (double p : probes) {
            std::size_t ip = cache.panel_below(p);
            double t0 = 0.5 * (ts[ip] + ts[ip + 1]);
            t0s.push_back(t0);
            extras.insert(extras.end(), {t0 - h, t0, t0 + h});
        }
        std::map<double, std::pair<SpectralField, SpectralField>> vals;
        TOptions opts;
        apply_T_values(b.eng, cache, G, opts, extras, vals);

        // L2 mismatch: the few modes mid-death under the moving cutoff carry
        // locally large curvature and would dominate a sup norm
        double mean = 0.0;
        for (double t0 : t0s) {
            const auto& lo = vals.at(t0 - h);
            const auto& hi = vals.at(t0 + h);
            auto [dwa, dkg] = T_derivative(b.eng, cache, G, t0, opts);
            double m2 = 0.0;
            for (std::size_t f = 0; f < dwa.size(); ++f) {
                cplx fd_wa = (hi.first[f] - lo.first[f]) / (2.0 * h);
                cplx fd_kg = (hi.second[f] - lo.second[f]) / (2.0 * h);
                m2 += std::norm(fd_wa - dwa[f]) + std::norm(fd_kg - dkg[f]);
            }
            mean += std::sqrt(m2);
        }
        return mean / static_cast<double>(t0s.size());
    };

    // the observed order fluctuates per halving as the panel layout shifts
    // under the probe, so the order is fitted across the whole ladder
    std::vector<double> ppos = {4, 8, 16, 32, 64}, mism;
    for (double ppo : ppos) mism.push_back(mismatch_at(static_cast<int>(ppo), false));
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < ppos.size(); ++i) {
        double x = std::log2(ppos[i]), y = std::log2(mism[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    double n = static_cast<double>(ppos.size());
    double order = -(n * sxy - sx * sy) / (n * sxx - sx * sx);
    MESSAGE("quadrature-order fit: ", order, "  (", mism.front(), " -> ", mism.back(), ")");
    CHECK(order >= 1.9);

    // full map: the extra mismatch stays within a few multiples of the
    // non-resonant source scale at the probe time (the logged tail-order gap)
    double full = mismatch_at(4, true);
    Bench b(12, 6.0, 0.05, 20.0);
    ResonantCache cache = ResonantCache::build(b.eng, b.data,
                                               CacheTimeGrid::geometric(20.0, 0.25, 4));
    double b_scale = 0.0;
    for (const auto& e : cache.entries())
        if (e.t >= 2.0 && e.t <= 5.0) b_scale = std::max(b_scale, sup_norm(e.b_small));
    MESSAGE("full-map mismatch ", full, " vs non-resonant scale ", b_scale);
    CHECK(full <= mism[1] + 5.0 * b_scale);
}

TEST_CASE("Picard iteration contracts for small data") {
    Bench b(16, 8.0, 0.01, 30.0);
    ResonantCache cache = ResonantCache::build(b.eng, b.data, b.tg);
    FixedPointResult fp = iterate_to_fixed_point(b.eng, cache, 1e-8, 8);
    CHECK(fp.log.status == ContractionLog::Status::converged);
    CHECK(fp.log.iterations <= 8);
    CHECK(fp.log.final_residual <= 1e-8);
    for (const auto& row : fp.log.rows)
        if (row.iter >= 2) CHECK(row.ratio < 1.0);

    // the recovered physical solution is real at every cache time probed
    std::vector<ProfileState> V = reconstruct_solution(cache, fp.G);
    for (std::size_t i : {std::size_t(0), V.size() / 2, V.size() - 1}) {
        PhysicalState p = recover(b.eng, from_profile(V[i]));
        double scale = std::max({sup_norm(p.u), sup_norm(p.v), 1e-12});
        CHECK(max_imag(p.u) / scale <= 1e-9);
        CHECK(max_imag(p.v) / scale <= 1e-9);
    }

    // at the horizon the profiles equal the resonant profile exactly
    ProfileState res = cache.resonant_profile(cache.entries().size() - 1, true);
    CHECK(l2_distance(V.back().Vwa, res.Vwa) == 0.0);
    CHECK(l2_distance(V.back().Vkg, res.Vkg) == 0.0);
}

TEST_CASE("first contraction ratio scales down with the data size") {
    auto first_ratio = [&](double eps) {
        Bench b(12, 6.0, eps, 20.0);
        ResonantCache cache = ResonantCache::build(b.eng, b.data, b.tg);
        FixedPointResult fp = iterate_to_fixed_point(b.eng, cache, 1e-12, 3);
        REQUIRE(fp.log.rows.size() >= 2);
        return fp.log.rows[1].ratio;
    };
    double r1 = first_ratio(0.02);
    double r2 = first_ratio(0.01);
    MESSAGE("first ratios: ", r1, " (eps) vs ", r2, " (eps/2)");
    CHECK(r2 <= 0.75 * r1);
}

TEST_CASE("scattering residuals: identities, trend, ablation") {
    Bench b(16, 8.0, 0.02, 30.0);
    ResonantCache cache = ResonantCache::build(b.eng, b.data, b.tg);
    FixedPointResult fp = iterate_to_fixed_point(b.eng, cache, 1e-9, 8);
    REQUIRE(fp.log.status == ContractionLog::Status::converged);
    ResidualReport rep = verify_scattering(cache, fp.G);

    // r_wa is identically the perturbation norm
    for (std::size_t i = 0; i < rep.times.size(); ++i)
        CHECK(rep.r_wa[i] == doctest::Approx(l2_norm(fp.G.Gwa[i])).epsilon(1e-12));

    // terminal identity: r_kg(T) = ||B(T)|| = 0
    CHECK(rep.r_kg.back() == doctest::Approx(l2_norm(cache.entries().back().B_big)));
    CHECK(rep.r_kg.back() <= 1e-14);

    // the phase correction does real work: without it the residual is larger
    std::size_t mid = cache.panel_below(b.tg.t_max / 2.0);
    CHECK(rep.r_kg_uncorrected[mid] > rep.r_kg[mid]);

    // envelope constant is logged and finite
    MESSAGE("sup_t r/eps^{3/2}: wa ", rep.sup_ratio_wa, " kg ", rep.sup_ratio_kg);
    CHECK(rep.sup_ratio_wa > 0.0);
    CHECK(std::isfinite(rep.sup_ratio_wa));
    CHECK(std::isfinite(rep.sup_ratio_kg));
}

TEST_CASE("zero data give identically zero residuals") {
    Bench b(12, 6.0, 0.0, 20.0);
    for (auto& z : b.data.Vwa_inf.v) z = 0.0;
    for (auto& z : b.data.Vkg_inf.v) z = 0.0;
    ResonantCache cache = ResonantCache::build(b.eng, b.data, b.tg);
    FixedPointResult fp = iterate_to_fixed_point(b.eng, cache, 1e-10, 2);
    ResidualReport rep = verify_scattering(cache, fp.G);
    for (std::size_t i = 0; i < rep.times.size(); ++i) {
        CHECK(rep.r_wa[i] == 0.0);
        CHECK(rep.r_kg[i] == 0.0);
        CHECK(rep.r_kg_uncorrected[i] == 0.0);
    }
}

TEST_CASE("reconstructed solution is forward-consistent") {
    // restart the forward integrator from the reconstruction and compare at a
    // later cache time; the full-resolution version lives in the acceptance suite
    Bench b(16, 8.0, 0.01, 40.0);
    ResonantCache cache = ResonantCache::build(b.eng, b.data, b.tg);
    FixedPointResult fp = iterate_to_fixed_point(b.eng, cache, 1e-9, 8);
    REQUIRE(fp.log.status == ContractionLog::Status::converged);
    std::vector<ProfileState> V = reconstruct_solution(cache, fp.G);

    std::size_t i0 = cache.panel_below(10.0);
    std::size_t i1 = cache.panel_below(20.0);
    double t0 = cache.time_grid().times[i0];
    double t1 = cache.time_grid().times[i1];

    LittlewoodPaley lp(b.grid);
    SolverConfig cfg;
    cfg.dt = (t1 - t0) / std::ceil((t1 - t0) / 0.05);
    cfg.t_end = t1;
    cfg.snapshot_stride = 1 << 20;
    Trajectory traj = solve_forward(b.eng, lp, V[i0], cfg);

    double d = std::max(l2_distance(traj.states.back().Vwa, V[i1].Vwa),
                        l2_distance(traj.states.back().Vkg, V[i1].Vkg));
    MESSAGE("forward/backward discrepancy over [", t0, ",", t1, "]: ", d,
            " vs eps scale ", 5e-3 * b.data.eps);
    CHECK(d <= 5e-3 * b.data.eps);
}
