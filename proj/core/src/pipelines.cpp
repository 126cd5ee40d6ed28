#include "wkg/pipelines.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <vector>

#include <json.hpp>

#include "wkg/bilinear.hpp"
#include "wkg/errors.hpp"
#include "wkg/norms.hpp"
#include "wkg/oscillatory.hpp"
#include "wkg/parallel.hpp"
#include "wkg/phase_checks.hpp"
#include "wkg/snapshot_io.hpp"
#include "wkg/solver.hpp"
#include "wkg/wave_operator.hpp"

namespace wkg {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream os(p);
    if (!os) throw input_error("cannot write " + p.string());
    os << text;
}

struct Workbench {
    GridPtr grid;
    std::unique_ptr<FftEngine> eng;
    std::unique_ptr<LittlewoodPaley> lp;
    ScatteringData data;

    explicit Workbench(const RunConfig& cfg) {
        if (cfg.threads > 0) set_thread_count(cfg.threads);
        grid = make_grid(cfg.grid_n, cfg.box_length);
        eng = std::make_unique<FftEngine>(grid);
        CutoffFamily cut = cfg.break_bump ? CutoffFamily::broken() : CutoffFamily();
        lp = std::make_unique<LittlewoodPaley>(grid, cut);
        data = make_preset(grid, cfg.preset, cfg.eps, cfg.seed);
    }
};

json manifest_base(const RunConfig& cfg) {
    json m;
    m["config"] = json::parse(cfg.to_json());
    m["threads_used"] = thread_count();
    m["format_version"] = 1;
    return m;
}

}  // namespace

int cmd_simulate(const RunConfig& cfg) {
    Workbench wb(cfg);
    fs::create_directories(cfg.output_dir);

    ProfileState init;
    init.t = 0.0;
    init.Vwa = wb.data.Vwa_inf;
    init.Vkg = wb.data.Vkg_inf;

    SolverConfig scfg;
    scfg.dt = cfg.dt;
    scfg.t_end = cfg.t_end;
    scfg.snapshot_stride = cfg.snapshot_stride;
    scfg.dealiasing = cfg.dealiasing;
    scfg.nonlinearity_scale = cfg.nonlinearity_scale;

    Trajectory traj = solve_forward(*wb.eng, *wb.lp, init, scfg);

    std::string csv = "t,name,value\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i)
        for (const auto& row : traj.diagnostics[i])
            csv += fmt(traj.times[i]) + "," + row.name + "," + fmt(row.value) + "\n";
    write_text(fs::path(cfg.output_dir) / "diagnostics.csv", csv);

    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        char name[64];
        std::snprintf(name, sizeof name, "snapshot_wa_%04zu.wkgs", i);
        write_snapshot((fs::path(cfg.output_dir) / name).string(), traj.states[i].Vwa,
                       traj.states[i].t);
        std::snprintf(name, sizeof name, "snapshot_kg_%04zu.wkgs", i);
        write_snapshot((fs::path(cfg.output_dir) / name).string(), traj.states[i].Vkg,
                       traj.states[i].t);
    }

    json m = manifest_base(cfg);
    m["command"] = "simulate";
    m["snapshots"] = traj.states.size();
    m["final_time"] = traj.times.back();
    write_text(fs::path(cfg.output_dir) / "manifest.json", m.dump(2) + "\n");
    return kExitOk;
}

int cmd_construct(const RunConfig& cfg) {
    Workbench wb(cfg);
    fs::create_directories(cfg.output_dir);

    CacheTimeGrid tg = CacheTimeGrid::geometric(cfg.t_max, cfg.cache_t_min, cfg.cache_per_octave);
    CacheOptions copts;
    copts.refine = cfg.cache_refine;
    ResonantCache cache = ResonantCache::build(*wb.eng, wb.data, tg, copts);

    TOptions topts;
    topts.substep = cfg.substep;
    topts.dealias = cfg.dealiasing;
    FixedPointResult fp = iterate_to_fixed_point(*wb.eng, cache, cfg.tol, cfg.max_iter, topts);

    std::string clog = "iter,distance,ratio,d_wa,d_kg,warn\n";
    for (const auto& r : fp.log.rows)
        clog += std::to_string(r.iter) + "," + fmt(r.distance) + "," + fmt(r.ratio) + "," +
                fmt(r.d_wa) + "," + fmt(r.d_kg) + "," + (r.warn ? "1" : "0") + "\n";
    write_text(fs::path(cfg.output_dir) / "contraction.csv", clog);

    // cache export: one snapshot per quantity per time plus a manifest
    fs::path cdir = fs::path(cfg.output_dir) / "cache";
    fs::create_directories(cdir);
    json ctimes = json::array();
    for (std::size_t i = 0; i < cache.entries().size(); ++i) {
        const auto& e = cache.entries()[i];
        ctimes.push_back(e.t);
        char name[64];
        auto dump = [&](const char* tag, const SpectralField& f) {
            std::snprintf(name, sizeof name, "%s_%04zu.wkgs", tag, i);
            write_snapshot((cdir / name).string(), f, e.t);
        };
        dump("h", e.h);
        dump("Hacc", e.Hacc);
        dump("Hcut", e.Hcut);
        dump("b", e.b_small);
        dump("B", e.B_big);
        SpectralField Cf(cache.grid(), FieldTag::scalar), Df(cache.grid(), FieldTag::scalar);
        for (std::size_t f = 0; f < Cf.size(); ++f) {
            Cf[f] = e.C[f];
            Df[f] = e.D[f];
        }
        dump("C", Cf);
        dump("D", Df);
    }
    json cman;
    cman["times"] = ctimes;
    cman["t_max"] = cfg.t_max;
    cman["grid"] = {{"n", cfg.grid_n}, {"box_length", cfg.box_length}};
    cman["tail_c_sup_at_T"] = cache.tails().c_sup_at_T;
    cman["tail_b_norm_at_T"] = cache.tails().b_norm_at_T;
    write_text(cdir / "cache_manifest.json", cman.dump(2) + "\n");

    ResidualReport rep = verify_scattering(cache, fp.G);
    std::string rcsv = "t,r_wa,r_kg,r_kg_uncorrected\n";
    for (std::size_t i = 0; i < rep.times.size(); ++i)
        rcsv += fmt(rep.times[i]) + "," + fmt(rep.r_wa[i]) + "," + fmt(rep.r_kg[i]) + "," +
                fmt(rep.r_kg_uncorrected[i]) + "\n";
    write_text(fs::path(cfg.output_dir) / "residuals.csv", rcsv);

    // working norms of the fixed point
    NormParams np;
    np.cap = cfg.norm_cap;
    auto [wa_series, kg_series] = perturbation_series(*wb.eng, cache, fp.G, topts);
    NormSnapshot x1 = norm_X(*wb.lp, wa_series, NormFamily::X1, np);
    NormSnapshot x2 = norm_X(*wb.lp, kg_series, NormFamily::X2, np);
    auto snap_json = [](const NormSnapshot& s) {
        json j;
        j["family"] = to_string(s.family);
        j["value"] = s.value;
        j["cap"] = s.cap;
        j["skipped_words"] = s.skipped_words;
        json br = json::array();
        for (const auto& e : s.breakdown)
            br.push_back({{"n", e.n}, {"word", e.word}, {"k", e.k}, {"axis", e.axis},
                          {"t", e.t}, {"value", e.value}});
        j["breakdown"] = br;
        return j;
    };
    json norms;
    norms["X1"] = snap_json(x1);
    norms["X2"] = snap_json(x2);
    write_text(fs::path(cfg.output_dir) / "norms.json", norms.dump(2) + "\n");

    json m = manifest_base(cfg);
    m["command"] = "construct";
    m["iterations"] = fp.log.iterations;
    m["final_residual"] = fp.log.final_residual;
    m["status"] = fp.log.status == ContractionLog::Status::converged ? "converged"
                  : fp.log.status == ContractionLog::Status::diverged ? "diverged"
                                                                      : "max_iter";
    m["sup_ratio_wa"] = rep.sup_ratio_wa;
    m["sup_ratio_kg"] = rep.sup_ratio_kg;
    m["kg_monotone_tail"] = rep.kg_monotone_tail;
    m["X1"] = x1.value;
    m["X2"] = x2.value;
    write_text(fs::path(cfg.output_dir) / "manifest.json", m.dump(2) + "\n");

    if (fp.log.status != ContractionLog::Status::converged) return kExitNonContraction;
    return kExitOk;
}

int cmd_verify(const RunConfig& cfg) {
    Workbench wb(cfg);
    fs::create_directories(cfg.output_dir);
    struct Check {
        std::string name;
        double value, threshold;
        bool less_is_pass;
        bool pass;
    };
    std::vector<Check> checks;
    auto add = [&](const std::string& name, double value, double thr, bool less) {
        bool pass = less ? value <= thr : value >= thr;
        checks.push_back({name, value, thr, less, pass});
    };

    // LP partition identities on a random field
    {
        SpectralField f = random_field(wb.grid, FieldTag::scalar, cfg.seed + 17);
        SpectralField banded(wb.grid, FieldTag::scalar);
        int a = wb.grid->k_min(), b = wb.grid->k_max();
        for (std::size_t i = 0; i < f.size(); ++i) {
            double r = norm3(wb.grid->xi(i));
            if (r >= std::exp2(a) && r <= std::exp2(b)) banded[i] = f[i];
        }
        SpectralField sum(wb.grid, FieldTag::scalar);
        for (int k = a - 2; k <= b + 2; ++k)
            sum = sum + wb.lp->project_pk(banded, k, false);
        add("lp_sum_pk_identity", l2_distance(sum, banded) / l2_norm(banded), 1e-12, true);

        int k = std::min(b, 0);
        SpectralField pk = wb.lp->project_pk(banded, k, false);
        SpectralField qsum(wb.grid, FieldTag::scalar);
        for (int jj : wb.lp->j_window(k)) qsum = qsum + wb.lp->project_qjk(banded, jj, k);
        add("lp_sum_qjk_identity", l2_distance(qsum, pk) / std::max(1e-300, l2_norm(pk)),
            1e-12, true);
        SpectralField sqsum(wb.grid, FieldTag::scalar);
        for (int jj : wb.lp->j_window(k)) sqsum = sqsum + wb.lp->project_script_qjk(banded, jj, k);
        add("lp_sum_script_qjk_identity",
            l2_distance(sqsum, pk) / std::max(1e-300, l2_norm(pk)), 1e-10, true);
    }

    // phase lower bounds on the stationary cases
    for (const auto& spec : stationary_cases())
        for (double b : {1.0, 2.0, 4.0}) {
            MarginReport r = check_phase_lower_bound(spec, b, cfg.phase_samples, cfg.seed + 7);
            std::string nm = std::string("phase_lower_bound_") +
                             (spec.out == Family::wa ? "wa" : "kg") +
                             (spec.s1 == Sign::plus ? "p" : "m") +
                             (spec.s2 == Sign::plus ? "p" : "m") + "_b" +
                             std::to_string(static_cast<int>(b));
            add(nm, r.min_ratio, 1.0, false);
        }
    add("est_phi_constant", check_est_phi(cfg.phase_samples, cfg.seed + 11).c_min, 0.25, false);

    // transform and propagator basics
    {
        SpectralField f = random_smooth_field(wb.grid, FieldTag::kg, cfg.seed + 23);
        PhysicalField p = wb.eng->inverse(f);
        SpectralField back = wb.eng->forward(p, FieldTag::kg);
        add("fft_round_trip", l2_distance(back, f) / l2_norm(f), 1e-13, true);
        SpectralField prop = propagate(f, {Family::kg, Sign::plus}, 3.7);
        add("propagator_unitary", std::abs(l2_norm(prop) - l2_norm(f)) / l2_norm(f), 1e-13,
            true);
    }

    // engine vs brute-force oracle on a small grid
    if (cfg.oracle_grid_n <= 12) {
        GridPtr og = make_grid(cfg.oracle_grid_n, 2.0 * 3.14159265358979323846 * 2);
        FftEngine oeng(og);
        double worst = 0.0;
        int c = 0;
        for (Family kind : {Family::wa, Family::kg})
            for (Sign s1 : {Sign::plus, Sign::minus})
                for (Sign s2 : {Sign::plus, Sign::minus}) {
                    SpectralField F = random_field(og, FieldTag::kg, cfg.seed + 100 + c);
                    SpectralField G = random_field(
                        og, kind == Family::wa ? FieldTag::kg : FieldTag::wa,
                        cfg.seed + 200 + c);
                    BilinearJob job{kind, s1, s2, &F, &G, 0.8 + 0.1 * c};
                    SpectralField fast = eval_bilinear(oeng, job, false);
                    SpectralField slow = eval_bilinear_oracle(job);
                    worst = std::max(worst, l2_distance(fast, slow) / l2_norm(slow));
                    ++c;
                }
        add("bilinear_oracle_equivalence", worst, 1e-12, true);
    }

    // free-flow dispersive decay fits; box and width are sized so the whole
    // fit window stays wrap-free and far-field for each propagator
    {
        auto decay_fit = [&](double Lfac, double sigma, Family fam) {
            GridPtr g = make_grid(32, Lfac * 3.14159265358979323846);
            FftEngine eng(g);
            SpectralField v0(g, FieldTag::kg);
            for (std::size_t i = 0; i < v0.size(); ++i) {
                Vec3 x = g->xi(i);
                v0[i] = std::exp(-dot3(x, x) / (2.0 * sigma * sigma));
            }
            std::vector<double> ts, sup;
            for (double t = 5.0; t <= 50.0; t += 2.5) ts.push_back(t);
            for (double t : ts) {
                SpectralField vt = v0;
                for (std::size_t i = 0; i < vt.size(); ++i)
                    vt[i] *= std::cos(t * dispersion_symbol({fam, Sign::plus}, g->xi(i)));
                sup.push_back(sup_norm(eng.inverse(vt)));
            }
            return fit_power_law(ts, sup).exponent;
        };
        add("kg_decay_exponent_error", std::abs(decay_fit(24.0, 0.55, Family::kg) - 1.5),
            0.15, true);
        add("wave_decay_exponent_error", std::abs(decay_fit(26.0, 0.40, Family::wa) - 1.0),
            0.15, true);
    }

    bool all = true;
    json rows = json::array();
    std::printf("%-36s %14s %14s  %s\n", "check", "value", "threshold", "verdict");
    for (const auto& c : checks) {
        all = all && c.pass;
        std::printf("%-36s %14.6g %14.6g  %s\n", c.name.c_str(), c.value, c.threshold,
                    c.pass ? "PASS" : "FAIL");
        rows.push_back({{"name", c.name},
                        {"value", c.value},
                        {"threshold", c.threshold},
                        {"direction", c.less_is_pass ? "<=" : ">="},
                        {"pass", c.pass}});
    }
    json rep;
    rep["checks"] = rows;
    rep["all_pass"] = all;
    write_text(fs::path(cfg.output_dir) / "verify.json", rep.dump(2) + "\n");
    return all ? kExitOk : kExitVerifyFail;
}

int cmd_oracle(const RunConfig& cfg) {
    Workbench wb(cfg);
    fs::create_directories(cfg.output_dir);
    GridPtr og = make_grid(std::min(cfg.oracle_grid_n, 12), cfg.box_length / 4.0);
    FftEngine oeng(og);
    std::string csv = "kind,s1,s2,seed,rel_err\n";
    double worst = 0.0;
    for (Family kind : {Family::wa, Family::kg})
        for (Sign s1 : {Sign::plus, Sign::minus})
            for (Sign s2 : {Sign::plus, Sign::minus})
                for (int s = 0; s < 20; ++s) {
                    std::uint64_t seed = cfg.seed + 1000 * s + 13;
                    SpectralField F = random_field(og, FieldTag::kg, seed);
                    SpectralField G = random_field(
                        og, kind == Family::wa ? FieldTag::kg : FieldTag::wa, seed + 1);
                    BilinearJob job{kind, s1, s2, &F, &G, 0.3 + 0.05 * s};
                    SpectralField fast = eval_bilinear(oeng, job, false);
                    SpectralField slow = eval_bilinear_oracle(job);
                    double rel = l2_distance(fast, slow) / l2_norm(slow);
                    worst = std::max(worst, rel);
                    csv += std::string(kind == Family::wa ? "wa" : "kg") + "," +
                           (s1 == Sign::plus ? "+" : "-") + "," +
                           (s2 == Sign::plus ? "+" : "-") + "," + std::to_string(s) + "," +
                           fmt(rel) + "\n";
                }
    write_text(fs::path(cfg.output_dir) / "oracle.csv", csv);
    std::printf("bilinear oracle max relative error: %.3e\n", worst);
    return worst <= 1e-12 ? kExitOk : kExitVerifyFail;
}

int cmd_plotdata(const std::string& artifact_dir, const std::string& which,
                 const std::string& out_path) {
    fs::path dir(artifact_dir);
    auto read_csv = [&](const std::string& name) {
        std::ifstream is(dir / name);
        if (!is) throw input_error("missing artifact " + (dir / name).string());
        std::vector<std::vector<std::string>> rows;
        std::string line;
        std::getline(is, line);  // header
        while (std::getline(is, line)) {
            std::vector<std::string> cells;
            std::size_t pos = 0;
            while (true) {
                std::size_t c = line.find(',', pos);
                cells.push_back(line.substr(pos, c - pos));
                if (c == std::string::npos) break;
                pos = c + 1;
            }
            rows.push_back(cells);
        }
        return rows;
    };

    std::string out;
    if (which == "residuals") {
        auto rows = read_csv("residuals.csv");
        out = "t,r_wa,r_kg,r_kg_uncorrected\n";
        for (auto& r : rows) out += r[0] + "," + r[1] + "," + r[2] + "," + r[3] + "\n";
    } else if (which == "contraction") {
        auto rows = read_csv("contraction.csv");
        out = "iter,ratio\n";
        for (auto& r : rows) out += r[0] + "," + r[2] + "\n";
    } else if (which == "decay") {
        auto rows = read_csv("diagnostics.csv");
        std::vector<double> ts, sv, su;
        std::map<double, std::pair<double, double>> by_t;
        for (auto& r : rows) {
            double t = std::stod(r[0]);
            if (r[1] == "sup_v") by_t[t].first = std::stod(r[2]);
            if (r[1] == "sup_u") by_t[t].second = std::stod(r[2]);
        }
        out = "t,sup_v,sup_u\n";
        double t_fit_lo = by_t.size() >= 2 && by_t.rbegin()->first > 10.0 ? 5.0 : 0.0;
        for (auto& [t, pair] : by_t) {
            out += fmt(t) + "," + fmt(pair.first) + "," + fmt(pair.second) + "\n";
            if (t >= t_fit_lo && t > 0.0) {
                ts.push_back(t);
                sv.push_back(pair.first);
                su.push_back(pair.second);
            }
        }
        if (ts.size() >= 2) {
            out += "fit_exponent," + fmt(-fit_power_law(ts, sv).exponent) + "," +
                   fmt(-fit_power_law(ts, su).exponent) + "\n";
        }
    } else if (which == "shells") {
        auto rows = read_csv("diagnostics.csv");
        out = "t,series,value\n";
        for (auto& r : rows)
            if (r[1].rfind("shell_", 0) == 0) out += r[0] + "," + r[1] + "," + r[2] + "\n";
    } else {
        throw config_error("plotdata: unknown series '" + which + "'");
    }
    write_text(out_path, out);
    return kExitOk;
}

}  // namespace wkg
