#include "wkg/wave_operator.hpp"

#include <algorithm>
#include <cmath>

#include "wkg/bilinear.hpp"
#include "wkg/errors.hpp"

namespace wkg {

namespace {

struct ArgAssembler {
    const ResonantCache& cache;
    const PerturbationPair& G;

    SpectralField G_lin(const std::vector<SpectralField>& series, double t, FieldTag tag) const {
        const auto& ts = cache.time_grid().times;
        std::size_t i = cache.panel_below(t);
        double w = std::clamp((t - ts[i]) / (ts[i + 1] - ts[i]), 0.0, 1.0);
        SpectralField out(cache.grid(), tag);
        for (std::size_t f = 0; f < out.size(); ++f)
            out[f] = (1.0 - w) * series[i][f] + w * series[i + 1][f];
        return out;
    }

    // KG-type argument  G^kg + e^{iD} Vkg_inf + B  and wave-type argument
    // G^wa + Vwa_inf + Hacc, both + branches (minus branches by reflection).
    std::pair<SpectralField, SpectralField> plus_args(double t) const {
        SpectralField A = G_lin(G.Gkg, t, FieldTag::kg);
        std::vector<double> D = cache.D_lin(t);
        const SpectralField& Vkg = cache.data().Vkg_inf;
        SpectralField B = cache.B_lin(t);
        for (std::size_t f = 0; f < A.size(); ++f)
            A[f] += std::polar(1.0, D[f]) * Vkg[f] + B[f];

        SpectralField W = G_lin(G.Gwa, t, FieldTag::wa);
        const SpectralField& Vwa = cache.data().Vwa_inf;
        SpectralField Hacc = cache.Hacc_lin(t);
        for (std::size_t f = 0; f < W.size(); ++f) W[f] += Vwa[f] + Hacc[f];
        return {std::move(A), std::move(W)};
    }
};

struct IntegrandPair {
    SpectralField wa, kg;
};

IntegrandPair integrand_at(const FftEngine& eng, const ArgAssembler& args, double t,
                           bool dealias_on) {
    auto [A, W] = args.plus_args(t);
    SpectralField Am = conj_reflect(A);
    SpectralField Wm = conj_reflect(W);
    IntegrandPair out;
    out.wa = wa_interaction_sum(eng, A, Am, t, dealias_on);
    out.kg = kg_interaction_sum(eng, A, Am, W, Wm, t, dealias_on);
    return out;
}

// composite-Simpson node offsets and weights for one panel
void panel_rule(double a, double b, double substep, std::vector<double>& nodes,
                std::vector<double>& weights) {
    int m = std::max(2, 2 * static_cast<int>(std::ceil((b - a) / (2.0 * substep))));
    double h = (b - a) / m;
    nodes.resize(m + 1);
    weights.assign(m + 1, 0.0);
    for (int q = 0; q <= m; ++q) {
        nodes[q] = a + q * h;
        weights[q] = (q == 0 || q == m) ? h / 3.0 : (q % 2 ? 4.0 * h / 3.0 : 2.0 * h / 3.0);
    }
}

}  // namespace

PerturbationPair PerturbationPair::zeros(const ResonantCache& cache) {
    PerturbationPair G;
    std::size_t nt = cache.entries().size();
    G.Gwa.assign(nt, SpectralField(cache.grid(), FieldTag::wa));
    G.Gkg.assign(nt, SpectralField(cache.grid(), FieldTag::kg));
    return G;
}

PerturbationPair apply_T_values(const FftEngine& eng, const ResonantCache& cache,
                                const PerturbationPair& G, const TOptions& opts,
                                const std::vector<double>& extra_times,
                                std::map<double, std::pair<SpectralField, SpectralField>>& out) {
    const auto& ts = cache.time_grid().times;
    const std::size_t nt = ts.size();
    if (G.size() != nt) throw config_error("apply_T: perturbation/time-grid mismatch");
    ArgAssembler args{cache, G};

    PerturbationPair next = PerturbationPair::zeros(cache);
    SpectralField Iwa_acc(cache.grid(), FieldTag::wa);
    SpectralField Ikg_acc(cache.grid(), FieldTag::kg);

    const SpectralField& HaccT = cache.entries().back().Hacc;
    const std::vector<double>& DT = cache.entries().back().D;
    const SpectralField& VkgInf = cache.data().Vkg_inf;

    auto emit = [&](std::size_t i) {
        SpectralField& gw = next.Gwa[i];
        SpectralField& gk = next.Gkg[i];
        const auto& e = cache.entries()[i];
        for (std::size_t f = 0; f < gw.size(); ++f) {
            gw[f] = (HaccT[f] - e.Hacc[f]) - Iwa_acc[f];
            gk[f] = (std::polar(1.0, DT[f]) - std::polar(1.0, e.D[f])) * VkgInf[f] -
                    e.B_big[f] - Ikg_acc[f];
        }
    };

    auto emit_extra = [&](double t) {
        // value at an interior time from the partial accumulators
        SpectralField gw(cache.grid(), FieldTag::wa), gk(cache.grid(), FieldTag::kg);
        SpectralField Hacc_t = cache.Hacc_lin(t);
        std::vector<double> D_t = cache.D_lin(t);
        SpectralField B_t = cache.B_lin(t);
        for (std::size_t f = 0; f < gw.size(); ++f) {
            gw[f] = (HaccT[f] - Hacc_t[f]) - Iwa_acc[f];
            gk[f] = (std::polar(1.0, DT[f]) - std::polar(1.0, D_t[f])) * VkgInf[f] -
                    B_t[f] - Ikg_acc[f];
        }
        out.emplace(t, std::make_pair(std::move(gw), std::move(gk)));
    };

    emit(nt - 1);  // zero final data, bitwise

    std::vector<double> extras = extra_times;
    std::sort(extras.begin(), extras.end());

    std::vector<double> nodes, weights;
    IntegrandPair top_eval;  // shared node between adjacent panels
    bool have_top = false;

    for (std::size_t i = nt - 1; i-- > 0;) {
        double a = ts[i], b = ts[i + 1];
        // interior output times split the panel so each piece gets its own rule
        std::vector<double> cuts = {b};
        for (auto it = extras.rbegin(); it != extras.rend(); ++it)
            if (*it > a + 1e-13 && *it < b - 1e-13) cuts.push_back(*it);
        cuts.push_back(a);
        // cuts descend from b to a
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
            double hi = cuts[c], lo = cuts[c + 1];
            panel_rule(lo, hi, opts.substep, nodes, weights);
            // accumulate backward: integral over [lo, hi]
            SpectralField wa_part(cache.grid(), FieldTag::wa);
            SpectralField kg_part(cache.grid(), FieldTag::kg);
            for (std::size_t q = nodes.size(); q-- > 0;) {
                IntegrandPair ev;
                if (q == nodes.size() - 1 && have_top) {
                    ev = top_eval;  // shared with the previous piece's bottom node
                } else {
                    ev = integrand_at(eng, args, nodes[q], opts.dealias);
                }
                if (q == 0) top_eval = ev;
                axpy(weights[q], ev.wa, wa_part);
                axpy(weights[q], ev.kg, kg_part);
            }
            have_top = true;
            for (std::size_t f = 0; f < Iwa_acc.size(); ++f) {
                Iwa_acc[f] += wa_part[f];
                Ikg_acc[f] += kg_part[f];
            }
            if (lo > a + 1e-13) emit_extra(lo);
        }
        emit(i);
    }
    return next;
}

PerturbationPair apply_T(const FftEngine& eng, const ResonantCache& cache,
                         const PerturbationPair& G, const TOptions& opts) {
    std::map<double, std::pair<SpectralField, SpectralField>> unused;
    return apply_T_values(eng, cache, G, opts, {}, unused);
}

std::pair<SpectralField, SpectralField> T_derivative(const FftEngine& eng,
                                                     const ResonantCache& cache,
                                                     const PerturbationPair& G, double t,
                                                     const TOptions& opts) {
    ArgAssembler args{cache, G};
    IntegrandPair I = integrand_at(eng, args, t, opts.dealias);
    SpectralField h = cache.h_direct(t);
    SpectralField dwa = I.wa;
    for (std::size_t f = 0; f < dwa.size(); ++f) dwa[f] -= h[f];

    // -i C e^{iD} Vkg - b - i C B + sum I_kg; the non-resonant subtraction is
    // present exactly when the cache carries the non-resonant pass
    bool has_nonres = false;
    for (const auto& e : cache.entries())
        if (l2_norm(e.b_small) > 0.0) {
            has_nonres = true;
            break;
        }
    std::vector<double> C = cache.C_exact(t);
    std::vector<double> D = cache.D_lin(t);
    const SpectralField& Vkg = cache.data().Vkg_inf;
    SpectralField dkg = I.kg;
    if (has_nonres) {
        SpectralField B = cache.B_lin(t);
        SpectralField b = cache.b_direct(eng, t);
        for (std::size_t f = 0; f < dkg.size(); ++f) {
            cplx iC(0.0, C[f]);
            dkg[f] -= iC * std::polar(1.0, D[f]) * Vkg[f] + b[f] + iC * B[f];
        }
    } else {
        for (std::size_t f = 0; f < dkg.size(); ++f)
            dkg[f] -= cplx(0.0, C[f]) * std::polar(1.0, D[f]) * Vkg[f];
    }
    return {std::move(dwa), std::move(dkg)};
}

FixedPointResult iterate_to_fixed_point(const FftEngine& eng, const ResonantCache& cache,
                                        double tol, int max_iter, const TOptions& opts) {
    FixedPointResult res;
    res.G = PerturbationPair::zeros(cache);
    double prev_d = -1.0;
    int consecutive_expanding = 0;
    for (int it = 1; it <= max_iter; ++it) {
        PerturbationPair next = apply_T(eng, cache, res.G, opts);
        double dwa = 0.0, dkg = 0.0;
        for (std::size_t i = 0; i < next.size(); ++i) {
            dwa = std::max(dwa, l2_distance(next.Gwa[i], res.G.Gwa[i]));
            dkg = std::max(dkg, l2_distance(next.Gkg[i], res.G.Gkg[i]));
        }
        double d = std::max(dwa, dkg);
        double ratio = prev_d > 0.0 ? d / prev_d : 0.0;
        res.log.rows.push_back({it, d, ratio, dwa, dkg, ratio > 0.5});
        res.G = std::move(next);
        res.log.iterations = it;
        res.log.final_residual = d;
        if (d <= tol) {
            res.log.status = ContractionLog::Status::converged;
            return res;
        }
        if (prev_d > 0.0 && ratio >= 1.0) {
            if (++consecutive_expanding >= 2) {
                res.log.status = ContractionLog::Status::diverged;
                return res;
            }
        } else {
            consecutive_expanding = 0;
        }
        prev_d = d;
    }
    res.log.status = ContractionLog::Status::max_iter;
    return res;
}

std::vector<ProfileState> reconstruct_solution(const ResonantCache& cache,
                                               const PerturbationPair& G) {
    std::vector<ProfileState> out;
    for (std::size_t i = 0; i < cache.entries().size(); ++i) {
        ProfileState s = cache.resonant_profile(i, true);
        axpy(1.0, G.Gwa[i], s.Vwa);
        axpy(1.0, G.Gkg[i], s.Vkg);
        out.push_back(std::move(s));
    }
    return out;
}

ResidualReport verify_scattering(const ResonantCache& cache, const PerturbationPair& G) {
    ResidualReport rep;
    rep.eps = cache.data().eps;
    std::vector<ProfileState> V = reconstruct_solution(cache, G);
    const auto& ts = cache.time_grid().times;
    double e32 = std::pow(std::max(rep.eps, 1e-300), 1.5);
    for (std::size_t i = 0; i < V.size(); ++i) {
        const auto& e = cache.entries()[i];
        SpectralField wa_ref = cache.data().Vwa_inf + e.Hacc;
        SpectralField kg_ref(cache.grid(), FieldTag::kg);
        for (std::size_t f = 0; f < kg_ref.size(); ++f)
            kg_ref[f] = std::polar(1.0, e.D[f]) * cache.data().Vkg_inf[f];
        rep.times.push_back(ts[i]);
        rep.r_wa.push_back(l2_distance(V[i].Vwa, wa_ref));
        rep.r_kg.push_back(l2_distance(V[i].Vkg, kg_ref));
        rep.r_kg_uncorrected.push_back(l2_distance(V[i].Vkg, cache.data().Vkg_inf));
        rep.sup_ratio_wa = std::max(rep.sup_ratio_wa, rep.r_wa.back() / e32);
        rep.sup_ratio_kg = std::max(rep.sup_ratio_kg, rep.r_kg.back() / e32);
    }
    rep.kg_monotone_tail = true;
    for (std::size_t i = 0; i + 1 < rep.times.size(); ++i) {
        if (rep.times[i] < 10.0) continue;
        if (rep.r_kg[i + 1] > rep.r_kg[i] * 1.05 + 1e-16) rep.kg_monotone_tail = false;
    }
    return rep;
}

std::pair<FieldSeries, FieldSeries> perturbation_series(const FftEngine& eng,
                                                        const ResonantCache& cache,
                                                        const PerturbationPair& G,
                                                        const TOptions& opts) {
    FieldSeries wa, kg;
    wa.times = kg.times = cache.time_grid().times;
    ArgAssembler args{cache, G};
    const SpectralField& Vkg = cache.data().Vkg_inf;
    for (std::size_t i = 0; i < cache.entries().size(); ++i) {
        const auto& e = cache.entries()[i];
        wa.f.push_back(G.Gwa[i]);
        kg.f.push_back(G.Gkg[i]);
        IntegrandPair I = integrand_at(eng, args, e.t, opts.dealias);
        SpectralField dwa = I.wa;
        for (std::size_t f = 0; f < dwa.size(); ++f) dwa[f] -= e.h[f];
        SpectralField dkg = I.kg;
        for (std::size_t f = 0; f < dkg.size(); ++f) {
            cplx iC(0.0, e.C[f]);
            dkg[f] -= iC * std::polar(1.0, e.D[f]) * Vkg[f] + e.b_small[f] + iC * e.B_big[f];
        }
        wa.df.push_back(std::move(dwa));
        kg.df.push_back(std::move(dkg));
    }
    return {std::move(wa), std::move(kg)};
}

}  // namespace wkg
