#include "wkg/norms.hpp"

#include <cmath>
#include <functional>
#include <map>

#include "wkg/errors.hpp"
#include "wkg/spectral_ops.hpp"

namespace wkg {

std::string to_string(NormFamily f) {
    switch (f) {
        case NormFamily::Y1: return "Y1";
        case NormFamily::Y2: return "Y2";
        case NormFamily::S1: return "S1";
        case NormFamily::S2: return "S2";
        case NormFamily::T1: return "T1";
        case NormFamily::T2: return "T2";
        case NormFamily::S1p: return "S1'";
        case NormFamily::S2p: return "S2'";
        case NormFamily::T1p: return "T1'";
        case NormFamily::T2p: return "T2'";
        case NormFamily::X1: return "X1";
        case NormFamily::X2: return "X2";
    }
    return "?";
}

namespace {

std::string word_name(const std::vector<Generator>& w) {
    if (w.empty()) return "Id";
    std::string s;
    for (auto g : w) s += to_string(g);
    return s;
}

bool wave_family(NormFamily f) {
    return f == NormFamily::Y1 || f == NormFamily::S1 || f == NormFamily::T1 ||
           f == NormFamily::S1p || f == NormFamily::T1p || f == NormFamily::X1;
}

Family dispersion_of(NormFamily f) { return wave_family(f) ? Family::wa : Family::kg; }

double sobolev_norm(const SpectralField& f, double s, bool half_inv_nabla) {
    const auto& g = *f.grid;
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        Vec3 xi = g.xi(i);
        double n2 = dot3(xi, xi);
        double w = std::pow(1.0 + n2, s);
        // |nabla|^{-1/2} on the amplitude is |xi|^{-1} on |fhat|^2; the
        // singular zero mode is dropped by convention
        if (half_inv_nabla) {
            if (n2 == 0.0) continue;
            w /= std::sqrt(n2);
        }
        acc += w * std::norm(f[i]);
    }
    double m = g.freq_spacing();
    return std::sqrt(acc * m * m * m);
}

// sup_k weight(k) * ||phi_k field||_2 over the grid's shell window
double shell_sup(const LittlewoodPaley& lp, const SpectralField& f,
                 const std::function<double(int)>& weight, int& argmax_k) {
    const auto& g = *f.grid;
    double best = 0.0;
    argmax_k = -999;
    for (int k : lp.shell_window()) {
        double acc = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            double c = lp.cutoffs().phi_k(norm3(g.xi(i)), k);
            if (c != 0.0) acc += c * c * std::norm(f[i]);
        }
        double m = g.freq_spacing();
        double v = weight(k) * std::sqrt(acc * m * m * m);
        if (v > best) {
            best = v;
            argmax_k = k;
        }
    }
    return best;
}

struct WordField {
    // U-level (propagator removed) and profile-level spectral images of L[f]
    SpectralField u_level, profile;
};

// Applies the word literally to U = e^{-itLambda} fhat with the free jet
// d_t U = -i Lambda U (+ e^{-itLambda} dfhat when supplied).
WordField word_field(const LittlewoodPaley& lp, const SpectralField& fhat,
                     const SpectralField* dfhat, Family fam, double t,
                     const std::vector<Generator>& word) {
    const FftEngine& eng = lp.engine();
    SpectralField U_hat = propagate(fhat, {fam, Sign::minus}, t);
    SpectralField Ut_hat = U_hat;
    const auto& g = *fhat.grid;
    for (std::size_t i = 0; i < Ut_hat.size(); ++i) {
        double lam = dispersion_symbol({fam, Sign::plus}, g.xi(i));
        Ut_hat[i] *= cplx(0.0, -lam);
    }
    if (dfhat != nullptr) {
        SpectralField dpart = propagate(*dfhat, {fam, Sign::minus}, t);
        for (std::size_t i = 0; i < Ut_hat.size(); ++i) Ut_hat[i] += dpart[i];
    }
    PhysicalField U = eng.inverse(U_hat);
    PhysicalField Ut = eng.inverse(Ut_hat);
    PhysicalField LU = apply_word(eng, U, Ut, nullptr, word, t);
    WordField out;
    out.u_level = eng.forward(LU, fhat.tag);
    out.profile = propagate(out.u_level, {fam, Sign::plus}, t);
    return out;
}

}  // namespace

NormSnapshot norm_Y(const LittlewoodPaley& lp, const SpectralField& f, NormFamily which,
                    const NormParams& params) {
    if (which != NormFamily::Y1 && which != NormFamily::Y2)
        throw input_error("norm_Y expects Y1 or Y2");
    FieldSeries s;
    s.times = {0.0};
    s.f = {f};
    return norm_timeweighted(lp, s, which, params);
}

NormSnapshot norm_timeweighted(const LittlewoodPaley& lp, const FieldSeries& series,
                               NormFamily which, const NormParams& params) {
    if (which == NormFamily::X1 || which == NormFamily::X2)
        throw input_error("use norm_X for the working norms");
    NormSnapshot snap;
    snap.family = which;
    snap.cap = params.cap;
    if (series.times.empty() || series.times.size() != series.f.size())
        throw input_error("norm series: times and fields must align");
    if (series.has_df() && series.df.size() != series.f.size())
        throw input_error("norm series: derivative series length mismatch");

    const bool is_wa = wave_family(which);
    const Family fam = dispersion_of(which);
    const bool primed = which == NormFamily::S1p || which == NormFamily::S2p ||
                        which == NormFamily::T1p || which == NormFamily::T2p;
    const bool t_family = which == NormFamily::T1 || which == NormFamily::T2 ||
                          which == NormFamily::T1p || which == NormFamily::T2p;
    const bool y_family = which == NormFamily::Y1 || which == NormFamily::Y2;

    double n_top;
    if (y_family)
        n_top = params.N1 + 2;  // second term capped separately below
    else if (t_family && !primed)
        n_top = params.N1 - 1;
    else
        n_top = primed && t_family ? params.N1 - 1 : params.N1;

    std::map<std::pair<int, std::string>, NormBreakdownEntry> best;

    for (std::size_t ti = 0; ti < series.times.size(); ++ti) {
        double t = series.times[ti];
        double tb = std::sqrt(1.0 + t * t);
        const SpectralField& fhat = series.f[ti];
        const SpectralField* dfhat = series.has_df() ? &series.df[ti] : nullptr;

        for (int n = 0; n <= std::min(static_cast<int>(n_top), params.cap); ++n) {
            for (const auto& spec : words_of_order(n)) {
                WordField wf;
                try {
                    wf = word_field(lp, fhat, dfhat, fam, t, spec.word);
                } catch (const input_error&) {
                    snap.skipped_words.push_back(word_name(spec.word));
                    continue;
                }
                double value = 0.0;
                int arg_k = -999, arg_axis = -1;

                if (y_family) {
                    // first term: Sobolev with N(n-3); second: shell sup of d_xi
                    value = sobolev_norm(wf.u_level, params.N(n - 3), is_wa);
                    if (n <= params.N1 + 1) {
                        for (int axis = 0; axis < 3; ++axis) {
                            SpectralField dxi = xi_derivative(lp.engine(), wf.profile, axis);
                            int km;
                            double v2 = shell_sup(lp, dxi, [&](int k) {
                                double w = std::exp2(params.N(n - 2) * k_plus(k));
                                w *= is_wa ? std::exp2(0.5 * k) : std::exp2(k_plus(k));
                                return w;
                            }, km);
                            if (v2 > value) {
                                value = v2;
                                arg_k = km;
                                arg_axis = axis;
                            }
                        }
                    }
                } else if (!primed && !t_family) {
                    // S-families: time-weighted Sobolev of the U-level image
                    value = std::pow(tb, params.H(n) * params.delta) *
                            sobolev_norm(wf.u_level, params.N(n), is_wa);
                } else if (t_family && !primed) {
                    // T-families: shell sup of d_xi of the full profile
                    for (int axis = 0; axis < 3; ++axis) {
                        SpectralField dxi = xi_derivative(lp.engine(), wf.profile, axis);
                        int km;
                        double v = shell_sup(lp, dxi, [&](int k) {
                            double w = std::exp2(params.N(n + 1) * k_plus(k));
                            w *= is_wa ? std::exp2(0.5 * k) : std::exp2(k_plus(k));
                            return w;
                        }, km);
                        v *= std::pow(tb, params.H(n + 1) * params.delta);
                        if (v > value) {
                            value = v;
                            arg_k = km;
                            arg_axis = axis;
                        }
                    }
                } else if (primed && !t_family) {
                    // S'-families: shell sup of the field itself
                    int km;
                    double v = shell_sup(lp, wf.profile, [&](int k) {
                        double w = std::exp2(params.Npp(n) * k_plus(k));
                        if (is_wa) w *= std::exp2(-0.5 * k_minus(k));
                        return w;
                    }, km);
                    value = std::pow(tb, (1.0 + params.Hpp(n)) * params.delta) * v;
                    arg_k = km;
                } else {
                    // T'-families: shell sup of d_xi of the U-level image
                    for (int axis = 0; axis < 3; ++axis) {
                        SpectralField dxi = xi_derivative(lp.engine(), wf.u_level, axis);
                        int km;
                        double v = shell_sup(lp, dxi, [&](int k) {
                            double w = std::exp2(params.Npp(n) * k_plus(k));
                            if (is_wa) w *= std::exp2(-0.5 * k_minus(k));
                            return w;
                        }, km);
                        v *= std::pow(tb, params.Hpp(n) * params.delta);
                        if (v > value) {
                            value = v;
                            arg_k = km;
                            arg_axis = axis;
                        }
                    }
                }

                auto key = std::make_pair(n, word_name(spec.word));
                auto it = best.find(key);
                if (it == best.end() || value > it->second.value)
                    best[key] = {n, key.second, arg_k, arg_axis, t, value};
            }
        }
    }
    for (const auto& [key, entry] : best) {
        snap.breakdown.push_back(entry);
        snap.value = std::max(snap.value, entry.value);
    }
    return snap;
}

NormSnapshot norm_X(const LittlewoodPaley& lp, const FieldSeries& series, NormFamily which,
                    const NormParams& params) {
    if (which != NormFamily::X1 && which != NormFamily::X2)
        throw input_error("norm_X expects X1 or X2");
    if (!series.has_df())
        throw input_error("the working norms need the time-derivative series");
    bool one = which == NormFamily::X1;
    FieldSeries dseries;
    dseries.times = series.times;
    dseries.f = series.df;

    NormSnapshot S = norm_timeweighted(lp, series, one ? NormFamily::S1 : NormFamily::S2, params);
    NormSnapshot T = norm_timeweighted(lp, series, one ? NormFamily::T1 : NormFamily::T2, params);
    NormSnapshot Sp =
        norm_timeweighted(lp, dseries, one ? NormFamily::S1p : NormFamily::S2p, params);
    NormSnapshot Tp =
        norm_timeweighted(lp, dseries, one ? NormFamily::T1p : NormFamily::T2p, params);

    NormSnapshot snap;
    snap.family = which;
    snap.cap = params.cap;
    snap.value = S.value + T.value + Sp.value + Tp.value;
    for (const NormSnapshot* part : {&S, &T, &Sp, &Tp}) {
        for (const auto& e : part->breakdown) snap.breakdown.push_back(e);
        for (const auto& w : part->skipped_words) snap.skipped_words.push_back(w);
    }
    return snap;
}

}  // namespace wkg
