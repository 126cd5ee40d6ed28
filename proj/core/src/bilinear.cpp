#include "wkg/bilinear.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "wkg/errors.hpp"
#include "wkg/fast_math.hpp"
#include "wkg/parallel.hpp"

namespace wkg {

namespace {

// Per-grid multiplier tables shared by every evaluation.
struct GridTables {
    std::vector<double> lam_wa, lam_kg;        // dispersion symbols
    std::vector<double> inv_kg, quad_kg;       // 1/<xi>, |xi|^2/<xi>
    std::vector<double> dir_kg[3];             // xi_i/<xi>
    std::vector<double> inv_wa;                // 1/|xi|, zero mode dropped
    std::vector<unsigned char> keep;           // 2/3-rule mask
    std::vector<unsigned char> nyq;            // Nyquist mask
};

const GridTables& tables_for(const GridPtr& grid) {
    static std::mutex mu;
    static std::map<std::pair<int, double>, std::unique_ptr<GridTables>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(grid->n(), grid->box_length());
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
    auto tab = std::make_unique<GridTables>();
    std::size_t sz = grid->size();
    tab->lam_wa.resize(sz);
    tab->lam_kg.resize(sz);
    tab->inv_kg.resize(sz);
    tab->quad_kg.resize(sz);
    for (auto& d : tab->dir_kg) d.resize(sz);
    tab->inv_wa.resize(sz);
    tab->keep.resize(sz);
    tab->nyq.resize(sz);
    for (std::size_t i = 0; i < sz; ++i) {
        Vec3 xi = grid->xi(i);
        double n2 = dot3(xi, xi);
        double kg = std::sqrt(1.0 + n2);
        double wa = std::sqrt(n2);
        tab->lam_wa[i] = wa;
        tab->lam_kg[i] = kg;
        tab->inv_kg[i] = 1.0 / kg;
        tab->quad_kg[i] = n2 / kg;
        for (int a = 0; a < 3; ++a) tab->dir_kg[a][i] = xi[a] / kg;
        tab->inv_wa[i] = wa > 0.0 ? 1.0 / wa : 0.0;
        tab->keep[i] = dealias_keeps(*grid, i) ? 1 : 0;
        tab->nyq[i] = grid->is_nyquist(i) ? 0 : 1;
    }
    const GridTables& ref = *tab;
    cache.emplace(key, std::move(tab));
    return ref;
}

// Reusable complex scratch buffers keyed by size (one set per thread).
std::vector<cplx>& scratch(std::size_t sz, int slot) {
    thread_local std::map<std::pair<std::size_t, int>, std::vector<cplx>> bufs;
    auto& b = bufs[{sz, slot}];
    b.resize(sz);
    return b;
}

void cis_of_scaled(const std::vector<double>& lam, double t, std::vector<cplx>& out) {
    std::size_t sz = lam.size();
    out.resize(sz);
    static thread_local std::vector<double> phase;
    phase.resize(sz);
    for (std::size_t i = 0; i < sz; ++i) phase[i] = t * lam[i];
    cis_array(phase.data(), out.data(), sz);
}

void validate(const BilinearJob& job) {
    if (!job.F || !job.G) throw input_error("bilinear job: null field");
    if (!same_grid(*job.F, *job.G)) throw shape_error("bilinear job: grid mismatch");
    FieldTag wantG = job.kind == Family::wa ? FieldTag::kg : FieldTag::wa;
    if (job.F->tag != FieldTag::kg || job.G->tag != wantG)
        throw input_error("bilinear job: input tags do not match the interaction kind");
}

// buf = m .* cis^{+-} .* f, optionally de-aliased, then inverse transformed
void factor_into(const FftEngine& eng, const GridTables& tab, const SpectralField& f,
                 const double* m, const std::vector<cplx>& cis, bool conj_cis,
                 bool dealias_on, std::vector<cplx>& buf) {
    std::size_t sz = f.size();
    buf.resize(sz);
    if (conj_cis) {
        for (std::size_t i = 0; i < sz; ++i) buf[i] = m[i] * std::conj(cis[i]) * f[i];
    } else {
        for (std::size_t i = 0; i < sz; ++i) buf[i] = m[i] * cis[i] * f[i];
    }
    if (dealias_on)
        for (std::size_t i = 0; i < sz; ++i)
            if (!tab.keep[i]) buf[i] = 0.0;
    eng.inverse_raw(buf.data());
}

// forward transform of prod, then the output propagator and 1/4 prefactor
SpectralField finish(const FftEngine& eng, const GridTables& tab, std::vector<cplx>& prod,
                     Family out_fam, const std::vector<cplx>& cis_out, bool dealias_on) {
    eng.forward_raw(prod.data());
    SpectralField out(eng.grid(), tag_of(out_fam));
    std::size_t sz = prod.size();
    for (std::size_t i = 0; i < sz; ++i) {
        cplx v = 0.25 * cis_out[i] * prod[i];
        if (dealias_on && !tab.keep[i]) v = 0.0;
        out[i] = tab.nyq[i] ? v : cplx(0.0);
    }
    return out;
}

}  // namespace

SpectralField eval_bilinear(const FftEngine& eng, const BilinearJob& job, bool dealias_on) {
    validate(job);
    const GridTables& tab = tables_for(job.F->grid);
    const double ss = sgn(job.s1) * sgn(job.s2);
    std::size_t sz = job.F->size();

    static thread_local std::vector<cplx> cis_kg, cis_wa;
    cis_of_scaled(tab.lam_kg, job.t, cis_kg);  // e^{+i t <xi>}; minus branch via conj

    auto& fa = scratch(sz, 0);
    auto& gb = scratch(sz, 1);
    auto& prod = scratch(sz, 2);
    std::fill(prod.begin(), prod.end(), cplx(0.0));

    // the e^{-i t Lambda_{kg,iota}} factor: conj(cis_kg) for +, cis_kg for -
    bool cf = job.s1 == Sign::plus;
    bool cg = job.s2 == Sign::plus;

    if (job.kind == Family::wa) {
        const double* ones = nullptr;
        static thread_local std::vector<double> one_tab;
        if (one_tab.size() != sz) one_tab.assign(sz, 1.0);
        ones = one_tab.data();
        struct Term {
            const double* m;
            double coef;
        };
        const Term terms[5] = {{ones, 1.0},
                               {tab.inv_kg.data(), -ss},
                               {tab.dir_kg[0].data(), ss},
                               {tab.dir_kg[1].data(), ss},
                               {tab.dir_kg[2].data(), ss}};
        for (const Term& tm : terms) {
            factor_into(eng, tab, *job.F, tm.m, cis_kg, cf, dealias_on, fa);
            factor_into(eng, tab, *job.G, tm.m, cis_kg, cg, dealias_on, gb);
            for (std::size_t i = 0; i < sz; ++i) prod[i] += tm.coef * fa[i] * gb[i];
        }
        cis_of_scaled(tab.lam_wa, job.t, cis_wa);
        return finish(eng, tab, prod, Family::wa, cis_wa, dealias_on);
    }

    cis_of_scaled(tab.lam_wa, job.t, cis_wa);
    factor_into(eng, tab, *job.F, tab.quad_kg.data(), cis_kg, cf, dealias_on, fa);
    factor_into(eng, tab, *job.G, tab.inv_wa.data(), cis_wa, cg, dealias_on, gb);
    for (std::size_t i = 0; i < sz; ++i) prod[i] = ss * fa[i] * gb[i];
    return finish(eng, tab, prod, Family::kg, cis_kg, dealias_on);
}

SpectralField eval_bilinear_oracle(const BilinearJob& job) {
    validate(job);
    const auto& g = *job.F->grid;
    if (g.n() > 12)
        throw cost_guard_error("oracle is O(N^6); refuse grids above 12^3, got n=" +
                               std::to_string(g.n()));
    SpectralField out(job.F->grid, tag_of(job.kind));
    const double dxi = g.freq_spacing();
    const double measure = dxi * dxi * dxi;
    constexpr double inv_two_pi_32 = 1.0 / 15.749609945722419;  // (2pi)^{-3/2}
    const std::size_t sz = g.size();

    parallel_for(0, sz, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t io = lo; io < hi; ++io) {
            auto [i1, i2, i3] = g.unflatten(io);
            Vec3 xi = g.xi(io);
            cplx acc = 0.0;
            for (std::size_t ie = 0; ie < sz; ++ie) {
                const cplx Gv = (*job.G)[ie];
                if (Gv == cplx(0.0)) continue;
                auto [j1, j2, j3] = g.unflatten(ie);
                std::size_t idiff = g.flatten(g.wrap(g.signed_index(i1) - g.signed_index(j1)),
                                              g.wrap(g.signed_index(i2) - g.signed_index(j2)),
                                              g.wrap(g.signed_index(i3) - g.signed_index(j3)));
                const cplx Fv = (*job.F)[idiff];
                if (Fv == cplx(0.0)) continue;
                Vec3 eta = g.xi(ie);
                Vec3 diff = g.xi(idiff);  // wrapped lattice point
                double lam_out = job.kind == Family::wa ? norm3(xi) : kg_weight(xi);
                double lam1 = sgn(job.s1) * kg_weight(diff);
                double lam2 = job.kind == Family::wa ? sgn(job.s2) * kg_weight(eta)
                                                     : sgn(job.s2) * norm3(eta);
                double phi = lam_out - lam1 - lam2;
                double m;
                if (job.kind == Family::wa) {
                    m = 1.0 + sgn(job.s1) * sgn(job.s2) * (dot3(diff, eta) - 1.0) /
                                  (kg_weight(diff) * kg_weight(eta));
                } else {
                    double ne = norm3(eta);
                    double nd2 = diff[0] * diff[0] + diff[1] * diff[1] + diff[2] * diff[2];
                    m = ne > 0.0 ? sgn(job.s1) * sgn(job.s2) * nd2 / (kg_weight(diff) * ne) : 0.0;
                }
                double th = job.t * phi;
                acc += cplx(std::cos(th), std::sin(th)) * m * Fv * Gv;
            }
            out[io] = 0.25 * inv_two_pi_32 * measure * acc;
        }
    });
    zero_nyquist(out);
    return out;
}

SpectralField wa_interaction_sum(const FftEngine& eng, const SpectralField& Ap,
                                 const SpectralField& Am, double t, bool dealias_on) {
    const GridTables& tab = tables_for(Ap.grid);
    std::size_t sz = Ap.size();
    static thread_local std::vector<cplx> cis_kg, cis_wa;
    cis_of_scaled(tab.lam_kg, t, cis_kg);
    cis_of_scaled(tab.lam_wa, t, cis_wa);

    static thread_local std::vector<double> one_tab;
    if (one_tab.size() != sz) one_tab.assign(sz, 1.0);
    const double* ms[5] = {one_tab.data(), tab.inv_kg.data(), tab.dir_kg[0].data(),
                           tab.dir_kg[1].data(), tab.dir_kg[2].data()};

    auto& pp = scratch(sz, 0);
    auto& pm = scratch(sz, 1);
    auto& prod = scratch(sz, 2);
    std::fill(prod.begin(), prod.end(), cplx(0.0));
    for (int m = 0; m < 5; ++m) {
        factor_into(eng, tab, Ap, ms[m], cis_kg, true, dealias_on, pp);
        factor_into(eng, tab, Am, ms[m], cis_kg, false, dealias_on, pm);
        if (m == 0) {
            for (std::size_t i = 0; i < sz; ++i) {
                cplx s = pp[i] + pm[i];
                prod[i] += s * s;
            }
        } else {
            double coef = m == 1 ? -1.0 : 1.0;
            for (std::size_t i = 0; i < sz; ++i) {
                cplx d = pp[i] - pm[i];
                prod[i] += coef * d * d;
            }
        }
    }
    return finish(eng, tab, prod, Family::wa, cis_wa, dealias_on);
}

SpectralField kg_interaction_sum(const FftEngine& eng, const SpectralField& Kp,
                                 const SpectralField& Km, const SpectralField& Wp,
                                 const SpectralField& Wm, double t, bool dealias_on) {
    const GridTables& tab = tables_for(Kp.grid);
    std::size_t sz = Kp.size();
    static thread_local std::vector<cplx> cis_kg, cis_wa;
    cis_of_scaled(tab.lam_kg, t, cis_kg);
    cis_of_scaled(tab.lam_wa, t, cis_wa);

    auto& qp = scratch(sz, 3);
    auto& qm = scratch(sz, 4);
    auto& rp = scratch(sz, 5);
    auto& rm = scratch(sz, 6);
    factor_into(eng, tab, Kp, tab.quad_kg.data(), cis_kg, true, dealias_on, qp);
    factor_into(eng, tab, Km, tab.quad_kg.data(), cis_kg, false, dealias_on, qm);
    factor_into(eng, tab, Wp, tab.inv_wa.data(), cis_wa, true, dealias_on, rp);
    factor_into(eng, tab, Wm, tab.inv_wa.data(), cis_wa, false, dealias_on, rm);
    auto& prod = scratch(sz, 7);
    for (std::size_t i = 0; i < sz; ++i) prod[i] = (qp[i] - qm[i]) * (rp[i] - rm[i]);
    return finish(eng, tab, prod, Family::kg, cis_kg, dealias_on);
}

ProfileRhs rhs_profiles(const FftEngine& eng, const ProfileState& s, bool dealias_on,
                        double scale) {
    ProfileRhs rhs;
    if (scale == 0.0) {
        rhs.wa = SpectralField(s.Vwa.grid, FieldTag::wa);
        rhs.kg = SpectralField(s.Vkg.grid, FieldTag::kg);
        return rhs;
    }
    SpectralField Vkg_m = conj_reflect(s.Vkg);
    SpectralField Vwa_m = conj_reflect(s.Vwa);
    rhs.wa = wa_interaction_sum(eng, s.Vkg, Vkg_m, s.t, dealias_on);
    rhs.kg = kg_interaction_sum(eng, s.Vkg, Vkg_m, s.Vwa, Vwa_m, s.t, dealias_on);
    if (scale != 1.0) {
        for (auto& z : rhs.wa.v) z *= scale;
        for (auto& z : rhs.kg.v) z *= scale;
    }
    return rhs;
}

}  // namespace wkg
