#include "wkg/resonant.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "wkg/bilinear.hpp"
#include "wkg/errors.hpp"
#include "wkg/fast_math.hpp"
#include "wkg/parallel.hpp"
#include "wkg/spectral_ops.hpp"

namespace wkg {

namespace {

constexpr double inv_two_pi_32 = 1.0 / 15.749609945722419;  // (2pi)^{-3/2}

// Gauss-Legendre 6 on [-1,1]
const double kGlNode[6] = {-0.9324695142031521, -0.6612093864662645, -0.2386191860831969,
                           0.2386191860831969,  0.6612093864662645,  0.9324695142031521};
const double kGlWeight[6] = {0.1713244923791704, 0.3607615730481386, 0.4679139345726910,
                             0.4679139345726910, 0.3607615730481386, 0.1713244923791704};

// Lobatto 5 on [-1,1]
const double kLobNode[5] = {-1.0, -0.6546536707079771, 0.0, 0.6546536707079771, 1.0};
const double kLobWeight[5] = {0.1, 0.5444444444444444, 0.7111111111111111,
                              0.5444444444444444, 0.1};

double kg_weight_scalar(double n2) { return std::sqrt(1.0 + n2); }

// <t>^{7/8}
double bracket_78(double t) { return std::pow(1.0 + t * t, 7.0 / 16.0); }

// Coefficients of the Lagrange basis through the Lobatto-5 nodes in the
// monomial basis on [-1,1]: basis_mono[k][q] is the u^k coefficient of L_q.
struct LobattoBasis {
    double mono[5][5];
    LobattoBasis() {
        for (int q = 0; q < 5; ++q) {
            // start from the constant polynomial 1 and multiply the factors
            double poly[5] = {1, 0, 0, 0, 0};
            int deg = 0;
            double denom = 1.0;
            for (int r = 0; r < 5; ++r) {
                if (r == q) continue;
                denom *= kLobNode[q] - kLobNode[r];
                for (int k = deg; k >= 0; --k) {
                    poly[k + 1] += poly[k];
                    poly[k] *= -kLobNode[r];
                }
                ++deg;
            }
            for (int k = 0; k < 5; ++k) mono[k][q] = poly[k] / denom;
        }
    }
    // integral of L_q over [-1, u]
    double partial_integral(int q, double u) const {
        double s = 0.0;
        for (int k = 0; k < 5; ++k) {
            double a = std::pow(u, k + 1) / (k + 1);
            double b = std::pow(-1.0, k + 1) / (k + 1);
            s += mono[k][q] * (a - b);
        }
        return s;
    }
};
const LobattoBasis& lobatto_basis() {
    static LobattoBasis b;
    return b;
}

// m_k(Omega) = int_{-1}^{1} u^k e^{i Omega u} du,  k = 0..4
void monomial_moments(double Omega, cplx out[5]) {
    if (std::abs(Omega) < 0.5) {
        for (int k = 0; k < 5; ++k) {
            cplx acc = 0.0, term = 1.0;
            for (int j = 0; j <= 26; ++j) {
                if ((j + k) % 2 == 0) acc += term * (2.0 / (j + k + 1));
                term *= cplx(0.0, Omega) / double(j + 1);
            }
            out[k] = acc;
        }
        return;
    }
    cplx iW(0.0, Omega);
    double sinW = std::sin(Omega), cosW = std::cos(Omega);
    out[0] = 2.0 * sinW / Omega;
    for (int k = 1; k < 5; ++k) {
        cplx boundary = (k % 2 == 0) ? cplx(0.0, 2.0 * sinW) : cplx(2.0 * cosW, 0.0);
        out[k] = boundary / iW - (double(k) / iW) * out[k - 1];
    }
}

}  // namespace

CacheTimeGrid CacheTimeGrid::geometric(double t_max, double t_min, int per_octave) {
    if (!(t_max > t_min) || !(t_min > 0.0) || per_octave < 1)
        throw config_error("cache time grid: need t_max > t_min > 0 and per_octave >= 1");
    CacheTimeGrid g;
    g.t_max = t_max;
    g.times.push_back(0.0);
    double r = std::exp2(1.0 / per_octave);
    for (double t = t_min; t < t_max * (1.0 - 1e-12); t *= r) g.times.push_back(t);
    g.times.push_back(t_max);
    return g;
}

double ResonantCache::cutoff_value(double abs_xi, double t) const {
    return cut_.bump(abs_xi * bracket_78(t));
}

void ResonantCache::cutoff_bounds(double abs_xi, double& s1, double& s2) const {
    auto bound = [&](double level) {
        if (abs_xi <= 0.0) return std::numeric_limits<double>::infinity();
        double A = std::pow(level / abs_xi, 16.0 / 7.0);  // <s>^2 at the crossing
        return A > 1.0 ? std::sqrt(A - 1.0) : 0.0;
    };
    s1 = bound(1.0);
    s2 = bound(2.0);
}

void ResonantCache::build_weights() {
    const auto& g = *grid_;
    double maxw = 0.0;
    for (const auto& z : data_.Vkg_inf.v) maxw = std::max(maxw, std::norm(z));
    double cut = opts_.support_threshold * maxw;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double w = std::norm(data_.Vkg_inf[i]);
        if (w <= cut && cut > 0.0) continue;
        Vec3 eta = g.xi(i);
        double ne = norm3(eta);
        double kg = kg_weight(eta);
        Wgt_.push_back(w);
        ux_.push_back(eta[0] / kg);
        uy_.push_back(eta[1] / kg);
        uz_.push_back(eta[2] / kg);
        abs_eta_.push_back(ne);
        eta_index_.push_back(i);
    }
    // support of the moving cutoff, sorted so the alive set is a prefix
    for (std::size_t i = 0; i < g.size(); ++i)
        if (norm3(g.xi(i)) < 2.0) support_.push_back(i);
    std::sort(support_.begin(), support_.end(), [&](std::size_t a, std::size_t b) {
        double na = norm3(g.xi(a)), nb = norm3(g.xi(b));
        return na != nb ? na < nb : a < b;
    });
}

void ResonantCache::build_jtable() {
    double t_top = tgrid_.t_max;
    double wq = 2.0 * std::pow(1.0 + t_top * t_top, 1.0 / 16.0) + 0.2;
    jtab_delta_ = opts_.table_spacing;
    int half = static_cast<int>(std::ceil(wq / jtab_delta_)) + 3;
    jtab_n_ = 2 * half + 1;
    jtab_origin_ = -half * jtab_delta_;
    jtab_.assign(static_cast<std::size_t>(jtab_n_) * jtab_n_ * jtab_n_, cplx(0.0));

    double m = grid_->freq_spacing();
    double measure = m * m * m;
    double rmax2 = (wq + 2.5 * jtab_delta_) * (wq + 2.5 * jtab_delta_);
    std::size_t nn = static_cast<std::size_t>(jtab_n_);
    parallel_for(0, nn * nn * nn, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t f = lo; f < hi; ++f) {
            int c = static_cast<int>(f % nn);
            int b = static_cast<int>((f / nn) % nn);
            int a = static_cast<int>(f / (nn * nn));
            double wx = jtab_origin_ + a * jtab_delta_;
            double wy = jtab_origin_ + b * jtab_delta_;
            double wz = jtab_origin_ + c * jtab_delta_;
            if (wx * wx + wy * wy + wz * wz > rmax2) continue;
            cplx s = phase_dot_sum(Wgt_.size(), ux_.data(), uy_.data(), uz_.data(),
                                   abs_eta_.data(), -wx, -wy, -wz, 0.0, Wgt_.data(), nullptr);
            jtab_[f] = s * measure;
        }
    });
}

cplx ResonantCache::jtab_eval(const Vec3& w) const {
    // Catmull-Rom tricubic on the kernel table
    auto basis = [](double t, double c[4]) {
        double t2 = t * t, t3 = t2 * t;
        c[0] = -0.5 * t3 + t2 - 0.5 * t;
        c[1] = 1.5 * t3 - 2.5 * t2 + 1.0;
        c[2] = -1.5 * t3 + 2.0 * t2 + 0.5 * t;
        c[3] = 0.5 * t3 - 0.5 * t2;
    };
    double gx = (w[0] - jtab_origin_) / jtab_delta_;
    double gy = (w[1] - jtab_origin_) / jtab_delta_;
    double gz = (w[2] - jtab_origin_) / jtab_delta_;
    int ix = static_cast<int>(std::floor(gx)), iy = static_cast<int>(std::floor(gy)),
        iz = static_cast<int>(std::floor(gz));
    if (ix < 1 || iy < 1 || iz < 1 || ix > jtab_n_ - 3 || iy > jtab_n_ - 3 || iz > jtab_n_ - 3)
        throw index_domain_error("kernel table query outside tabulated ball");
    double cx[4], cy[4], cz[4];
    basis(gx - ix, cx);
    basis(gy - iy, cy);
    basis(gz - iz, cz);
    std::size_t nn = static_cast<std::size_t>(jtab_n_);
    cplx acc = 0.0;
    for (int a = 0; a < 4; ++a) {
        cplx pa = 0.0;
        for (int b = 0; b < 4; ++b) {
            cplx pb = 0.0;
            const cplx* row = &jtab_[((ix - 1 + a) * nn + (iy - 1 + b)) * nn + (iz - 1)];
            for (int c = 0; c < 4; ++c) pb += cz[c] * row[c];
            pa += cy[b] * pb;
        }
        acc += cx[a] * pa;
    }
    return acc;
}

cplx ResonantCache::hacc_increment(const Vec3& xi, double abs_xi, double a, double b) const {
    // int_a^b c(s) e^{i s |xi|} J(s xi) ds, split at the plateau edge and
    // subdivided so each GL-6 panel sees a bounded winding
    double s1, s2;
    cutoff_bounds(abs_xi, s1, s2);
    b = std::min(b, s2);
    if (!(b > a)) return 0.0;
    cplx total = 0.0;
    double pieces[2][2] = {{a, std::min(b, s1)}, {std::max(a, s1), b}};
    for (auto& piece : pieces) {
        double lo = piece[0], hi = piece[1];
        if (!(hi > lo)) continue;
        double winding = 2.0 * abs_xi * (hi - lo);
        int nsub = opts_.refine * std::max(1, static_cast<int>(std::ceil(winding / 1.2)));
        double h = (hi - lo) / nsub;
        for (int p = 0; p < nsub; ++p) {
            double c0 = lo + p * h, c1 = c0 + h;
            double mid = 0.5 * (c0 + c1), half = 0.5 * (c1 - c0);
            for (int q = 0; q < 6; ++q) {
                double s = mid + half * kGlNode[q];
                double cval = cutoff_value(abs_xi, s);
                if (cval == 0.0) continue;
                double th = s * abs_xi;
                cplx osc(std::cos(th), std::sin(th));
                cplx J = jtab_eval({s * xi[0], s * xi[1], s * xi[2]});
                total += kGlWeight[q] * half * cval * osc * J;
            }
        }
    }
    return inv_two_pi_32 * total;
}

SpectralField ResonantCache::h_direct(double t) const {
    SpectralField out(grid_, FieldTag::wa);
    double m = grid_->freq_spacing();
    double measure = m * m * m;
    double br = bracket_78(t);
    parallel_for(0, support_.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t s = lo; s < hi; ++s) {
            std::size_t flat = support_[s];
            Vec3 xi = grid_->xi(flat);
            double nxi = norm3(xi);
            double cval = cut_.bump(nxi * br);
            if (cval == 0.0) continue;
            cplx inner = phase_dot_sum(Wgt_.size(), ux_.data(), uy_.data(), uz_.data(), nullptr,
                                       -t * xi[0], -t * xi[1], -t * xi[2], 0.0, Wgt_.data(),
                                       nullptr);
            double th = t * nxi;
            out[flat] = inv_two_pi_32 * cval * cplx(std::cos(th), std::sin(th)) * inner * measure;
        }
    });
    return out;
}

SpectralField compute_h_inf(const ScatteringData& data, double t, const CutoffFamily& cut) {
    const GridPtr& grid = data.Vkg_inf.grid;
    SpectralField out(grid, FieldTag::wa);
    double m = grid->freq_spacing();
    double measure = m * m * m;
    double br = bracket_78(t);
    std::size_t sz = grid->size();
    std::vector<double> W(sz), px(sz), py(sz), pz(sz);
    for (std::size_t i = 0; i < sz; ++i) {
        W[i] = std::norm(data.Vkg_inf[i]);
        Vec3 eta = grid->xi(i);
        double kg = kg_weight(eta);
        px[i] = eta[0] / kg;
        py[i] = eta[1] / kg;
        pz[i] = eta[2] / kg;
    }
    parallel_for(0, sz, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t f = lo; f < hi; ++f) {
            Vec3 xi = grid->xi(f);
            double nxi = norm3(xi);
            double cval = cut.bump(nxi * br);
            if (cval == 0.0) continue;
            cplx inner = phase_dot_sum(sz, px.data(), py.data(), pz.data(), nullptr, -t * xi[0],
                                       -t * xi[1], -t * xi[2], 0.0, W.data(), nullptr);
            double th = t * nxi;
            out[f] = inv_two_pi_32 * cval * cplx(std::cos(th), std::sin(th)) * inner * measure;
        }
    });
    return out;
}

ResonantCache ResonantCache::build(const FftEngine& eng, const ScatteringData& data,
                                   const CacheTimeGrid& tgrid, const CacheOptions& opts) {
    ResonantCache rc;
    rc.grid_ = data.Vkg_inf.grid;
    rc.data_ = data;
    rc.tgrid_ = tgrid;
    rc.opts_ = opts;
    rc.build_weights();
    rc.build_jtable();

    const auto& g = *rc.grid_;
    const auto& times = tgrid.times;
    const std::size_t nt = times.size();
    const std::size_t nsup = rc.support_.size();
    const double m = g.freq_spacing();
    const double measure = m * m * m;
    const double kappa = 0.5 * inv_two_pi_32;

    // per-support geometry
    std::vector<Vec3> sxi(nsup);
    std::vector<double> snorm(nsup);
    for (std::size_t s = 0; s < nsup; ++s) {
        sxi[s] = g.xi(rc.support_[s]);
        snorm[s] = norm3(sxi[s]);
    }
    auto alive_count = [&](double t) {
        double limit = 2.0 / bracket_78(t);
        return static_cast<std::size_t>(
            std::lower_bound(snorm.begin(), snorm.end(), limit) - snorm.begin());
    };

    // ---- node plan: cache times, phase-correction nodes, Filon nodes ----
    struct Node {
        double s;
        int panel;        // panel index i for s in [t_i, t_{i+1}]
        int cache_index;  // >= 0 when s is exactly a cache time
    };
    std::vector<Node> plan;
    std::vector<std::array<int, 5>> lob_nodes(nt - 1);     // plan index of the 5 C nodes
    std::vector<std::vector<int>> filon_nodes(nt - 1);     // plan indices of the b nodes
    std::vector<int> filon_subcount(nt - 1);

    for (std::size_t i = 0; i + 1 < nt; ++i) {
        double a = times[i], b = times[i + 1];
        plan.push_back({a, static_cast<int>(i), static_cast<int>(i)});
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (int q = 1; q < 4; ++q)
            plan.push_back({mid + half * kLobNode[q], static_cast<int>(i), -1});
        double rate = 4.0 / bracket_78(a);
        int nf = std::max(1, static_cast<int>(std::ceil(rate * (b - a) / opts.filon_winding)));
        nf = std::min(nf, 12) * opts.refine;
        filon_subcount[i] = nf;
        double hf = (b - a) / nf;
        for (int p = 0; p < nf; ++p) {
            double c0 = a + p * hf, cm = c0 + 0.5 * hf, hh = 0.5 * hf;
            for (int q = 0; q < 5; ++q) {
                if (p > 0 && q == 0) continue;  // shared with previous boundary
                if (q == 0 && p == 0) continue; // equals the cache time node
                if (q == 4 && p == nf - 1) continue;  // equals next cache time
                plan.push_back({cm + hh * kLobNode[q], static_cast<int>(i), -1});
            }
        }
    }
    plan.push_back({times[nt - 1], static_cast<int>(nt - 2), static_cast<int>(nt - 1)});
    std::sort(plan.begin(), plan.end(), [](const Node& x, const Node& y) { return x.s < y.s; });
    auto plan_index_of = [&](double s) {
        auto it = std::lower_bound(plan.begin(), plan.end(), s,
                                   [](const Node& n, double v) { return n.s < v - 1e-13; });
        if (it == plan.end() || std::abs(it->s - s) > 1e-10 * std::max(1.0, s))
            throw accuracy_error("internal: quadrature node not in plan");
        return static_cast<int>(it - plan.begin());
    };
    for (std::size_t i = 0; i + 1 < nt; ++i) {
        double a = times[i], b = times[i + 1];
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (int q = 0; q < 5; ++q) lob_nodes[i][q] = plan_index_of(mid + half * kLobNode[q]);
        int nf = filon_subcount[i];
        double hf = (b - a) / nf;
        filon_nodes[i].clear();
        for (int p = 0; p < nf; ++p) {
            double c0 = a + p * hf, cm = c0 + 0.5 * hf, hh = 0.5 * hf;
            for (int q = 0; q < 5; ++q)
                filon_nodes[i].push_back(plan_index_of(cm + hh * kLobNode[q]));
        }
    }

    // ---- scanner pass: Hacc on the support at every plan node ----
    const std::size_t nplan = plan.size();
    std::vector<std::size_t> alive_at(nplan);
    for (std::size_t p = 0; p < nplan; ++p) alive_at[p] = alive_count(plan[p].s);

    // node store: Hacc for the alive prefix at each node
    std::vector<std::vector<cplx>> nodeH(nplan);
    for (std::size_t p = 0; p < nplan; ++p) nodeH[p].assign(alive_at[p], cplx(0.0));
    // full support values at cache times
    std::vector<std::vector<cplx>> cacheH(nt, std::vector<cplx>(nsup, cplx(0.0)));

    parallel_for(0, nsup, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t s = lo; s < hi; ++s) {
            cplx acc = 0.0;
            double prev = 0.0;
            for (std::size_t p = 0; p < nplan; ++p) {
                double cur = plan[p].s;
                if (cur > prev) acc += rc.hacc_increment(sxi[s], snorm[s], prev, cur);
                prev = cur;
                if (s < alive_at[p]) nodeH[p][s] = acc;
                if (plan[p].cache_index >= 0) cacheH[plan[p].cache_index][s] = acc;
            }
        }
    });

    // ---- assemble entries: h (direct), Hacc, Hcut ----
    rc.entries_.resize(nt);
    for (std::size_t i = 0; i < nt; ++i) {
        Entry& e = rc.entries_[i];
        e.t = times[i];
        e.h = rc.h_direct(times[i]);
        e.Hacc = SpectralField(rc.grid_, FieldTag::wa);
        for (std::size_t s = 0; s < nsup; ++s) e.Hacc[rc.support_[s]] = cacheH[i][s];
        e.Hcut = SpectralField(rc.grid_, FieldTag::wa);
        double br = bracket_78(times[i]);
        for (std::size_t s = 0; s < nsup; ++s) {
            double cval = rc.cut_.bump(snorm[s] * br);
            if (cval == 0.0) continue;
            std::size_t flat = rc.support_[s];
            e.Hcut[flat] = cval * (data.Vwa_inf[flat] + e.Hacc[flat]);
        }
        e.C.assign(g.size(), 0.0);
        e.D.assign(g.size(), 0.0);
    }

    // Hcut amplitudes over the alive prefix of a plan node, divided by |eta|
    auto hcut_amp = [&](std::size_t p) {
        std::size_t na = alive_at[p];
        double br = bracket_78(plan[p].s);
        std::vector<cplx> amp(na);
        for (std::size_t s = 0; s < na; ++s) {
            double ne = snorm[s];
            if (ne == 0.0) {
                amp[s] = 0.0;  // zero-mode convention of the 1/|eta| factor
                continue;
            }
            double cval = rc.cut_.bump(ne * br);
            std::size_t flat = rc.support_[s];
            amp[s] = (measure / ne) * cval * (data.Vwa_inf[flat] + nodeH[p][s]);
        }
        return amp;
    };

    // split-coordinate views of the support lattice for the dot-phase kernel
    std::vector<double> spx(nsup), spy(nsup), spz(nsup);
    for (std::size_t s = 0; s < nsup; ++s) {
        spx[s] = sxi[s][0];
        spy[s] = sxi[s][1];
        spz[s] = sxi[s][2];
    }

    // C at one plan node, all lattice xi
    auto c_field_at = [&](std::size_t p) {
        std::vector<double> C(g.size(), 0.0);
        std::vector<cplx> amp = hcut_amp(p);
        double s = plan[p].s;
        std::size_t na = amp.size();
        std::vector<double> are(na), aim(na);
        for (std::size_t j = 0; j < na; ++j) {
            are[j] = amp[j].real();
            aim[j] = amp[j].imag();
        }
        parallel_for(0, g.size(), [&](std::size_t lo, std::size_t hi) {
            for (std::size_t f = lo; f < hi; ++f) {
                Vec3 xi = g.xi(f);
                double n2 = dot3(xi, xi);
                if (n2 == 0.0) continue;
                double kg = kg_weight_scalar(n2);
                cplx J2 = phase_dot_sum(na, spx.data(), spy.data(), spz.data(), snorm.data(),
                                        s * xi[0] / kg, s * xi[1] / kg, s * xi[2] / kg, -s,
                                        are.data(), aim.data());
                C[f] = kappa * (n2 / kg) * J2.imag();
            }
        });
        return C;
    };

    // ---- forward phase-correction pass: C at Lobatto nodes, D accumulated ----
    std::vector<std::array<std::vector<double>, 5>> panelC(nt - 1);
    for (std::size_t i = 0; i + 1 < nt; ++i) {
        double half = 0.5 * (times[i + 1] - times[i]);
        for (int q = 0; q < 5; ++q) {
            if (q == 0 && i > 0)
                panelC[i][0] = panelC[i - 1][4];
            else
                panelC[i][q] = c_field_at(lob_nodes[i][q]);
        }
        Entry& e0 = rc.entries_[i];
        Entry& e1 = rc.entries_[i + 1];
        e0.C = panelC[i][0];
        e1.C = panelC[i][4];
        for (std::size_t f = 0; f < g.size(); ++f) {
            double acc = 0.0;
            for (int q = 0; q < 5; ++q) acc += kLobWeight[q] * panelC[i][q][f];
            e1.D[f] = e0.D[f] + half * acc;
        }
    }

    // D at an arbitrary time inside a panel, via the exact integral of the
    // quartic interpolant of C through the Lobatto nodes
    auto d_at = [&](double t, std::vector<double>& out) {
        std::size_t i = rc.panel_below(t);
        if (i + 1 >= nt) {
            out = rc.entries_[nt - 1].D;
            return;
        }
        double a = times[i], b = times[i + 1];
        double u = (2.0 * t - a - b) / (b - a);
        const auto& B = lobatto_basis();
        double coef[5];
        for (int q = 0; q < 5; ++q) coef[q] = 0.5 * (b - a) * B.partial_integral(q, u);
        out = rc.entries_[i].D;
        for (std::size_t f = 0; f < g.size(); ++f) {
            double add = 0.0;
            for (int q = 0; q < 5; ++q) add += coef[q] * panelC[i][q][f];
            out[f] += add;
        }
    };

    // ---- non-resonant pass: b at cache times, B by backward Filon ----
    std::vector<double> omega(g.size());
    for (std::size_t f = 0; f < g.size(); ++f) omega[f] = 2.0 * kg_weight(g.xi(f));

    auto b_small_at = [&](double t, const std::vector<double>& D) {
        // Hcut at time t (cutoff exact, Hacc from the scanner store)
        std::size_t p = static_cast<std::size_t>(plan_index_of(t));
        SpectralField Hc(rc.grid_, FieldTag::wa);
        double br = bracket_78(t);
        std::size_t na = alive_at[p];
        for (std::size_t s = 0; s < na; ++s) {
            double cval = rc.cut_.bump(snorm[s] * br);
            if (cval == 0.0) continue;
            std::size_t flat = rc.support_[s];
            Hc[flat] = cval * (data.Vwa_inf[flat] + nodeH[p][s]);
        }
        SpectralField Wkg(rc.grid_, FieldTag::kg);
        for (std::size_t f = 0; f < g.size(); ++f)
            Wkg[f] = std::polar(1.0, D[f]) * data.Vkg_inf[f];
        SpectralField Wm = conj_reflect(Wkg);
        SpectralField Hm = conj_reflect(Hc);
        BilinearJob plusJob{Family::kg, Sign::minus, Sign::plus, &Wm, &Hc, t};
        BilinearJob minusJob{Family::kg, Sign::minus, Sign::minus, &Wm, &Hm, t};
        SpectralField out = eval_bilinear(eng, plusJob, false);
        SpectralField out2 = eval_bilinear(eng, minusJob, false);
        for (std::size_t f = 0; f < g.size(); ++f) out[f] += out2[f];
        return out;
    };

    if (opts.build_nonresonant) {
        // b at cache times
        for (std::size_t i = 0; i < nt; ++i)
            rc.entries_[i].b_small = b_small_at(times[i], rc.entries_[i].D);

        // backward accumulation of B with per-sub-panel Filon moments
        rc.entries_[nt - 1].B_big = SpectralField(rc.grid_, FieldTag::kg);
        const auto& B = lobatto_basis();
        std::vector<double> Dnode;
        for (std::size_t ii = nt - 1; ii-- > 0;) {
            double a = times[ii], b = times[ii + 1];
            int nf = filon_subcount[ii];
            double hf = (b - a) / nf;
            // integral_a^b e^{-iD(s)} b(s) ds, accumulated per sub-panel
            SpectralField integral(rc.grid_, FieldTag::kg);
            std::vector<SpectralField> gval(5, SpectralField(rc.grid_, FieldTag::kg));
            for (int p = 0; p < nf; ++p) {
                double c0 = a + p * hf, cm = c0 + 0.5 * hf, hh = 0.5 * hf;
                for (int q = 0; q < 5; ++q) {
                    double s = cm + hh * kLobNode[q];
                    d_at(s, Dnode);
                    SpectralField bs = b_small_at(s, Dnode);
                    // slow part g = e^{-iD} e^{-i omega s} b
                    for (std::size_t f = 0; f < g.size(); ++f)
                        gval[q][f] = std::polar(1.0, -Dnode[f] - omega[f] * s) * bs[f];
                }
                // per distinct omega: M_q = e^{i omega cm} hh sum_k B[k][q] m_k(omega hh)
                std::unordered_map<long, std::array<cplx, 5>> mom;
                for (std::size_t f = 0; f < g.size(); ++f) {
                    long key = static_cast<long>(std::llround(omega[f] * 1e9));
                    auto it = mom.find(key);
                    if (it == mom.end()) {
                        cplx mk[5];
                        monomial_moments(omega[f] * hh, mk);
                        std::array<cplx, 5> M{};
                        cplx lead = std::polar(hh, omega[f] * cm);
                        for (int q = 0; q < 5; ++q) {
                            cplx acc = 0.0;
                            for (int k = 0; k < 5; ++k) acc += B.mono[k][q] * mk[k];
                            M[q] = lead * acc;
                        }
                        it = mom.emplace(key, M).first;
                    }
                    const auto& M = it->second;
                    cplx add = 0.0;
                    for (int q = 0; q < 5; ++q) add += M[q] * gval[q][f];
                    integral[f] += add;
                }
            }
            Entry& cur = rc.entries_[ii];
            const Entry& nxt = rc.entries_[ii + 1];
            cur.B_big = SpectralField(rc.grid_, FieldTag::kg);
            for (std::size_t f = 0; f < g.size(); ++f) {
                cplx carry = std::polar(1.0, cur.D[f] - nxt.D[f]) * nxt.B_big[f];
                cur.B_big[f] = carry - std::polar(1.0, cur.D[f]) * integral[f];
            }
        }
    } else {
        for (auto& e : rc.entries_) {
            e.b_small = SpectralField(rc.grid_, FieldTag::kg);
            e.B_big = SpectralField(rc.grid_, FieldTag::kg);
        }
    }

    for (std::size_t f = 0; f < g.size(); ++f)
        rc.tails_.c_sup_at_T = std::max(rc.tails_.c_sup_at_T,
                                        std::abs(rc.entries_[nt - 1].C[f]));
    rc.tails_.b_norm_at_T = l2_norm(rc.entries_[nt - 1].b_small);
    return rc;
}

std::size_t ResonantCache::panel_below(double t) const {
    const auto& ts = tgrid_.times;
    auto it = std::upper_bound(ts.begin(), ts.end(), t);
    if (it == ts.begin()) return 0;
    std::size_t i = static_cast<std::size_t>(it - ts.begin()) - 1;
    return std::min(i, ts.size() - 2);
}

const SpectralField& ResonantCache::h_at_time(double t) const {
    for (std::size_t i = 0; i < tgrid_.times.size(); ++i)
        if (std::abs(tgrid_.times[i] - t) <= 1e-9 * std::max(1.0, t))
            return entries_[i].h;
    throw input_error("h is stored at cache times only; interpolating the oscillatory "
                      "integrand is refused by design");
}

namespace {
template <class Get>
SpectralField lin_field(const ResonantCache& rc, double t, Get get, FieldTag tag) {
    const auto& ts = rc.time_grid().times;
    std::size_t i = rc.panel_below(t);
    double a = ts[i], b = ts[i + 1];
    double w = std::clamp((t - a) / (b - a), 0.0, 1.0);
    SpectralField out(rc.grid(), tag);
    const SpectralField& f0 = get(rc.entries()[i]);
    const SpectralField& f1 = get(rc.entries()[i + 1]);
    for (std::size_t f = 0; f < out.size(); ++f)
        out[f] = (1.0 - w) * f0[f] + w * f1[f];
    return out;
}
}  // namespace

SpectralField ResonantCache::Hacc_lin(double t) const {
    return lin_field(*this, t, [](const Entry& e) -> const SpectralField& { return e.Hacc; },
                     FieldTag::wa);
}

SpectralField ResonantCache::B_lin(double t) const {
    return lin_field(*this, t, [](const Entry& e) -> const SpectralField& { return e.B_big; },
                     FieldTag::kg);
}

std::vector<double> ResonantCache::D_lin(double t) const {
    const auto& ts = tgrid_.times;
    std::size_t i = panel_below(t);
    double a = ts[i], b = ts[i + 1];
    double w = std::clamp((t - a) / (b - a), 0.0, 1.0);
    std::vector<double> out(grid_->size());
    for (std::size_t f = 0; f < out.size(); ++f)
        out[f] = (1.0 - w) * entries_[i].D[f] + w * entries_[i + 1].D[f];
    return out;
}

SpectralField ResonantCache::Hcut_at(double t) const {
    SpectralField acc = Hacc_lin(t);
    SpectralField out(grid_, FieldTag::wa);
    double br = bracket_78(t);
    for (std::size_t s = 0; s < support_.size(); ++s) {
        std::size_t flat = support_[s];
        double cval = cut_.bump(norm3(grid_->xi(flat)) * br);
        if (cval == 0.0) continue;
        out[flat] = cval * (data_.Vwa_inf[flat] + acc[flat]);
    }
    return out;
}

SpectralField ResonantCache::kg_resonant_profile(double t) const {
    std::vector<double> D = D_lin(t);
    SpectralField out(grid_, FieldTag::kg);
    for (std::size_t f = 0; f < out.size(); ++f)
        out[f] = std::polar(1.0, D[f]) * data_.Vkg_inf[f];
    return out;
}

ProfileState ResonantCache::resonant_profile(std::size_t index, bool include_B) const {
    const Entry& e = entries_.at(index);
    ProfileState out;
    out.t = e.t;
    out.Vwa = data_.Vwa_inf + e.Hacc;
    out.Vwa.tag = FieldTag::wa;
    out.Vkg = SpectralField(grid_, FieldTag::kg);
    for (std::size_t f = 0; f < out.Vkg.size(); ++f) {
        out.Vkg[f] = std::polar(1.0, e.D[f]) * data_.Vkg_inf[f];
        if (include_B) out.Vkg[f] += e.B_big[f];
    }
    return out;
}

cplx ResonantCache::Hacc_exact(double t, std::size_t flat) const {
    Vec3 xi = grid_->xi(flat);
    double nxi = norm3(xi);
    if (nxi >= 2.0) return 0.0;
    // integrate in cache-panel pieces so each increment is well subdivided
    cplx acc = 0.0;
    double prev = 0.0;
    for (double tc : tgrid_.times) {
        double cur = std::min(tc, t);
        if (cur > prev) acc += hacc_increment(xi, nxi, prev, cur);
        prev = cur;
        if (tc >= t) break;
    }
    if (t > prev) acc += hacc_increment(xi, nxi, prev, t);
    return acc;
}

SpectralField ResonantCache::Hacc_exact_field(double t) const {
    SpectralField out(grid_, FieldTag::wa);
    parallel_for(0, support_.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t s = lo; s < hi; ++s)
            out[support_[s]] = Hacc_exact(t, support_[s]);
    });
    return out;
}

SpectralField ResonantCache::Hcut_exact(double t) const {
    SpectralField acc = Hacc_exact_field(t);
    SpectralField out(grid_, FieldTag::wa);
    double br = bracket_78(t);
    for (std::size_t flat : support_) {
        double cval = cut_.bump(norm3(grid_->xi(flat)) * br);
        if (cval == 0.0) continue;
        out[flat] = cval * (data_.Vwa_inf[flat] + acc[flat]);
    }
    return out;
}

std::vector<double> ResonantCache::C_exact(double t) const {
    const auto& g = *grid_;
    double m = g.freq_spacing();
    double measure = m * m * m;
    double br = bracket_78(t);
    SpectralField Hc = Hcut_exact(t);

    std::size_t na = 0;
    double limit = 2.0 / br;
    std::vector<double> ex, ey, ez, eabs, are, aim;
    for (std::size_t s = 0; s < support_.size(); ++s) {
        Vec3 eta = g.xi(support_[s]);
        double ne = norm3(eta);
        if (ne >= limit) break;  // support is sorted by |xi|
        if (ne == 0.0) continue;
        cplx amp = (measure / ne) * Hc[support_[s]];
        ex.push_back(eta[0]);
        ey.push_back(eta[1]);
        ez.push_back(eta[2]);
        eabs.push_back(ne);
        are.push_back(amp.real());
        aim.push_back(amp.imag());
        ++na;
    }
    std::vector<double> C(g.size(), 0.0);
    const double kappa = 0.5 * inv_two_pi_32;
    parallel_for(0, g.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t f = lo; f < hi; ++f) {
            Vec3 xi = g.xi(f);
            double n2 = dot3(xi, xi);
            if (n2 == 0.0) continue;
            double kg = std::sqrt(1.0 + n2);
            cplx J2 = phase_dot_sum(na, ex.data(), ey.data(), ez.data(), eabs.data(),
                                    t * xi[0] / kg, t * xi[1] / kg, t * xi[2] / kg, -t,
                                    are.data(), aim.data());
            C[f] = kappa * (n2 / kg) * J2.imag();
        }
    });
    return C;
}

SpectralField ResonantCache::b_direct(const FftEngine& eng, double t) const {
    SpectralField Hc = Hcut_exact(t);
    std::vector<double> D = D_lin(t);
    SpectralField Wkg(grid_, FieldTag::kg);
    for (std::size_t f = 0; f < Wkg.size(); ++f)
        Wkg[f] = std::polar(1.0, D[f]) * data_.Vkg_inf[f];
    SpectralField Wm = conj_reflect(Wkg);
    SpectralField Hm = conj_reflect(Hc);
    BilinearJob plusJob{Family::kg, Sign::minus, Sign::plus, &Wm, &Hc, t};
    BilinearJob minusJob{Family::kg, Sign::minus, Sign::minus, &Wm, &Hm, t};
    SpectralField out = eval_bilinear(eng, plusJob, false);
    SpectralField out2 = eval_bilinear(eng, minusJob, false);
    for (std::size_t f = 0; f < out.size(); ++f) out[f] += out2[f];
    return out;
}

}  // namespace wkg
