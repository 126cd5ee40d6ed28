#pragma once

#include <optional>
#include <vector>

#include "wkg/cutoffs.hpp"
#include "wkg/scattering_data.hpp"
#include "wkg/states.hpp"

namespace wkg {

/** Geometric cache time grid t_i = t_min * 2^{i/per_octave}, prefixed by 0
 * and clipped to end exactly at t_max. */
struct CacheTimeGrid {
    std::vector<double> times;
    double t_max = 0.0;

    static CacheTimeGrid geometric(double t_max, double t_min = 0.25, int per_octave = 4);
    std::size_t size() const { return times.size(); }
};

struct CacheOptions {
    int refine = 1;                  // quadrature refinement knob (halving test doubles it)
    double table_spacing = 0.125;    // kernel-table resolution in w
    double filon_winding = 0.25;     // max slow-phase winding per Filon sub-panel
    double support_threshold = 0.0;  // drop |Vkg_inf|^2 entries below threshold*max
    bool build_nonresonant = true;   // the b/B pass
};

/** Every asymptotic quantity of the backward construction, tabulated on the
 * cache time grid:
 *   h      : low-frequency source of the wave component (direct eta sum)
 *   Hacc   : its running time integral
 *   Hcut   : moving-cutoff field  phi_{<=0}(xi<t>^{7/8}) (Vwa_inf + Hacc)
 *   C, D   : KG phase-correction rate and its accumulated (real) phase
 *   b, B   : non-resonant high-low source and its backward integral
 * plus the kernel table that makes Hacc evaluable at arbitrary times. */
class ResonantCache {
  public:
    struct Entry {
        double t;
        SpectralField h, Hacc, Hcut, b_small, B_big;
        std::vector<double> C, D;
    };

    static ResonantCache build(const FftEngine& eng, const ScatteringData& data,
                               const CacheTimeGrid& tgrid, const CacheOptions& opts = {});

    const GridPtr& grid() const { return grid_; }
    const ScatteringData& data() const { return data_; }
    const CacheTimeGrid& time_grid() const { return tgrid_; }
    const std::vector<Entry>& entries() const { return entries_; }
    double t_max() const { return tgrid_.t_max; }

    std::size_t panel_below(double t) const;  // largest i with times[i] <= t

    // Exact cache-time accessor for h; interpolation between cache times is
    // refused by design (the integrand oscillates).
    const SpectralField& h_at_time(double t) const;

    // Linear interpolation in t (the accumulated quantities are smooth).
    SpectralField Hacc_lin(double t) const;
    SpectralField B_lin(double t) const;
    std::vector<double> D_lin(double t) const;

    // phi_{<=0}(xi <t>^{7/8}) (Vwa_inf + Hacc(t)) with the cutoff exact at t.
    SpectralField Hcut_at(double t) const;

    // e^{i D(t)} Vkg_inf
    SpectralField kg_resonant_profile(double t) const;

    // (Vwa_inf + Hacc, e^{iD} Vkg_inf [+ B]) at a cache time.
    ProfileState resonant_profile(std::size_t index, bool include_B) const;

    // Near-exact evaluation of Hacc at arbitrary t via the kernel table
    // (used inside the phase-correction quadrature and by tests).
    cplx Hacc_exact(double t, std::size_t flat) const;
    SpectralField Hacc_exact_field(double t) const;

    // Direct lattice-sum evaluation of h at arbitrary t (the definition).
    SpectralField h_direct(double t) const;

    // Exact-evaluator counterparts used by consistency oracles: the moving
    // cutoff field, the phase-correction rate, and the non-resonant source,
    // each rebuilt from the kernel table rather than interpolated.
    SpectralField Hcut_exact(double t) const;
    std::vector<double> C_exact(double t) const;
    SpectralField b_direct(const FftEngine& eng, double t) const;

    struct Tails {
        double c_sup_at_T = 0.0;   // sup_xi |C(T,xi)|
        double b_norm_at_T = 0.0;  // L2 norm of b(T)
    };
    const Tails& tails() const { return tails_; }

    const std::vector<std::size_t>& support() const { return support_; }

  private:
    ResonantCache() = default;

    GridPtr grid_;
    ScatteringData data_;
    CacheTimeGrid tgrid_;
    CacheOptions opts_;
    CutoffFamily cut_;
    std::vector<Entry> entries_;
    Tails tails_;

    // |Vkg_inf|^2 weights and the velocity map eta/<eta> on the kept modes
    std::vector<double> Wgt_, ux_, uy_, uz_, abs_eta_;
    std::vector<std::size_t> eta_index_;
    std::vector<std::size_t> support_;  // xi modes with |xi| < 2

    // kernel table J(w) = sum_eta W(eta) e^{-i w.u(eta)} deta^3
    std::vector<cplx> jtab_;
    int jtab_n_ = 0;
    double jtab_origin_ = 0.0, jtab_delta_ = 0.0;

    cplx jtab_eval(const Vec3& w) const;
    void build_weights();
    void build_jtable();
    double cutoff_value(double abs_xi, double t) const;
    void cutoff_bounds(double abs_xi, double& s1, double& s2) const;
    cplx hacc_increment(const Vec3& xi, double abs_xi, double a, double b) const;

    friend class ResonantCacheTestAccess;
};

// Standalone direct evaluation of the low-frequency source term (the
// definition; used as the oracle for the cached pipeline).
SpectralField compute_h_inf(const ScatteringData& data, double t,
                            const CutoffFamily& cut = {});

}  // namespace wkg
