#pragma once

#include <vector>

#include "wkg/cutoffs.hpp"
#include "wkg/field.hpp"
#include "wkg/transform.hpp"

namespace wkg {

/** Littlewood-Paley projections on one grid.  P_k multiplies by the dyadic
 * shell cutoff in frequency; Q_jk cuts P_k f by the spatial shell
 * phi_j^{(k)}; script-Q re-projects Q_jk onto the band [k-2,k+2]. */
class LittlewoodPaley {
  public:
    LittlewoodPaley(GridPtr grid, CutoffFamily cutoffs = {});

    const FftEngine& engine() const { return eng_; }
    const CutoffFamily& cutoffs() const { return cut_; }
    const GridPtr& grid() const { return grid_; }

    int k_min() const { return grid_->k_min(); }
    int k_max() const { return grid_->k_max(); }
    int j_top() const { return grid_->j_top(); }

    // strict=true throws shell_range_error outside the resolvable window;
    // strict=false returns the (possibly zero) projection anyway, which is
    // what the summed identities use.
    SpectralField project_pk(const SpectralField& f, int k, bool strict = true) const;
    SpectralField project_p_interval(const SpectralField& f, int a, int b) const;
    SpectralField project_qjk(const SpectralField& f, int j, int k) const;
    SpectralField project_script_qjk(const SpectralField& f, int j, int k) const;

    // Shells with any lattice support, padded by one on each side; the k-sums
    // in the identity tests run over this list.
    std::vector<int> shell_window() const;

    // j indices for a given k: -k^- .. j_top (the top entry absorbs the tail).
    std::vector<int> j_window(int k) const;

  private:
    GridPtr grid_;
    CutoffFamily cut_;
    FftEngine eng_;
};

// A_k and B_k of the shell-comparability lemma:
//   A_k = ||P_k f||_2 + sum_l ||phi_k d_{xi_l} fhat||_2,
//   B_k = ( sum_j 2^{2j} ||Q_jk f||_2^2 )^{1/2}.
struct ShellComparability {
    std::vector<int> ks;
    std::vector<double> A, B;
};
ShellComparability shell_comparability(const LittlewoodPaley& lp, const SpectralField& f);

}  // namespace wkg
