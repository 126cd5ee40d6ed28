#include "wkg/lp.hpp"

#include <cmath>

#include "wkg/errors.hpp"
#include "wkg/spectral_ops.hpp"

namespace wkg {

LittlewoodPaley::LittlewoodPaley(GridPtr grid, CutoffFamily cutoffs)
    : grid_(std::move(grid)), cut_(cutoffs), eng_(grid_) {}

SpectralField LittlewoodPaley::project_pk(const SpectralField& f, int k, bool strict) const {
    if (strict && !grid_->shell_resolvable(k))
        throw shell_range_error("P_k shell " + std::to_string(k) + " unresolvable; valid window [" +
                                    std::to_string(grid_->k_min()) + "," +
                                    std::to_string(grid_->k_max()) + "]",
                                grid_->k_min(), grid_->k_max());
    SpectralField out = f;
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] *= cut_.phi_k(norm3(grid_->xi(i)), k);
    return out;
}

SpectralField LittlewoodPaley::project_p_interval(const SpectralField& f, int a, int b) const {
    SpectralField out = f;
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] *= cut_.phi_interval(norm3(grid_->xi(i)), a, b);
    return out;
}

SpectralField LittlewoodPaley::project_qjk(const SpectralField& f, int j, int k) const {
    if (!in_J(k, j)) throw index_domain_error("Q_jk: (k,j) outside the index set");
    SpectralField pk = project_pk(f, k, false);
    PhysicalField phys = eng_.inverse(pk);
    for (std::size_t i = 0; i < phys.size(); ++i)
        phys[i] *= cut_.phi_j_k(norm3(grid_->coord(i)), j, k, grid_->j_top());
    return eng_.forward(phys, f.tag);
}

SpectralField LittlewoodPaley::project_script_qjk(const SpectralField& f, int j, int k) const {
    SpectralField q = project_qjk(f, j, k);
    return project_p_interval(q, k - 2, k + 2);
}

std::vector<int> LittlewoodPaley::shell_window() const {
    // any shell whose support [2^{k-1}, 2^{k+1}] meets (0, xi_max]
    int lo = static_cast<int>(std::floor(std::log2(grid_->freq_spacing()))) - 1;
    int hi = static_cast<int>(std::ceil(std::log2(grid_->xi_max()))) + 1;
    std::vector<int> ks;
    for (int k = lo; k <= hi; ++k) ks.push_back(k);
    return ks;
}

std::vector<int> LittlewoodPaley::j_window(int k) const {
    std::vector<int> js;
    for (int j = -k_minus(k); j <= grid_->j_top(); ++j) js.push_back(j);
    return js;
}

ShellComparability shell_comparability(const LittlewoodPaley& lp, const SpectralField& f) {
    ShellComparability out;
    const auto& g = *lp.grid();
    for (int k : lp.shell_window()) {
        double A = l2_norm(lp.project_pk(f, k, false));
        for (int axis = 0; axis < 3; ++axis) {
            SpectralField d = xi_derivative(lp.engine(), f, axis);
            for (std::size_t i = 0; i < d.size(); ++i)
                d[i] *= lp.cutoffs().phi_k(norm3(g.xi(i)), k);
            A += l2_norm(d);
        }
        double B2 = 0.0;
        for (int j : lp.j_window(k)) {
            double q = l2_norm(lp.project_qjk(f, j, k));
            B2 += std::exp2(2.0 * j) * q * q;
        }
        out.ks.push_back(k);
        out.A.push_back(A);
        out.B.push_back(std::sqrt(B2));
    }
    return out;
}

}  // namespace wkg
