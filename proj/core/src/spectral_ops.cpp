#include "wkg/spectral_ops.hpp"

#include <cmath>

#include "wkg/errors.hpp"
#include "wkg/parallel.hpp"

namespace wkg {

SpectralField propagate(const SpectralField& f, DispersionKind kind, double t) {
    SpectralField out = f;
    const auto& g = *f.grid;
    parallel_for(0, out.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            double th = t * dispersion_symbol(kind, g.xi(i));
            out[i] *= cplx(std::cos(th), std::sin(th));
        }
    });
    return out;
}

SpectralField xi_derivative(const FftEngine& eng, const SpectralField& f, int axis) {
    if (axis < 0 || axis > 2) throw index_domain_error("xi_derivative: axis must be 0..2");
    PhysicalField phys = eng.inverse(f);
    const auto& g = *f.grid;
    for (std::size_t i = 0; i < phys.size(); ++i)
        phys[i] *= cplx(0.0, -g.coord(i)[axis]);
    return eng.forward(phys, f.tag);
}

bool dealias_keeps(const FourierGrid& g, std::size_t flat) {
    auto [i, j, k] = g.unflatten(flat);
    int cut = g.n() / 3;
    return std::abs(g.signed_index(i)) <= cut && std::abs(g.signed_index(j)) <= cut &&
           std::abs(g.signed_index(k)) <= cut;
}

void dealias(SpectralField& f) {
    const auto& g = *f.grid;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (!dealias_keeps(g, i)) f[i] = 0.0;
}

}  // namespace wkg
