#pragma once

#include "wkg/dispersion.hpp"
#include "wkg/field.hpp"
#include "wkg/transform.hpp"

namespace wkg {

// Pointwise multiplication by e^{i t Lambda_kind(xi)}; unitary.
SpectralField propagate(const SpectralField& f, DispersionKind kind, double t);

// d/dxi_l of a spectral profile, computed as the transform of -i*x_l*f(x)
// with the sawtooth box coordinate.
SpectralField xi_derivative(const FftEngine& eng, const SpectralField& f, int axis);

// 2/3-rule mask: zeroes every mode whose wrapped index exceeds n/3 on any axis.
void dealias(SpectralField& f);
bool dealias_keeps(const FourierGrid& g, std::size_t flat);

// Pointwise multiplier application m(|xi|) or m(xi).
template <class F>
SpectralField apply_multiplier(const SpectralField& f, F&& m) {
    SpectralField out = f;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= m(out.grid->xi(i));
    return out;
}

}  // namespace wkg
