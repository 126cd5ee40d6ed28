#pragma once

#include <cstdint>
#include <string>

#include "wkg/field.hpp"
#include "wkg/transform.hpp"

namespace wkg {

/** Asymptotic profile pair (the free data of the backward construction).
 * Presets produce conjugate-symmetric fields so all recovered physical
 * quantities are real. */
struct ScatteringData {
    SpectralField Vwa_inf, Vkg_inf;
    double eps = 0.0;
};

// Named recipes: "gaussian-kg" (KG only), "gaussian-both", "two-mode".
// seed != 0 adds a small smooth seeded perturbation (still conjugate
// symmetric) so runs with different seeds probe constant stability.
ScatteringData make_preset(const GridPtr& grid, const std::string& name, double eps,
                           std::uint64_t seed);

// Seeded dense complex field with unit-scale entries, Nyquist zeroed.
SpectralField random_field(const GridPtr& grid, FieldTag tag, std::uint64_t seed);

// Seeded smooth band-limited field (Gaussian envelope in frequency).
SpectralField random_smooth_field(const GridPtr& grid, FieldTag tag, std::uint64_t seed,
                                  double width = 0.6);

}  // namespace wkg
