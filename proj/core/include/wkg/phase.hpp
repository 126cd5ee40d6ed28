#pragma once

#include <cstdint>
#include <string>

#include "wkg/dispersion.hpp"
#include "wkg/grid.hpp"

namespace wkg {

// Which quadratic interaction: the wave output is driven by two KG inputs,
// the KG output by a (KG, wave) pair.  (s1,s2) are the input sign branches.
struct PhaseSpec {
    Family out;
    Sign s1, s2;
};

// Phi = Lambda_out(xi) - Lambda_{in1,s1}(xi-eta) - Lambda_{in2,s2}(eta)
double phase(const PhaseSpec& spec, const Vec3& xi, const Vec3& eta);

// Wave-equation multiplier a and KG-equation multiplier b; b has the 1/|eta|
// factor with the zero mode set to 0 by convention.
double multiplier_a(Sign s1, Sign s2, const Vec3& xi, const Vec3& eta);
double multiplier_b(Sign s1, Sign s2, const Vec3& xi, const Vec3& eta);

enum class LeadingPhaseKind { wa_bulk, kg_highlow };

// First-order Taylor models of the phases near the resonant sets:
//   wa_bulk:    |xi| + s * xi.eta/<eta>     (expansion in xi, s = iota_1)
//   kg_highlow: xi.eta/<xi> - s * |eta|     (expansion in eta, s = iota_2)
double leading_phase(LeadingPhaseKind kind, Sign s, const Vec3& xi, const Vec3& eta);

enum class ResonantSet : std::uint8_t { empty, xi_zero, eta_zero, xi_eq_2eta };

struct ResonanceReport {
    ResonantSet time_resonant;
    ResonantSet space_resonant;
    ResonantSet spacetime;
    bool stationary;  // true iff the time resonance set is nonempty
};

std::string to_string(ResonantSet s);

// The tabulated classification of the eight (family, s1, s2) cases.
ResonanceReport classify_resonances(const PhaseSpec& spec);

}  // namespace wkg
