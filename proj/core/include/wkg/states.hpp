#pragma once

#include "wkg/dispersion.hpp"
#include "wkg/field.hpp"
#include "wkg/transform.hpp"

namespace wkg {

/** Real solution data (u, du/dt, v, dv/dt) at one time.  Stored as complex
 * samples; realness is an invariant checked where conversions claim it. */
struct PhysicalState {
    PhysicalField u, ut, v, vt;
    double t = 0.0;
};

/** First-order complex unknowns U = (d_t - i Lambda) applied to u resp. v. */
struct NormalizedState {
    SpectralField Uwa, Ukg;
    double t = 0.0;
};

/** Profiles V = e^{i t Lambda} U; constant in time under the free flow. */
struct ProfileState {
    SpectralField Vwa, Vkg;
    double t = 0.0;
};

NormalizedState normalize(const FftEngine& eng, const PhysicalState& s);

// Inverts normalize.  The wave zero mode carries only d_t u: u's mean is set
// to zero and Re(Uwa(0)) becomes the mean of d_t u.  Requires Im(Uwa(0)) ~ 0.
PhysicalState recover(const FftEngine& eng, const NormalizedState& s);

ProfileState to_profile(const NormalizedState& s);
NormalizedState from_profile(const ProfileState& s);

}  // namespace wkg
