#pragma once

#include "wkg/phase.hpp"
#include "wkg/spectral_ops.hpp"
#include "wkg/states.hpp"

namespace wkg {

/** One Duhamel integrand evaluation
 *   I[F,G](t,xi) = (1/4)(2pi)^{-3/2} sum_eta e^{i t Phi(xi,eta)} m(xi,eta)
 *                  Fhat(xi-eta) Ghat(eta) deta^3
 * with m = a (wave output, two KG inputs) or b (KG output, KG x wave inputs).
 * The wave kind expects two kg-tagged profiles, the kg kind a (kg, wa) pair. */
struct BilinearJob {
    Family kind;
    Sign s1, s2;
    const SpectralField* F;
    const SpectralField* G;
    double t;
};

// Fast path: the multiplier separates (five products for a, one for b), the
// phase splits into the three propagators, and each separated term becomes a
// pointwise product in physical space.  Exactly equal to the wraparound
// lattice sum when de-aliasing is off.
SpectralField eval_bilinear(const FftEngine& eng, const BilinearJob& job,
                            bool dealias_on = true);

// Literal O(N^6) double-lattice sum with wraparound indexing; grids above
// 12^3 are refused (cost guard).
SpectralField eval_bilinear_oracle(const BilinearJob& job);

// Sum over the four sign pairs of the wave interaction with inputs
// (Ap, Am) = the + and - branches of the KG-type argument.
SpectralField wa_interaction_sum(const FftEngine& eng, const SpectralField& Ap,
                                 const SpectralField& Am, double t, bool dealias_on);

// Sum over the four sign pairs of the KG interaction with KG-type inputs
// (Kp, Km) and wave-type inputs (Wp, Wm).
SpectralField kg_interaction_sum(const FftEngine& eng, const SpectralField& Kp,
                                 const SpectralField& Km, const SpectralField& Wp,
                                 const SpectralField& Wm, double t, bool dealias_on);

struct ProfileRhs {
    SpectralField wa, kg;
};

// d/dt of the profile pair: the minus branches are built by
// reflection-conjugation and all four sign pairs are summed per equation.
ProfileRhs rhs_profiles(const FftEngine& eng, const ProfileState& s, bool dealias_on = true,
                        double scale = 1.0);

}  // namespace wkg
