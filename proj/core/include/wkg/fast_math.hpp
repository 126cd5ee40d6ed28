#pragma once

#include <complex>
#include <cstddef>

namespace wkg {

// Vectorizable e^{i*phase} over arrays; compiled in a fast-math translation
// unit so the loop maps onto SIMD sincos.  Accuracy is a few ulp, far below
// the 1e-6 tolerances of the quadrature loops it serves.
void cis_array(const double* phase, std::complex<double>* out, std::size_t n);

// out += w * e^{i*phase[j]} * amp[j], accumulated left to right.
std::complex<double> cis_weighted_sum(const double* phase,
                                      const std::complex<double>* amp,
                                      std::size_t n);

// sum_j w[j] e^{i (a x[j] + b y[j] + c z[j] + d o[j])} with split complex
// weights; pass w_im = nullptr for real weights.  The workhorse of the
// oscillatory lattice sums.
std::complex<double> phase_dot_sum(std::size_t n, const double* x, const double* y,
                                   const double* z, const double* o, double a, double b,
                                   double c, double d, const double* w_re,
                                   const double* w_im);

}  // namespace wkg
