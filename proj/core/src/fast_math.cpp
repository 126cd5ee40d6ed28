#include "wkg/fast_math.hpp"

#include <cmath>

namespace wkg {

void cis_array(const double* phase, std::complex<double>* out, std::size_t n) {
    double* d = reinterpret_cast<double*>(out);
    for (std::size_t j = 0; j < n; ++j) {
        d[2 * j] = std::cos(phase[j]);
        d[2 * j + 1] = std::sin(phase[j]);
    }
}

std::complex<double> cis_weighted_sum(const double* phase,
                                      const std::complex<double>* amp,
                                      std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double c = std::cos(phase[j]);
        double s = std::sin(phase[j]);
        double ar = amp[j].real(), ai = amp[j].imag();
        re += c * ar - s * ai;
        im += c * ai + s * ar;
    }
    return {re, im};
}

std::complex<double> phase_dot_sum(std::size_t n, const double* x, const double* y,
                                   const double* z, const double* o, double a, double b,
                                   double c, double d, const double* w_re,
                                   const double* w_im) {
    double re = 0.0, im = 0.0;
    if (w_im == nullptr && o == nullptr) {
        for (std::size_t j = 0; j < n; ++j) {
            double ph = a * x[j] + b * y[j] + c * z[j];
            double cc = std::cos(ph), ss = std::sin(ph);
            re += cc * w_re[j];
            im += ss * w_re[j];
        }
    } else if (w_im == nullptr) {
        for (std::size_t j = 0; j < n; ++j) {
            double ph = a * x[j] + b * y[j] + c * z[j] + d * o[j];
            double cc = std::cos(ph), ss = std::sin(ph);
            re += cc * w_re[j];
            im += ss * w_re[j];
        }
    } else if (o == nullptr) {
        for (std::size_t j = 0; j < n; ++j) {
            double ph = a * x[j] + b * y[j] + c * z[j];
            double cc = std::cos(ph), ss = std::sin(ph);
            re += cc * w_re[j] - ss * w_im[j];
            im += cc * w_im[j] + ss * w_re[j];
        }
    } else {
        for (std::size_t j = 0; j < n; ++j) {
            double ph = a * x[j] + b * y[j] + c * z[j] + d * o[j];
            double cc = std::cos(ph), ss = std::sin(ph);
            re += cc * w_re[j] - ss * w_im[j];
            im += cc * w_im[j] + ss * w_re[j];
        }
    }
    return {re, im};
}

}  // namespace wkg
