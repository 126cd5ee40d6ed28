#pragma once

#include <functional>
#include <vector>

namespace wkg {

struct DecayFit {
    double exponent = 0.0;  // p in |I(t)| ~ c * t^{-p}
    double coeff = 0.0;     // c
    std::vector<double> values;
};

// Least-squares power-law fit on log-log axes.
DecayFit fit_power_law(const std::vector<double>& ts, const std::vector<double>& values);

using RadialFn = std::function<double(double)>;

// |integral over R^3 of e^{i t phi(|x|)} a(|x|) dx| for each t, then a power
// fit.  The r-quadrature is composite Simpson with automatic refinement;
// failure to converge raises accuracy_error.
DecayFit stationary_phase_probe_radial3d(const RadialFn& phi, const RadialFn& amp,
                                         double r_max, const std::vector<double>& ts);

// Same for a 1D model integral on [x_min, x_max].
DecayFit stationary_phase_probe_line(const RadialFn& phi, const RadialFn& amp,
                                     double x_min, double x_max,
                                     const std::vector<double>& ts);

// Raw quadrature value at one t (used for the t=0 sanity checks).
double oscillatory_integral_radial3d(const RadialFn& phi, const RadialFn& amp,
                                     double r_max, double t);
double oscillatory_integral_line(const RadialFn& phi, const RadialFn& amp,
                                 double x_min, double x_max, double t);

}  // namespace wkg
