#include "wkg/oscillatory.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "wkg/errors.hpp"

namespace wkg {

namespace {

using cd = std::complex<double>;

cd simpson(const std::function<cd(double)>& f, double a, double b, int panels) {
    double h = (b - a) / panels;
    cd acc = f(a) + f(b);
    for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return acc * (h / 3.0);
}

cd refine_to_convergence(const std::function<cd(double)>& f, double a, double b) {
    int panels = 1024;
    cd prev = simpson(f, a, b, panels);
    for (int iter = 0; iter < 8; ++iter) {
        panels *= 2;
        cd next = simpson(f, a, b, panels);
        if (std::abs(next - prev) <= 1e-10 * std::max(1e-12, std::abs(next)) + 1e-14)
            return next;
        prev = next;
    }
    throw accuracy_error("oscillatory quadrature did not converge");
}

}  // namespace

DecayFit fit_power_law(const std::vector<double>& ts, const std::vector<double>& values) {
    if (ts.size() != values.size() || ts.size() < 2)
        throw input_error("fit_power_law: need matching lists with >= 2 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = ts.size();
    for (std::size_t i = 0; i < n; ++i) {
        double x = std::log(ts[i]);
        double y = std::log(std::max(values[i], 1e-300));
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double icept = (sy - slope * sx) / n;
    DecayFit fit;
    fit.exponent = -slope;
    fit.coeff = std::exp(icept);
    fit.values = values;
    return fit;
}

double oscillatory_integral_radial3d(const RadialFn& phi, const RadialFn& amp,
                                     double r_max, double t) {
    auto f = [&](double r) {
        double th = t * phi(r);
        return cd(std::cos(th), std::sin(th)) * amp(r) * r * r;
    };
    return 4.0 * std::numbers::pi * std::abs(refine_to_convergence(f, 0.0, r_max));
}

double oscillatory_integral_line(const RadialFn& phi, const RadialFn& amp,
                                 double x_min, double x_max, double t) {
    auto f = [&](double x) {
        double th = t * phi(x);
        return cd(std::cos(th), std::sin(th)) * amp(x);
    };
    return std::abs(refine_to_convergence(f, x_min, x_max));
}

DecayFit stationary_phase_probe_radial3d(const RadialFn& phi, const RadialFn& amp,
                                         double r_max, const std::vector<double>& ts) {
    std::vector<double> vals;
    for (double t : ts) vals.push_back(oscillatory_integral_radial3d(phi, amp, r_max, t));
    return fit_power_law(ts, vals);
}

DecayFit stationary_phase_probe_line(const RadialFn& phi, const RadialFn& amp,
                                     double x_min, double x_max,
                                     const std::vector<double>& ts) {
    std::vector<double> vals;
    for (double t : ts) vals.push_back(oscillatory_integral_line(phi, amp, x_min, x_max, t));
    return fit_power_law(ts, vals);
}

}  // namespace wkg
