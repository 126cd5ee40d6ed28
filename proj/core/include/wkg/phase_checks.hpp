#pragma once

#include <cstdint>
#include <vector>

#include "wkg/phase.hpp"

namespace wkg {

struct MarginReport {
    PhaseSpec spec;
    double b = 1.0;
    std::size_t samples = 0;
    double min_ratio = 0.0;  // min of |Phi| * 4b^2 / |xi| (wa) or / |eta| (kg)
    Vec3 argmin_xi{}, argmin_eta{};
    bool pass = false;       // min_ratio >= 1
};

// Monte-Carlo check of the quadratic-phase lower bound in the stationary
// sign cases; samples are drawn with |xi|,|eta|,|xi-eta| <= b.
MarginReport check_phase_lower_bound(const PhaseSpec& spec, double b, std::size_t samples,
                                     std::uint64_t seed);

// The four stationary cases the bound is claimed for.
std::vector<PhaseSpec> stationary_cases();

// Empirical constant of |Phi(xi1,xi2)| >= c |xi1+xi2| / (1+|xi1|+|xi2|)^2
// over random samples and all four sign combinations.
struct PhiBoundReport {
    std::size_t samples = 0;
    double c_min = 0.0;
    Vec3 argmin_xi1{}, argmin_xi2{};
};
PhiBoundReport check_est_phi(std::size_t samples, std::uint64_t seed, double radius = 4.0);

// Fits |Phi_wa^{+-} - Phi_wa^{+-,0}| <= C |xi|^2 over sampled |xi|<=0.1,
// |eta|<=2; returns the fitted C.
double fit_wa_taylor_constant(std::size_t samples, std::uint64_t seed);

}  // namespace wkg
