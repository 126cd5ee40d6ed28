#include "wkg/phase_checks.hpp"

#include <cmath>
#include <random>

#include "wkg/errors.hpp"

namespace wkg {

namespace {

Vec3 uniform_ball(std::mt19937_64& rng, double radius) {
    std::uniform_real_distribution<double> u(-radius, radius);
    for (;;) {
        Vec3 p = {u(rng), u(rng), u(rng)};
        if (norm3(p) <= radius) return p;
    }
}

}  // namespace

std::vector<PhaseSpec> stationary_cases() {
    return {{Family::wa, Sign::plus, Sign::minus},
            {Family::wa, Sign::minus, Sign::plus},
            {Family::kg, Sign::plus, Sign::plus},
            {Family::kg, Sign::plus, Sign::minus}};
}

MarginReport check_phase_lower_bound(const PhaseSpec& spec, double b, std::size_t samples,
                                     std::uint64_t seed) {
    if (b < 1.0) throw input_error("phase lower bound is stated for b >= 1");
    if (!classify_resonances(spec).stationary)
        throw input_error("phase lower bound check applies to the stationary sign cases");
    MarginReport rep;
    rep.spec = spec;
    rep.b = b;
    std::mt19937_64 rng(seed);
    double min_ratio = std::numeric_limits<double>::infinity();
    std::size_t kept = 0;
    while (kept < samples) {
        Vec3 xi = uniform_ball(rng, b);
        Vec3 eta = uniform_ball(rng, b);
        Vec3 diff = {xi[0] - eta[0], xi[1] - eta[1], xi[2] - eta[2]};
        if (norm3(diff) > b) continue;
        double denom = spec.out == Family::wa ? norm3(xi) : norm3(eta);
        if (denom < 1e-12) continue;  // the bound degenerates at the resonance point
        ++kept;
        double ratio = std::abs(phase(spec, xi, eta)) * 4.0 * b * b / denom;
        if (ratio < min_ratio) {
            min_ratio = ratio;
            rep.argmin_xi = xi;
            rep.argmin_eta = eta;
        }
    }
    rep.samples = kept;
    rep.min_ratio = min_ratio;
    rep.pass = min_ratio >= 1.0;
    return rep;
}

PhiBoundReport check_est_phi(std::size_t samples, std::uint64_t seed, double radius) {
    PhiBoundReport rep;
    rep.samples = samples;
    std::mt19937_64 rng(seed);
    double c_min = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < samples; ++s) {
        Vec3 x1 = uniform_ball(rng, radius);
        Vec3 x2 = uniform_ball(rng, radius);
        Vec3 sum = {x1[0] + x2[0], x1[1] + x2[1], x1[2] + x2[2]};
        double ns = norm3(sum);
        if (ns < 1e-10) continue;
        double wt = ns / ((1.0 + norm3(x1) + norm3(x2)) * (1.0 + norm3(x1) + norm3(x2)));
        for (double s1 : {1.0, -1.0})
            for (double s2 : {1.0, -1.0}) {
                double Phi = kg_weight(x1) + s1 * kg_weight(x2) + s2 * ns;
                double c = std::abs(Phi) / wt;
                if (c < c_min) {
                    c_min = c;
                    rep.argmin_xi1 = x1;
                    rep.argmin_xi2 = x2;
                }
            }
    }
    rep.c_min = c_min;
    return rep;
}

double fit_wa_taylor_constant(std::size_t samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    double c = 0.0;
    PhaseSpec spec{Family::wa, Sign::plus, Sign::minus};
    for (std::size_t s = 0; s < samples; ++s) {
        Vec3 xi = uniform_ball(rng, 0.1);
        Vec3 eta = uniform_ball(rng, 2.0);
        double nxi = norm3(xi);
        if (nxi < 1e-6) continue;
        double exact = phase(spec, xi, eta);
        double lead = leading_phase(LeadingPhaseKind::wa_bulk, Sign::plus, xi, eta);
        c = std::max(c, std::abs(exact - lead) / (nxi * nxi));
    }
    return c;
}

}  // namespace wkg
