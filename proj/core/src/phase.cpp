#include "wkg/phase.hpp"

#include <cmath>

#include "wkg/errors.hpp"

namespace wkg {

double phase(const PhaseSpec& spec, const Vec3& xi, const Vec3& eta) {
    Vec3 diff = {xi[0] - eta[0], xi[1] - eta[1], xi[2] - eta[2]};
    if (spec.out == Family::wa)
        return norm3(xi) - sgn(spec.s1) * kg_weight(diff) - sgn(spec.s2) * kg_weight(eta);
    return kg_weight(xi) - sgn(spec.s1) * kg_weight(diff) - sgn(spec.s2) * norm3(eta);
}

double multiplier_a(Sign s1, Sign s2, const Vec3& xi, const Vec3& eta) {
    Vec3 diff = {xi[0] - eta[0], xi[1] - eta[1], xi[2] - eta[2]};
    return 1.0 + sgn(s1) * sgn(s2) * (dot3(diff, eta) - 1.0) / (kg_weight(diff) * kg_weight(eta));
}

double multiplier_b(Sign s1, Sign s2, const Vec3& xi, const Vec3& eta) {
    double ne = norm3(eta);
    if (ne == 0.0) return 0.0;
    Vec3 diff = {xi[0] - eta[0], xi[1] - eta[1], xi[2] - eta[2]};
    double nd2 = diff[0] * diff[0] + diff[1] * diff[1] + diff[2] * diff[2];
    return sgn(s1) * sgn(s2) * nd2 / (kg_weight(diff) * ne);
}

double leading_phase(LeadingPhaseKind kind, Sign s, const Vec3& xi, const Vec3& eta) {
    if (kind == LeadingPhaseKind::wa_bulk)
        return norm3(xi) + sgn(s) * dot3(xi, eta) / kg_weight(eta);
    return dot3(xi, eta) / kg_weight(xi) - sgn(s) * norm3(eta);
}

std::string to_string(ResonantSet s) {
    switch (s) {
        case ResonantSet::empty: return "empty";
        case ResonantSet::xi_zero: return "{xi=0}";
        case ResonantSet::eta_zero: return "{eta=0}";
        case ResonantSet::xi_eq_2eta: return "{xi=2eta}";
    }
    return "?";
}

ResonanceReport classify_resonances(const PhaseSpec& spec) {
    bool same = spec.s1 == spec.s2;
    if (spec.out == Family::wa) {
        if (same)  // ++ and --: no time resonance, space-resonant on xi=2eta
            return {ResonantSet::empty, ResonantSet::xi_eq_2eta, ResonantSet::empty, false};
        return {ResonantSet::xi_zero, ResonantSet::xi_zero, ResonantSet::xi_zero, true};
    }
    if (spec.s1 == Sign::plus)  // ++ and +-: fully resonant on eta=0
        return {ResonantSet::eta_zero, ResonantSet::eta_zero, ResonantSet::eta_zero, true};
    return {ResonantSet::empty, ResonantSet::eta_zero, ResonantSet::empty, false};
}

}  // namespace wkg
