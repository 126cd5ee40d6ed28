#pragma once

#include <cmath>

#include "wkg/field.hpp"
#include "wkg/grid.hpp"

namespace wkg {

enum class Family { wa, kg };
enum class Sign : int { plus = +1, minus = -1 };

inline Sign flip(Sign s) { return s == Sign::plus ? Sign::minus : Sign::plus; }
inline double sgn(Sign s) { return s == Sign::plus ? 1.0 : -1.0; }

struct DispersionKind {
    Family family;
    Sign sign = Sign::plus;
};

// |xi| for the wave family, <xi> for Klein-Gordon, negated for the minus branch.
inline double dispersion_symbol(DispersionKind kind, const Vec3& xi) {
    double base = kind.family == Family::wa ? norm3(xi) : kg_weight(xi);
    return sgn(kind.sign) * base;
}

inline FieldTag tag_of(Family f) { return f == Family::wa ? FieldTag::wa : FieldTag::kg; }

}  // namespace wkg
