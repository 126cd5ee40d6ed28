#pragma once

#include <string>
#include <vector>

#include "wkg/states.hpp"

namespace wkg {

// Generators: Lorentz boosts Gamma_j = x_j d_t + t d_j, rotations
// Omega_jk = x_j d_k - x_k d_j, and coordinate derivatives d_0..d_3.
enum class Generator { G1, G2, G3, O23, O31, O12, Dt, Dx1, Dx2, Dx3 };

std::string to_string(Generator g);

struct VectorFieldSpec {
    std::vector<Generator> word;  // applied right to left
    int order() const { return static_cast<int>(word.size()); }
};

// All words of exactly length n over the generator alphabet.
std::vector<VectorFieldSpec> words_of_order(int n);

enum class Target { u, v };

// Second time derivatives of (u,v), supplied from the equations (or their
// linear parts) so that Gamma words never touch finite differences in time.
struct SecondTimeDerivs {
    PhysicalField utt, vtt;
};

// d_t^2 u = Lap u, d_t^2 v = Lap v - v.
SecondTimeDerivs linear_second_derivs(const FftEngine& eng, const PhysicalState& s);
// Adds the quadratic right-hand sides of the coupled system.
SecondTimeDerivs pde_second_derivs(const FftEngine& eng, const PhysicalState& s);

PhysicalField apply_vector_field(const FftEngine& eng, const PhysicalState& s,
                                 const SecondTimeDerivs& d2, const VectorFieldSpec& spec,
                                 Target target, int max_order = 1);

// Physical-space helpers shared with the norm evaluator.
PhysicalField spatial_derivative(const FftEngine& eng, const PhysicalField& f, int axis);
PhysicalField coordinate_multiply(const PhysicalField& f, int axis);

// Word application on a bare 1-jet (g, d_t g); pass gtt when an order-2 word
// needs it (throws input_error when it is required but missing).
PhysicalField apply_word(const FftEngine& eng, const PhysicalField& g, const PhysicalField& gt,
                         const PhysicalField* gtt, const std::vector<Generator>& word, double t);

}  // namespace wkg
