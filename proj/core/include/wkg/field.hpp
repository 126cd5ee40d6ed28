#pragma once

#include <complex>
#include <vector>

#include "wkg/grid.hpp"

namespace wkg {

using cplx = std::complex<double>;

enum class FieldTag { wa, kg, scalar };

/** Complex function on the frequency lattice.  Value-semantic; the grid is
 * shared immutable metadata.  Nyquist rows are kept identically zero. */
struct SpectralField {
    GridPtr grid;
    FieldTag tag = FieldTag::scalar;
    std::vector<cplx> v;

    SpectralField() = default;
    SpectralField(GridPtr g, FieldTag t) : grid(std::move(g)), tag(t), v(grid->size()) {}

    std::size_t size() const { return v.size(); }
    cplx& operator[](std::size_t i) { return v[i]; }
    const cplx& operator[](std::size_t i) const { return v[i]; }
};

/** Complex samples on the physical lattice (sawtooth coordinates). */
struct PhysicalField {
    GridPtr grid;
    std::vector<cplx> v;

    PhysicalField() = default;
    explicit PhysicalField(GridPtr g) : grid(std::move(g)), v(grid->size()) {}

    std::size_t size() const { return v.size(); }
    cplx& operator[](std::size_t i) { return v[i]; }
    const cplx& operator[](std::size_t i) const { return v[i]; }
};

// Discrete L2 norms carrying the lattice measures (dxi^3 resp. dx^3).
double l2_norm(const SpectralField& f);
double l2_norm(const PhysicalField& f);
double l2_distance(const SpectralField& a, const SpectralField& b);
double sup_norm(const SpectralField& f);
double sup_norm(const PhysicalField& f);
double max_imag(const PhysicalField& f);

void zero_nyquist(SpectralField& f);

// Minus-family companion per the reflection convention: out(xi) = conj(in(-xi)).
SpectralField conj_reflect(const SpectralField& f);

// Largest |f(-xi) - conj(f(xi))| over the lattice; zero for fields of real
// physical functions.
double conj_symmetry_residual(const SpectralField& f);

SpectralField operator+(const SpectralField& a, const SpectralField& b);
SpectralField operator-(const SpectralField& a, const SpectralField& b);
SpectralField operator*(cplx c, const SpectralField& a);
void axpy(cplx a, const SpectralField& x, SpectralField& y);  // y += a*x

bool same_grid(const SpectralField& a, const SpectralField& b);

}  // namespace wkg
