#include "wkg/field.hpp"

#include <algorithm>
#include <cmath>

#include "wkg/errors.hpp"

namespace wkg {

namespace {
double sq_sum(const std::vector<cplx>& v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return s;
}
}  // namespace

double l2_norm(const SpectralField& f) {
    double m = f.grid->freq_spacing();
    return std::sqrt(sq_sum(f.v) * m * m * m);
}

double l2_norm(const PhysicalField& f) {
    double m = f.grid->dx();
    return std::sqrt(sq_sum(f.v) * m * m * m);
}

double l2_distance(const SpectralField& a, const SpectralField& b) {
    if (!same_grid(a, b)) throw shape_error("l2_distance: grid mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
    double m = a.grid->freq_spacing();
    return std::sqrt(s * m * m * m);
}

double sup_norm(const SpectralField& f) {
    double s = 0.0;
    for (const auto& z : f.v) s = std::max(s, std::abs(z));
    return s;
}

double sup_norm(const PhysicalField& f) {
    double s = 0.0;
    for (const auto& z : f.v) s = std::max(s, std::abs(z));
    return s;
}

double max_imag(const PhysicalField& f) {
    double s = 0.0;
    for (const auto& z : f.v) s = std::max(s, std::abs(z.imag()));
    return s;
}

void zero_nyquist(SpectralField& f) {
    const auto& g = *f.grid;
    int n = g.n();
    int ny = n / 2;  // index of the -N/2 row
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            f[g.flatten(ny, j, k)] = 0.0;
            f[g.flatten(j, ny, k)] = 0.0;
            f[g.flatten(j, k, ny)] = 0.0;
        }
}

SpectralField conj_reflect(const SpectralField& f) {
    SpectralField out(f.grid, f.tag);
    const auto& g = *f.grid;
    for (std::size_t i = 0; i < f.size(); ++i) out[g.reflect(i)] = std::conj(f[i]);
    zero_nyquist(out);
    return out;
}

double conj_symmetry_residual(const SpectralField& f) {
    const auto& g = *f.grid;
    double r = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (g.is_nyquist(i)) continue;
        r = std::max(r, std::abs(f[g.reflect(i)] - std::conj(f[i])));
    }
    return r;
}

SpectralField operator+(const SpectralField& a, const SpectralField& b) {
    if (!same_grid(a, b)) throw shape_error("field add: grid mismatch");
    SpectralField out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
    return out;
}

SpectralField operator-(const SpectralField& a, const SpectralField& b) {
    if (!same_grid(a, b)) throw shape_error("field sub: grid mismatch");
    SpectralField out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
    return out;
}

SpectralField operator*(cplx c, const SpectralField& a) {
    SpectralField out = a;
    for (auto& z : out.v) z *= c;
    return out;
}

void axpy(cplx a, const SpectralField& x, SpectralField& y) {
    if (!same_grid(x, y)) throw shape_error("axpy: grid mismatch");
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

bool same_grid(const SpectralField& a, const SpectralField& b) {
    return a.grid && b.grid && *a.grid == *b.grid;
}

}  // namespace wkg
