#include "wkg/scattering_data.hpp"

#include <cmath>
#include <random>

#include "wkg/errors.hpp"

namespace wkg {

SpectralField random_field(const GridPtr& grid, FieldTag tag, std::uint64_t seed) {
    SpectralField f(grid, tag);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& z : f.v) z = cplx(u(rng), u(rng));
    zero_nyquist(f);
    return f;
}

SpectralField random_smooth_field(const GridPtr& grid, FieldTag tag, std::uint64_t seed,
                                  double width) {
    SpectralField f = random_field(grid, tag, seed);
    for (std::size_t i = 0; i < f.size(); ++i) {
        Vec3 xi = grid->xi(i);
        f[i] *= std::exp(-dot3(xi, xi) / (2.0 * width * width));
    }
    return f;
}

namespace {

SpectralField gaussian(const GridPtr& grid, FieldTag tag, double amp, double width) {
    SpectralField f(grid, tag);
    for (std::size_t i = 0; i < f.size(); ++i) {
        Vec3 xi = grid->xi(i);
        f[i] = amp * std::exp(-dot3(xi, xi) / (2.0 * width * width));
    }
    zero_nyquist(f);
    return f;
}

SpectralField two_mode(const GridPtr& grid, FieldTag tag, double amp, double width) {
    SpectralField f(grid, tag);
    Vec3 c = {0.5, 0.0, 0.0};
    for (std::size_t i = 0; i < f.size(); ++i) {
        Vec3 xi = grid->xi(i);
        double dp = (xi[0] - c[0]) * (xi[0] - c[0]) + xi[1] * xi[1] + xi[2] * xi[2];
        double dm = (xi[0] + c[0]) * (xi[0] + c[0]) + xi[1] * xi[1] + xi[2] * xi[2];
        f[i] = amp * (std::exp(-dp / (2.0 * width * width)) +
                      std::exp(-dm / (2.0 * width * width)));
    }
    zero_nyquist(f);
    return f;
}

// real even cosine bumps: conjugate symmetric, smooth, deterministic per seed
void add_seeded_ripple(SpectralField& f, double amp, std::uint64_t seed) {
    if (seed == 0) return;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double c1 = u(rng), c2 = u(rng), c3 = u(rng), c4 = u(rng);
    for (std::size_t i = 0; i < f.size(); ++i) {
        Vec3 xi = f.grid->xi(i);
        double env = std::exp(-dot3(xi, xi) / 0.72);
        double ripple = c1 * std::cos(3.0 * xi[0]) + c2 * std::cos(3.0 * xi[1]) +
                        c3 * std::cos(3.0 * xi[2]) + c4 * std::cos(2.0 * (xi[0] + xi[1]));
        f[i] += amp * 0.2 * ripple * env;
    }
    zero_nyquist(f);
}

}  // namespace

ScatteringData make_preset(const GridPtr& grid, const std::string& name, double eps,
                           std::uint64_t seed) {
    ScatteringData data;
    data.eps = eps;
    const double w = 0.5;
    if (name == "gaussian-kg") {
        data.Vwa_inf = SpectralField(grid, FieldTag::wa);
        data.Vkg_inf = gaussian(grid, FieldTag::kg, eps, w);
    } else if (name == "gaussian-both") {
        data.Vwa_inf = gaussian(grid, FieldTag::wa, eps, w);
        data.Vkg_inf = gaussian(grid, FieldTag::kg, eps, w);
    } else if (name == "two-mode") {
        data.Vwa_inf = SpectralField(grid, FieldTag::wa);
        data.Vkg_inf = two_mode(grid, FieldTag::kg, eps, 0.35);
    } else {
        throw config_error("unknown data preset '" + name + "'");
    }
    add_seeded_ripple(data.Vkg_inf, eps, seed);
    if (name == "gaussian-both") add_seeded_ripple(data.Vwa_inf, eps, seed ^ 0x9e3779b9u);
    return data;
}

}  // namespace wkg
