#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "wkg/errors.hpp"
#include "wkg/scattering_data.hpp"
#include "wkg/snapshot_io.hpp"
#include "wkg/spectral_ops.hpp"

using namespace wkg;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("grid construction and lattice geometry") {
    auto g = make_grid(8, 2.0 * pi);
    CHECK(g->freq_spacing() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(g->freq_spacing() * g->box_length() == doctest::Approx(2.0 * pi).epsilon(1e-15));

    auto g2 = make_grid(32, 16.0 * pi);
    CHECK(g2->freq_spacing() == doctest::Approx(1.0 / 8.0).epsilon(1e-15));

    auto g3 = make_grid(16, 8.0 * pi);
    CHECK(g3->freq_spacing() == doctest::Approx(0.25).epsilon(1e-15));
    bool found = false;
    for (std::size_t i = 0; i < g3->size(); ++i) {
        Vec3 xi = g3->xi(i);
        if (std::abs(xi[0] - 0.25) < 1e-14 && xi[1] == 0.0 && xi[2] == 0.0) found = true;
    }
    CHECK(found);

    // largest retained frequency along an axis before the Nyquist row
    double m = 0.0;
    for (std::size_t i = 0; i < g->size(); ++i) {
        if (g->is_nyquist(i)) continue;
        m = std::max(m, std::abs(g->xi(i)[0]));
    }
    CHECK(m == doctest::Approx(3.0));

    CHECK_THROWS_AS(make_grid(7, 2.0 * pi), config_error);
    CHECK_THROWS_AS(make_grid(6, 2.0 * pi), config_error);
    CHECK_THROWS_AS(make_grid(16, -1.0), config_error);
}

TEST_CASE("lattice closed under negation away from Nyquist") {
    auto g = make_grid(8, 2.0 * pi);
    for (std::size_t i = 0; i < g->size(); ++i) {
        if (g->is_nyquist(i)) continue;
        Vec3 a = g->xi(i);
        Vec3 b = g->xi(g->reflect(i));
        CHECK(a[0] == -b[0]);
        CHECK(a[1] == -b[1]);
        CHECK(a[2] == -b[2]);
    }
}

TEST_CASE("dispersion symbols") {
    DispersionKind wa{Family::wa, Sign::plus};
    DispersionKind kgp{Family::kg, Sign::plus};
    DispersionKind kgm{Family::kg, Sign::minus};
    CHECK(dispersion_symbol(wa, {3, 4, 0}) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(dispersion_symbol(kgp, {0, 0, 0}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(dispersion_symbol(kgm, {3, 4, 0}) == doctest::Approx(-std::sqrt(26.0)).epsilon(1e-15));
    // exact sign symmetry
    Vec3 p = {0.3, -1.1, 2.2};
    CHECK(dispersion_symbol({Family::wa, Sign::minus}, p) == -dispersion_symbol(wa, p));
    CHECK(dispersion_symbol(kgm, p) == -dispersion_symbol(kgp, p));
    CHECK(dispersion_symbol(kgp, p) >= 1.0);
    CHECK(dispersion_symbol(wa, {0, 0, 0}) == 0.0);
}

TEST_CASE("transform: constant, single mode, round trip, Plancherel") {
    auto g = make_grid(16, 4.0 * pi);
    FftEngine eng(g);

    PhysicalField ones(g);
    for (auto& z : ones.v) z = 1.0;
    SpectralField oh = eng.forward(ones);
    // all spectral mass at xi = 0
    double off = 0.0;
    for (std::size_t i = 0; i < oh.size(); ++i)
        if (norm3(g->xi(i)) > 0) off = std::max(off, std::abs(oh[i]));
    CHECK(off <= 1e-13 * std::abs(oh[g->flatten(0, 0, 0)]));

    // single mode e^{i x.xi0} -> delta at xi0
    Vec3 xi0 = {0.5, 0.0, 1.0};
    PhysicalField mode(g);
    for (std::size_t i = 0; i < mode.size(); ++i) {
        double th = dot3(g->coord(i), xi0);
        mode[i] = cplx(std::cos(th), std::sin(th));
    }
    SpectralField mh = eng.forward(mode);
    std::size_t peak = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < mh.size(); ++i)
        if (std::abs(mh[i]) > best) {
            best = std::abs(mh[i]);
            peak = i;
        }
    CHECK(norm3({g->xi(peak)[0] - xi0[0], g->xi(peak)[1] - xi0[1], g->xi(peak)[2] - xi0[2]}) ==
          doctest::Approx(0.0));
    double rest = 0.0;
    for (std::size_t i = 0; i < mh.size(); ++i)
        if (i != peak) rest = std::max(rest, std::abs(mh[i]));
    CHECK(rest <= 1e-12 * best);

    // round trip on a random real field
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1, 1);
    PhysicalField r(g);
    for (auto& z : r.v) z = u(rng);
    SpectralField rh = eng.forward(r);
    PhysicalField back = eng.inverse(rh);
    SpectralField rh2 = eng.forward(back);
    CHECK(l2_distance(rh2, rh) / l2_norm(rh) <= 1e-13);

    // Plancherel with the declared measures (after Nyquist zeroing)
    PhysicalField rr = eng.inverse(rh);
    CHECK(l2_norm(rr) == doctest::Approx(l2_norm(rh)).epsilon(1e-12));

    // shape error
    auto g8 = make_grid(8, 4.0 * pi);
    PhysicalField wrong(g8);
    CHECK_THROWS_AS(eng.forward(wrong), shape_error);
}

TEST_CASE("real fields have conjugate-symmetric transforms") {
    auto g = make_grid(12, 4.0 * pi);
    FftEngine eng(g);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1, 1);
    PhysicalField r(g);
    for (auto& z : r.v) z = u(rng);
    SpectralField rh = eng.forward(r);
    CHECK(conj_symmetry_residual(rh) <= 1e-13 * sup_norm(rh));
}

TEST_CASE("propagator: identity, group law, unitarity, conjugation symmetry") {
    auto g = make_grid(16, 8.0 * pi);
    SpectralField f = random_field(g, FieldTag::kg, 3);

    SpectralField f0 = propagate(f, {Family::kg, Sign::plus}, 0.0);
    CHECK(l2_distance(f0, f) == 0.0);

    SpectralField fwd = propagate(f, {Family::kg, Sign::plus}, 2.3);
    SpectralField back = propagate(fwd, {Family::kg, Sign::plus}, -2.3);
    CHECK(l2_distance(back, f) / l2_norm(f) <= 1e-13);
    CHECK(std::abs(l2_norm(fwd) - l2_norm(f)) / l2_norm(f) <= 1e-13);

    // minus branch equals conj o plus o conj pointwise
    SpectralField lhs = propagate(f, {Family::kg, Sign::minus}, 1.7);
    SpectralField conj_f = f;
    for (auto& z : conj_f.v) z = std::conj(z);
    SpectralField rhs = propagate(conj_f, {Family::kg, Sign::plus}, 1.7);
    for (auto& z : rhs.v) z = std::conj(z);
    CHECK(l2_distance(lhs, rhs) == 0.0);
}

TEST_CASE("xi derivative: Gaussian oracle, zero on constants, linearity") {
    auto g = make_grid(32, 16.0 * pi);
    FftEngine eng(g);

    // narrow enough that both the xi-side lattice-edge truncation and the
    // physical-side periodization sit below the 1e-6 oracle tolerance
    double s2 = 0.1;
    SpectralField f(g, FieldTag::scalar);
    for (std::size_t i = 0; i < f.size(); ++i)
        f[i] = std::exp(-dot3(g->xi(i), g->xi(i)) / (2.0 * s2));

    double ref = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        Vec3 xi = g->xi(i);
        ref = std::max(ref, std::abs(-xi[0] / s2 * std::exp(-dot3(xi, xi) / (2.0 * s2))));
    }
    SpectralField d = xi_derivative(eng, f, 0);
    double worst = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        Vec3 xi = g->xi(i);
        if (norm3(xi) > 1.0) continue;  // interior modes
        double expect = -xi[0] / s2 * std::exp(-dot3(xi, xi) / (2.0 * s2));
        worst = std::max(worst, std::abs(d[i].real() - expect) + std::abs(d[i].imag()));
    }
    CHECK(worst / ref <= 1e-6);

    SpectralField ones(g, FieldTag::scalar);
    for (std::size_t i = 0; i < ones.size(); ++i) ones[i] = 1.0;
    SpectralField dz = xi_derivative(eng, ones, 1);
    double interior = 0.0;
    for (std::size_t i = 0; i < dz.size(); ++i)
        if (norm3(g->xi(i)) <= 1.0) interior = std::max(interior, std::abs(dz[i]));
    CHECK(interior <= 1e-10);

    SpectralField a = random_smooth_field(g, FieldTag::scalar, 21);
    SpectralField b = random_smooth_field(g, FieldTag::scalar, 22);
    SpectralField sum = a + b;
    SpectralField d_sum = xi_derivative(eng, sum, 2);
    SpectralField d_parts = xi_derivative(eng, a, 2) + xi_derivative(eng, b, 2);
    CHECK(l2_distance(d_sum, d_parts) / l2_norm(d_sum) <= 1e-13);
}

TEST_CASE("dealiasing keeps only the inner two-thirds band") {
    auto g = make_grid(12, 4.0 * pi);
    SpectralField f = random_field(g, FieldTag::scalar, 9);
    dealias(f);
    for (std::size_t i = 0; i < f.size(); ++i) {
        auto [a, b, c] = g->unflatten(i);
        int cut = g->n() / 3;
        bool keep = std::abs(g->signed_index(a)) <= cut &&
                    std::abs(g->signed_index(b)) <= cut && std::abs(g->signed_index(c)) <= cut;
        if (!keep) CHECK(f[i] == cplx(0.0));
    }
}

TEST_CASE("binary snapshot round trip") {
    auto g = make_grid(8, 2.0 * pi);
    SpectralField f = random_field(g, FieldTag::wa, 77);
    std::string path = "test_snapshot.wkgs";
    write_snapshot(path, f, 3.25);
    Snapshot s = read_snapshot(path, FieldTag::wa);
    CHECK(s.t == 3.25);
    CHECK(s.field.grid->n() == 8);
    CHECK(s.field.grid->box_length() == doctest::Approx(2.0 * pi).epsilon(1e-15));
    REQUIRE(s.field.size() == f.size());
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(s.field[i] == f[i]);
    std::remove(path.c_str());

    // format header is exactly as documented
    write_snapshot(path, f, 0.0);
    FILE* fp = std::fopen(path.c_str(), "rb");
    char magic[4];
    REQUIRE(std::fread(magic, 1, 4, fp) == 4);
    CHECK(magic[0] == 'W');
    CHECK(magic[1] == 'K');
    CHECK(magic[2] == 'G');
    CHECK(magic[3] == 'S');
    std::uint32_t version = 0;
    REQUIRE(std::fread(&version, 4, 1, fp) == 1);
    CHECK(version == 1);
    std::fclose(fp);
    std::remove(path.c_str());
}
