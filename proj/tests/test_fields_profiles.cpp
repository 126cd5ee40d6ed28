#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wkg/errors.hpp"
#include "wkg/scattering_data.hpp"
#include "wkg/spectral_ops.hpp"
#include "wkg/states.hpp"
#include "wkg/vector_fields.hpp"

using namespace wkg;

namespace {
constexpr double pi = std::numbers::pi;

PhysicalField gaussian_phys(const GridPtr& g, double width, double amp = 1.0) {
    PhysicalField f(g);
    for (std::size_t i = 0; i < f.size(); ++i) {
        Vec3 x = g->coord(i);
        f[i] = amp * std::exp(-dot3(x, x) / (2.0 * width * width));
    }
    return f;
}

// random normalized state built from a conjugate-symmetric-free complex field
NormalizedState random_normalized(const GridPtr& g, std::uint64_t seed) {
    NormalizedState s;
    s.t = 0.0;
    s.Uwa = random_smooth_field(g, FieldTag::wa, seed);
    s.Ukg = random_smooth_field(g, FieldTag::kg, seed + 1);
    // recover() requires a real wave zero mode (the d_t u mean)
    s.Uwa[0] = cplx(s.Uwa[0].real(), 0.0);
    return s;
}
}  // namespace

TEST_CASE("normalize and recover invert each other") {
    auto g = make_grid(16, 8.0 * pi);
    FftEngine eng(g);

    NormalizedState s = random_normalized(g, 5);
    PhysicalState p = recover(eng, s);
    NormalizedState s2 = normalize(eng, p);
    CHECK(l2_distance(s2.Uwa, s.Uwa) / l2_norm(s.Uwa) <= 1e-12);
    CHECK(l2_distance(s2.Ukg, s.Ukg) / l2_norm(s.Ukg) <= 1e-12);

    // recovered fields are real
    CHECK(max_imag(p.u) <= 1e-12 * std::max(1.0, sup_norm(p.u)));
    CHECK(max_imag(p.v) <= 1e-12 * std::max(1.0, sup_norm(p.v)));
    CHECK(max_imag(p.ut) <= 1e-12 * std::max(1.0, sup_norm(p.ut)));
    CHECK(max_imag(p.vt) <= 1e-12 * std::max(1.0, sup_norm(p.vt)));

    // zero state round trips to zero
    NormalizedState z;
    z.Uwa = SpectralField(g, FieldTag::wa);
    z.Ukg = SpectralField(g, FieldTag::kg);
    PhysicalState pz = recover(eng, z);
    CHECK(sup_norm(pz.u) == 0.0);
    CHECK(sup_norm(pz.vt) == 0.0);
}

TEST_CASE("single linear wave mode has time-independent |Uwa|") {
    auto g = make_grid(16, 8.0 * pi);
    FftEngine eng(g);
    Vec3 xi0 = {0.5, 0.25, 0.0};
    double om = norm3(xi0);

    auto state_at = [&](double t) {
        // u = cos(om t) * 2 cos(x.xi0) solves the free wave equation
        PhysicalState p;
        p.t = t;
        p.u = PhysicalField(g);
        p.ut = PhysicalField(g);
        p.v = PhysicalField(g);
        p.vt = PhysicalField(g);
        for (std::size_t i = 0; i < p.u.size(); ++i) {
            double cx = 2.0 * std::cos(dot3(g->coord(i), xi0));
            p.u[i] = std::cos(om * t) * cx;
            p.ut[i] = -om * std::sin(om * t) * cx;
        }
        return p;
    };
    double a0 = sup_norm(normalize(eng, state_at(0.0)).Uwa);
    for (double t : {0.7, 1.9, 4.4}) {
        double at = sup_norm(normalize(eng, state_at(t)).Uwa);
        CHECK(at == doctest::Approx(a0).epsilon(1e-10));
    }
}

TEST_CASE("KG plane-wave recovery") {
    auto g = make_grid(16, 8.0 * pi);
    FftEngine eng(g);
    // a unit-amplitude traveling KG wave survives the normalize/recover trip
    Vec3 xi0 = {0.25, 0.0, 0.0};
    double om = kg_weight(xi0);
    double t = 1.3;
    PhysicalState p;
    p.t = t;
    p.u = PhysicalField(g);
    p.ut = PhysicalField(g);
    p.v = PhysicalField(g);
    p.vt = PhysicalField(g);
    for (std::size_t i = 0; i < p.v.size(); ++i) {
        double th = dot3(g->coord(i), xi0) - om * t;
        p.v[i] = std::sin(th);
        p.vt[i] = -om * std::cos(th);
    }
    NormalizedState n = normalize(eng, p);
    PhysicalState p2 = recover(eng, n);
    double err = 0.0;
    for (std::size_t i = 0; i < p.v.size(); ++i)
        err = std::max(err, std::abs(p2.v[i] - p.v[i]));
    CHECK(err <= 1e-12);
    // unit amplitude up to crest sampling on the lattice
    double sampled_max = 0.0;
    for (std::size_t i = 0; i < p.v.size(); ++i)
        sampled_max = std::max(sampled_max, std::abs(std::sin(dot3(g->coord(i), xi0) - om * t)));
    CHECK(sup_norm(p2.v) == doctest::Approx(sampled_max).epsilon(1e-10));
}

TEST_CASE("profile conversions: identity at t=0, unitary round trip") {
    auto g = make_grid(16, 8.0 * pi);
    NormalizedState s = random_normalized(g, 9);
    ProfileState v = to_profile(s);
    CHECK(l2_distance(v.Vwa, s.Uwa) == 0.0);  // t = 0

    s.t = 2.9;
    ProfileState v2 = to_profile(s);
    NormalizedState s2 = from_profile(v2);
    CHECK(l2_distance(s2.Uwa, s.Uwa) / l2_norm(s.Uwa) <= 1e-13);
    CHECK(l2_distance(s2.Ukg, s.Ukg) / l2_norm(s.Ukg) <= 1e-13);
}

TEST_CASE("profiles are constant under the linear flow") {
    auto g = make_grid(16, 8.0 * pi);
    FftEngine eng(g);
    NormalizedState s0 = random_normalized(g, 13);
    ProfileState v0 = to_profile(s0);
    for (double t : {1.0, 5.0, 10.0}) {
        NormalizedState st;
        st.t = t;
        st.Uwa = propagate(s0.Uwa, {Family::wa, Sign::minus}, t);
        st.Ukg = propagate(s0.Ukg, {Family::kg, Sign::minus}, t);
        ProfileState vt = to_profile(st);
        CHECK(l2_distance(vt.Vwa, v0.Vwa) / l2_norm(v0.Vwa) <= 1e-10);
        CHECK(l2_distance(vt.Vkg, v0.Vkg) / l2_norm(v0.Vkg) <= 1e-10);
    }
}

TEST_CASE("minus profiles follow the reflection-conjugation convention") {
    auto g = make_grid(12, 6.0 * pi);
    SpectralField f = random_smooth_field(g, FieldTag::kg, 17);
    SpectralField fm = conj_reflect(f);
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (g->is_nyquist(i)) continue;
        CHECK(fm[g->reflect(i)] == std::conj(f[i]));
    }
    // involution
    SpectralField back = conj_reflect(fm);
    CHECK(l2_distance(back, f) == 0.0);
}

TEST_CASE("vector fields: rotations, boosts, derivatives") {
    // resolution ample enough that band truncation sits below the tolerances
    auto g = make_grid(64, 32.0 * pi);
    FftEngine eng(g);

    PhysicalState s;
    s.t = 0.0;
    s.u = gaussian_phys(g, 4.0);
    s.ut = PhysicalField(g);
    s.v = gaussian_phys(g, 3.5);
    s.vt = PhysicalField(g);
    SecondTimeDerivs d2 = linear_second_derivs(eng, s);

    // rotation of a radial field vanishes
    VectorFieldSpec rot{{Generator::O12}};
    PhysicalField r = apply_vector_field(eng, s, d2, rot, Target::u);
    CHECK(sup_norm(r) <= 1e-10 * sup_norm(s.u));

    // Gamma_j at t=0 with d_t u = 0 vanishes identically
    VectorFieldSpec boost{{Generator::G2}};
    PhysicalField b = apply_vector_field(eng, s, d2, boost, Target::u);
    CHECK(sup_norm(b) <= 1e-13 * sup_norm(s.u));

    // d_1 of a single lattice mode is i xi_1 times the mode
    Vec3 xi0 = {0.5, -0.5, 0.0};
    PhysicalState m;
    m.t = 0.0;
    m.u = PhysicalField(g);
    m.ut = PhysicalField(g);
    m.v = PhysicalField(g);
    m.vt = PhysicalField(g);
    for (std::size_t i = 0; i < m.u.size(); ++i) {
        double th = dot3(g->coord(i), xi0);
        m.u[i] = cplx(std::cos(th), std::sin(th));
    }
    SecondTimeDerivs md2 = linear_second_derivs(eng, m);
    VectorFieldSpec dx{{Generator::Dx1}};
    PhysicalField du = apply_vector_field(eng, m, md2, dx, Target::u);
    double err = 0.0;
    for (std::size_t i = 0; i < du.size(); ++i)
        err = std::max(err, std::abs(du[i] - cplx(0.0, xi0[0]) * m.u[i]));
    CHECK(err <= 1e-10);

    // order cap enforcement
    VectorFieldSpec second{{Generator::G1, Generator::Dx2}};
    CHECK_THROWS_AS(apply_vector_field(eng, s, d2, second, Target::u, 1), config_error);
    CHECK_NOTHROW(apply_vector_field(eng, s, d2, second, Target::u, 2));
    VectorFieldSpec third{{Generator::G1, Generator::Dx2, Generator::Dx3}};
    CHECK_THROWS_AS(apply_vector_field(eng, s, d2, third, Target::u, 2), config_error);
}

TEST_CASE("generators commute with the linear flow") {
    auto g = make_grid(64, 32.0 * pi);
    FftEngine eng(g);

    // non-radial, well-resolved data with a nonzero velocity component
    auto modulated = [&](double width, double amp) {
        PhysicalField f = gaussian_phys(g, width, amp);
        for (std::size_t i = 0; i < f.size(); ++i) {
            Vec3 x = g->coord(i);
            f[i] *= 1.0 + 0.5 * std::sin(0.25 * x[0]) * std::cos(0.125 * x[1]);
        }
        return f;
    };
    PhysicalState s0;
    s0.t = 0.0;
    s0.u = modulated(4.0, 1.0);
    s0.ut = modulated(4.5, 0.3);
    s0.v = modulated(3.8, 1.0);
    s0.vt = modulated(4.2, 0.2);

    auto evolve = [&](const NormalizedState& n, double t) {
        NormalizedState out;
        out.t = n.t + t;
        out.Uwa = propagate(n.Uwa, {Family::wa, Sign::minus}, t);
        out.Ukg = propagate(n.Ukg, {Family::kg, Sign::minus}, t);
        return out;
    };

    const double t = 5.0;
    for (Generator gen : {Generator::O23, Generator::G1, Generator::Dt, Generator::Dx1}) {
        for (Target tgt : {Target::u, Target::v}) {
            // apply the generator at t=0, then evolve the resulting solution
            SecondTimeDerivs d20 = linear_second_derivs(eng, s0);
            VectorFieldSpec spec{{gen}};
            PhysicalField Lg0 = apply_vector_field(eng, s0, d20, spec, tgt);

            // time derivative of L[g] at t=0, for the evolved comparison state
            // d_t(Gamma_j g) etc. comes from the same jet machinery via Dt-word
            PhysicalField Lg0_t;
            {
                VectorFieldSpec dspec;
                dspec.word = {gen, Generator::Dt};
                // d_t first, then the generator: order matters; build directly
                const PhysicalField& base = tgt == Target::u ? s0.u : s0.v;
                const PhysicalField& base_t = tgt == Target::u ? s0.ut : s0.vt;
                const PhysicalField& base_tt = tgt == Target::u ? d20.utt : d20.vtt;
                // jet of L[g]: value from (g,gt), derivative from (gt,gtt)
                std::vector<Generator> w = {gen};
                PhysicalField val = apply_word(eng, base, base_t, &base_tt, w, 0.0);
                (void)val;
                // d/dt Gamma_j g = x_j g_tt + d_j g + t d_j g_t; at t=0 general:
                // use apply_word on the shifted jet (gt, gtt)
                if (gen == Generator::G1) {
                    Lg0_t = coordinate_multiply(base_tt, 0);
                    PhysicalField dg = spatial_derivative(eng, base, 0);
                    for (std::size_t i = 0; i < Lg0_t.size(); ++i) Lg0_t[i] += dg[i];
                } else {
                    Lg0_t = apply_word(eng, base_t, base_tt, nullptr, w, 0.0);
                }
            }

            // evolve (L g, d_t L g) linearly
            PhysicalState Ls0;
            Ls0.t = 0.0;
            Ls0.u = tgt == Target::u ? Lg0 : PhysicalField(g);
            Ls0.ut = tgt == Target::u ? Lg0_t : PhysicalField(g);
            Ls0.v = tgt == Target::v ? Lg0 : PhysicalField(g);
            Ls0.vt = tgt == Target::v ? Lg0_t : PhysicalField(g);
            NormalizedState Ln = evolve(normalize(eng, Ls0), t);
            PhysicalState L_then_evolve = recover(eng, Ln);

            // evolve first, then apply the generator at time t
            NormalizedState nt = evolve(normalize(eng, s0), t);
            PhysicalState st = recover(eng, nt);
            st.t = t;
            SecondTimeDerivs d2t = linear_second_derivs(eng, st);
            PhysicalField evolve_then_L = apply_vector_field(eng, st, d2t, spec, tgt);

            PhysicalField lhs = tgt == Target::u ? L_then_evolve.u : L_then_evolve.v;
            PhysicalField rhs = evolve_then_L;
            if (tgt == Target::u) {
                // the wave component is defined modulo its zero mode (the
                // recovery convention pins the mean of u to zero)
                cplx ml = 0.0, mr = 0.0;
                for (std::size_t i = 0; i < lhs.size(); ++i) {
                    ml += lhs[i];
                    mr += rhs[i];
                }
                ml /= static_cast<double>(lhs.size());
                mr /= static_cast<double>(rhs.size());
                for (std::size_t i = 0; i < lhs.size(); ++i) {
                    lhs[i] -= ml;
                    rhs[i] -= mr;
                }
            }
            double scale = std::max(sup_norm(lhs), sup_norm(rhs));
            double err = 0.0;
            for (std::size_t i = 0; i < lhs.size(); ++i)
                err = std::max(err, std::abs(lhs[i] - rhs[i]));
            if (scale > 0.0) CHECK(err / scale <= 1e-8);
        }
    }
}
