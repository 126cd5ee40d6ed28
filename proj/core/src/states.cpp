#include "wkg/states.hpp"

#include <cmath>

#include "wkg/errors.hpp"
#include "wkg/spectral_ops.hpp"

namespace wkg {

namespace {

SpectralField normalize_one(const FftEngine& eng, const PhysicalField& f,
                            const PhysicalField& ft, Family fam) {
    SpectralField fh = eng.forward(f, tag_of(fam));
    SpectralField fth = eng.forward(ft, tag_of(fam));
    const auto& g = *fh.grid;
    for (std::size_t i = 0; i < fh.size(); ++i) {
        double lam = dispersion_symbol({fam, Sign::plus}, g.xi(i));
        fth[i] -= cplx(0.0, lam) * fh[i];
    }
    return fth;
}

}  // namespace

NormalizedState normalize(const FftEngine& eng, const PhysicalState& s) {
    NormalizedState out;
    out.t = s.t;
    out.Uwa = normalize_one(eng, s.u, s.ut, Family::wa);
    out.Ukg = normalize_one(eng, s.v, s.vt, Family::kg);
    return out;
}

PhysicalState recover(const FftEngine& eng, const NormalizedState& s) {
    PhysicalState out;
    out.t = s.t;
    const auto& g = *s.Uwa.grid;

    // d_t u = Re U, computed spectrally: (U + conj-reflect U)/2
    SpectralField uwa_m = conj_reflect(s.Uwa);
    SpectralField ukg_m = conj_reflect(s.Ukg);

    SpectralField ut_h = s.Uwa, vt_h = s.Ukg, u_h = s.Uwa, v_h = s.Ukg;
    for (std::size_t i = 0; i < u_h.size(); ++i) {
        ut_h[i] = 0.5 * (s.Uwa[i] + uwa_m[i]);
        vt_h[i] = 0.5 * (s.Ukg[i] + ukg_m[i]);
        double lwa = norm3(g.xi(i));
        double lkg = kg_weight(g.xi(i));
        cplx half_diff_wa = 0.5 * (s.Uwa[i] - uwa_m[i]);
        cplx half_diff_kg = 0.5 * (s.Ukg[i] - ukg_m[i]);
        u_h[i] = lwa > 0.0 ? cplx(0.0, 1.0) * half_diff_wa / lwa : cplx(0.0, 0.0);
        v_h[i] = cplx(0.0, 1.0) * half_diff_kg / lkg;
    }
    out.u = eng.inverse(u_h);
    out.ut = eng.inverse(ut_h);
    out.v = eng.inverse(v_h);
    out.vt = eng.inverse(vt_h);
    return out;
}

ProfileState to_profile(const NormalizedState& s) {
    ProfileState out;
    out.t = s.t;
    out.Vwa = propagate(s.Uwa, {Family::wa, Sign::plus}, s.t);
    out.Vkg = propagate(s.Ukg, {Family::kg, Sign::plus}, s.t);
    return out;
}

NormalizedState from_profile(const ProfileState& s) {
    NormalizedState out;
    out.t = s.t;
    out.Uwa = propagate(s.Vwa, {Family::wa, Sign::minus}, s.t);
    out.Ukg = propagate(s.Vkg, {Family::kg, Sign::minus}, s.t);
    return out;
}

}  // namespace wkg
