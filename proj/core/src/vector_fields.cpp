#include "wkg/vector_fields.hpp"

#include <cmath>

#include "wkg/errors.hpp"
#include "wkg/spectral_ops.hpp"

namespace wkg {

std::string to_string(Generator g) {
    switch (g) {
        case Generator::G1: return "G1";
        case Generator::G2: return "G2";
        case Generator::G3: return "G3";
        case Generator::O23: return "O23";
        case Generator::O31: return "O31";
        case Generator::O12: return "O12";
        case Generator::Dt: return "Dt";
        case Generator::Dx1: return "Dx1";
        case Generator::Dx2: return "Dx2";
        case Generator::Dx3: return "Dx3";
    }
    return "?";
}

std::vector<VectorFieldSpec> words_of_order(int n) {
    static const std::vector<Generator> alphabet = {
        Generator::G1, Generator::G2, Generator::G3, Generator::O23, Generator::O31,
        Generator::O12, Generator::Dt, Generator::Dx1, Generator::Dx2, Generator::Dx3};
    std::vector<VectorFieldSpec> out;
    if (n == 0) {
        out.push_back({});
        return out;
    }
    auto prev = words_of_order(n - 1);
    for (const auto& w : prev)
        for (Generator g : alphabet) {
            VectorFieldSpec s = w;
            s.word.insert(s.word.begin(), g);
            out.push_back(s);
        }
    return out;
}

PhysicalField spatial_derivative(const FftEngine& eng, const PhysicalField& f, int axis) {
    SpectralField fh = eng.forward(f);
    const auto& g = *fh.grid;
    for (std::size_t i = 0; i < fh.size(); ++i)
        fh[i] *= cplx(0.0, g.xi(i)[axis]);
    return eng.inverse(fh);
}

PhysicalField coordinate_multiply(const PhysicalField& f, int axis) {
    PhysicalField out = f;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= out.grid->coord(i)[axis];
    return out;
}

namespace {

PhysicalField laplacian(const FftEngine& eng, const PhysicalField& f) {
    SpectralField fh = eng.forward(f);
    const auto& g = *fh.grid;
    for (std::size_t i = 0; i < fh.size(); ++i) {
        Vec3 xi = g.xi(i);
        fh[i] *= -(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
    }
    return eng.inverse(fh);
}

struct Jet {
    PhysicalField g, gt;
};

PhysicalField omega_apply(const FftEngine& eng, const PhysicalField& f, int a, int b) {
    PhysicalField out = coordinate_multiply(spatial_derivative(eng, f, b), a);
    PhysicalField second = coordinate_multiply(spatial_derivative(eng, f, a), b);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= second[i];
    return out;
}

PhysicalField value_of(const FftEngine& eng, const Jet& j, Generator gen, double t) {
    switch (gen) {
        case Generator::Dt: return j.gt;
        case Generator::Dx1: return spatial_derivative(eng, j.g, 0);
        case Generator::Dx2: return spatial_derivative(eng, j.g, 1);
        case Generator::Dx3: return spatial_derivative(eng, j.g, 2);
        case Generator::O23: return omega_apply(eng, j.g, 1, 2);
        case Generator::O31: return omega_apply(eng, j.g, 2, 0);
        case Generator::O12: return omega_apply(eng, j.g, 0, 1);
        case Generator::G1:
        case Generator::G2:
        case Generator::G3: {
            int a = gen == Generator::G1 ? 0 : gen == Generator::G2 ? 1 : 2;
            PhysicalField out = coordinate_multiply(j.gt, a);
            PhysicalField adv = spatial_derivative(eng, j.g, a);
            for (std::size_t i = 0; i < out.size(); ++i) out[i] += t * adv[i];
            return out;
        }
    }
    throw index_domain_error("unknown generator");
}

Jet jet_of(const FftEngine& eng, const Jet& j, const PhysicalField& gtt, Generator gen, double t) {
    Jet out;
    out.g = value_of(eng, j, gen, t);
    switch (gen) {
        case Generator::Dt: out.gt = gtt; break;
        case Generator::Dx1: out.gt = spatial_derivative(eng, j.gt, 0); break;
        case Generator::Dx2: out.gt = spatial_derivative(eng, j.gt, 1); break;
        case Generator::Dx3: out.gt = spatial_derivative(eng, j.gt, 2); break;
        case Generator::O23: out.gt = omega_apply(eng, j.gt, 1, 2); break;
        case Generator::O31: out.gt = omega_apply(eng, j.gt, 2, 0); break;
        case Generator::O12: out.gt = omega_apply(eng, j.gt, 0, 1); break;
        case Generator::G1:
        case Generator::G2:
        case Generator::G3: {
            int a = gen == Generator::G1 ? 0 : gen == Generator::G2 ? 1 : 2;
            // d_t(x_a g_t + t d_a g) = x_a g_tt + d_a g + t d_a g_t
            out.gt = coordinate_multiply(gtt, a);
            PhysicalField da_g = spatial_derivative(eng, j.g, a);
            PhysicalField da_gt = spatial_derivative(eng, j.gt, a);
            for (std::size_t i = 0; i < out.gt.size(); ++i)
                out.gt[i] += da_g[i] + t * da_gt[i];
            break;
        }
    }
    return out;
}

}  // namespace

SecondTimeDerivs linear_second_derivs(const FftEngine& eng, const PhysicalState& s) {
    SecondTimeDerivs d;
    d.utt = laplacian(eng, s.u);
    d.vtt = laplacian(eng, s.v);
    for (std::size_t i = 0; i < d.vtt.size(); ++i) d.vtt[i] -= s.v[i];
    return d;
}

SecondTimeDerivs pde_second_derivs(const FftEngine& eng, const PhysicalState& s) {
    SecondTimeDerivs d = linear_second_derivs(eng, s);
    // wave forcing |grad_{t,x} v|^2 + v^2
    PhysicalField force = s.vt;
    for (std::size_t i = 0; i < force.size(); ++i)
        force[i] = s.vt[i] * s.vt[i] + s.v[i] * s.v[i];
    for (int a = 0; a < 3; ++a) {
        PhysicalField dv = spatial_derivative(eng, s.v, a);
        for (std::size_t i = 0; i < force.size(); ++i) force[i] += dv[i] * dv[i];
    }
    PhysicalField lap_v = laplacian(eng, s.v);
    for (std::size_t i = 0; i < d.utt.size(); ++i) {
        d.utt[i] += force[i];
        d.vtt[i] += s.u[i] * lap_v[i];
    }
    return d;
}

PhysicalField apply_word(const FftEngine& eng, const PhysicalField& g, const PhysicalField& gt,
                         const PhysicalField* gtt, const std::vector<Generator>& word, double t) {
    if (word.size() > 2) throw config_error("vector-field words have order at most 2");
    Jet base{g, gt};
    if (word.empty()) return base.g;
    if (word.size() == 1) return value_of(eng, base, word[0], t);
    bool needs_gtt = word[1] == Generator::Dt || word[1] == Generator::G1 ||
                     word[1] == Generator::G2 || word[1] == Generator::G3;
    if (needs_gtt && gtt == nullptr)
        throw input_error("order-2 word needs a second time derivative");
    PhysicalField zero;
    if (!needs_gtt && gtt == nullptr) {
        zero = PhysicalField(g.grid);
        gtt = &zero;
    }
    Jet mid = jet_of(eng, base, *gtt, word[1], t);
    return value_of(eng, mid, word[0], t);
}

PhysicalField apply_vector_field(const FftEngine& eng, const PhysicalState& s,
                                 const SecondTimeDerivs& d2, const VectorFieldSpec& spec,
                                 Target target, int max_order) {
    if (max_order > 2) throw config_error("vector-field order cap is 2");
    if (spec.order() > max_order)
        throw config_error("vector-field word of order " + std::to_string(spec.order()) +
                           " exceeds the configured cap " + std::to_string(max_order));
    const PhysicalField& g = target == Target::u ? s.u : s.v;
    const PhysicalField& gt = target == Target::u ? s.ut : s.vt;
    const PhysicalField& gtt = target == Target::u ? d2.utt : d2.vtt;
    return apply_word(eng, g, gt, &gtt, spec.word, s.t);
}

}  // namespace wkg
