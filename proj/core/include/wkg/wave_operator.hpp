#pragma once

#include <map>

#include "wkg/norms.hpp"
#include "wkg/resonant.hpp"

namespace wkg {

/** Perturbation pair on the cache time grid; zero final data by contract. */
struct PerturbationPair {
    std::vector<SpectralField> Gwa, Gkg;

    static PerturbationPair zeros(const ResonantCache& cache);
    std::size_t size() const { return Gwa.size(); }
};

struct TOptions {
    double substep = 1.0 / 16.0;  // backward-quadrature substep
    bool dealias = true;
};

// One application of the backward map: evaluates the full bilinear arguments
// (G + resonant profile pieces) at quadrature nodes and accumulates the
// integrals from t to the horizon; output final data is exactly zero.
PerturbationPair apply_T(const FftEngine& eng, const ResonantCache& cache,
                         const PerturbationPair& G, const TOptions& opts = {});

// Same pass, additionally emitting values at selected interior times
// (the d/dt consistency checks use this).
PerturbationPair apply_T_values(const FftEngine& eng, const ResonantCache& cache,
                                const PerturbationPair& G, const TOptions& opts,
                                const std::vector<double>& extra_times,
                                std::map<double, std::pair<SpectralField, SpectralField>>& out);

// The differential form of the map at one time (exact resonant evaluators).
std::pair<SpectralField, SpectralField> T_derivative(const FftEngine& eng,
                                                     const ResonantCache& cache,
                                                     const PerturbationPair& G, double t,
                                                     const TOptions& opts = {});

struct ContractionLog {
    struct Row {
        int iter;
        double distance, ratio, d_wa, d_kg;
        bool warn;  // ratio above the smallness expectation
    };
    std::vector<Row> rows;
    enum class Status { converged, max_iter, diverged } status = Status::max_iter;
    double final_residual = 0.0;
    int iterations = 0;
};

struct FixedPointResult {
    PerturbationPair G;
    ContractionLog log;
};

// Picard iteration from G = 0 until the sup-over-times L2 update falls below
// tol.  Two consecutive ratios >= 1 mark divergence.
FixedPointResult iterate_to_fixed_point(const FftEngine& eng, const ResonantCache& cache,
                                        double tol = 1e-8, int max_iter = 12,
                                        const TOptions& opts = {});

// Profile series V = G + resonant profile at every cache time.
std::vector<ProfileState> reconstruct_solution(const ResonantCache& cache,
                                               const PerturbationPair& G);

struct ResidualReport {
    std::vector<double> times, r_wa, r_kg, r_kg_uncorrected;
    double sup_ratio_wa = 0.0, sup_ratio_kg = 0.0;  // sup_t r / eps^{3/2}
    bool kg_monotone_tail = false;                  // non-increasing on [10, T]
    double eps = 0.0;
};

ResidualReport verify_scattering(const ResonantCache& cache, const PerturbationPair& G);

// (wa, kg) series with time derivatives from the differential form of the
// map, ready for the working-norm evaluation.
std::pair<FieldSeries, FieldSeries> perturbation_series(const FftEngine& eng,
                                                        const ResonantCache& cache,
                                                        const PerturbationPair& G,
                                                        const TOptions& opts = {});

}  // namespace wkg
