#pragma once

#include <string>
#include <vector>

#include "wkg/lp.hpp"
#include "wkg/vector_fields.hpp"

namespace wkg {

/** Exponent bookkeeping of the weighted norm families.  N(n) is extended
 * affinely to negative arguments (the displays use N(n-3) for small n). */
struct NormParams {
    double N0 = 40.0, N1 = 3.0, d = 10.0, delta = 1e-10;
    int cap = 1;  // vector-field order cap actually evaluated

    double N(double n) const { return N0 - d * n; }
    double H(double n) const { return n >= 1.0 ? 800.0 - 200.0 * n : 800.0; }
    double Hpp(double n) const { return H(n + 1.0); }
    double Npp(double n) const { return N(n) - 5.0; }
};

enum class NormFamily { Y1, Y2, S1, S2, T1, T2, S1p, S2p, T1p, T2p, X1, X2 };

std::string to_string(NormFamily f);

struct NormBreakdownEntry {
    int n;
    std::string word;
    int k;     // argmax shell, -999 when the term has no shell sup
    int axis;  // argmax xi-derivative axis, -1 when not applicable
    double t;
    double value;
};

struct NormSnapshot {
    NormFamily family;
    double value = 0.0;
    std::vector<NormBreakdownEntry> breakdown;   // per (n, word): the sup location
    std::vector<std::string> skipped_words;      // words above the cap / missing jets
    int cap = 0;
};

/** Sampled series fhat(t_i), optionally with the time-derivative series that
 * the primed families and the Lorentz words consume.  Vector-field words are
 * applied literally to the normalized field U = e^{-it Lambda} f with free
 * time jets beyond the supplied derivative. */
struct FieldSeries {
    std::vector<double> times;
    std::vector<SpectralField> f;
    std::vector<SpectralField> df;  // may be empty

    bool has_df() const { return !df.empty(); }
};

NormSnapshot norm_Y(const LittlewoodPaley& lp, const SpectralField& f, NormFamily which,
                    const NormParams& params = {});

NormSnapshot norm_timeweighted(const LittlewoodPaley& lp, const FieldSeries& series,
                               NormFamily which, const NormParams& params = {});

// X_i = S_i(f) + T_i(f) + S'_i(df) + T'_i(df); requires the df series.
NormSnapshot norm_X(const LittlewoodPaley& lp, const FieldSeries& series, NormFamily which,
                    const NormParams& params = {});

}  // namespace wkg
