#pragma once

#include "wkg/field.hpp"
#include "wkg/grid.hpp"

namespace wkg {

/** FFT front end for one grid.  Plans are created once (FFTW_ESTIMATE, so
 * planning is deterministic) and executed on caller buffers; execution is
 * safe from concurrent threads. */
class FftEngine {
  public:
    explicit FftEngine(GridPtr grid);
    ~FftEngine();

    FftEngine(const FftEngine&) = delete;
    FftEngine& operator=(const FftEngine&) = delete;

    const GridPtr& grid() const { return grid_; }

    // Physical samples -> spectral coefficients; Nyquist rows are zeroed.
    SpectralField forward(const PhysicalField& f, FieldTag tag = FieldTag::scalar) const;
    PhysicalField inverse(const SpectralField& f) const;

    // In-place variants on raw storage (used by the bilinear engine).
    void forward_raw(cplx* data) const;   // includes normalization, no Nyquist zeroing
    void inverse_raw(cplx* data) const;

  private:
    GridPtr grid_;
    void* plan_fwd_ = nullptr;
    void* plan_bwd_ = nullptr;
    double fwd_scale_, bwd_scale_;
};

}  // namespace wkg
