#include "wkg/transform.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

#include "wkg/errors.hpp"

namespace wkg {

namespace {
std::mutex g_plan_mutex;  // FFTW planning is not thread-safe
constexpr double two_pi_pow = 15.749609945722419;  // (2*pi)^{3/2}
}  // namespace

FftEngine::FftEngine(GridPtr grid) : grid_(std::move(grid)) {
    int n = grid_->n();
    std::vector<cplx> scratch(grid_->size());
    auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    plan_fwd_ = fftw_plan_dft_3d(n, n, n, p, p, FFTW_FORWARD, FFTW_ESTIMATE);
    plan_bwd_ = fftw_plan_dft_3d(n, n, n, p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!plan_fwd_ || !plan_bwd_) throw config_error("fftw plan creation failed");
    double dx = grid_->dx(), dxi = grid_->freq_spacing();
    fwd_scale_ = dx * dx * dx / two_pi_pow;
    bwd_scale_ = dxi * dxi * dxi / two_pi_pow;
}

FftEngine::~FftEngine() {
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    if (plan_bwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

void FftEngine::forward_raw(cplx* data) const {
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(static_cast<fftw_plan>(plan_fwd_), p, p);
    std::size_t sz = grid_->size();
    for (std::size_t i = 0; i < sz; ++i) data[i] *= fwd_scale_;
}

void FftEngine::inverse_raw(cplx* data) const {
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(static_cast<fftw_plan>(plan_bwd_), p, p);
    std::size_t sz = grid_->size();
    for (std::size_t i = 0; i < sz; ++i) data[i] *= bwd_scale_;
}

SpectralField FftEngine::forward(const PhysicalField& f, FieldTag tag) const {
    if (!f.grid || !(*f.grid == *grid_)) throw shape_error("forward: sample array does not match grid");
    SpectralField out(grid_, tag);
    out.v = f.v;
    forward_raw(out.v.data());
    zero_nyquist(out);
    return out;
}

PhysicalField FftEngine::inverse(const SpectralField& f) const {
    if (!f.grid || !(*f.grid == *grid_)) throw shape_error("inverse: field does not match grid");
    PhysicalField out(grid_);
    out.v = f.v;
    inverse_raw(out.v.data());
    return out;
}

}  // namespace wkg
