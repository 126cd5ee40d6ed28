#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <memory>

namespace wkg {

using Vec3 = std::array<double, 3>;

inline double norm3(const Vec3& a) {
    return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
}
inline double dot3(const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline double kg_weight(const Vec3& a) {  // <xi> = sqrt(1+|xi|^2)
    return std::sqrt(1.0 + a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
}

/** Periodic cubic Fourier grid.
 *
 * Frequencies live on (2*pi/L)*{-N/2,...,N/2-1}^3 in FFT-standard wraparound
 * order; physical points use the matching sawtooth coordinate in
 * [-L/2, L/2)^3.  The transform convention is
 *   fhat(xi) = (2pi)^{-3/2} * dx^3 * sum_x f(x) e^{-i x.xi},
 *   f(x)     = (2pi)^{-3/2} * dxi^3 * sum_xi fhat(xi) e^{+i x.xi},
 * which is exactly self-inverse on the lattice (dx*dxi*N = 2pi) and makes
 * Plancherel hold with the measures dx^3 and dxi^3.
 */
class FourierGrid {
  public:
    FourierGrid(int n_per_axis, double box_length);

    int n() const { return n_; }
    std::size_t size() const { return static_cast<std::size_t>(n_) * n_ * n_; }
    double box_length() const { return box_length_; }
    double freq_spacing() const { return dxi_; }
    double dx() const { return dx_; }

    // signed lattice integer for index i in [0,n)
    int signed_index(int i) const { return i < n_ / 2 ? i : i - n_; }
    // wrap signed integer back into [0,n)
    int wrap(int s) const {
        int r = s % n_;
        return r < 0 ? r + n_ : r;
    }

    std::size_t flatten(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * n_ + j) * n_ + k;
    }
    std::array<int, 3> unflatten(std::size_t f) const {
        int k = static_cast<int>(f % n_);
        int j = static_cast<int>((f / n_) % n_);
        int i = static_cast<int>(f / (static_cast<std::size_t>(n_) * n_));
        return {i, j, k};
    }

    Vec3 xi(std::size_t flat) const {
        auto [i, j, k] = unflatten(flat);
        return {dxi_ * signed_index(i), dxi_ * signed_index(j), dxi_ * signed_index(k)};
    }
    Vec3 coord(std::size_t flat) const {
        auto [i, j, k] = unflatten(flat);
        return {dx_ * signed_index(i), dx_ * signed_index(j), dx_ * signed_index(k)};
    }

    bool is_nyquist(std::size_t flat) const {
        auto [i, j, k] = unflatten(flat);
        int ny = -n_ / 2;
        return signed_index(i) == ny || signed_index(j) == ny || signed_index(k) == ny;
    }

    // index of the reflected point -xi (Nyquist rows map to themselves)
    std::size_t reflect(std::size_t flat) const {
        auto [i, j, k] = unflatten(flat);
        return flatten(wrap(-signed_index(i)), wrap(-signed_index(j)), wrap(-signed_index(k)));
    }

    double xi_max() const { return xi_max_; }
    // largest periodic |x| over the box (attained at the corner)
    double x_max() const { return x_max_; }

    // Dyadic shells P_k resolvable per the contract 2^{k-1} >= dxi and
    // 2^{k+1} <= xi_max.
    int k_min() const { return k_min_; }
    int k_max() const { return k_max_; }
    bool shell_resolvable(int k) const { return k >= k_min_ && k <= k_max_; }

    // Top spatial shell index: phi_{>= j_top} absorbs the box tail so the
    // j-partition sums to one exactly on the torus.
    int j_top() const { return j_top_; }

    bool operator==(const FourierGrid& o) const {
        return n_ == o.n_ && box_length_ == o.box_length_;
    }

  private:
    int n_;
    double box_length_;
    double dxi_, dx_;
    double xi_max_, x_max_;
    int k_min_, k_max_, j_top_;
};

using GridPtr = std::shared_ptr<const FourierGrid>;

GridPtr make_grid(int n_per_axis, double box_length);

}  // namespace wkg
