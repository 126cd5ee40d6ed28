#include "wkg/grid.hpp"

#include <cmath>
#include <numbers>

#include "wkg/errors.hpp"

namespace wkg {

FourierGrid::FourierGrid(int n_per_axis, double box_length)
    : n_(n_per_axis), box_length_(box_length) {
    if (n_per_axis < 8 || n_per_axis % 2 != 0)
        throw config_error("grid size must be an even integer >= 8, got " +
                           std::to_string(n_per_axis));
    if (!(box_length > 0.0)) throw config_error("box length must be positive");

    dxi_ = 2.0 * std::numbers::pi / box_length_;
    dx_ = box_length_ / n_;

    double m = dxi_ * (n_ / 2 - 1);  // largest retained frequency per axis
    xi_max_ = m * std::sqrt(3.0);
    double xm = dx_ * (n_ / 2);
    x_max_ = xm * std::sqrt(3.0);

    k_min_ = static_cast<int>(std::ceil(std::log2(dxi_))) + 1;
    while (std::exp2(k_min_ - 1) < dxi_) ++k_min_;
    while (k_min_ > 1 && std::exp2(k_min_ - 2) >= dxi_) --k_min_;
    k_max_ = static_cast<int>(std::floor(std::log2(xi_max_))) - 1;
    while (std::exp2(k_max_ + 1) > xi_max_) --k_max_;
    while (std::exp2(k_max_ + 2) <= xi_max_) ++k_max_;

    j_top_ = static_cast<int>(std::ceil(std::log2(x_max_))) + 1;
}

GridPtr make_grid(int n_per_axis, double box_length) {
    return std::make_shared<const FourierGrid>(n_per_axis, box_length);
}

}  // namespace wkg
