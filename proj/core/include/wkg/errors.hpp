#pragma once

#include <stdexcept>
#include <string>

namespace wkg {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct shape_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Request for a dyadic shell the grid cannot resolve; carries the valid window.
struct shell_range_error : std::runtime_error {
    int k_min, k_max;
    shell_range_error(const std::string& msg, int kmin, int kmax)
        : std::runtime_error(msg), k_min(kmin), k_max(kmax) {}
};

struct index_domain_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct cost_guard_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct blow_up_error : std::runtime_error {
    double last_good_time;
    blow_up_error(const std::string& msg, double t)
        : std::runtime_error(msg), last_good_time(t) {}
};

struct accuracy_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct non_contraction_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace wkg
