#include "wkg/cutoffs.hpp"

#include <cmath>

#include "wkg/errors.hpp"

namespace wkg {

namespace {
double mollifier(double r) { return r > 0.0 ? std::exp(-1.0 / r) : 0.0; }
}

CutoffFamily CutoffFamily::broken() { return CutoffFamily(0.07); }

double CutoffFamily::bump(double z) const {
    z = std::abs(z);
    if (z <= 1.0) return 1.0;
    if (z >= 2.0) return 0.0;
    double a = mollifier(2.0 - z);
    double b = mollifier(z - 1.0);
    return a / (a + b);
}

double CutoffFamily::phi_k(double z, int k) const {
    // skew_ != 0 (test hook) detunes the telescoping so partition identities fail
    return bump(z * std::exp2(-k)) - bump(z * (1.0 + skew_) * std::exp2(-(k - 1)));
}

double CutoffFamily::phi_le(double z, double a) const { return bump(z * std::exp2(-a)); }

double CutoffFamily::phi_ge(double z, double a) const { return 1.0 - phi_le(z, a - 1); }

double CutoffFamily::phi_interval(double z, int a, int b) const {
    if (b < a) return 0.0;
    return phi_le(z, b) - phi_le(z, a - 1);
}

double CutoffFamily::tau_m(double t, int m) const {
    if (t < 0.0) throw index_domain_error("tau_m: t must be >= 0");
    if (m < 0) throw index_domain_error("tau_m: m must be >= 0");
    if (m == 0) return bump(t);
    return bump(t * std::exp2(-m)) - bump(t * std::exp2(-(m - 1)));
}

double CutoffFamily::phi_j_k(double r, int j, int k, int j_top) const {
    if (!in_J(k, j)) throw index_domain_error("phi_j_k: (k,j) outside the index set");
    int j_bot = -k_minus(k);
    if (j >= j_top) return phi_ge(r, j_top);
    if (j == j_bot) return phi_le(r, j);
    return phi_k(r, j);
}

}  // namespace wkg
