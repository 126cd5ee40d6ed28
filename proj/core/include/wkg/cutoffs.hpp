#pragma once

namespace wkg {

/** The dyadic cutoff family built from one smooth radial bump
 *    phi(z) = s(2-z) / (s(2-z) + s(z-1)),  s(r) = e^{-1/r} (r>0), 0 else,
 * which equals 1 for z <= 1 and 0 for z >= 2.  All derived families
 * (phi_k, phi_{<=A}, tau_m, phi_j^{(k)}) follow the standard telescoping
 * definitions, so partition identities hold exactly up to rounding. */
class CutoffFamily {
  public:
    CutoffFamily() = default;

    // Test hook: perturbs the bump so partition identities fail (fault injection).
    static CutoffFamily broken();

    double bump(double z) const;              // phi(|z|)
    double phi_k(double z, int k) const;      // phi(z/2^k) - phi(z/2^{k-1})
    double phi_le(double z, double a) const;  // sum_{k<=a} phi_k = phi(z/2^a)
    double phi_ge(double z, double a) const;  // 1 - phi_le(z, a-1)

    // sum_{k=a}^{b} phi_k
    double phi_interval(double z, int a, int b) const;

    // tau_m(t) of the inhomogeneous time decomposition; m >= 0, t >= 0.
    double tau_m(double t, int m) const;

    // Spatial family phi_j^{(k)}: phi_{<=j} at the bottom index j = -k^-,
    // phi_j in between, and phi_{>=j_top} absorbing the box tail at the top.
    double phi_j_k(double r, int j, int k, int j_top) const;

  private:
    explicit CutoffFamily(double skew) : skew_(skew) {}
    double skew_ = 0.0;
};

inline int k_minus(int k) { return k < 0 ? k : 0; }
inline int k_plus(int k) { return k > 0 ? k : 0; }

// membership in the index set {(k,j): j >= -k^-}
inline bool in_J(int k, int j) { return j >= -k_minus(k) && j >= 0; }

}  // namespace wkg
