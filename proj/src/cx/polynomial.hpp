#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cx/common.hpp"

namespace cxr {

/// Hard cap on polynomial degree accepted anywhere in the library.
inline constexpr int kMaxDegree = 64;

/// Complex polynomial in coefficient form (powers ascending), optionally
/// carrying a factored form {roots, leading}. When both are present the
/// expanded factored form must reproduce the coefficients to 1e-9 relative.
class Poly {
  public:
    Poly() : coeff_{C(0.0, 0.0)} {}

    static Poly from_coeffs(std::vector<C> coeffs);
    static Poly from_roots(std::vector<C> roots, C leading);
    /// z^n scaled by `lead`.
    static Poly monomial(int n, C lead = C(1.0, 0.0));

    int degree() const { return static_cast<int>(coeff_.size()) - 1; }
    bool is_zero() const { return coeff_.size() == 1 && coeff_[0] == C(0.0, 0.0); }
    const std::vector<C>& coeffs() const { return coeff_; }
    C leading_coeff() const { return coeff_.back(); }

    bool has_roots() const { return roots_.has_value(); }
    const std::vector<C>& roots() const;
    C root_leading() const { return root_leading_; }

    /// Horner evaluation; throws on a non-finite argument.
    C eval(C z) const;

    /// Evaluation through the factored form D * prod (z - r); requires roots.
    C eval_factored(C z) const;

    /// k-th formal derivative (k >= 1); drops to the zero polynomial when
    /// k exceeds the degree.
    Poly derivative(int k = 1) const;

    /// Coefficients of p(z + a).
    Poly shift(C a) const;

    Poly scaled(C factor) const;

    double max_coeff_abs() const;

  private:
    std::vector<C> coeff_;
    std::optional<std::vector<C>> roots_;
    C root_leading_{1.0, 0.0};
};

/// Expand prod (z - r_j) times leading into ascending coefficients.
std::vector<C> expand_from_roots(std::span<const C> roots, C leading);

struct RootFindOptions {
    double residual_tol = 1e-9;
    double cluster_rel = 1e-6;  // cluster radius = cluster_rel * (1 + |root|)
    int max_iterations = 600;
    int polish_steps = 8;
};

struct RootFindResult {
    std::vector<C> roots;  // with multiplicity, cluster centroids repeated
    double residual = 0.0;
    int iterations = 0;
};

/// Simultaneous Durand-Kerner iteration on the monic normalization with
/// Newton polishing; multiplicities are recovered by clustering. Throws
/// NoConvergence (carrying the best iterate and residual) when the scaled
/// residual bound is not met.
RootFindResult find_roots(const Poly& p, const RootFindOptions& opts = {});

struct RootOrdering {
    std::vector<C> roots;        // |roots[0]| <= |roots[1]| <= ...
    std::vector<double> moduli;  // matching moduli
};

/// Sort by modulus ascending; ties broken by principal argument ascending.
RootOrdering order_roots(std::span<const C> roots);

/// Complete homogeneous symmetric polynomial of degree N in the given
/// points, evaluated by the one-variable-at-a-time recursion in O(N*d).
C complete_homogeneous(int N, std::span<const C> points);

/// Distinct roots with multiplicities, from a root list as produced by
/// find_roots. Cluster radius is rel * (1 + |root|).
struct ClusteredRoot {
    C value;
    int multiplicity;
};
std::vector<ClusteredRoot> cluster_roots(std::span<const C> roots, double rel = 1e-6);

}  // namespace cxr
