#pragma once

#include <span>

#include "cx/curve.hpp"

namespace cxr {

/// Complex Vandermonde: prod_{i<j} (z_j - z_i).
C vandermonde(std::span<const C> points);

/// v(h) = |V(z, z+h_2, ..., z+h_d)| = prod |h_j - h_i| with h_1 = 0
/// prepended; h carries h_2..h_d.
double vandermonde_abs(std::span<const C> h);

/// det(Gamma_b'(z+h_1), ..., Gamma_b'(z+h_d)) with h_1 = 0 implicit,
/// by LU with partial pivoting. Singular-to-precision matrices give 0.
C jacobian_direct(const OffspringCurve& o, C z, std::span<const C> h);

/// Closed form for monomial phi = D z^N, N >= d:
///   D * ((d-1)! N / m) * prod_{k<l} (h_l - h_k)
///     * sum_j P_{N-d}(z+b_j+h_1, ..., z+b_j+h_d).
C jacobian_closed_form(const OffspringCurve& o, C z, std::span<const C> h);

/// Squared modulus of jacobian_direct: the Jacobian of the sum map viewed
/// as a real mapping.
double real_jacobian(const OffspringCurve& o, C z, std::span<const C> h);

/// d = 3 triple line-integral representation over segments,
///   2 * int_u^v int_v^w int_{s1}^{s2} phi'''(z) dz ds2 ds1,
/// evaluated by tensor Gauss-Legendre with a node count exact for the
/// polynomial degree. Equals jacobian_direct for the plain d = 3 curve.
C jacobian_integral_d3(const Poly& phi, C u, C v, C w);

}  // namespace cxr
