#pragma once

#include <span>
#include <vector>

#include "cx/polynomial.hpp"

namespace cxr {

/// gamma(z) = (z, z^2, ..., z^{d-1}, phi(z)) as a surface in R^{2d}.
struct SimpleCurve {
    int d = 3;
    Poly phi;

    SimpleCurve() = default;
    SimpleCurve(int dim, Poly p);
};

/// Average of shifted copies: Gamma_b(z) = m^{-1} sum gamma(z + b_j),
/// b_1 = 0. A plain curve is the m = 1 case.
struct OffspringCurve {
    SimpleCurve base;
    std::vector<C> shifts{C(0.0, 0.0)};
    double shift_bound = 1.0;

    OffspringCurve() = default;
    OffspringCurve(SimpleCurve c, std::vector<C> b, double bound = 1.0);

    int m() const { return static_cast<int>(shifts.size()); }
};

struct WeightValue {
    C torsion{0.0, 0.0};
    double weight = 0.0;
    double exponent = 0.0;  // 4 / (d^2 + d)
};

/// c_d = 2! 3! ... (d-1)!  (empty product 1 for d = 2).
double torsion_constant(int d);

double weight_exponent(int d);

std::vector<C> gamma_eval(const SimpleCurve& c, C z);

/// Interleaved (Re, Im) pairs of gamma_eval.
std::vector<double> real_embed(const SimpleCurve& c, C z);

/// tau(z) = c_d * phi^(d)(z); weight = |tau|^{4/(d^2+d)}, exactly zero when
/// deg phi < d.
WeightValue torsion(const SimpleCurve& c, C z);

std::vector<C> offspring_eval(const OffspringCurve& o, C z);

/// Last component of Gamma_b as a polynomial: m^{-1} sum phi(z + b_j).
Poly offspring_phi(const OffspringCurve& o);

/// phi^(d) averaged over the shifts, evaluated at z.
C offspring_phi_d(const OffspringCurve& o, C z);

/// Torsion of z -> sum_{i=1}^d Gamma_b(z + h_i) with h_1 = 0 implicit and
/// h carrying h_2..h_d: d^{d-1} * c_d * m^{-1} * sum_{i,j} phi^(d)(z+b_j+h_i).
C offspring_torsion(const OffspringCurve& o, C z, std::span<const C> h);

/// Columns Gamma_b'(p): (1, 2*m^{-1} sum (p+b_j), ..., m^{-1} sum phi'(p+b_j)).
std::vector<C> offspring_derivative_column(const OffspringCurve& o, const Poly& dphi, C p);

}  // namespace cxr
