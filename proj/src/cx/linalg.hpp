#pragma once

#include <vector>

#include "cx/common.hpp"

namespace cxr {

/// Determinant of an n x n complex matrix (row-major), by LU with scaled
/// partial pivoting. Scaled pivoting keeps the pivot sequence invariant
/// under exact row rescaling, so a power-of-two rescaling of one row
/// rescales the determinant bit-exactly. Singular-to-working-precision
/// matrices give 0.
C det_complex(std::vector<C> a, int n);

/// Determinant of an n x n real matrix (row-major), LU with scaled partial
/// pivoting.
double det_real(std::vector<double> a, int n);

/// LU factorization of a complex matrix, reusable for repeated solves.
class ComplexLU {
  public:
    /// Returns false when the matrix is singular to working precision.
    bool factor(std::vector<C> a, int n);
    /// Solve A x = b in place.
    void solve(std::vector<C>& b) const;
    C determinant() const;

  private:
    std::vector<C> lu_;
    std::vector<int> piv_;
    int n_ = 0;
    int sign_ = 1;
    bool singular_ = false;
};

}  // namespace cxr
