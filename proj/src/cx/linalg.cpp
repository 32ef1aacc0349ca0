#include "cx/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace cxr {

namespace {

template <typename T>
double entry_abs(const T& v) {
    if constexpr (std::is_same_v<T, C>) {
        return std::abs(v);
    } else {
        return std::fabs(v);
    }
}

// In-place LU with scaled partial pivoting; returns pivot product sign and
// leaves U on and above the diagonal. On a zero pivot column marks singular.
template <typename T>
bool lu_in_place(std::vector<T>& a, int n, std::vector<int>* piv, int& sign) {
    sign = 1;
    std::vector<double> scale(n);
    for (int r = 0; r < n; ++r) {
        double s = 0.0;
        for (int c = 0; c < n; ++c) s = std::max(s, entry_abs(a[r * n + c]));
        scale[r] = (s > 0.0) ? s : 1.0;
    }
    for (int k = 0; k < n; ++k) {
        int best = k;
        double bestval = entry_abs(a[k * n + k]) / scale[k];
        for (int r = k + 1; r < n; ++r) {
            double v = entry_abs(a[r * n + k]) / scale[r];
            if (v > bestval) {
                bestval = v;
                best = r;
            }
        }
        if (piv) (*piv)[k] = best;
        if (best != k) {
            for (int c = 0; c < n; ++c) std::swap(a[k * n + c], a[best * n + c]);
            std::swap(scale[k], scale[best]);
            sign = -sign;
        }
        if (entry_abs(a[k * n + k]) == 0.0) return false;
        T pivot = a[k * n + k];
        for (int r = k + 1; r < n; ++r) {
            T m = a[r * n + k] / pivot;
            a[r * n + k] = m;
            for (int c = k + 1; c < n; ++c) a[r * n + c] -= m * a[k * n + c];
        }
    }
    return true;
}

}  // namespace

C det_complex(std::vector<C> a, int n) {
    int sign = 1;
    if (!lu_in_place(a, n, nullptr, sign)) return C(0.0, 0.0);
    C det(static_cast<double>(sign), 0.0);
    for (int k = 0; k < n; ++k) det *= a[k * n + k];
    return det;
}

double det_real(std::vector<double> a, int n) {
    int sign = 1;
    if (!lu_in_place(a, n, nullptr, sign)) return 0.0;
    double det = static_cast<double>(sign);
    for (int k = 0; k < n; ++k) det *= a[k * n + k];
    return det;
}

bool ComplexLU::factor(std::vector<C> a, int n) {
    n_ = n;
    piv_.assign(n, 0);
    singular_ = !lu_in_place(a, n, &piv_, sign_);
    lu_ = std::move(a);
    return !singular_;
}

void ComplexLU::solve(std::vector<C>& b) const {
    // Row interchanges first, then unit-lower and upper solves.
    for (int k = 0; k < n_; ++k) {
        if (piv_[k] != k) std::swap(b[k], b[piv_[k]]);
    }
    for (int k = 0; k < n_; ++k) {
        for (int r = k + 1; r < n_; ++r) b[r] -= lu_[r * n_ + k] * b[k];
    }
    for (int k = n_ - 1; k >= 0; --k) {
        for (int c = k + 1; c < n_; ++c) b[k] -= lu_[k * n_ + c] * b[c];
        b[k] /= lu_[k * n_ + k];
    }
}

C ComplexLU::determinant() const {
    if (singular_) return C(0.0, 0.0);
    C det(static_cast<double>(sign_), 0.0);
    for (int k = 0; k < n_; ++k) det *= lu_[k * n_ + k];
    return det;
}

}  // namespace cxr
