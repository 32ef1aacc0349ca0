#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace cxr {

using C = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

inline bool is_finite(double x) { return std::isfinite(x); }
inline bool is_finite(C z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// Relative error with a vanishing-safe denominator: both sides may
/// legitimately be zero, in which case the error is zero.
inline double rel_err(double a, double b) {
    double denom = std::max({std::fabs(a), std::fabs(b), 1e-300});
    return std::fabs(a - b) / denom;
}

inline double rel_err(C a, C b) {
    double denom = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / denom;
}

/// Wrap an angle into (-pi, pi].
inline double wrap_angle(double t) {
    while (t > kPi) t -= 2.0 * kPi;
    while (t <= -kPi) t += 2.0 * kPi;
    return t;
}

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoConvergence : std::runtime_error {
    NoConvergence(const std::string& msg, std::vector<C> iterate, double resid)
        : std::runtime_error(msg), best_iterate(std::move(iterate)), residual(resid) {}
    std::vector<C> best_iterate;
    double residual = 0.0;
};

}  // namespace cxr
