#pragma once

#include <vector>

#include "cx/common.hpp"

namespace cxr {

struct GaussLegendre {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;  // sum to 2
};

/// n-point Gauss-Legendre rule on [-1,1]; results are cached per n.
const GaussLegendre& gauss_legendre(int n);

/// Map node t in [-1,1] to [a,b]; the matching weight factor is (b-a)/2.
inline double gl_map(double t, double a, double b) {
    return 0.5 * (a + b) + 0.5 * (b - a) * t;
}

}  // namespace cxr
