#include "cx/determinants.hpp"

#include <cmath>

#include "cx/linalg.hpp"
#include "cx/quadrature.hpp"

namespace cxr {

C vandermonde(std::span<const C> points) {
    if (points.size() < 2) throw std::invalid_argument("vandermonde needs at least two points");
    C prod(1.0, 0.0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            prod *= (points[j] - points[i]);
        }
    }
    return prod;
}

double vandermonde_abs(std::span<const C> h) {
    std::vector<C> pts(h.size() + 1, C(0.0, 0.0));
    for (std::size_t i = 0; i < h.size(); ++i) pts[i + 1] = h[i];
    double prod = 1.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            prod *= std::abs(pts[j] - pts[i]);
        }
    }
    return prod;
}

C jacobian_direct(const OffspringCurve& o, C z, std::span<const C> h) {
    int d = o.base.d;
    if (static_cast<int>(h.size()) != d - 1) {
        throw std::invalid_argument("jacobian_direct expects d-1 offsets (h_1 = 0 implicit)");
    }
    Poly dphi = o.base.phi.is_zero() ? Poly() : o.base.phi.derivative(1);
    std::vector<C> mat(static_cast<std::size_t>(d) * d);
    for (int k = 0; k < d; ++k) {
        C hk = (k == 0) ? C(0.0, 0.0) : h[k - 1];
        auto col = offspring_derivative_column(o, dphi, z + hk);
        for (int r = 0; r < d; ++r) mat[static_cast<std::size_t>(r) * d + k] = col[r];
    }
    return det_complex(std::move(mat), d);
}

C jacobian_closed_form(const OffspringCurve& o, C z, std::span<const C> h) {
    int d = o.base.d;
    int N = o.base.phi.degree();
    if (static_cast<int>(h.size()) != d - 1) {
        throw std::invalid_argument("jacobian_closed_form expects d-1 offsets");
    }
    const auto& cs = o.base.phi.coeffs();
    for (int i = 0; i < N; ++i) {
        if (cs[i] != C(0.0, 0.0)) {
            throw std::invalid_argument("closed form requires monomial phi");
        }
    }
    if (N < d) throw std::invalid_argument("closed form requires N >= d");
    C lead = cs.back();

    std::vector<C> hs(static_cast<std::size_t>(d), C(0.0, 0.0));
    for (int k = 1; k < d; ++k) hs[k] = h[k - 1];
    C vdm = vandermonde(hs);

    std::vector<C> pts(static_cast<std::size_t>(d));
    C sum(0.0, 0.0);
    for (const C& b : o.shifts) {
        for (int k = 0; k < d; ++k) pts[k] = z + b + hs[k];
        sum += complete_homogeneous(N - d, pts);
    }

    double fact = 1.0;
    for (int k = 2; k <= d - 1; ++k) fact *= k;
    double scale = fact * static_cast<double>(N) / o.m();
    return lead * scale * vdm * sum;
}

double real_jacobian(const OffspringCurve& o, C z, std::span<const C> h) {
    double a = std::abs(jacobian_direct(o, z, h));
    return a * a;
}

C jacobian_integral_d3(const Poly& phi, C u, C v, C w) {
    Poly p3 = phi.derivative(3);
    int deg = phi.degree();
    int n = std::max(1, deg / 2 + 1);
    const auto& rule = gauss_legendre(n);

    C a = v - u;
    C b = w - v;
    C acc(0.0, 0.0);
    for (int i = 0; i < n; ++i) {
        double t1 = 0.5 * (rule.nodes[i] + 1.0);
        C s1 = u + a * t1;
        for (int j = 0; j < n; ++j) {
            double t2 = 0.5 * (rule.nodes[j] + 1.0);
            C s2 = v + b * t2;
            C seg = s2 - s1;
            C inner(0.0, 0.0);
            for (int k = 0; k < n; ++k) {
                double t3 = 0.5 * (rule.nodes[k] + 1.0);
                inner += rule.weights[k] * p3.eval(s1 + seg * t3);
            }
            acc += rule.weights[i] * rule.weights[j] * seg * inner;
        }
    }
    // Each [0,1] reparametrization contributes a factor 1/2; the leading 2
    // matches the determinant normalization of the curve (z, z^2, phi).
    return 2.0 * a * b * acc * 0.125;
}

}  // namespace cxr
