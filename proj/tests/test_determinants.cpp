#include "cx/determinants.hpp"
#include "cx/linalg.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cxr;

namespace {

const C kI(0.0, 1.0);

OffspringCurve monomial_offspring(int d, int N, const std::vector<C>& shifts,
                                  C lead = C(1.0, 0.0)) {
    return OffspringCurve(SimpleCurve(d, Poly::monomial(N, lead)), shifts, 8.0);
}

std::vector<C> random_poly_coeffs(Rng& rng, int deg) {
    std::vector<C> coeffs(deg + 1);
    for (auto& c : coeffs) c = rng.gaussian_complex();
    if (std::abs(coeffs.back()) < 0.1) coeffs.back() += C(1.0, 0.0);
    return coeffs;
}

}  // namespace

TEST_CASE("vandermonde product") {
    CHECK(vandermonde(std::vector<C>{C(0, 0), C(1, 0), C(2, 0)}) == C(2.0, 0.0));
    CHECK(vandermonde(std::vector<C>{C(1, 1), C(1, 1), C(2, 0)}) == C(0.0, 0.0));
    C v = vandermonde(std::vector<C>{kI, C(1, 0), -kI});
    CHECK(rel_err(v, C(0.0, 4.0)) < 1e-15);
    CHECK(std::abs(v) == doctest::Approx(4.0));

    std::vector<C> h{C(0.5, 0.1), C(-0.3, 0.7)};
    CHECK(vandermonde_abs(h) ==
          doctest::Approx(std::abs(h[0]) * std::abs(h[1]) * std::abs(h[1] - h[0])));
}

TEST_CASE("direct jacobian determinant") {
    SUBCASE("d=2 plain curve gives 2 h2") {
        OffspringCurve o = monomial_offspring(2, 2, {C(0, 0)});
        Rng rng(3);
        for (int t = 0; t < 20; ++t) {
            C z = rng.gaussian_complex();
            C h2 = rng.gaussian_complex();
            std::vector<C> h{h2};
            CHECK(rel_err(jacobian_direct(o, z, h), 2.0 * h2) < 1e-13);
        }
    }
    SUBCASE("repeated offsets vanish") {
        OffspringCurve o = monomial_offspring(3, 5, {C(0, 0)});
        C h2(0.4, -0.8);
        std::vector<C> h{h2, h2};
        CHECK(std::abs(jacobian_direct(o, C(0.3, 0.2), h)) < 1e-13);
    }
    SUBCASE("d=3 cubic gives 6 V(h)") {
        OffspringCurve o = monomial_offspring(3, 3, {C(0, 0)});
        Rng rng(5);
        for (int t = 0; t < 20; ++t) {
            C z = rng.gaussian_complex();
            std::vector<C> h{rng.gaussian_complex(), rng.gaussian_complex()};
            std::vector<C> pts{C(0, 0), h[0], h[1]};
            CHECK(rel_err(jacobian_direct(o, z, h), 6.0 * vandermonde(pts)) < 1e-12);
        }
    }
    SUBCASE("cofactor oracle for d=3 with general phi") {
        Rng rng(7);
        for (int t = 0; t < 30; ++t) {
            Poly phi = Poly::from_coeffs(random_poly_coeffs(rng, 3 + static_cast<int>(
                                                                     rng.uniform() * 6)));
            OffspringCurve o(SimpleCurve(3, phi), {C(0, 0)});
            Poly dphi = phi.derivative(1);
            C z = rng.gaussian_complex();
            std::vector<C> h{rng.gaussian_complex(), rng.gaussian_complex()};
            C cols[3][3];
            for (int k = 0; k < 3; ++k) {
                C p = z + (k == 0 ? C(0, 0) : h[k - 1]);
                cols[k][0] = C(1, 0);
                cols[k][1] = 2.0 * p;
                cols[k][2] = dphi.eval(p);
            }
            C want = oracle::det3_cofactor(cols[0], cols[1], cols[2]);
            CHECK(rel_err(jacobian_direct(o, z, h), want) < 1e-11);
        }
    }
    SUBCASE("antisymmetry under point swaps") {
        Rng rng(11);
        OffspringCurve o = monomial_offspring(3, 6, {C(0, 0), C(0.2, 0.1)});
        for (int t = 0; t < 20; ++t) {
            C u1 = rng.gaussian_complex(), u2 = rng.gaussian_complex(),
              u3 = rng.gaussian_complex();
            std::vector<C> h12{u2 - u1, u3 - u1};
            std::vector<C> h21{u1 - u2, u3 - u2};
            C a = jacobian_direct(o, u1, h12);
            C b = jacobian_direct(o, u2, h21);
            CHECK(rel_err(a, -b) < 1e-11);
            std::vector<C> h13{u3 - u1, u2 - u1};
            CHECK(rel_err(a, -jacobian_direct(o, u1, h13)) < 1e-11);
        }
    }
}

TEST_CASE("closed form for monomial curves") {
    SUBCASE("small exact cases") {
        OffspringCurve o2 = monomial_offspring(2, 2, {C(0, 0)});
        C h2(0.7, -0.4);
        std::vector<C> h{h2};
        CHECK(rel_err(jacobian_closed_form(o2, C(0.3, 0.5), h), 2.0 * h2) < 1e-14);

        OffspringCurve o3 = monomial_offspring(3, 3, {C(0, 0)});
        std::vector<C> h3{C(0.2, 0.1), C(-0.5, 0.3)};
        CHECK(rel_err(jacobian_closed_form(o3, C(0.1, -0.2), h3),
                      jacobian_direct(o3, C(0.1, -0.2), h3)) < 1e-13);
    }
    SUBCASE("random equivalence sweep") {
        Rng rng(13);
        for (int t = 0; t < 200; ++t) {
            int d = 2 + static_cast<int>(rng.uniform() * 4);
            int N = d + static_cast<int>(rng.uniform() * (11 - d));
            int m = 1 + static_cast<int>(rng.uniform() * 4);
            std::vector<C> shifts(m, C(0, 0));
            for (int j = 1; j < m; ++j) shifts[j] = 0.5 * rng.gaussian_complex();
            C lead = rng.gaussian_complex();
            if (std::abs(lead) < 0.1) lead += C(1, 0);
            OffspringCurve o = monomial_offspring(d, N, shifts, lead);
            C z = rng.gaussian_complex();
            std::vector<C> h(d - 1);
            for (auto& v : h) v = rng.gaussian_complex();
            CHECK(rel_err(jacobian_direct(o, z, h), jacobian_closed_form(o, z, h)) < 1e-8);
        }
    }
    SUBCASE("error contracts") {
        OffspringCurve low = monomial_offspring(3, 2, {C(0, 0)});
        std::vector<C> h{C(0.1, 0), C(0, 0.1)};
        CHECK_THROWS_WITH_AS(jacobian_closed_form(low, C(0, 0), h),
                             "closed form requires N >= d", std::invalid_argument);
        Poly not_monomial =
            Poly::from_coeffs({C(0, 0), C(1, 0), C(0, 0), C(0, 0), C(1, 0)});
        OffspringCurve bad(SimpleCurve(3, not_monomial), {C(0, 0)});
        CHECK_THROWS_WITH_AS(jacobian_closed_form(bad, C(0, 0), h),
                             "closed form requires monomial phi", std::invalid_argument);
    }
}

TEST_CASE("real jacobian identity") {
    SUBCASE("d=2 example value 4") {
        OffspringCurve o = monomial_offspring(2, 2, {C(0, 0)});
        std::vector<C> h{C(1.0, 0.0)};
        CHECK(real_jacobian(o, C(0.4, -0.2), h) == doctest::Approx(4.0));
        double fd = oracle::fd_real_jacobian(o, C(0.4, -0.2), h, 1e-5);
        CHECK(rel_err(real_jacobian(o, C(0.4, -0.2), h), fd) < 1e-8);
    }
    SUBCASE("repeated offsets vanish to working precision") {
        OffspringCurve o = monomial_offspring(3, 4, {C(0, 0)});
        std::vector<C> h{C(0.3, 0.1), C(0.3, 0.1)};
        CHECK(real_jacobian(o, C(0, 0), h) < 1e-26);
    }
    SUBCASE("finite differences on random d=3 instances") {
        Rng rng(17);
        for (int t = 0; t < 25; ++t) {
            Poly phi = Poly::from_coeffs(random_poly_coeffs(rng, 3 + static_cast<int>(
                                                                     rng.uniform() * 4)));
            int m = 1 + static_cast<int>(rng.uniform() * 2);
            std::vector<C> shifts(m, C(0, 0));
            for (int j = 1; j < m; ++j) shifts[j] = 0.3 * rng.gaussian_complex();
            OffspringCurve o(SimpleCurve(3, phi), shifts, 4.0);
            C z = 0.7 * rng.gaussian_complex();
            std::vector<C> h{rng.gaussian_complex(), rng.gaussian_complex()};
            double jr = real_jacobian(o, z, h);
            double scale = std::max(1.0, std::abs(z) + std::abs(h[0]) + std::abs(h[1]));
            double fd = oracle::fd_real_jacobian(o, z, h, 1e-5 * scale);
            CHECK(rel_err(jr, fd) < 1e-5);
        }
    }
}

TEST_CASE("d=3 integral representation") {
    SUBCASE("cubic matches the direct determinant") {
        Poly phi = Poly::monomial(3);
        OffspringCurve o(SimpleCurve(3, phi), {C(0, 0)});
        Rng rng(19);
        for (int t = 0; t < 20; ++t) {
            C u = rng.gaussian_complex(), v = rng.gaussian_complex(), w = rng.gaussian_complex();
            std::vector<C> h{v - u, w - u};
            CHECK(rel_err(jacobian_integral_d3(phi, u, v, w), jacobian_direct(o, u, h)) <
                  1e-13);
        }
    }
    SUBCASE("degenerate outer segment vanishes") {
        Poly phi = Poly::monomial(5);
        C u(0.3, 0.4);
        CHECK(std::abs(jacobian_integral_d3(phi, u, u, C(1.0, -0.7))) == 0.0);
    }
    SUBCASE("random polynomials up to degree 12") {
        Rng rng(23);
        for (int t = 0; t < 200; ++t) {
            int deg = 3 + static_cast<int>(rng.uniform() * 10);
            Poly phi = Poly::from_coeffs(random_poly_coeffs(rng, deg));
            OffspringCurve o(SimpleCurve(3, phi), {C(0, 0)});
            auto pts = oracle::separated_gaussians(rng, 3, 0.02);
            std::vector<C> h{pts[1] - pts[0], pts[2] - pts[0]};
            CHECK(rel_err(jacobian_integral_d3(phi, pts[0], pts[1], pts[2]),
                          jacobian_direct(o, pts[0], h)) < 1e-9);
        }
    }
}

TEST_CASE("degree-deficient polynomials have vanishing jacobians") {
    Rng rng(29);
    for (int t = 0; t < 20; ++t) {
        int d = 2 + static_cast<int>(rng.uniform() * 3);
        int deg = static_cast<int>(rng.uniform() * d);  // deg < d
        std::vector<C> coeffs(deg + 1);
        for (auto& c : coeffs) c = rng.gaussian_complex();
        if (coeffs.back() == C(0, 0)) coeffs.back() = C(1, 0);
        OffspringCurve o(SimpleCurve(d, Poly::from_coeffs(coeffs)), {C(0, 0)});
        C z = rng.gaussian_complex();
        std::vector<C> h(d - 1);
        for (auto& v : h) v = rng.gaussian_complex();
        CHECK(std::abs(jacobian_direct(o, z, h)) < 1e-12);
        CHECK(real_jacobian(o, z, h) < 1e-12);
        if (d == 3) {
            CHECK(std::abs(jacobian_integral_d3(o.base.phi, z, z + h[0], z + h[1])) < 1e-12);
        }
    }
}

TEST_CASE("complex determinant scales bit-exactly under power-of-two row scaling") {
    // scaled partial pivoting keeps the pivot order invariant under exact
    // rescaling of one row, so the determinant scales without rounding
    Rng rng(31);
    for (int t = 0; t < 50; ++t) {
        int n = 2 + static_cast<int>(rng.uniform() * 4);
        std::vector<C> a(static_cast<std::size_t>(n) * n);
        for (auto& v : a) v = rng.gaussian_complex();
        double s = std::ldexp(1.0, static_cast<int>(rng.uniform() * 18) - 9);
        std::vector<C> b = a;
        int row = static_cast<int>(rng.uniform() * n);
        for (int c = 0; c < n; ++c) b[static_cast<std::size_t>(row) * n + c] *= s;
        C d1 = det_complex(a, n);
        C d2 = det_complex(b, n);
        CHECK(d2 == s * d1);
    }
}
