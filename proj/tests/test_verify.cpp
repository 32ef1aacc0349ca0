#include "cx/verify.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cxr;

namespace {

Poly phi_with_third_derivative(const std::vector<C>& roots, C lead = C(1.0, 0.0)) {
    std::vector<C> p = expand_from_roots(roots, lead);
    for (int pass = 0; pass < 3; ++pass) {
        std::vector<C> next(p.size() + 1, C(0.0, 0.0));
        for (std::size_t i = 0; i < p.size(); ++i) {
            next[i + 1] = p[i] / static_cast<double>(i + 1);
        }
        p = std::move(next);
    }
    return Poly::from_coeffs(p);
}

}  // namespace

TEST_CASE("monomial jacobian bound") {
    SUBCASE("d=3, N=3: the ratio is identically one") {
        MonomialJacobianConfig cfg;
        cfg.d = 3;
        cfg.N = 3;
        cfg.m = 1;
        cfg.samples = 3000;
        cfg.shards = 8;
        cfg.seed = 2;
        VerificationReport rep = verify_jacobian_monomial(cfg);
        CHECK(rep.samples == 3000);
        CHECK(rep.violations == 0);
        CHECK(rep.min_ratio == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(rep.max_ratio == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("d=2, N=2: ratio identically one") {
        MonomialJacobianConfig cfg;
        cfg.d = 2;
        cfg.N = 2;
        cfg.m = 1;
        cfg.samples = 2000;
        cfg.shards = 8;
        cfg.seed = 3;
        VerificationReport rep = verify_jacobian_monomial(cfg);
        CHECK(rep.violations == 0);
        CHECK(rep.min_ratio == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("d=3, N=6, m=2: positivity with a recorded constant") {
        MonomialJacobianConfig cfg;
        cfg.samples = 20000;
        cfg.seed = 5;
        VerificationReport rep = verify_jacobian_monomial(cfg);
        CHECK(rep.violations == 0);
        CHECK(rep.min_ratio > 1e-6);
        CHECK(rep.empirical_constant == rep.min_ratio);
        CHECK(rep.max_ratio >= rep.min_ratio);
        // reproducibility from the seed
        VerificationReport rep2 = verify_jacobian_monomial(cfg);
        CHECK(rep.min_ratio == rep2.min_ratio);
        CHECK(rep.max_ratio == rep2.max_ratio);
        CHECK(rep.to_csv() == rep2.to_csv());
    }
    SUBCASE("precondition") {
        MonomialJacobianConfig cfg;
        cfg.N = 2;
        cfg.d = 3;
        CHECK_THROWS_AS(verify_jacobian_monomial(cfg), std::invalid_argument);
    }
}

TEST_CASE("d=3 per-cell jacobian bound") {
    SUBCASE("constant third derivative: ratio one in every cell") {
        Poly phi = Poly::monomial(3);
        DecompParams dp;
        dp.seed = 7;
        dp.coverage_samples = 5000;
        dp.check_samples = 32;
        Certificate cert = build_certificate(phi, 3, C(0, 0), 2.0, dp);
        SimpleD3Config cfg;
        cfg.samples_per_cell = 40;
        cfg.seed = 7;
        cfg.crosscheck_per_cell = 2;
        VerificationReport rep = verify_jacobian_simple_d3(cert, phi, cfg);
        CHECK(rep.violations == 0);
        CHECK(rep.min_ratio == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(rep.max_ratio == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(rep.params.at("integral_crosscheck_failures").get<std::uint64_t>() == 0);
    }
    SUBCASE("two-root fixture: positive minima per cell") {
        Poly phi = phi_with_third_derivative({C(0, 0), C(1, 0)});
        DecompParams dp;
        dp.seed = 11;
        dp.coverage_samples = 5000;
        dp.check_samples = 32;
        Certificate cert = build_certificate(phi, 3, C(0, 0), 2.0, dp);
        SimpleD3Config cfg;
        cfg.samples_per_cell = 60;
        cfg.seed = 11;
        VerificationReport rep = verify_jacobian_simple_d3(cert, phi, cfg);
        CHECK(rep.violations == 0);
        CHECK(rep.min_ratio > 1e-9);
        CHECK(rep.rows.size() == cert.cells.size());
        for (const auto& row : rep.rows) {
            if (!row.skipped) CHECK(row.min_ratio > 0.0);
        }
    }
    SUBCASE("degenerate phi is excluded by precondition") {
        Poly phi = Poly::monomial(2);
        DecompParams dp;
        Certificate cert;
        cert.d = 3;
        SimpleD3Config cfg;
        CHECK_THROWS_AS(verify_jacobian_simple_d3(cert, phi, cfg), std::invalid_argument);
    }
}

TEST_CASE("torsion lower bound") {
    SUBCASE("deg phi = d: ratio is exactly d^{d-1} c_d") {
        OffspringCurve o(SimpleCurve(3, Poly::monomial(3)), {C(0, 0), C(0.03, 0.001)});
        TorsionConfig cfg;
        cfg.samples = 2000;
        cfg.shards = 4;
        cfg.seed = 13;
        VerificationReport rep = verify_torsion_bound(o, cfg);
        CHECK(rep.violations == 0);
        CHECK(rep.min_ratio == doctest::Approx(18.0).epsilon(1e-10));
        CHECK(rep.max_ratio == doctest::Approx(18.0).epsilon(1e-10));
    }
    SUBCASE("z^5 sector fixture") {
        OffspringCurve o(SimpleCurve(3, Poly::monomial(5)), {C(0, 0)});
        TorsionConfig cfg;
        cfg.samples = 20000;
        cfg.seed = 17;
        VerificationReport rep = verify_torsion_bound(o, cfg);
        CHECK(rep.violations == 0);
        CHECK(rep.min_ratio > 1.0);  // constant comfortably positive here
        VerificationReport rep2 = verify_torsion_bound(o, cfg);
        CHECK(rep.to_csv() == rep2.to_csv());
    }
    SUBCASE("certificate-cell region") {
        Poly phi = phi_with_third_derivative({C(0, 0), C(1, 0)});
        DecompParams dp;
        dp.seed = 19;
        dp.coverage_samples = 2000;
        dp.check_samples = 32;
        Certificate cert = build_certificate(phi, 3, C(0, 0), 2.0, dp);
        OffspringCurve o(SimpleCurve(3, phi), {C(0, 0)});
        TorsionConfig cfg;
        cfg.samples = 500;
        cfg.seed = 19;
        std::size_t tested = 0;
        for (std::size_t ci = 0; ci < cert.cells.size(); ci += cert.cells.size() / 17 + 1) {
            VerificationReport rep = verify_torsion_bound_cell(o, cert.cells[ci], cfg);
            if (!rep.rows.empty() && rep.rows[0].skipped) continue;
            CHECK(rep.violations == 0);
            CHECK(rep.min_ratio > 0.0);
            ++tested;
        }
        CHECK(tested > 5);
    }
    SUBCASE("vacuous degree errors out") {
        OffspringCurve o(SimpleCurve(3, Poly::monomial(1)), {C(0, 0)});
        TorsionConfig cfg;
        CHECK_THROWS_AS(verify_torsion_bound(o, cfg), std::invalid_argument);
    }
}

TEST_CASE("sublevel measure law") {
    SUBCASE("d=2 exact disk area") {
        SublevelConfig cfg;
        cfg.d = 2;
        cfg.samples = 1000000;
        cfg.u_min = 0.1;
        cfg.u_max = 1.0;
        cfg.grid_points = 9;
        cfg.seed = 23;
        SublevelReport rep = verify_sublevel(cfg);
        CHECK(rep.slope == doctest::Approx(2.0).epsilon(0.01));
        // measure(u) = pi u^2: intercept of the log-log fit is log(pi)
        CHECK(rep.intercept == doctest::Approx(std::log(kPi)).epsilon(0.01));
        CHECK(rep.target == doctest::Approx(2.0));
    }
    SUBCASE("saturation above the maximal determinant value") {
        SublevelConfig cfg;
        cfg.d = 2;
        cfg.samples = 50000;
        cfg.u_min = 10.0;
        cfg.u_max = 100.0;
        cfg.grid_points = 3;
        cfg.seed = 29;
        SublevelReport rep = verify_sublevel(cfg);
        // |h_2| <= 2 < 10, so every sample is a hit and the measure estimate
        // equals the full domain volume
        for (const auto& row : rep.rows) {
            CHECK(row.hits == cfg.samples);
            CHECK(row.measure == doctest::Approx(rep.domain_volume));
        }
    }
    SUBCASE("too-few-hits rows are dropped and flagged") {
        SublevelConfig cfg;
        cfg.d = 3;
        cfg.samples = 20000;
        cfg.u_min = 1e-6;
        cfg.u_max = 1.0;
        cfg.grid_points = 8;
        cfg.seed = 31;
        SublevelReport rep = verify_sublevel(cfg);
        CHECK(!rep.rows.front().used);
        CHECK(rep.rows.back().used);
    }
}

TEST_CASE("weight growth exponents") {
    SUBCASE("(3,4) -> 7/3 and closed form equality") {
        WeightGrowthConfig cfg;
        WeightGrowthReport rep = weight_growth_exponent(cfg);
        CHECK(rep.analytic_slope == doctest::Approx(7.0 / 3.0));
        CHECK(std::fabs(rep.slope - rep.analytic_slope) < 1e-3);
        for (const auto& row : rep.rows) {
            CHECK(rel_err(row.integral, row.closed_form) < 1e-9);
        }
    }
    SUBCASE("(3,6) -> 3") {
        WeightGrowthConfig cfg;
        cfg.N = 6;
        WeightGrowthReport rep = weight_growth_exponent(cfg);
        CHECK(rep.analytic_slope == doctest::Approx(3.0));
        CHECK(std::fabs(rep.slope - 3.0) < 1e-3);
    }
    SUBCASE("N = d: constant weight, pure area growth") {
        WeightGrowthConfig cfg;
        cfg.N = 3;
        WeightGrowthReport rep = weight_growth_exponent(cfg);
        CHECK(rep.analytic_slope == doctest::Approx(2.0));
        CHECK(std::fabs(rep.slope - 2.0) < 1e-6);
    }
}

TEST_CASE("parallelepiped volume") {
    SUBCASE("d=2, phi=z^2 at the origin: 16 eps^6") {
        SimpleCurve c(2, Poly::monomial(2));
        double eps = 0.3;
        Parallelepiped p = build_parallelepiped(c, C(0, 0), eps);
        double want = 16.0 * std::pow(eps, 6);
        CHECK(p.closed_form == doctest::Approx(want).epsilon(1e-12));
        CHECK(rel_err(p.volume, want) < 1e-10);
    }
    SUBCASE("vanishing torsion collapses the volume") {
        SimpleCurve c(3, Poly::monomial(3));
        Parallelepiped p = build_parallelepiped(c, C(0, 0), 0.2);
        // tau(0) = 12 here, so pick the actual degenerate anchor of z^4
        SimpleCurve c4(3, Poly::monomial(4));
        Parallelepiped p4 = build_parallelepiped(c4, C(0, 0), 0.2);
        CHECK(p4.closed_form == 0.0);
        CHECK(std::fabs(p4.volume) < 1e-20);
        CHECK(p.volume > 0.0);
    }
    SUBCASE("closed form vs determinant on random inputs") {
        Rng rng(37);
        for (int t = 0; t < 50; ++t) {
            int d = 2 + static_cast<int>(rng.uniform() * 3);
            int deg = d + static_cast<int>(rng.uniform() * 3);
            std::vector<C> coeffs(deg + 1);
            for (auto& cc : coeffs) cc = rng.gaussian_complex();
            if (std::abs(coeffs.back()) < 0.1) coeffs.back() += C(1, 0);
            SimpleCurve c(d, Poly::from_coeffs(coeffs));
            C a = rng.gaussian_complex();
            double eps = rng.uniform(0.05, 0.5);
            Parallelepiped p = build_parallelepiped(c, a, eps);
            CHECK(rel_err(p.volume, p.closed_form) < 1e-10);
        }
    }
}

TEST_CASE("containment of the curve in the parallelepiped") {
    SUBCASE("exact Taylor case reaches full containment immediately") {
        SimpleCurve c(2, Poly::monomial(2));
        ContainmentConfig cfg;
        cfg.eps_start = 1e-3;
        cfg.samples = 2000;
        cfg.seed = 41;
        cfg.ratio_sweep = {1e-3, 3e-3, 1e-2};
        ContainmentReport rep = verify_containment(c, C(1, 0), cfg);
        CHECK(rep.fraction == 1.0);
        CHECK(rep.eps_found == doctest::Approx(1e-3));
        CHECK(rel_err(rep.volume, rep.closed_form) < 1e-10);
        // sharpness ratio stays within a constant factor across the sweep
        double lo = 1e300, hi = 0.0;
        for (const auto& row : rep.sweep) {
            CHECK(row.ratio > 0.0);
            lo = std::min(lo, row.ratio);
            hi = std::max(hi, row.ratio);
        }
        CHECK(hi / lo < 3.0);
    }
    SUBCASE("general curve finds a containment scale adaptively") {
        SimpleCurve c(3, Poly::from_coeffs({C(0, 0), C(0.3, 0.1), C(0, 0), C(1, 0), C(0.2, 0)}));
        ContainmentConfig cfg;
        cfg.eps_start = 0.5;
        cfg.samples = 3000;
        cfg.seed = 43;
        ContainmentReport rep = verify_containment(c, C(0.8, -0.3), cfg);
        CHECK(rep.fraction == 1.0);
        CHECK(rep.eps_found > 0.0);
        CHECK(rep.eps_found < 0.5 + 1e-12);
    }
    SUBCASE("vanishing torsion at the anchor is rejected") {
        SimpleCurve c(3, Poly::monomial(4));  // phi''' = 24 z vanishes at 0
        ContainmentConfig cfg;
        CHECK_THROWS_AS(verify_containment(c, C(0, 0), cfg), std::invalid_argument);
    }
}

TEST_CASE("scaling invariance of ratio reports") {
    // Exactly representable scalars: power-of-two magnitude times a fourth
    // root of unity, so scaled coefficients carry no rounding and the
    // reports must come back bit-identical.
    Rng rng(47);
    for (int t = 0; t < 4; ++t) {
        int k = static_cast<int>(rng.uniform() * 19) - 9;
        int rot = static_cast<int>(rng.uniform() * 4);
        C lam = std::ldexp(1.0, k) * std::vector<C>{C(1, 0), C(0, 1), C(-1, 0), C(0, -1)}[rot];

        SUBCASE("") {}  // keep doctest happy about loop subcases
        MonomialJacobianConfig mc;
        mc.d = 3;
        mc.N = 5;
        mc.m = 2;
        mc.samples = 2000;
        mc.shards = 4;
        mc.seed = 101;
        VerificationReport base = verify_jacobian_monomial(mc);
        mc.lead = lam;
        VerificationReport scaled = verify_jacobian_monomial(mc);
        CHECK(base.min_ratio == scaled.min_ratio);
        CHECK(base.max_ratio == scaled.max_ratio);
        CHECK(base.violations == scaled.violations);

        OffspringCurve o(SimpleCurve(3, Poly::monomial(5)), {C(0, 0), C(0.02, 0.001)});
        OffspringCurve ol(SimpleCurve(3, Poly::monomial(5, lam)), {C(0, 0), C(0.02, 0.001)});
        TorsionConfig tc;
        tc.samples = 2000;
        tc.shards = 4;
        tc.seed = 103;
        VerificationReport tb = verify_torsion_bound(o, tc);
        VerificationReport tl = verify_torsion_bound(ol, tc);
        CHECK(tb.min_ratio == tl.min_ratio);
        CHECK(tb.max_ratio == tl.max_ratio);
    }

    SUBCASE("generic complex scalars agree to conditioning accuracy") {
        MonomialJacobianConfig mc;
        mc.d = 3;
        mc.N = 5;
        mc.m = 1;
        mc.samples = 2000;
        mc.shards = 4;
        mc.seed = 107;
        VerificationReport base = verify_jacobian_monomial(mc);
        mc.lead = C(1.7, -2.3);
        VerificationReport scaled = verify_jacobian_monomial(mc);
        CHECK(rel_err(base.min_ratio, scaled.min_ratio) < 1e-6);
        CHECK(rel_err(base.max_ratio, scaled.max_ratio) < 1e-6);
    }
}
