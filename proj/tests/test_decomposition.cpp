#include <set>

#include "cx/decomposition.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cxr;

namespace {

/// phi of degree deg(P)+3 with phi''' equal to the polynomial with the
/// given roots: antidifferentiate three times.
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

DecompParams fast_params(std::uint64_t seed) {
    DecompParams dp;
    dp.seed = seed;
    dp.coverage_samples = 20000;
    dp.check_samples = 48;
    return dp;
}

}  // namespace

TEST_CASE("gap and dyadic radial bands") {
    SUBCASE("two roots, interval arithmetic from the defining inequalities") {
        auto ord = order_roots(std::vector<C>{C(0, 0), C(1, 0)});
        auto ivs = gap_dyadic_annuli(ord, 4.0, 4.4, 8.0);
        REQUIRE(ivs.size() == 3);
        // inner gap: raw [A |z_1|, |z_2|/A] = [0, 0.25]
        CHECK(ivs[0].kind == AnnulusKind::Gap);
        CHECK(ivs[0].index_j == 1);
        CHECK(ivs[0].raw_lo == 0.0);
        CHECK(ivs[0].raw_hi == doctest::Approx(0.25));
        // dyadic: raw (|z_2|/A1, A1 |z_2|) = (1/4.4, 4.4)
        CHECK(ivs[1].kind == AnnulusKind::Dyadic);
        CHECK(ivs[1].index_j == 2);
        CHECK(ivs[1].raw_lo == doctest::Approx(1.0 / 4.4));
        CHECK(ivs[1].raw_hi == doctest::Approx(4.4));
        // outer gap: raw [A |z_2|, inf) clipped to the reach
        CHECK(ivs[2].kind == AnnulusKind::Gap);
        CHECK(ivs[2].index_j == 2);
        CHECK(ivs[2].raw_lo == doctest::Approx(4.0));
        // overlap strips go to the dyadic band
        CHECK(ivs[0].hi == doctest::Approx(1.0 / 4.4));
        CHECK(ivs[1].lo == doctest::Approx(1.0 / 4.4));
        CHECK(ivs[1].hi == doctest::Approx(4.4));
        CHECK(ivs[2].lo == doctest::Approx(4.4));
        CHECK(ivs[2].hi == doctest::Approx(8.0));
        // effective cover is contiguous and disjoint
        for (std::size_t i = 0; i + 1 < ivs.size(); ++i) {
            CHECK(ivs[i].hi == doctest::Approx(ivs[i + 1].lo));
        }
    }
    SUBCASE("single root at the origin leaves one gap") {
        auto ord = order_roots(std::vector<C>{C(0, 0)});
        auto ivs = gap_dyadic_annuli(ord, 4.0, 4.4, 2.0);
        REQUIRE(ivs.size() == 1);
        CHECK(ivs[0].kind == AnnulusKind::Gap);
        CHECK(ivs[0].index_j == 1);
        CHECK(ivs[0].lo == 0.0);
        CHECK(ivs[0].hi == doctest::Approx(2.0));
        CHECK(!ivs[0].empty);
    }
    SUBCASE("double root at the origin") {
        auto ord = order_roots(std::vector<C>{C(0, 0), C(0, 0)});
        auto ivs = gap_dyadic_annuli(ord, 4.0, 4.4, 2.0);
        REQUIRE(ivs.size() == 1);
        CHECK(ivs[0].kind == AnnulusKind::Gap);
        CHECK(ivs[0].index_j == 2);
        CHECK(!ivs[0].empty);
    }
    SUBCASE("close moduli split at the geometric mean") {
        auto ord = order_roots(std::vector<C>{C(0, 0), C(1, 0), C(1.1, 0)});
        auto ivs = gap_dyadic_annuli(ord, 48.0, 52.8, 3.0);
        double split = std::sqrt(1.0 * 1.1);
        // the gap between the close levels is recorded but empty
        bool saw_empty_gap = false;
        std::vector<RadialInterval> nonempty;
        for (const auto& iv : ivs) {
            if (iv.empty) {
                if (iv.kind == AnnulusKind::Gap && iv.index_j == 2) saw_empty_gap = true;
                continue;
            }
            nonempty.push_back(iv);
        }
        CHECK(saw_empty_gap);
        bool found = false;
        for (std::size_t i = 0; i + 1 < nonempty.size(); ++i) {
            if (nonempty[i].kind == AnnulusKind::Dyadic &&
                nonempty[i + 1].kind == AnnulusKind::Dyadic) {
                CHECK(nonempty[i].hi == doctest::Approx(split));
                CHECK(nonempty[i + 1].lo == doctest::Approx(split));
                found = true;
            }
        }
        CHECK(found);
    }
}

TEST_CASE("coefficient comparability") {
    SUBCASE("z(z-4)") {
        Poly p = Poly::from_roots({C(0, 0), C(4, 0)}, C(1, 0));
        auto cc = coefficient_comparability(p, 1);
        CHECK(cc.nu_j == C(-4.0, 0.0));
        CHECK(cc.predicted == doctest::Approx(4.0));
        CHECK(std::abs(cc.nu_j) / cc.predicted == doctest::Approx(1.0));
    }
    SUBCASE("monic top coefficient") {
        Poly p = Poly::from_roots({C(0.5, 0.2), C(-1, 0), C(0, 2)}, C(1, 0));
        auto cc = coefficient_comparability(p, 3);
        CHECK(cc.nu_j == C(1.0, 0.0));
        CHECK(cc.predicted == doctest::Approx(1.0));
    }
    SUBCASE("(z-1)(z-100)") {
        Poly p = Poly::from_roots({C(1, 0), C(100, 0)}, C(1, 0));
        auto cc = coefficient_comparability(p, 1);
        CHECK(cc.nu_j == C(-101.0, 0.0));
        CHECK(cc.predicted == doctest::Approx(100.0));
        CHECK(std::abs(cc.nu_j) / cc.predicted == doctest::Approx(1.01));
    }
    SUBCASE("index out of range") {
        Poly p = Poly::from_roots({C(1, 0)}, C(1, 0));
        CHECK_THROWS_AS(coefficient_comparability(p, 0), std::out_of_range);
        CHECK_THROWS_AS(coefficient_comparability(p, 2), std::out_of_range);
        CHECK_THROWS_AS(coefficient_comparability(Poly::monomial(2), 1), std::logic_error);
    }
}

TEST_CASE("root cancellation factor g") {
    SUBCASE("monomial context is identically one") {
        RootContext ctx;
        ctx.root = C(0, 0);
        ctx.shifted_roots = {C(0, 0), C(0, 0), C(0, 0)};
        CHECK(g_value(ctx, 3, C(0.2, 0.7)) == C(1.0, 0.0));
    }
    SUBCASE("two-root example") {
        RootContext ctx;
        ctx.root = C(0, 0);
        ctx.shifted_roots = {C(0, 0), C(1, 0)};
        // g(w) = 1 - 1/w at split index 2
        C w(-0.5, 0.0);
        CHECK(rel_err(g_value(ctx, 2, w), C(3.0, 0.0)) < 1e-15);
        // |g| >= 1 on the Voronoi half-plane of 0 (|w| <= |w - 1|)
        Rng rng(3);
        for (int t = 0; t < 200; ++t) {
            C s = rng.uniform_square(-2.0, 2.0);
            if (std::abs(s) > std::abs(s - C(1, 0)) || std::abs(s) < 1e-3) continue;
            CHECK(std::abs(g_value(ctx, 2, s)) >= 1.0 - 1e-12);
        }
    }
}

TEST_CASE("certificate structure for forced cases") {
    SUBCASE("monomial phi: sectors with one gap band, no dyadic") {
        Certificate cert = build_certificate(Poly::monomial(6), 3, C(0, 0), 2.0, fast_params(5));
        CHECK(!cert.trivial_zero_weight);
        CHECK(cert.degree_P == 3);
        REQUIRE(!cert.cells.empty());
        for (const auto& cell : cert.cells) {
            CHECK(cell.tags.kind == AnnulusKind::Gap);
            CHECK(cell.tags.annulus_index == 3);
            // |P| = |nu_3| |w|^3 exactly, so K stays 1
            CHECK(cell.comparability == doctest::Approx(1.0).epsilon(1e-9));
            CHECK(cell.g_spread <= 1e-12);
        }
        CHECK(cert.coverage_fraction >= 0.999);
    }
    SUBCASE("deg phi = d: constant third derivative, single band, K = 1") {
        Certificate cert = build_certificate(Poly::monomial(3), 3, C(0, 0), 2.0, fast_params(6));
        CHECK(cert.degree_P == 0);
        for (const auto& cell : cert.cells) {
            CHECK(cell.comparability == doctest::Approx(1.0));
            CHECK(cell.g_spread == 0.0);
        }
        CHECK(cert.coverage_fraction >= 0.999);
    }
    SUBCASE("deg phi < d is the trivial zero-weight marker") {
        Certificate cert = build_certificate(Poly::monomial(2), 3, C(0, 0), 2.0, fast_params(7));
        CHECK(cert.trivial_zero_weight);
        CHECK(cert.cells.empty());
    }
}

TEST_CASE("certificate invariants on a two-root fixture") {
    Poly phi = phi_with_third_derivative({C(0, 0), C(1, 0)});
    DecompParams dp = fast_params(11);
    Certificate cert = build_certificate(phi, 3, C(0, 0), 2.0, dp);

    SUBCASE("cells are convex with positive area and carry tags") {
        std::set<int> roots_seen;
        for (const auto& cell : cert.cells) {
            CHECK(is_convex_ccw(cell.vertices));
            CHECK(cell.area > 0.0);
            roots_seen.insert(cell.tags.root_index);
        }
        CHECK(roots_seen.size() == 2);  // Voronoi halves of both roots populated
    }
    SUBCASE("gap cells obey the comparability bound; spreads stay in the cone") {
        for (const auto& cell : cert.cells) {
            if (cell.tags.kind == AnnulusKind::Gap) CHECK(cell.comparability <= dp.kmax);
            CHECK(cell.g_spread <= std::atan(1.0 / dp.b0) + 1e-12);
        }
    }
    SUBCASE("sampled points land in exactly one cell") {
        Rng rng(13);
        std::size_t inside_one = 0, inside_many = 0, outside = 0;
        for (int t = 0; t < 20000; ++t) {
            C z = rng.uniform_disk(2.0);
            int hits = 0;
            for (const auto& cell : cert.cells) {
                if (point_in_convex(cell.vertices, z, 1e-9)) ++hits;
            }
            if (hits == 0) ++outside;
            else if (hits == 1) ++inside_one;
            else ++inside_many;
        }
        CHECK(inside_many == 0);
        CHECK(static_cast<double>(inside_one) / 20000.0 >= 0.999);
    }
    SUBCASE("coverage and the g separation bound") {
        CHECK(cert.coverage_fraction >= 1.0 - dp.coverage_tol);
        GBoundReport gb = g_lower_bound_check(cert);
        CHECK(gb.all_pass);
        CHECK(gb.threshold == doctest::Approx(std::pow(2.0, 2 - cert.degree_P) * 0.95));
        bool any_dyadic = false;
        for (const auto& row : gb.rows) {
            any_dyadic = true;
            CHECK(row.min_abs_g >= gb.threshold);
        }
        CHECK(any_dyadic);
    }
    SUBCASE("serialization carries cells, tags, and measured constants") {
        Json j = cert.to_json();
        CHECK(j.at("cells").size() == cert.cells.size());
        CHECK(j.at("roots").size() == 2);
        const Json& c0 = j.at("cells").at(0);
        CHECK(c0.contains("vertices"));
        CHECK(c0.contains("annulus_kind"));
        CHECK(c0.contains("K"));
        CHECK(c0.contains("g_spread"));
        CHECK(j.at("coverage_fraction").get<double>() == cert.coverage_fraction);
    }
}

TEST_CASE("refinement budget errors carry the offenders") {
    Poly phi = phi_with_third_derivative({C(0, 0), C(0.5, 0.5)});
    DecompParams dp = fast_params(17);
    dp.max_cells = 64;  // far below what the fixture needs
    dp.max_eps_halvings = 0;
    CHECK_THROWS_AS(build_certificate(phi, 3, C(0, 0), 2.0, dp), BudgetExceeded);
}

TEST_CASE("certificate is reproducible from the seed") {
    Poly phi = phi_with_third_derivative({C(0, 0), C(1, 0)});
    Certificate a = build_certificate(phi, 3, C(0, 0), 2.0, fast_params(23));
    Certificate b = build_certificate(phi, 3, C(0, 0), 2.0, fast_params(23));
    CHECK(a.to_json().dump() == b.to_json().dump());
}
