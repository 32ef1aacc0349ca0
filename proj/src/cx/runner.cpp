#include "cx/runner.hpp"

#include <cmath>

#include "cx/determinants.hpp"
#include "cx/extension.hpp"
#include "cx/json_io.hpp"
#include "cx/parallel.hpp"
#include "cx/verify.hpp"

namespace cxr {

namespace {

template <typename T>
T get_or(const Json& j, const std::string& key, T def) {
    if (!j.contains(key)) return def;
    return j.at(key).get<T>();
}

Json params_of(const Json& config) {
    Json p = config.contains("params") ? config.at("params") : Json::object();
    // RunConfig invariants: sample counts >= 1, grids nonempty.
    for (const char* key : {"samples", "samples_per_cell", "coverage_samples", "ratio_samples"}) {
        if (p.contains(key) && p.at(key).get<double>() < 1) {
            throw ParseError(std::string("key '") + key + "' must be >= 1");
        }
    }
    for (const char* key : {"R_grid", "lambda_grid", "ratio_sweep"}) {
        if (p.contains(key) && (!p.at(key).is_array() || p.at(key).empty())) {
            throw ParseError(std::string("key '") + key + "' must be a nonempty array");
        }
    }
    return p;
}

std::uint64_t seed_of(const Json& config) {
    return get_or<std::uint64_t>(config, "seed", 1);
}

OffspringCurve curve_of(const Json& config) {
    if (!config.contains("curve")) throw ParseError("config needs key 'curve'");
    return curve_from_json(config.at("curve"));
}

DecompParams decomp_params(const Json& p, std::uint64_t seed) {
    DecompParams dp;
    dp.seed = seed;
    dp.b0 = get_or(p, "b0", dp.b0);
    dp.c0_factor = get_or(p, "c0_factor", dp.c0_factor);
    dp.delta0 = get_or(p, "delta0", dp.delta0);
    dp.sector_eps = get_or(p, "sector_eps", dp.sector_eps);
    dp.kmax = get_or(p, "kmax", dp.kmax);
    dp.coverage_tol = get_or(p, "coverage_tol", dp.coverage_tol);
    dp.max_depth = get_or(p, "max_depth", dp.max_depth);
    dp.max_cells = get_or<std::size_t>(p, "max_cells", dp.max_cells);
    dp.check_samples = get_or(p, "check_samples", dp.check_samples);
    dp.coverage_samples = get_or<std::size_t>(p, "coverage_samples", dp.coverage_samples);
    dp.cluster_rel = get_or(p, "cluster_rel", dp.cluster_rel);
    return dp;
}

Json echo_decomp(const DecompParams& dp, C center, double radius) {
    return Json{{"b0", dp.b0},
                {"c0_factor", dp.c0_factor},
                {"delta0", dp.delta0},
                {"sector_eps", dp.sector_eps},
                {"kmax", dp.kmax},
                {"coverage_tol", dp.coverage_tol},
                {"max_depth", dp.max_depth},
                {"max_cells", dp.max_cells},
                {"check_samples", dp.check_samples},
                {"coverage_samples", dp.coverage_samples},
                {"disk_center", Json::array({center.real(), center.imag()})},
                {"disk_radius", radius}};
}

RunOutcome run_decompose(const Json& config) {
    Json p = params_of(config);
    std::uint64_t seed = seed_of(config);
    OffspringCurve o = curve_of(config);
    DecompParams dp = decomp_params(p, seed);
    C center = p.contains("disk_center") ? complex_from_json(p.at("disk_center"), "disk_center")
                                         : C(0.0, 0.0);
    double radius = get_or(p, "disk_radius", 2.0);

    Certificate cert = build_certificate(o.base.phi, o.base.d, center, radius, dp);
    GBoundReport gb;
    if (!cert.trivial_zero_weight) gb = g_lower_bound_check(cert);

    RunOutcome out;
    out.files.emplace_back("certificate.json", cert.to_json().dump(2) + "\n");
    out.files.emplace_back("g_lower_bound.csv", gb.to_csv());

    std::string cells_csv =
        "cell_index,root_index,sector_index,annulus_kind,annulus_index,area,K,g_spread,"
        "g_min_abs,g_max_abs\n";
    for (std::size_t i = 0; i < cert.cells.size(); ++i) {
        const auto& c = cert.cells[i];
        cells_csv += std::to_string(i);
        cells_csv += ',';
        cells_csv += std::to_string(c.tags.root_index);
        cells_csv += ',';
        cells_csv += std::to_string(c.tags.sector_index);
        cells_csv += ',';
        cells_csv += (c.tags.kind == AnnulusKind::Gap ? "gap" : "dyadic");
        cells_csv += ',';
        cells_csv += std::to_string(c.tags.annulus_index);
        cells_csv += ',';
        cells_csv += format_double(c.area);
        cells_csv += ',';
        cells_csv += format_double(c.comparability);
        cells_csv += ',';
        cells_csv += format_double(c.g_spread);
        cells_csv += ',';
        cells_csv += format_double(c.g_min_abs);
        cells_csv += ',';
        cells_csv += format_double(c.g_max_abs);
        cells_csv += '\n';
    }
    out.files.emplace_back("cells.csv", std::move(cells_csv));

    Json summary;
    summary["command"] = "decompose";
    summary["seed"] = seed;
    summary["config"] = echo_decomp(dp, center, radius);
    summary["curve"] = curve_to_json(o);
    summary["trivial_zero_weight"] = cert.trivial_zero_weight;
    summary["cells"] = cert.cells.size();
    summary["coverage_fraction"] = cert.coverage_fraction;
    summary["sector_eps_used"] = cert.sector_eps_used;
    summary["g_bound_all_pass"] = gb.all_pass;
    bool coverage_ok =
        cert.trivial_zero_weight || cert.coverage_fraction >= 1.0 - dp.coverage_tol;
    summary["passed"] = coverage_ok && gb.all_pass;
    out.violations_found = !(coverage_ok && gb.all_pass);
    out.summary = std::move(summary);
    return out;
}

RunOutcome outcome_from_report(const std::string& command, VerificationReport rep,
                               Json extra = Json::object()) {
    RunOutcome out;
    out.files.emplace_back("report.csv", rep.to_csv());
    Json summary;
    summary["command"] = command;
    summary["seed"] = rep.seed;
    summary["report"] = rep.to_json();
    for (auto it = extra.begin(); it != extra.end(); ++it) summary[it.key()] = it.value();
    summary["passed"] = rep.passed();
    out.violations_found = !rep.passed();
    out.summary = std::move(summary);
    return out;
}

RunOutcome run_jacobian_monomial(const Json& config) {
    Json p = params_of(config);
    MonomialJacobianConfig cfg;
    cfg.d = get_or(p, "d", cfg.d);
    cfg.N = get_or(p, "N", cfg.N);
    cfg.m = get_or(p, "m", cfg.m);
    if (p.contains("lead")) cfg.lead = complex_from_json(p.at("lead"), "lead");
    cfg.sector.eps = get_or(p, "eps", cfg.sector.eps);
    cfg.samples = get_or<std::uint64_t>(p, "samples", cfg.samples);
    cfg.floor = get_or(p, "floor", cfg.floor);
    cfg.shards = get_or(p, "shards", cfg.shards);
    cfg.seed = seed_of(config);
    return outcome_from_report("verify-jacobian-monomial", verify_jacobian_monomial(cfg));
}

RunOutcome run_jacobian_d3(const Json& config) {
    Json p = params_of(config);
    std::uint64_t seed = seed_of(config);
    OffspringCurve o = curve_of(config);
    if (o.base.d != 3) throw ParseError("verify-jacobian-d3 requires a curve with d = 3");
    DecompParams dp = decomp_params(p, seed);
    C center = p.contains("disk_center") ? complex_from_json(p.at("disk_center"), "disk_center")
                                         : C(0.0, 0.0);
    double radius = get_or(p, "disk_radius", 2.0);
    Certificate cert = build_certificate(o.base.phi, 3, center, radius, dp);
    if (cert.trivial_zero_weight) {
        throw std::invalid_argument("phi''' vanishes identically; nothing to verify");
    }
    SimpleD3Config cfg;
    cfg.samples_per_cell = get_or<std::uint64_t>(p, "samples_per_cell", 1000);
    cfg.floor = get_or(p, "floor", cfg.floor);
    cfg.crosscheck_per_cell = get_or<std::uint64_t>(p, "crosscheck_per_cell", 0);
    cfg.seed = seed;
    VerificationReport rep = verify_jacobian_simple_d3(cert, o.base.phi, cfg);
    Json extra;
    extra["cells"] = cert.cells.size();
    extra["coverage_fraction"] = cert.coverage_fraction;
    extra["decomposition"] = echo_decomp(dp, center, radius);
    return outcome_from_report("verify-jacobian-d3", std::move(rep), std::move(extra));
}

RunOutcome run_torsion(const Json& config) {
    Json p = params_of(config);
    std::uint64_t seed = seed_of(config);
    OffspringCurve o = curve_of(config);
    TorsionConfig cfg;
    cfg.sector.eps = get_or(p, "eps", cfg.sector.eps);
    cfg.samples = get_or<std::uint64_t>(p, "samples", cfg.samples);
    cfg.floor = get_or(p, "floor", cfg.floor);
    cfg.shards = get_or(p, "shards", cfg.shards);
    cfg.seed = seed;
    std::string region = get_or<std::string>(p, "region", "sector");
    if (region == "sector") {
        return outcome_from_report("verify-torsion", verify_torsion_bound(o, cfg));
    }
    if (region != "cells") throw ParseError("key 'region' must be 'sector' or 'cells'");

    DecompParams dp = decomp_params(p, seed);
    C center = p.contains("disk_center") ? complex_from_json(p.at("disk_center"), "disk_center")
                                         : C(0.0, 0.0);
    double radius = get_or(p, "disk_radius", 2.0);
    Certificate cert = build_certificate(o.base.phi, o.base.d, center, radius, dp);
    if (cert.trivial_zero_weight) {
        throw std::invalid_argument("phi^(d) vanishes identically; torsion bound is vacuous");
    }
    VerificationReport merged;
    merged.inequality_id = "offspring_torsion_lower_bound_cell";
    merged.seed = seed;
    merged.floor = cfg.floor;
    merged.params = Json{{"samples_per_cell", cfg.samples},
                         {"cells", cert.cells.size()},
                         {"m", o.m()}};
    merged.min_ratio = std::numeric_limits<double>::infinity();
    std::vector<VerificationReport> reports(cert.cells.size());
    parallel_for(cert.cells.size(), [&](std::size_t ci) {
        TorsionConfig local = cfg;
        local.seed = derive_seed(seed, ci);
        reports[ci] = verify_torsion_bound_cell(o, cert.cells[ci], local);
    });
    for (std::size_t ci = 0; ci < reports.size(); ++ci) {
        VerificationReport& r = reports[ci];
        DomainRow row = r.rows.empty() ? DomainRow{} : r.rows[0];
        row.domain_id = "cell_" + std::to_string(ci);
        merged.rows.push_back(row);
        if (row.skipped) continue;
        merged.samples += r.samples;
        merged.violations += r.violations;
        merged.degenerate += r.degenerate;
        merged.min_ratio = std::min(merged.min_ratio, r.min_ratio);
        merged.max_ratio = std::max(merged.max_ratio, r.max_ratio);
    }
    if (merged.samples == 0) {
        merged.min_ratio = 0.0;
        merged.max_ratio = 0.0;
    }
    merged.empirical_constant = merged.min_ratio;
    return outcome_from_report("verify-torsion", std::move(merged));
}

RunOutcome run_sublevel(const Json& config) {
    Json p = params_of(config);
    SublevelConfig cfg;
    cfg.d = get_or(p, "d", cfg.d);
    cfg.samples = get_or<std::uint64_t>(p, "samples", cfg.samples);
    cfg.u_min = get_or(p, "u_min", cfg.u_min);
    cfg.u_max = get_or(p, "u_max", cfg.u_max);
    cfg.grid_points = get_or(p, "grid_points", cfg.grid_points);
    cfg.min_hits = get_or<std::uint64_t>(p, "min_hits", cfg.min_hits);
    cfg.shards = get_or(p, "shards", cfg.shards);
    cfg.seed = seed_of(config);
    SublevelReport rep = verify_sublevel(cfg);

    RunOutcome out;
    out.files.emplace_back("sublevel.csv", rep.to_csv());
    Json summary;
    summary["command"] = "verify-sublevel";
    summary["seed"] = cfg.seed;
    summary["report"] = rep.to_json();
    // Upper-bound law: the fitted slope must not fall below 4/d - 0.05.
    bool ok = rep.slope >= rep.target - 0.05;
    summary["passed"] = ok;
    out.violations_found = !ok;
    out.summary = std::move(summary);
    return out;
}

RunOutcome run_weight_growth(const Json& config) {
    Json p = params_of(config);
    WeightGrowthConfig cfg;
    cfg.d = get_or(p, "d", cfg.d);
    cfg.N = get_or(p, "N", cfg.N);
    if (p.contains("R_grid")) cfg.R_grid = p.at("R_grid").get<std::vector<double>>();
    cfg.quad_nodes = get_or(p, "quad_nodes", cfg.quad_nodes);
    WeightGrowthReport rep = weight_growth_exponent(cfg);

    RunOutcome out;
    out.files.emplace_back("weight_growth.csv", rep.to_csv());
    Json summary;
    summary["command"] = "verify-weight-growth";
    summary["seed"] = seed_of(config);
    summary["report"] = rep.to_json();
    bool ok = std::fabs(rep.slope - rep.analytic_slope) <= get_or(p, "slope_tol", 1e-3);
    summary["passed"] = ok;
    out.violations_found = !ok;
    out.summary = std::move(summary);
    return out;
}

RunOutcome run_weight_optimality(const Json& config) {
    Json p = params_of(config);
    std::uint64_t seed = seed_of(config);
    OffspringCurve o = curve_of(config);
    C a = p.contains("a") ? complex_from_json(p.at("a"), "a") : C(1.0, 0.0);
    ContainmentConfig cfg;
    cfg.eps_start = get_or(p, "eps_start", cfg.eps_start);
    cfg.samples = get_or<std::uint64_t>(p, "samples", cfg.samples);
    cfg.ratio_samples = get_or<std::uint64_t>(p, "ratio_samples", cfg.ratio_samples);
    cfg.seed = seed;
    if (p.contains("ratio_sweep")) {
        cfg.ratio_sweep = p.at("ratio_sweep").get<std::vector<double>>();
    } else {
        cfg.ratio_sweep = {1e-4, 3e-4, 1e-3, 3e-3, 1e-2};
    }
    ContainmentReport rep = verify_containment(o.base, a, cfg);

    RunOutcome out;
    out.files.emplace_back("weight_optimality.csv", rep.to_csv());
    Json summary;
    summary["command"] = "verify-weight-optimality";
    summary["seed"] = seed;
    summary["report"] = rep.to_json();
    double vol_err = rel_err(rep.volume, rep.closed_form);
    summary["volume_rel_err"] = vol_err;
    bool ok = rep.fraction == 1.0 && vol_err <= 1e-10;
    summary["passed"] = ok;
    out.violations_found = !ok;
    out.summary = std::move(summary);
    return out;
}

RunOutcome run_extension_scan(const Json& config) {
    Json p = params_of(config);
    OffspringCurve o = curve_of(config);
    std::string mode = get_or<std::string>(p, "mode", "homogeneity");
    RunOutcome out;
    Json summary;
    summary["command"] = "extension-scan";
    summary["seed"] = seed_of(config);
    summary["mode"] = mode;
    if (mode == "homogeneity") {
        HomogeneityConfig cfg;
        if (p.contains("R_grid")) cfg.R_grid = p.at("R_grid").get<std::vector<double>>();
        cfg.quad.rel_tol = get_or(p, "quad_rel_tol", cfg.quad.rel_tol);
        cfg.quad.max_level = get_or(p, "quad_max_level", cfg.quad.max_level);
        ExtensionScanResult res = homogeneity_scan(o.base, cfg);
        out.files.emplace_back("extension_scan.csv", res.to_csv());
        summary["report"] = res.to_json("homogeneity");
        double tol = get_or(p, "exponent_tol", 1e-3);
        bool ok = std::fabs(res.fitted_exponent - res.analytic_exponent) <= tol;
        summary["passed"] = ok;
        out.violations_found = !ok;
    } else if (mode == "lambda") {
        LambdaScanConfig cfg;
        if (p.contains("lambda_grid")) {
            cfg.lambda_grid = p.at("lambda_grid").get<std::vector<double>>();
        }
        if (p.contains("x")) {
            cfg.x = p.at("x").get<std::vector<double>>();
        } else {
            cfg.x.assign(2 * o.base.d, 0.0);
            for (std::size_t i = 0; i < cfg.x.size(); ++i) {
                cfg.x[i] = 0.35 + 0.05 * static_cast<double>(i % 3);
            }
        }
        cfg.quad.rel_tol = get_or(p, "quad_rel_tol", cfg.quad.rel_tol);
        cfg.quad.max_level = get_or(p, "quad_max_level", 8);
        ExtensionScanResult res = t_lambda_scan(o, cfg);
        out.files.emplace_back("extension_scan.csv", res.to_csv());
        summary["report"] = res.to_json("lambda_decay");
        // Exploratory: no pass target for pointwise lambda decay.
        summary["passed"] = true;
        out.violations_found = false;
    } else {
        throw ParseError("key 'mode' must be 'homogeneity' or 'lambda'");
    }
    out.summary = std::move(summary);
    return out;
}

void selftest_check(Json& checks, bool& all_ok, const std::string& name, bool ok,
                    const std::string& detail) {
    Json c;
    c["name"] = name;
    c["passed"] = ok;
    c["detail"] = detail;
    checks.push_back(std::move(c));
    all_ok = all_ok && ok;
}

RunOutcome run_selftest(const Json& config) {
    std::uint64_t seed = seed_of(config);
    Json checks = Json::array();
    bool all_ok = true;
    Rng rng(derive_seed(seed, 0x5E1Full));

    // Symmetric-polynomial recursion identities on random tuples.
    {
        double worst = 0.0;
        for (int t = 0; t < 200; ++t) {
            int d = 2 + static_cast<int>(rng.uniform() * 5);
            int N = 1 + static_cast<int>(rng.uniform() * 10);
            std::vector<C> z(d + 1);
            for (auto& v : z) v = rng.gaussian_complex();
            if (std::abs(z[d] - z[d - 1]) < 0.05) {
                z[d] += C(0.5, 0.0);
            }
            std::vector<C> a(z.begin(), z.end() - 1);
            std::vector<C> b = a;
            b[d - 1] = z[d];
            C lhs = complete_homogeneous(N, b) - complete_homogeneous(N, a);
            C rhs = (z[d] - z[d - 1]) * complete_homogeneous(N - 1, z);
            worst = std::max(worst, rel_err(lhs, rhs));
        }
        selftest_check(checks, all_ok, "pn_recursion", worst <= 1e-10,
                       "max rel err " + format_double(worst));
    }
    // Closed form vs direct determinant.
    {
        double worst = 0.0;
        for (int t = 0; t < 100; ++t) {
            int d = 2 + static_cast<int>(rng.uniform() * 2);
            int N = d + static_cast<int>(rng.uniform() * (7 - d));
            int m = 1 + static_cast<int>(rng.uniform() * 2);
            std::vector<C> b(m, C(0.0, 0.0));
            for (int j = 1; j < m; ++j) b[j] = 0.5 * rng.gaussian_complex();
            OffspringCurve o(SimpleCurve(d, Poly::monomial(N)), b, 4.0);
            C z = rng.gaussian_complex();
            std::vector<C> h(d - 1);
            for (auto& v : h) v = rng.gaussian_complex();
            worst = std::max(worst, rel_err(jacobian_direct(o, z, h),
                                            jacobian_closed_form(o, z, h)));
        }
        selftest_check(checks, all_ok, "jacobian_closed_form", worst <= 1e-8,
                       "max rel err " + format_double(worst));
    }
    // d=3 integral representation vs direct determinant.
    {
        double worst = 0.0;
        for (int t = 0; t < 100; ++t) {
            int deg = 3 + static_cast<int>(rng.uniform() * 6);
            std::vector<C> coeffs(deg + 1);
            for (auto& c : coeffs) c = rng.gaussian_complex();
            if (std::abs(coeffs.back()) < 0.1) coeffs.back() += C(1.0, 0.0);
            Poly phi = Poly::from_coeffs(coeffs);
            OffspringCurve o(SimpleCurve(3, phi), {C(0.0, 0.0)});
            C u = rng.gaussian_complex(), v = rng.gaussian_complex(), w = rng.gaussian_complex();
            if (std::min({std::abs(u - v), std::abs(u - w), std::abs(v - w)}) < 0.05) continue;
            std::vector<C> h{v - u, w - u};
            worst = std::max(worst,
                             rel_err(jacobian_integral_d3(phi, u, v, w), jacobian_direct(o, u, h)));
        }
        selftest_check(checks, all_ok, "jacobian_integral_d3", worst <= 1e-9,
                       "max rel err " + format_double(worst));
    }
    // Parallelepiped volume closed form.
    {
        double worst = 0.0;
        for (int t = 0; t < 20; ++t) {
            int d = 2 + static_cast<int>(rng.uniform() * 3);
            int deg = d + static_cast<int>(rng.uniform() * 3);
            std::vector<C> coeffs(deg + 1);
            for (auto& c : coeffs) c = rng.gaussian_complex();
            if (std::abs(coeffs.back()) < 0.1) coeffs.back() += C(1.0, 0.0);
            SimpleCurve c(d, Poly::from_coeffs(coeffs));
            C a = rng.gaussian_complex();
            double eps = rng.uniform(0.05, 0.5);
            auto pp = build_parallelepiped(c, a, eps);
            worst = std::max(worst, rel_err(pp.volume, pp.closed_form));
        }
        selftest_check(checks, all_ok, "parallelepiped_volume", worst <= 1e-10,
                       "max rel err " + format_double(worst));
    }
    // Sublevel d=2 exact law.
    {
        SublevelConfig cfg;
        cfg.d = 2;
        cfg.samples = 200000;
        cfg.u_min = 0.05;
        cfg.u_max = 1.0;
        cfg.grid_points = 8;
        cfg.seed = derive_seed(seed, 2);
        SublevelReport rep = verify_sublevel(cfg);
        bool ok = std::fabs(rep.slope - 2.0) < 0.05;
        selftest_check(checks, all_ok, "sublevel_d2", ok, "slope " + format_double(rep.slope));
    }
    // Weight growth exponent (d, N) = (3, 4).
    {
        WeightGrowthConfig cfg;
        WeightGrowthReport rep = weight_growth_exponent(cfg);
        bool ok = std::fabs(rep.slope - rep.analytic_slope) <= 1e-3;
        selftest_check(checks, all_ok, "weight_growth", ok,
                       "slope err " + format_double(std::fabs(rep.slope - rep.analytic_slope)));
    }
    // Small decomposition certificate.
    {
        // phi''' = z(z-1): phi = z^5/60 * 3 ... use antiderivatives: z^5 has
        // phi''' = 60 z^2; build phi with phi''' = z^2 - z instead.
        std::vector<C> coeffs(6, C(0.0, 0.0));
        coeffs[5] = C(1.0 / 60.0, 0.0);   // z^5/60 -> phi''' = z^2
        coeffs[4] = C(-1.0 / 24.0, 0.0);  // -z^4/24 -> phi''' = -z
        Poly phi = Poly::from_coeffs(coeffs);
        DecompParams dp;
        dp.seed = derive_seed(seed, 3);
        dp.coverage_samples = 20000;
        dp.check_samples = 48;
        Certificate cert = build_certificate(phi, 3, C(0.0, 0.0), 2.0, dp);
        bool convex_ok = true;
        bool kmax_ok = true;
        for (const auto& cell : cert.cells) {
            convex_ok = convex_ok && is_convex_ccw(cell.vertices);
            if (cell.tags.kind == AnnulusKind::Gap) {
                kmax_ok = kmax_ok && cell.comparability <= dp.kmax;
            }
        }
        GBoundReport gb = g_lower_bound_check(cert, 0.05, 64);
        bool ok = convex_ok && kmax_ok && gb.all_pass &&
                  cert.coverage_fraction >= 1.0 - dp.coverage_tol;
        selftest_check(checks, all_ok, "decomposition_certificate", ok,
                       "cells " + std::to_string(cert.cells.size()) + ", coverage " +
                           format_double(cert.coverage_fraction));
    }
    // Monomial Jacobian lower bound, small run.
    {
        MonomialJacobianConfig cfg;
        cfg.d = 3;
        cfg.N = 4;
        cfg.m = 1;
        cfg.samples = 2000;
        cfg.shards = 8;
        cfg.seed = derive_seed(seed, 4);
        VerificationReport rep = verify_jacobian_monomial(cfg);
        selftest_check(checks, all_ok, "jacobian_monomial_bound", rep.passed(),
                       "min ratio " + format_double(rep.min_ratio));
    }
    // Torsion lower bound, small run.
    {
        OffspringCurve o(SimpleCurve(3, Poly::monomial(5)), {C(0.0, 0.0), C(0.02, 0.001)});
        TorsionConfig cfg;
        cfg.samples = 2000;
        cfg.shards = 8;
        cfg.seed = derive_seed(seed, 5);
        VerificationReport rep = verify_torsion_bound(o, cfg);
        selftest_check(checks, all_ok, "torsion_bound", rep.passed(),
                       "min ratio " + format_double(rep.min_ratio));
    }
    // Extension operator sanity: conjugate symmetry and the L1 bound.
    {
        SimpleCurve c(3, Poly::monomial(4));
        FunctionSpec f;
        f.kind = FunctionSpec::Kind::IndicatorBall;
        f.radius = 1.0;
        std::vector<double> x{0.3, -0.2, 0.1, 0.05, -0.04, 0.02};
        std::vector<double> xneg(x);
        for (double& v : xneg) v = -v;
        QuadValue a1 = extension_value(c, f, x);
        QuadValue a2 = extension_value(c, f, xneg);
        bool conj_ok = std::abs(a1.value - std::conj(a2.value)) <=
                       1e-10 * (1.0 + std::abs(a1.value));
        OffspringCurve o(c, {C(0.0, 0.0)});
        QuadValue l1 = weighted_l1_norm(o, f);
        QuadValue tv = t_lambda_value(o, f, x, 3.0);
        bool bound_ok = std::abs(tv.value) <= cutoff_bump(x) * std::abs(l1.value) + 1e-9;
        selftest_check(checks, all_ok, "extension_sanity", conj_ok && bound_ok,
                       "conjugate symmetry and L1 bound");
    }

    RunOutcome out;
    Json summary;
    summary["command"] = "selftest";
    summary["seed"] = seed;
    summary["checks"] = std::move(checks);
    summary["passed"] = all_ok;
    out.violations_found = !all_ok;
    out.summary = std::move(summary);
    return out;
}

}  // namespace

RunOutcome run_config(const Json& config) {
    if (!config.is_object()) throw ParseError("config must be a JSON object");
    if (!config.contains("command")) throw ParseError("config needs key 'command'");
    std::string cmd = config.at("command").get<std::string>();
    if (cmd == "decompose") return run_decompose(config);
    if (cmd == "verify-jacobian-monomial") return run_jacobian_monomial(config);
    if (cmd == "verify-jacobian-d3") return run_jacobian_d3(config);
    if (cmd == "verify-torsion") return run_torsion(config);
    if (cmd == "verify-sublevel") return run_sublevel(config);
    if (cmd == "verify-weight-growth") return run_weight_growth(config);
    if (cmd == "verify-weight-optimality") return run_weight_optimality(config);
    if (cmd == "extension-scan") return run_extension_scan(config);
    if (cmd == "selftest") return run_selftest(config);
    throw ParseError("unknown command '" + cmd + "'");
}

}  // namespace cxr
