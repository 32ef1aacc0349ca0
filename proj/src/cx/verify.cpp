#include "cx/verify.hpp"

#include <algorithm>
#include <cmath>

#include "cx/linalg.hpp"
#include "cx/parallel.hpp"
#include "cx/quadrature.hpp"

namespace cxr {

namespace {

struct RatioAccum {
    std::uint64_t samples = 0;
    std::uint64_t violations = 0;
    std::uint64_t degenerate = 0;
    double min_ratio = std::numeric_limits<double>::infinity();
    double max_ratio = 0.0;

    void add(double ratio, double floor) {
        ++samples;
        if (!(ratio > floor)) ++violations;
        min_ratio = std::min(min_ratio, ratio);
        max_ratio = std::max(max_ratio, ratio);
    }
    void merge(const RatioAccum& o) {
        samples += o.samples;
        violations += o.violations;
        degenerate += o.degenerate;
        min_ratio = std::min(min_ratio, o.min_ratio);
        max_ratio = std::max(max_ratio, o.max_ratio);
    }
};

/// det of [[1,1,1],[2u,2v,2w],[p,q,r]] by cofactors; every term is linear
/// in the last row, so a scalar factor on phi scales the value exactly.
C jacobian_d3_plain(C u1, C u2, C u3, C p1, C p2, C p3) {
    C a1 = 2.0 * u1, a2 = 2.0 * u2, a3 = 2.0 * u3;
    return (a2 * p3 - a3 * p2) - (a1 * p3 - a3 * p1) + (a1 * p2 - a2 * p1);
}

/// One sample of the monomial-lemma configuration inside the sector
/// 0 < y < eps x: base point, offspring shifts, offsets.
struct SectorSample {
    C z;
    std::vector<C> b;  // b_1 = 0
    std::vector<C> h;  // h_2..h_d
    double scale = 1.0;
};

bool in_sector(C p, double eps) {
    return p.imag() > 0.0 && p.imag() < eps * p.real();
}

bool draw_sector_sample(Rng& rng, const SectorSpec& sector, int d, int m, bool random_shifts,
                        const std::vector<C>& fixed_shifts, SectorSample& out) {
    double eps = sector.eps;
    for (int attempt = 0; attempt < 10000; ++attempt) {
        double x0 = rng.uniform(sector.x_lo, sector.x_hi);
        double u = rng.uniform(0.2, 0.8);
        C z(x0, eps * x0 * u);
        std::vector<C> b;
        if (random_shifts) {
            b.assign(m, C(0.0, 0.0));
            for (int j = 1; j < m; ++j) {
                b[j] = C(0.12 * x0 * rng.uniform(-1.0, 1.0),
                         0.12 * eps * x0 * rng.uniform(-1.0, 1.0));
            }
        } else {
            b = fixed_shifts;
        }
        std::vector<C> h(d - 1);
        for (int k = 0; k < d - 1; ++k) {
            h[k] = C(0.22 * x0 * rng.uniform(-1.0, 1.0),
                     0.18 * eps * x0 * rng.uniform(-1.0, 1.0));
        }
        bool ok = true;
        for (int j = 0; j < m && ok; ++j) {
            for (int k = 0; k < d && ok; ++k) {
                C hk = (k == 0) ? C(0.0, 0.0) : h[k - 1];
                ok = in_sector(z + b[j] + hk, eps);
            }
        }
        if (!ok) continue;
        out = {z, std::move(b), std::move(h), x0};
        return true;
    }
    return false;
}

double min_pair_distance(const std::vector<C>& h) {
    std::vector<C> pts(h.size() + 1, C(0.0, 0.0));
    for (std::size_t i = 0; i < h.size(); ++i) pts[i + 1] = h[i];
    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            dmin = std::min(dmin, std::abs(pts[i] - pts[j]));
        }
    }
    return dmin;
}

double linear_fit_slope(const std::vector<double>& xs, const std::vector<double>& ys,
                        double* intercept) {
    double n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    double denom = n * sxx - sx * sx;
    double slope = (n * sxy - sx * sy) / denom;
    if (intercept) *intercept = (sy - slope * sx) / n;
    return slope;
}

}  // namespace

VerificationReport verify_jacobian_monomial(const MonomialJacobianConfig& cfg) {
    if (cfg.N < cfg.d) throw std::invalid_argument("monomial lemma requires N >= d");
    VerificationReport rep;
    rep.inequality_id = "jacobian_monomial_lower_bound";
    rep.seed = cfg.seed;
    rep.floor = cfg.floor;
    rep.params = Json{{"d", cfg.d},     {"N", cfg.N},
                      {"m", cfg.m},     {"lead", Json::array({cfg.lead.real(), cfg.lead.imag()})},
                      {"eps", cfg.sector.eps}, {"samples", cfg.samples},
                      {"shards", cfg.shards}};

    SimpleCurve curve(cfg.d, Poly::monomial(cfg.N, cfg.lead));
    Poly pd = curve.phi.derivative(cfg.d);

    int shards = std::max(1, cfg.shards);
    std::vector<RatioAccum> acc(shards);
    std::uint64_t per = (cfg.samples + shards - 1) / shards;

    parallel_for(shards, [&](std::size_t si) {
        Rng rng(derive_seed(cfg.seed, si));
        RatioAccum& a = acc[si];
        std::uint64_t want = std::min<std::uint64_t>(per, cfg.samples - std::min<std::uint64_t>(
                                                              cfg.samples, per * si));
        for (std::uint64_t s = 0; s < want; ++s) {
            SectorSample smp;
            for (;;) {
                if (!draw_sector_sample(rng, cfg.sector, cfg.d, cfg.m, true, {}, smp)) {
                    throw std::runtime_error("sector sampler failed to find admissible points");
                }
                if (min_pair_distance(smp.h) < cfg.degenerate_rel * smp.scale) {
                    ++a.degenerate;
                    continue;
                }
                break;
            }
            OffspringCurve o(curve, smp.b, 2.0);
            C J = jacobian_direct(o, smp.z, smp.h);
            double v = vandermonde_abs(smp.h);
            double mx = 0.0;
            for (int k = 0; k < cfg.d; ++k) {
                C hk = (k == 0) ? C(0.0, 0.0) : smp.h[k - 1];
                double sum = 0.0;
                for (const C& b : smp.b) sum += std::abs(pd.eval(smp.z + b + hk));
                mx = std::max(mx, sum / cfg.m);
            }
            double ratio = std::abs(J) / (v * mx);
            a.add(ratio, cfg.floor);
        }
    });

    RatioAccum total;
    for (const auto& a : acc) total.merge(a);
    rep.samples = total.samples;
    rep.violations = total.violations;
    rep.degenerate = total.degenerate;
    rep.min_ratio = total.min_ratio;
    rep.max_ratio = total.max_ratio;
    rep.empirical_constant = total.min_ratio;
    DomainRow row{"sector_0", total.samples, total.violations, total.degenerate,
                  total.min_ratio, total.max_ratio, false};
    rep.rows.push_back(row);
    return rep;
}

VerificationReport verify_jacobian_simple_d3(const Certificate& cert, const Poly& phi,
                                             const SimpleD3Config& cfg) {
    if (cert.d != 3) throw std::invalid_argument("certificate must have d = 3");
    if (phi.degree() < 3) {
        throw std::invalid_argument("phi''' vanishes identically; nothing to verify");
    }
    VerificationReport rep;
    rep.inequality_id = "jacobian_simple_d3_lower_bound";
    rep.seed = cfg.seed;
    rep.floor = cfg.floor;
    rep.params = Json{{"samples_per_cell", cfg.samples_per_cell},
                      {"cells", cert.cells.size()},
                      {"crosscheck_per_cell", cfg.crosscheck_per_cell}};

    Poly dphi = phi.derivative(1);
    Poly p3 = phi.derivative(3);

    std::vector<DomainRow> rows(cert.cells.size());
    std::vector<std::uint64_t> cross_fail(cert.cells.size(), 0);

    parallel_for(cert.cells.size(), [&](std::size_t ci) {
        const ConvexCell& cell = cert.cells[ci];
        DomainRow row;
        row.domain_id = "cell_" + std::to_string(ci);
        double diam = polygon_diameter(cell.vertices);
        if (cell.vertices.size() < 3 || diam < cfg.min_cell_diameter || cell.area <= 0.0) {
            row.skipped = true;
            rows[ci] = row;
            return;
        }
        PolygonSampler sampler(cell.vertices);
        Rng rng(derive_seed(cfg.seed, ci));
        RatioAccum a;
        for (std::uint64_t s = 0; s < cfg.samples_per_cell; ++s) {
            C u1, u2, u3;
            bool got = false;
            for (int attempt = 0; attempt < 100; ++attempt) {
                u1 = sampler.sample(rng);
                u2 = sampler.sample(rng);
                u3 = sampler.sample(rng);
                double sep = std::min({std::abs(u1 - u2), std::abs(u1 - u3), std::abs(u2 - u3)});
                if (sep < cfg.degenerate_rel * diam) {
                    ++a.degenerate;
                    continue;
                }
                got = true;
                break;
            }
            if (!got) {
                ++a.degenerate;
                continue;
            }
            C p1 = dphi.eval(u1), p2 = dphi.eval(u2), p3v = dphi.eval(u3);
            C J = jacobian_d3_plain(u1, u2, u3, p1, p2, p3v);
            double V = std::abs(u1 - u2) * std::abs(u1 - u3) * std::abs(u2 - u3);
            double M = std::max({std::abs(p3.eval(u1)), std::abs(p3.eval(u2)),
                                 std::abs(p3.eval(u3))});
            if (V * M == 0.0) {
                ++a.degenerate;
                continue;
            }
            double ratio = std::abs(J) / (V * M);
            a.add(ratio, cfg.floor);
            if (s < cfg.crosscheck_per_cell) {
                // only meaningful when the determinant keeps enough digits
                // past the cofactor cancellation
                double term_scale = 2.0 * std::max({std::abs(u1), std::abs(u2), std::abs(u3)}) *
                                    std::max({std::abs(p1), std::abs(p2), std::abs(p3v)});
                if (std::abs(J) >= 1e-8 * term_scale) {
                    C Ji = jacobian_integral_d3(phi, u1, u2, u3);
                    if (rel_err(Ji, J) > cfg.crosscheck_tol) ++cross_fail[ci];
                }
            }
        }
        row.samples = a.samples;
        row.violations = a.violations;
        row.degenerate = a.degenerate;
        row.min_ratio = a.min_ratio;
        row.max_ratio = a.max_ratio;
        rows[ci] = row;
    });

    RatioAccum total;
    std::uint64_t crossfails = 0;
    std::size_t skipped = 0;
    for (std::size_t ci = 0; ci < rows.size(); ++ci) {
        if (rows[ci].skipped) {
            ++skipped;
            continue;
        }
        RatioAccum a;
        a.samples = rows[ci].samples;
        a.violations = rows[ci].violations;
        a.degenerate = rows[ci].degenerate;
        a.min_ratio = rows[ci].min_ratio;
        a.max_ratio = rows[ci].max_ratio;
        total.merge(a);
        crossfails += cross_fail[ci];
    }
    rep.samples = total.samples;
    rep.violations = total.violations;
    rep.degenerate = total.degenerate;
    rep.min_ratio = total.min_ratio;
    rep.max_ratio = total.max_ratio;
    rep.empirical_constant = total.min_ratio;
    rep.rows = std::move(rows);
    rep.params["skipped_cells"] = skipped;
    rep.params["integral_crosscheck_failures"] = crossfails;
    return rep;
}

namespace {

double torsion_ratio(const OffspringCurve& o, const Poly& pd, double scale_const, C z,
                     const std::vector<C>& h, bool* degenerate) {
    int d = o.base.d;
    C sum(0.0, 0.0);
    double denom = 0.0;
    for (int i = 0; i < d; ++i) {
        C hi = (i == 0) ? C(0.0, 0.0) : h[i - 1];
        double part = 0.0;
        for (const C& b : o.shifts) {
            C val = pd.eval(z + b + hi);
            sum += val;
            part += std::abs(val);
        }
        denom += part / o.m();
    }
    if (denom == 0.0) {
        *degenerate = true;
        return 0.0;
    }
    *degenerate = false;
    double tau = scale_const * std::abs(sum) / o.m();
    return tau / denom;
}

}  // namespace

VerificationReport verify_torsion_bound(const OffspringCurve& o, const TorsionConfig& cfg) {
    int d = o.base.d;
    VerificationReport rep;
    rep.inequality_id = "offspring_torsion_lower_bound";
    rep.seed = cfg.seed;
    rep.floor = cfg.floor;
    Json shifts = Json::array();
    for (const C& b : o.shifts) shifts.push_back(Json::array({b.real(), b.imag()}));
    rep.params = Json{{"d", d},
                      {"m", o.m()},
                      {"deg_phi", o.base.phi.degree()},
                      {"shifts", shifts},
                      {"eps", cfg.sector.eps},
                      {"samples", cfg.samples}};
    if (o.base.phi.degree() < d) {
        throw std::invalid_argument("phi^(d) vanishes identically; torsion bound is vacuous");
    }
    Poly pd = o.base.phi.derivative(d);
    double scale_const = std::pow(static_cast<double>(d), d - 1) * torsion_constant(d);

    int shards = std::max(1, cfg.shards);
    std::vector<RatioAccum> acc(shards);
    std::uint64_t per = (cfg.samples + shards - 1) / shards;
    parallel_for(shards, [&](std::size_t si) {
        Rng rng(derive_seed(cfg.seed, si));
        RatioAccum& a = acc[si];
        std::uint64_t want = std::min<std::uint64_t>(per, cfg.samples - std::min<std::uint64_t>(
                                                              cfg.samples, per * si));
        for (std::uint64_t s = 0; s < want; ++s) {
            SectorSample smp;
            if (!draw_sector_sample(rng, cfg.sector, d, o.m(), false, o.shifts, smp)) {
                throw std::runtime_error(
                    "sector sampler failed; shifts may be incompatible with the sector");
            }
            bool degen = false;
            double ratio = torsion_ratio(o, pd, scale_const, smp.z, smp.h, &degen);
            if (degen) {
                ++a.degenerate;
                continue;
            }
            a.add(ratio, cfg.floor);
        }
    });
    RatioAccum total;
    for (const auto& a : acc) total.merge(a);
    rep.samples = total.samples;
    rep.violations = total.violations;
    rep.degenerate = total.degenerate;
    rep.min_ratio = total.min_ratio;
    rep.max_ratio = total.max_ratio;
    rep.empirical_constant = total.min_ratio;
    rep.rows.push_back(DomainRow{"sector_0", total.samples, total.violations, total.degenerate,
                                 total.min_ratio, total.max_ratio, false});
    return rep;
}

VerificationReport verify_torsion_bound_cell(const OffspringCurve& o, const ConvexCell& cell,
                                             const TorsionConfig& cfg) {
    int d = o.base.d;
    VerificationReport rep;
    rep.inequality_id = "offspring_torsion_lower_bound_cell";
    rep.seed = cfg.seed;
    rep.floor = cfg.floor;
    rep.params = Json{{"d", d}, {"m", o.m()}, {"samples", cfg.samples}};
    if (o.base.phi.degree() < d) {
        throw std::invalid_argument("phi^(d) vanishes identically; torsion bound is vacuous");
    }
    Poly pd = o.base.phi.derivative(d);
    double scale_const = std::pow(static_cast<double>(d), d - 1) * torsion_constant(d);

    // Feasible region: u with u + b_j inside the cell for every shift.
    Polygon feasible = cell.vertices;
    for (const C& b : o.shifts) {
        if (b == C(0.0, 0.0)) continue;
        Polygon shifted;
        shifted.reserve(cell.vertices.size());
        for (const C& v : cell.vertices) shifted.push_back(v - b);
        for (std::size_t e = 0; e < shifted.size() && !feasible.empty(); ++e) {
            C a = shifted[e];
            C bb = shifted[(e + 1) % shifted.size()];
            C dir = bb - a;
            feasible = clip_half_plane(feasible, a, C(-dir.imag(), dir.real()));
        }
    }
    feasible = tidy_polygon(std::move(feasible), 0.0);
    if (feasible.size() < 3) {
        rep.rows.push_back(DomainRow{"cell", 0, 0, 0, 0.0, 0.0, true});
        rep.min_ratio = rep.max_ratio = 0.0;
        return rep;
    }

    PolygonSampler sampler(feasible);
    Rng rng(cfg.seed);
    RatioAccum a;
    std::vector<C> h(d - 1);
    for (std::uint64_t s = 0; s < cfg.samples; ++s) {
        C z = sampler.sample(rng);
        for (int i = 0; i < d - 1; ++i) h[i] = sampler.sample(rng) - z;
        bool degen = false;
        double ratio = torsion_ratio(o, pd, scale_const, z, h, &degen);
        if (degen) {
            ++a.degenerate;
            continue;
        }
        a.add(ratio, cfg.floor);
    }
    rep.samples = a.samples;
    rep.violations = a.violations;
    rep.degenerate = a.degenerate;
    rep.min_ratio = a.min_ratio;
    rep.max_ratio = a.max_ratio;
    rep.empirical_constant = a.min_ratio;
    rep.rows.push_back(
        DomainRow{"cell", a.samples, a.violations, a.degenerate, a.min_ratio, a.max_ratio, false});
    return rep;
}

SublevelReport verify_sublevel(const SublevelConfig& cfg) {
    if (cfg.d < 2) throw std::invalid_argument("sublevel estimate requires d >= 2");
    SublevelReport rep;
    rep.cfg = cfg;
    rep.target = 4.0 / cfg.d;
    double disk_area = kPi * 4.0;  // radius 2
    rep.domain_volume = std::pow(disk_area, cfg.d - 1);

    int G = cfg.grid_points;
    std::vector<double> us(G);
    double ll = std::log(cfg.u_min), lh = std::log(cfg.u_max);
    for (int k = 0; k < G; ++k) us[k] = std::exp(ll + (lh - ll) * k / (G - 1));

    int shards = std::max(1, cfg.shards);
    std::vector<std::vector<std::uint64_t>> hist(shards, std::vector<std::uint64_t>(G + 1, 0));
    std::uint64_t per = (cfg.samples + shards - 1) / shards;
    parallel_for(shards, [&](std::size_t si) {
        Rng rng(derive_seed(cfg.seed, si));
        auto& h = hist[si];
        std::uint64_t want = std::min<std::uint64_t>(per, cfg.samples - std::min<std::uint64_t>(
                                                              cfg.samples, per * si));
        std::vector<C> pts(cfg.d, C(0.0, 0.0));
        for (std::uint64_t s = 0; s < want; ++s) {
            for (int i = 1; i < cfg.d; ++i) pts[i] = rng.uniform_disk(2.0);
            double v = 1.0;
            for (int i = 0; i < cfg.d; ++i) {
                for (int j = i + 1; j < cfg.d; ++j) v *= std::abs(pts[j] - pts[i]);
            }
            auto it = std::lower_bound(us.begin(), us.end(), v);
            h[static_cast<std::size_t>(it - us.begin())] += 1;
        }
    });

    std::vector<std::uint64_t> counts(G + 1, 0);
    std::uint64_t total = 0;
    for (const auto& h : hist) {
        for (int k = 0; k <= G; ++k) counts[k] += h[k];
    }
    for (int k = 0; k <= G; ++k) total += counts[k];

    std::vector<double> xs, ys;
    std::uint64_t cum = 0;
    std::uint64_t hit_floor = std::max<std::uint64_t>(1, cfg.min_hits);
    for (int k = 0; k < G; ++k) {
        cum += counts[k];
        SublevelRow row;
        row.u = us[k];
        row.hits = cum;
        row.measure = rep.domain_volume * static_cast<double>(cum) / static_cast<double>(total);
        row.used = cum >= hit_floor;
        if (row.used) {
            xs.push_back(std::log(row.u));
            ys.push_back(std::log(row.measure));
        }
        rep.rows.push_back(row);
    }
    if (xs.size() >= 2) {
        rep.slope = linear_fit_slope(xs, ys, &rep.intercept);
    }
    return rep;
}

Json SublevelReport::to_json() const {
    Json j;
    j["inequality_id"] = "vandermonde_sublevel_measure";
    j["d"] = cfg.d;
    j["samples"] = cfg.samples;
    j["seed"] = cfg.seed;
    j["u_min"] = cfg.u_min;
    j["u_max"] = cfg.u_max;
    j["grid_points"] = cfg.grid_points;
    j["min_hits"] = cfg.min_hits;
    j["domain_volume"] = domain_volume;
    j["slope"] = slope;
    j["intercept"] = intercept;
    j["target"] = target;
    int dropped = 0;
    for (const auto& r : rows) {
        if (!r.used) ++dropped;
    }
    j["dropped_points"] = dropped;
    return j;
}

std::string SublevelReport::to_csv() const {
    std::string out = "u,hits,measure,used\n";
    for (const auto& r : rows) {
        out += format_double(r.u);
        out += ',';
        out += std::to_string(r.hits);
        out += ',';
        out += format_double(r.measure);
        out += ',';
        out += r.used ? "1" : "0";
        out += '\n';
    }
    return out;
}

WeightGrowthReport weight_growth_exponent(const WeightGrowthConfig& cfg) {
    if (cfg.N < cfg.d) throw std::invalid_argument("weight growth requires N >= d");
    WeightGrowthReport rep;
    rep.cfg = cfg;
    int d = cfg.d, N = cfg.N;
    double beta = 4.0 * (N - d) / (static_cast<double>(d) * d + d);
    rep.analytic_slope = beta + 2.0;

    SimpleCurve curve(d, Poly::monomial(N));
    double fall = 1.0;
    for (int k = N; k > N - d; --k) fall *= k;
    double K = std::pow(torsion_constant(d) * fall, weight_exponent(d));

    const auto& rule = gauss_legendre(cfg.quad_nodes);
    std::vector<double> xs, ys;
    for (double R : cfg.R_grid) {
        double acc = 0.0;
        for (int i = 0; i < cfg.quad_nodes; ++i) {
            double r = gl_map(rule.nodes[i], 0.0, R);
            double w = torsion(curve, C(r, 0.0)).weight;
            acc += rule.weights[i] * r * w;
        }
        double integral = 2.0 * kPi * acc * 0.5 * R;
        double closed = 2.0 * kPi / (beta + 2.0) * K * std::pow(R, beta + 2.0);
        rep.rows.push_back({R, integral, closed});
        xs.push_back(std::log(R));
        ys.push_back(std::log(integral));
    }
    rep.slope = linear_fit_slope(xs, ys, nullptr);
    return rep;
}

Json WeightGrowthReport::to_json() const {
    Json j;
    j["inequality_id"] = "weight_growth_exponent";
    j["d"] = cfg.d;
    j["N"] = cfg.N;
    j["quad_nodes"] = cfg.quad_nodes;
    j["slope"] = slope;
    j["analytic_slope"] = analytic_slope;
    j["slope_error"] = std::fabs(slope - analytic_slope);
    return j;
}

std::string WeightGrowthReport::to_csv() const {
    std::string out = "R,integral,closed_form\n";
    for (const auto& r : rows) {
        out += format_double(r.R);
        out += ',';
        out += format_double(r.integral);
        out += ',';
        out += format_double(r.closed_form);
        out += '\n';
    }
    return out;
}

namespace {

/// Complex columns gamma^(j)(a), j = 1..d, scaled by s_j.
std::vector<C> derivative_columns(const SimpleCurve& c, C a, const std::vector<double>& sj) {
    int d = c.d;
    std::vector<C> cols(static_cast<std::size_t>(d) * d, C(0.0, 0.0));
    for (int j = 1; j <= d; ++j) {
        // component k = z^k for k < d, phi for k = d
        for (int k = 1; k <= d - 1; ++k) {
            if (j > k) continue;
            double coef = 1.0;
            for (int t = 0; t < j; ++t) coef *= (k - t);
            C p(1.0, 0.0);
            for (int t = 0; t < k - j; ++t) p *= a;
            cols[static_cast<std::size_t>(k - 1) * d + (j - 1)] = sj[j - 1] * (coef * p);
        }
        C phij = c.phi.derivative(j).eval(a);
        cols[static_cast<std::size_t>(d - 1) * d + (j - 1)] = sj[j - 1] * phij;
    }
    return cols;
}

}  // namespace

Parallelepiped build_parallelepiped(const SimpleCurve& c, C a, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    int d = c.d;
    std::vector<double> sj(d);
    double fact = 1.0;
    for (int j = 1; j <= d; ++j) {
        fact *= j;
        sj[j - 1] = 2.0 * std::pow(eps, j) / fact;
    }
    auto cols = derivative_columns(c, a, sj);

    Parallelepiped p;
    p.anchor = real_embed(c, a);
    int n = 2 * d;
    p.generator_matrix.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int j = 0; j < d; ++j) {
        for (int k = 0; k < d; ++k) {
            C v = cols[static_cast<std::size_t>(k) * d + j];
            // column 2j: multiplication by a real unit; column 2j+1: by i
            p.generator_matrix[static_cast<std::size_t>(2 * k) * n + 2 * j] = v.real();
            p.generator_matrix[static_cast<std::size_t>(2 * k + 1) * n + 2 * j] = v.imag();
            p.generator_matrix[static_cast<std::size_t>(2 * k) * n + 2 * j + 1] = -v.imag();
            p.generator_matrix[static_cast<std::size_t>(2 * k + 1) * n + 2 * j + 1] = v.real();
        }
    }
    p.volume = std::fabs(det_real(p.generator_matrix, n));

    double prod_fact = 1.0;
    double f = 1.0;
    for (int k = 2; k <= d; ++k) {
        f *= k;
        prod_fact *= f;
    }
    double tau = std::abs(torsion(c, a).torsion);
    p.closed_form = std::pow(2.0, 2 * d) / (prod_fact * prod_fact) *
                    std::pow(eps, static_cast<double>(d) * d + d) * tau * tau;
    return p;
}

ContainmentReport verify_containment(const SimpleCurve& c, C a, const ContainmentConfig& cfg) {
    int d = c.d;
    if (std::abs(torsion(c, a).torsion) == 0.0) {
        throw std::invalid_argument("torsion vanishes at the anchor point");
    }
    // Taylor basis gamma^(j)(a)/j!.
    std::vector<double> sj(d);
    double fact = 1.0;
    for (int j = 1; j <= d; ++j) {
        fact *= j;
        sj[j - 1] = 1.0 / fact;
    }
    auto cols = derivative_columns(c, a, sj);
    ComplexLU lu;
    if (!lu.factor(cols, d)) {
        throw std::invalid_argument("derivative frame is singular at the anchor point");
    }
    auto gamma_a = gamma_eval(c, a);

    auto contained = [&](C z, double eps) {
        auto g = gamma_eval(c, a + z);
        std::vector<C> rhs(d);
        for (int k = 0; k < d; ++k) rhs[k] = g[k] - gamma_a[k];
        lu.solve(rhs);
        for (int j = 0; j < d; ++j) {
            double lim = 2.0 * std::pow(eps, j + 1);
            if (std::fabs(rhs[j].real()) > lim || std::fabs(rhs[j].imag()) > lim) return false;
        }
        return true;
    };

    ContainmentReport rep;
    rep.seed = cfg.seed;
    double eps = cfg.eps_start;
    bool found = false;
    double best_fraction = 0.0;
    for (int k = 0; k <= cfg.max_halvings; ++k, eps *= 0.5) {
        Rng screen(derive_seed(cfg.seed, 1000 + k));
        bool screen_ok = true;
        for (int s = 0; s < 256 && screen_ok; ++s) {
            screen_ok = contained(screen.uniform_disk(eps), eps);
        }
        if (!screen_ok) continue;
        Rng rng(derive_seed(cfg.seed, 2000 + k));
        std::uint64_t inside = 0;
        for (std::uint64_t s = 0; s < cfg.samples; ++s) {
            if (contained(rng.uniform_disk(eps), eps)) ++inside;
        }
        double fraction = static_cast<double>(inside) / cfg.samples;
        best_fraction = std::max(best_fraction, fraction);
        if (inside == cfg.samples) {
            rep.eps_found = eps;
            rep.fraction = fraction;
            rep.samples = cfg.samples;
            found = true;
            break;
        }
    }
    if (!found) {
        throw NoConvergence("no eps in the search range reached full containment", {},
                            1.0 - best_fraction);
    }
    auto pp = build_parallelepiped(c, a, rep.eps_found);
    rep.volume = pp.volume;
    rep.closed_form = pp.closed_form;

    double q = 2.0 / (static_cast<double>(d) * d + d);
    Rng rng(derive_seed(cfg.seed, 0xA11CEull));
    for (double se : cfg.ratio_sweep) {
        double window = cfg.window_factor * se;
        double area = kPi * window * window;
        double acc = 0.0;
        for (std::uint64_t s = 0; s < cfg.ratio_samples; ++s) {
            C z = rng.uniform_disk(window);
            if (contained(z, se)) acc += torsion(c, a + z).weight;
        }
        double integral = area * acc / cfg.ratio_samples;
        auto ppe = build_parallelepiped(c, a, se);
        ContainmentRow row;
        row.eps = se;
        row.integral = integral;
        row.volume = ppe.volume;
        row.ratio = integral / std::pow(ppe.volume, q);
        rep.sweep.push_back(row);
    }
    return rep;
}

Json ContainmentReport::to_json() const {
    Json j;
    j["inequality_id"] = "parallelepiped_containment";
    j["eps_found"] = eps_found;
    j["fraction"] = fraction;
    j["samples"] = samples;
    j["volume"] = volume;
    j["closed_form"] = closed_form;
    j["seed"] = seed;
    return j;
}

std::string ContainmentReport::to_csv() const {
    std::string out = "eps,integral,volume,ratio\n";
    for (const auto& r : sweep) {
        out += format_double(r.eps);
        out += ',';
        out += format_double(r.integral);
        out += ',';
        out += format_double(r.volume);
        out += ',';
        out += format_double(r.ratio);
        out += '\n';
    }
    return out;
}

}  // namespace cxr
