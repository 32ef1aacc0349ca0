#include "cx/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace cxr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Level {
    double rho = 0.0;
    int cum_count = 0;  // roots with modulus <= rho
};

std::vector<Level> distinct_levels(const RootOrdering& roots) {
    std::vector<Level> levels;
    for (double m : roots.moduli) {
        if (!levels.empty() && m <= levels.back().rho + 1e-9 * (1.0 + levels.back().rho)) {
            levels.back().cum_count += 1;
            levels.back().rho = std::max(levels.back().rho, m);
        } else {
            int prev = levels.empty() ? 0 : levels.back().cum_count;
            levels.push_back({m, prev + 1});
        }
    }
    return levels;
}

}  // namespace

std::vector<RadialInterval> gap_dyadic_annuli(const RootOrdering& roots, double A, double A1,
                                              double reach) {
    if (roots.roots.empty()) throw std::invalid_argument("gap_dyadic_annuli requires roots");
    if (!(A > 1.0) || !(A1 > A)) throw std::invalid_argument("need A > 1 and A1 > A");
    auto levels = distinct_levels(roots);
    std::vector<RadialInterval> out;

    auto push = [&](RadialInterval iv) {
        iv.lo = std::clamp(iv.lo, 0.0, reach);
        iv.hi = std::clamp(iv.hi, 0.0, reach);
        if (!(iv.hi > iv.lo)) {
            iv.empty = true;
            iv.hi = iv.lo;
        }
        out.push_back(iv);
    };

    double cur = 0.0;
    if (levels.front().rho > 0.0) {
        // Innermost gap below the smallest root modulus.
        RadialInterval iv;
        iv.kind = AnnulusKind::Gap;
        iv.index_j = 0;
        iv.raw_lo = 0.0;
        iv.raw_hi = levels.front().rho / A;
        iv.lo = 0.0;
        iv.hi = levels.front().rho / A1;
        push(iv);
        cur = levels.front().rho / A1;
    }
    for (std::size_t t = 0; t < levels.size(); ++t) {
        double rho = levels[t].rho;
        int j = levels[t].cum_count;
        bool last = (t + 1 == levels.size());
        double rho_next = last ? kInf : levels[t + 1].rho;

        if (rho > 0.0) {
            RadialInterval dy;
            dy.kind = AnnulusKind::Dyadic;
            dy.index_j = j;
            dy.raw_lo = rho / A1;
            dy.raw_hi = A1 * rho;
            double hi_eff = A1 * rho;
            if (!last && A1 * rho > rho_next / A1) hi_eff = std::sqrt(rho * rho_next);
            dy.lo = cur;
            dy.hi = hi_eff;
            push(dy);
            cur = hi_eff;
        }

        RadialInterval gap;
        gap.kind = AnnulusKind::Gap;
        gap.index_j = j;
        gap.raw_lo = A * rho;
        gap.raw_hi = last ? kInf : rho_next / A;
        gap.lo = cur;
        gap.hi = last ? reach : rho_next / A1;
        push(gap);
        cur = std::max(cur, gap.hi);
    }
    return out;
}

CoefficientComparability coefficient_comparability(const Poly& p, int j) {
    if (!p.has_roots()) {
        throw std::logic_error("coefficient_comparability requires the factored form");
    }
    int N = static_cast<int>(p.roots().size());
    if (j < 1 || j > N) throw std::out_of_range("coefficient index out of range");
    auto ord = order_roots(p.roots());
    CoefficientComparability out;
    out.nu_j = (j < static_cast<int>(p.coeffs().size())) ? p.coeffs()[j] : C(0.0, 0.0);
    double prod = std::abs(p.root_leading());
    for (int l = j; l < N; ++l) prod *= ord.moduli[l];
    out.predicted = prod;
    return out;
}

C g_value(const RootContext& ctx, int j, C w) {
    C acc(1.0, 0.0);
    int N = static_cast<int>(ctx.shifted_roots.size());
    for (int i = 0; i < j && i < N; ++i) {
        const C& zi = ctx.shifted_roots[i];
        if (zi == C(0.0, 0.0)) continue;
        acc *= (C(1.0, 0.0) - zi / w);
    }
    for (int l = j; l < N; ++l) {
        const C& zl = ctx.shifted_roots[l];
        if (zl == C(0.0, 0.0)) {
            throw std::logic_error("g_value: zero root above the split index");
        }
        acc *= (C(1.0, 0.0) - w / zl);
    }
    return acc;
}

namespace {

struct WorkCell {
    Polygon poly;
    CellTags tags;
    double r_lo = 0.0, r_hi = 0.0;
    double th_a = 0.0, th_b = 0.0;
    int depth = 0;
    std::uint64_t path = 0;
};

struct CellStats {
    double K = 1.0;
    double spread = 0.0;
    double mean_dir = 0.0;
    double min_abs = 0.0;
    double max_abs = 0.0;
    bool ok = true;
};

CellStats measure_cell(const RootContext& ctx, const WorkCell& wc, const DecompParams& params,
                       std::uint64_t seed) {
    CellStats st;
    PolygonSampler sampler(wc.poly);
    Rng rng(seed);
    int n = params.check_samples;
    int j = wc.tags.annulus_index;
    double numax = 0.0;
    if (j < static_cast<int>(ctx.shifted_coeffs.size())) {
        numax = std::abs(ctx.shifted_coeffs[j]);
    }

    std::vector<C> gs(n);
    double kworst = 1.0;
    C dir_sum(0.0, 0.0);
    double gmin = kInf, gmax = 0.0;
    for (int s = 0; s < n; ++s) {
        C z = sampler.sample(rng);
        C w = z - ctx.root;
        // comparability against |nu_j| |w|^j
        C pval(0.0, 0.0);
        for (auto it = ctx.shifted_coeffs.rbegin(); it != ctx.shifted_coeffs.rend(); ++it) {
            pval = pval * w + *it;
        }
        double base = std::max(numax, 1e-300) * std::pow(std::abs(w), j);
        double ratio = std::abs(pval) / std::max(base, 1e-300);
        kworst = std::max(kworst, std::max(ratio, 1.0 / std::max(ratio, 1e-300)));

        C g = g_value(ctx, j, w);
        gs[s] = g;
        double ga = std::abs(g);
        gmin = std::min(gmin, ga);
        gmax = std::max(gmax, ga);
        if (ga > 0.0) dir_sum += g / ga;
    }
    st.K = kworst;
    st.min_abs = gmin;
    st.max_abs = gmax;
    if (dir_sum == C(0.0, 0.0)) {
        st.spread = kPi;
        st.mean_dir = 0.0;
    } else {
        st.mean_dir = std::arg(dir_sum);
        double spread = 0.0;
        for (const C& g : gs) {
            if (g == C(0.0, 0.0)) {
                spread = kPi;
                break;
            }
            spread = std::max(spread, std::fabs(wrap_angle(std::arg(g) - st.mean_dir)));
        }
        st.spread = spread;
    }
    bool k_ok = (wc.tags.kind != AnnulusKind::Gap) || (st.K <= params.kmax);
    bool spread_ok = st.spread <= 1.0 / (2.0 * params.b0);
    st.ok = k_ok && spread_ok;
    return st;
}

Certificate build_once(const Poly& phi, int d, C center, double radius,
                       const DecompParams& params, double sector_eps) {
    Certificate cert;
    cert.d = d;
    cert.disk_center = center;
    cert.disk_radius = radius;
    cert.params = params;
    cert.sector_eps_used = sector_eps;

    if (phi.degree() < d) {
        cert.trivial_zero_weight = true;
        return cert;
    }

    Poly P = phi.derivative(d);
    int NP = P.degree();
    cert.degree_P = NP;
    double A = params.c0_factor * params.b0 * std::max(NP, 1);
    double A1 = (1.0 + params.delta0) * A;
    cert.A = A;
    cert.A1 = A1;

    double width = std::atan(sector_eps);
    int sectors = static_cast<int>(std::ceil(2.0 * kPi / width));
    width = 2.0 * kPi / sectors;
    cert.sector_width = width;
    cert.sectors = sectors;

    // Distinct roots of P with multiplicity.
    std::vector<ClusteredRoot> distinct;
    std::vector<C> all_roots;
    if (NP >= 1) {
        auto rr = find_roots(P, RootFindOptions{.cluster_rel = params.cluster_rel});
        all_roots = rr.roots;
        distinct = cluster_roots(rr.roots, params.cluster_rel);
    } else {
        distinct.push_back({center, 1});
    }

    for (const auto& cr : distinct) {
        RootContext ctx;
        ctx.root = cr.value;
        ctx.multiplicity = cr.multiplicity;
        ctx.reach = std::abs(cr.value - center) + radius * 1.0000001;
        if (NP >= 1) {
            std::vector<C> shifted;
            shifted.reserve(all_roots.size());
            for (const C& z : all_roots) shifted.push_back(z - cr.value);
            auto ord = order_roots(shifted);
            ctx.shifted_roots = ord.roots;
            ctx.moduli = ord.moduli;
            ctx.shifted_coeffs = P.shift(cr.value).coeffs();
            ctx.intervals = gap_dyadic_annuli(ord, A, A1, ctx.reach);
        } else {
            ctx.shifted_coeffs = P.coeffs();
            RadialInterval iv;
            iv.kind = AnnulusKind::Gap;
            iv.index_j = 0;
            iv.raw_lo = 0.0;
            iv.raw_hi = kInf;
            iv.lo = 0.0;
            iv.hi = ctx.reach;
            ctx.intervals.push_back(iv);
        }
        cert.roots.push_back(std::move(ctx));
    }

    Polygon disk_poly = inscribed_disk_polygon(center, radius, params.disk_polygon_sides);
    double disk_inner = radius * std::cos(kPi / params.disk_polygon_sides);
    double min_area = 1e-14 * radius * radius;

    // Sagitta-limited angular pitch for the chord approximation.
    double dtheta_max = 2.0 * std::acos(1.0 - 1e-3);

    std::deque<WorkCell> queue;
    std::uint64_t base_counter = 0;
    for (std::size_t r = 0; r < cert.roots.size(); ++r) {
        const RootContext& ctx = cert.roots[r];
        for (std::size_t iv_idx = 0; iv_idx < ctx.intervals.size(); ++iv_idx) {
            const RadialInterval& iv = ctx.intervals[iv_idx];
            if (iv.empty) continue;
            int nsub = std::max(1, static_cast<int>(std::ceil(width / dtheta_max)));
            for (int s = 0; s < sectors; ++s) {
                for (int p = 0; p < nsub; ++p) {
                    double th_a = s * width + p * (width / nsub);
                    double th_b = th_a + width / nsub;
                    // Rim cells circumscribe the disk so the polygon clip,
                    // not the chord, is the actual boundary.
                    double hi_r = iv.hi;
                    if (hi_r >= ctx.reach * 0.999999) {
                        hi_r = ctx.reach / std::cos(0.5 * (th_b - th_a)) + 1e-9;
                    }
                    Polygon poly;
                    C va = ctx.root + hi_r * C(std::cos(th_a), std::sin(th_a));
                    C vb = ctx.root + hi_r * C(std::cos(th_b), std::sin(th_b));
                    if (iv.lo <= 0.0) {
                        poly = {ctx.root, va, vb};
                    } else {
                        C ua = ctx.root + iv.lo * C(std::cos(th_a), std::sin(th_a));
                        C ub = ctx.root + iv.lo * C(std::cos(th_b), std::sin(th_b));
                        poly = {ua, va, vb, ub};
                    }
                    // Voronoi half-planes against the other distinct roots.
                    for (std::size_t q = 0; q < cert.roots.size() && !poly.empty(); ++q) {
                        if (q == r) continue;
                        C other = cert.roots[q].root;
                        C mid = 0.5 * (ctx.root + other);
                        poly = clip_half_plane(poly, mid, ctx.root - other);
                    }
                    if (poly.empty()) continue;
                    // Disk clip; skipped when already inside the inscribed circle.
                    double maxr = 0.0;
                    for (const C& v : poly) maxr = std::max(maxr, std::abs(v - center));
                    if (maxr > disk_inner) {
                        for (std::size_t e = 0; e < disk_poly.size() && !poly.empty(); ++e) {
                            C a = disk_poly[e];
                            C b = disk_poly[(e + 1) % disk_poly.size()];
                            C dirv = b - a;
                            poly = clip_half_plane(poly, a, C(-dirv.imag(), dirv.real()));
                        }
                    }
                    poly = tidy_polygon(std::move(poly), min_area);
                    if (poly.empty()) continue;
                    WorkCell wc;
                    wc.poly = std::move(poly);
                    wc.tags = {static_cast<int>(r), s, iv.kind, iv.index_j};
                    wc.r_lo = iv.lo;
                    wc.r_hi = iv.hi;
                    wc.th_a = th_a;
                    wc.th_b = th_b;
                    wc.depth = 0;
                    wc.path = ++base_counter;
                    queue.push_back(std::move(wc));
                }
            }
        }
    }

    struct Offender {
        CellTags tags;
        double K;
        double spread;
    };
    std::vector<Offender> offenders;

    while (!queue.empty()) {
        WorkCell wc = std::move(queue.front());
        queue.pop_front();
        if (cert.cells.size() + queue.size() > params.max_cells) {
            throw BudgetExceeded("decomposition refinement exceeded the cell budget");
        }
        const RootContext& ctx = cert.roots[wc.tags.root_index];
        // (path, depth) identifies a cell uniquely across all split trees
        std::uint64_t tag = wc.path * 64 + static_cast<std::uint64_t>(wc.depth);
        std::uint64_t seed = derive_seed(params.seed, tag);
        CellStats st = measure_cell(ctx, wc, params, seed);
        if (st.ok || wc.depth >= params.max_depth) {
            if (!st.ok) {
                offenders.push_back({wc.tags, st.K, st.spread});
            }
            ConvexCell cell;
            cell.vertices = std::move(wc.poly);
            cell.tags = wc.tags;
            cell.area = polygon_area(cell.vertices);
            cell.comparability = st.K;
            cell.g_spread = st.spread;
            cell.g_mean_dir = st.mean_dir;
            cell.g_min_abs = st.min_abs;
            cell.g_max_abs = st.max_abs;
            cert.cells.push_back(std::move(cell));
            continue;
        }
        // Split along the longer direction; both children are exact
        // complementary halves, so the partition stays exact.
        double radial_extent = wc.r_hi - wc.r_lo;
        double angular_extent = 0.5 * (wc.r_lo + wc.r_hi) * (wc.th_b - wc.th_a);
        Polygon left, right;
        WorkCell c1 = wc, c2 = wc;
        if (radial_extent > angular_extent) {
            double rm = (wc.r_lo > 0.0) ? std::sqrt(wc.r_lo * wc.r_hi) : 0.5 * wc.r_hi;
            C pa = ctx.root + rm * C(std::cos(wc.th_a), std::sin(wc.th_a));
            C pb = ctx.root + rm * C(std::cos(wc.th_b), std::sin(wc.th_b));
            std::tie(left, right) = split_by_line(wc.poly, pa, pb);
            c1.r_hi = rm;
            c2.r_lo = rm;
        } else {
            double tm = 0.5 * (wc.th_a + wc.th_b);
            C dirv(std::cos(tm), std::sin(tm));
            std::tie(left, right) = split_by_line(wc.poly, ctx.root, ctx.root + dirv);
            c1.th_a = tm;
            c2.th_b = tm;
        }
        c1.poly = tidy_polygon(std::move(left), min_area);
        c2.poly = tidy_polygon(std::move(right), min_area);
        c1.depth = c2.depth = wc.depth + 1;
        c1.path = wc.path * 2 + 1;
        c2.path = wc.path * 2;
        if (!c1.poly.empty()) queue.push_back(std::move(c1));
        if (!c2.poly.empty()) queue.push_back(std::move(c2));
    }

    if (!offenders.empty()) {
        std::string msg = "decomposition refinement budget exceeded; offending cells:";
        for (std::size_t i = 0; i < offenders.size() && i < 8; ++i) {
            msg += " (root " + std::to_string(offenders[i].tags.root_index) + ", sector " +
                   std::to_string(offenders[i].tags.sector_index) +
                   ", K=" + format_double(offenders[i].K) +
                   ", spread=" + format_double(offenders[i].spread) + ")";
        }
        if (offenders.size() > 8) msg += " ...";
        throw BudgetExceeded(msg);
    }
    return cert;
}

}  // namespace

CellLocator::CellLocator(const Certificate& cert, int grid) : cert_(cert) {
    x0_ = cert.disk_center.real() - cert.disk_radius;
    y0_ = cert.disk_center.imag() - cert.disk_radius;
    nx_ = ny_ = grid;
    cellsize_ = 2.0 * cert.disk_radius / grid;
    bins_.resize(static_cast<std::size_t>(nx_) * ny_);
    for (std::size_t ci = 0; ci < cert.cells.size(); ++ci) {
        const auto& poly = cert.cells[ci].vertices;
        double xmin = kInf, xmax = -kInf, ymin = kInf, ymax = -kInf;
        for (const C& v : poly) {
            xmin = std::min(xmin, v.real());
            xmax = std::max(xmax, v.real());
            ymin = std::min(ymin, v.imag());
            ymax = std::max(ymax, v.imag());
        }
        int ix0 = std::clamp(static_cast<int>((xmin - x0_) / cellsize_), 0, nx_ - 1);
        int ix1 = std::clamp(static_cast<int>((xmax - x0_) / cellsize_), 0, nx_ - 1);
        int iy0 = std::clamp(static_cast<int>((ymin - y0_) / cellsize_), 0, ny_ - 1);
        int iy1 = std::clamp(static_cast<int>((ymax - y0_) / cellsize_), 0, ny_ - 1);
        for (int ix = ix0; ix <= ix1; ++ix) {
            for (int iy = iy0; iy <= iy1; ++iy) {
                bins_[static_cast<std::size_t>(iy) * nx_ + ix].push_back(static_cast<int>(ci));
            }
        }
    }
}

int CellLocator::count_hits(C z, double margin, int* first_hit) const {
    int ix = std::clamp(static_cast<int>((z.real() - x0_) / cellsize_), 0, nx_ - 1);
    int iy = std::clamp(static_cast<int>((z.imag() - y0_) / cellsize_), 0, ny_ - 1);
    int hits = 0;
    for (int ci : bins_[static_cast<std::size_t>(iy) * nx_ + ix]) {
        if (point_in_convex(cert_.cells[ci].vertices, z, margin)) {
            if (hits == 0 && first_hit) *first_hit = ci;
            ++hits;
        }
    }
    return hits;
}

Certificate build_certificate(const Poly& phi, int d, C center, double radius,
                              const DecompParams& params) {
    double eps = params.sector_eps;
    Certificate cert;
    for (int attempt = 0;; ++attempt) {
        try {
            cert = build_once(phi, d, center, radius, params, eps);
            break;
        } catch (const BudgetExceeded&) {
            if (attempt >= params.max_eps_halvings) throw;
            eps *= 0.5;
        }
    }
    if (cert.trivial_zero_weight) return cert;

    CellLocator locator(cert);
    Rng rng(derive_seed(params.seed, 0xC0FFEEull));
    std::size_t inside = 0;
    for (std::size_t s = 0; s < params.coverage_samples; ++s) {
        C z = center + rng.uniform_disk(radius);
        if (locator.count_hits(z) > 0) ++inside;
    }
    cert.coverage_fraction =
        static_cast<double>(inside) / static_cast<double>(params.coverage_samples);
    return cert;
}

GBoundReport g_lower_bound_check(const Certificate& cert, double tol, int samples_per_cell) {
    GBoundReport rep;
    rep.tol = tol;
    double thr = std::pow(2.0, 2 - cert.degree_P) * (1.0 - tol);
    rep.threshold = thr;
    for (std::size_t ci = 0; ci < cert.cells.size(); ++ci) {
        const auto& cell = cert.cells[ci];
        if (cell.tags.kind != AnnulusKind::Dyadic) continue;
        const RootContext& ctx = cert.roots[cell.tags.root_index];
        PolygonSampler sampler(cell.vertices);
        Rng rng(derive_seed(cert.params.seed, 0x9B0Dull ^ ci));
        double gmin = kInf;
        for (int s = 0; s < samples_per_cell; ++s) {
            C w = sampler.sample(rng) - ctx.root;
            gmin = std::min(gmin, std::abs(g_value(ctx, cell.tags.annulus_index, w)));
        }
        GBoundRow row;
        row.cell_index = ci;
        row.annulus_index = cell.tags.annulus_index;
        row.min_abs_g = gmin;
        row.threshold = thr;
        row.flagged = gmin < thr;
        if (row.flagged) rep.all_pass = false;
        rep.rows.push_back(row);
    }
    return rep;
}

std::string GBoundReport::to_csv() const {
    std::string out = "cell_index,annulus_index,min_abs_g,threshold,flagged\n";
    for (const auto& r : rows) {
        out += std::to_string(r.cell_index);
        out += ',';
        out += std::to_string(r.annulus_index);
        out += ',';
        out += format_double(r.min_abs_g);
        out += ',';
        out += format_double(r.threshold);
        out += ',';
        out += r.flagged ? "1" : "0";
        out += '\n';
    }
    return out;
}

namespace {

Json complex_json(C z) { return Json::array({z.real(), z.imag()}); }

}  // namespace

Json Certificate::to_json() const {
    Json j;
    j["kind"] = "decomposition_certificate";
    j["trivial_zero_weight"] = trivial_zero_weight;
    j["d"] = d;
    j["disk"] = {{"center", complex_json(disk_center)}, {"radius", disk_radius}};
    j["A"] = A;
    j["A1"] = A1;
    j["sector_eps"] = sector_eps_used;
    j["sector_width"] = sector_width;
    j["sectors"] = sectors;
    j["degree_P"] = degree_P;
    j["coverage_fraction"] = coverage_fraction;
    j["params"] = {{"b0", params.b0},
                   {"c0_factor", params.c0_factor},
                   {"delta0", params.delta0},
                   {"sector_eps", params.sector_eps},
                   {"kmax", params.kmax},
                   {"coverage_tol", params.coverage_tol},
                   {"max_depth", params.max_depth},
                   {"max_cells", params.max_cells},
                   {"check_samples", params.check_samples},
                   {"coverage_samples", params.coverage_samples},
                   {"seed", params.seed}};
    Json roots_json = Json::array();
    for (const auto& r : roots) {
        Json rj;
        rj["root"] = complex_json(r.root);
        rj["multiplicity"] = r.multiplicity;
        Json ivs = Json::array();
        for (const auto& iv : r.intervals) {
            Json ij;
            ij["kind"] = iv.kind == AnnulusKind::Gap ? "gap" : "dyadic";
            ij["annulus_index"] = iv.index_j;
            ij["raw"] = Json::array(
                {iv.raw_lo, std::isfinite(iv.raw_hi) ? Json(iv.raw_hi) : Json("inf")});
            ij["effective"] = Json::array({iv.lo, iv.hi});
            ij["empty"] = iv.empty;
            ivs.push_back(std::move(ij));
        }
        rj["intervals"] = std::move(ivs);
        roots_json.push_back(std::move(rj));
    }
    j["roots"] = std::move(roots_json);
    Json cells_json = Json::array();
    for (const auto& c : cells) {
        Json cj;
        Json verts = Json::array();
        for (const C& v : c.vertices) verts.push_back(complex_json(v));
        cj["vertices"] = std::move(verts);
        cj["root_index"] = c.tags.root_index;
        cj["sector_index"] = c.tags.sector_index;
        cj["annulus_kind"] = c.tags.kind == AnnulusKind::Gap ? "gap" : "dyadic";
        cj["annulus_index"] = c.tags.annulus_index;
        cj["area"] = c.area;
        cj["K"] = c.comparability;
        cj["g_spread"] = c.g_spread;
        cj["g_mean_dir"] = c.g_mean_dir;
        cj["g_min_abs"] = c.g_min_abs;
        cj["g_max_abs"] = c.g_max_abs;
        cells_json.push_back(std::move(cj));
    }
    j["cells"] = std::move(cells_json);
    return j;
}

}  // namespace cxr
