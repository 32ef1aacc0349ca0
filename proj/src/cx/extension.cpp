#include "cx/extension.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "cx/quadrature.hpp"

namespace cxr {

namespace {

/// Precomputed curve data for fast integrand evaluation.
struct CurveEval {
    int d;
    int m;
    std::vector<C> shifts;
    Poly phi;
    Poly pd;  // phi^(d)
    bool zero_weight;
    double cd;
    double wexp;

    explicit CurveEval(const OffspringCurve& o)
        : d(o.base.d),
          m(o.m()),
          shifts(o.shifts),
          phi(o.base.phi),
          zero_weight(o.base.phi.degree() < o.base.d),
          cd(torsion_constant(o.base.d)),
          wexp(weight_exponent(o.base.d)) {
        if (!zero_weight) pd = o.base.phi.derivative(d);
    }

    double weight(C z) const {
        if (zero_weight) return 0.0;
        C acc(0.0, 0.0);
        for (const C& b : shifts) acc += pd.eval(z + b);
        double tau = cd * std::abs(acc) / m;
        return (tau == 0.0) ? 0.0 : std::pow(tau, wexp);
    }

    /// x . Gamma(z) in R^{2d}.
    double phase(std::span<const double> x, C z) const {
        double acc = 0.0;
        C avg_pow(0.0, 0.0);
        // power components (averaged over shifts), then phi component
        for (int k = 1; k <= d - 1; ++k) {
            C s(0.0, 0.0);
            for (const C& b : shifts) {
                C zp = z + b;
                C pw(1.0, 0.0);
                for (int t = 0; t < k; ++t) pw *= zp;
                s += pw;
            }
            s /= static_cast<double>(m);
            acc += x[2 * (k - 1)] * s.real() + x[2 * (k - 1) + 1] * s.imag();
        }
        C s(0.0, 0.0);
        for (const C& b : shifts) s += phi.eval(z + b);
        s /= static_cast<double>(m);
        acc += x[2 * (d - 1)] * s.real() + x[2 * (d - 1) + 1] * s.imag();
        return acc;
    }

    double derivative_bound(double radius) const {
        Poly dphi = phi.is_zero() ? Poly() : phi.derivative(1);
        double best = 0.0;
        for (int i = 0; i < 24; ++i) {
            double t = 2.0 * kPi * i / 24;
            for (double r : {0.25 * radius, 0.5 * radius, 0.75 * radius, radius}) {
                C z = r * C(std::cos(t), std::sin(t));
                double norm2 = 0.0;
                for (int k = 1; k <= d - 1; ++k) {
                    C s(0.0, 0.0);
                    for (const C& b : shifts) {
                        C zp = z + b;
                        C pw(1.0, 0.0);
                        for (int tt = 0; tt < k - 1; ++tt) pw *= zp;
                        s += static_cast<double>(k) * pw;
                    }
                    s /= static_cast<double>(m);
                    norm2 += std::norm(s);
                }
                C s(0.0, 0.0);
                for (const C& b : shifts) s += dphi.eval(z + b);
                s /= static_cast<double>(m);
                norm2 += std::norm(s);
                best = std::max(best, std::sqrt(norm2));
            }
        }
        return best;
    }
};

struct Domain {
    bool polar = false;
    C polar_center{0.0, 0.0};
    double polar_radius = 1.0;
    double x0 = 0, x1 = 0, y0 = 0, y1 = 0;  // cartesian bounds
};

Domain domain_for(const FunctionSpec& f) {
    Domain dom;
    switch (f.kind) {
        case FunctionSpec::Kind::IndicatorBall:
        case FunctionSpec::Kind::Constant:
            dom.polar = true;
            dom.polar_radius = f.radius;
            break;
        case FunctionSpec::Kind::GaussianBump: {
            dom.polar = false;
            double half = 6.0 * f.width;
            dom.x0 = f.center.real() - half;
            dom.x1 = f.center.real() + half;
            dom.y0 = f.center.imag() - half;
            dom.y1 = f.center.imag() + half;
            break;
        }
    }
    return dom;
}

double f_eval(const FunctionSpec& f, C z) {
    switch (f.kind) {
        case FunctionSpec::Kind::IndicatorBall:
        case FunctionSpec::Kind::Constant:
            return (std::abs(z) <= f.radius) ? f.amplitude : 0.0;
        case FunctionSpec::Kind::GaussianBump: {
            double d2 = std::norm(z - f.center);
            return f.amplitude * std::exp(-d2 / (2.0 * f.width * f.width));
        }
    }
    return 0.0;
}

/// Dyadic panel refinement of int integrand dmu over the domain; the polar
/// path substitutes r = R t^3 to soften radial weight singularities.
QuadValue refine_integral(const Domain& dom, const std::function<C(C)>& integrand,
                          const QuadOptions& opt, int min_level) {
    const auto& rule = gauss_legendre(opt.base_nodes);
    int n = opt.base_nodes;
    QuadValue out;
    C prev(0.0, 0.0);
    double mag_scale = 0.0;
    for (int level = std::min(min_level, opt.max_level);; ++level) {
        int panels = 1 << level;
        C acc(0.0, 0.0);
        double mag = 0.0;
        if (dom.polar) {
            double R = dom.polar_radius;
            for (int pi = 0; pi < panels; ++pi) {
                double t_lo = static_cast<double>(pi) / panels;
                double t_hi = static_cast<double>(pi + 1) / panels;
                for (int pj = 0; pj < panels; ++pj) {
                    double th_lo = 2.0 * kPi * pj / panels;
                    double th_hi = 2.0 * kPi * (pj + 1) / panels;
                    C panel_acc(0.0, 0.0);
                    double panel_mag = 0.0;
                    for (int i = 0; i < n; ++i) {
                        double t = gl_map(rule.nodes[i], t_lo, t_hi);
                        double r = R * t * t * t;
                        double jac = 3.0 * R * t * t * r;  // r dr = 3 R t^2 * r dt
                        for (int j = 0; j < n; ++j) {
                            double th = gl_map(rule.nodes[j], th_lo, th_hi);
                            C z = dom.polar_center + r * C(std::cos(th), std::sin(th));
                            C v = integrand(z) * (jac * rule.weights[i] * rule.weights[j]);
                            panel_acc += v;
                            panel_mag += std::abs(v);
                        }
                    }
                    double scale = 0.25 * (t_hi - t_lo) * (th_hi - th_lo);
                    acc += panel_acc * scale;
                    mag += panel_mag * scale;
                }
            }
        } else {
            for (int pi = 0; pi < panels; ++pi) {
                double xa = dom.x0 + (dom.x1 - dom.x0) * pi / panels;
                double xb = dom.x0 + (dom.x1 - dom.x0) * (pi + 1) / panels;
                for (int pj = 0; pj < panels; ++pj) {
                    double ya = dom.y0 + (dom.y1 - dom.y0) * pj / panels;
                    double yb = dom.y0 + (dom.y1 - dom.y0) * (pj + 1) / panels;
                    C panel_acc(0.0, 0.0);
                    double panel_mag = 0.0;
                    for (int i = 0; i < n; ++i) {
                        double xx = gl_map(rule.nodes[i], xa, xb);
                        for (int j = 0; j < n; ++j) {
                            double yy = gl_map(rule.nodes[j], ya, yb);
                            C v = integrand(C(xx, yy)) * (rule.weights[i] * rule.weights[j]);
                            panel_acc += v;
                            panel_mag += std::abs(v);
                        }
                    }
                    double scale = 0.25 * (xb - xa) * (yb - ya);
                    acc += panel_acc * scale;
                    mag += panel_mag * scale;
                }
            }
        }
        if (level == std::min(min_level, opt.max_level)) mag_scale = mag;
        out.levels_used = level;
        if (level > std::min(min_level, opt.max_level)) {
            double diff = std::abs(acc - prev);
            out.last_diff = diff;
            double floor = std::max(std::abs(acc), 1e-12 * mag_scale);
            if (diff <= opt.rel_tol * floor) {
                out.value = acc;
                out.converged = true;
                return out;
            }
        }
        prev = acc;
        if (level >= opt.max_level) {
            out.value = acc;
            out.converged = false;
            return out;
        }
    }
}

}  // namespace

double cutoff_bump(std::span<const double> x) {
    double acc = 1.0;
    for (double xi : x) {
        double t = 1.0 - xi * xi;
        if (t <= 0.0) return 0.0;
        acc *= t * t;
    }
    return acc;
}

QuadValue extension_value(const SimpleCurve& c, const FunctionSpec& f, std::span<const double> x,
                          const QuadOptions& opt) {
    if (static_cast<int>(x.size()) != 2 * c.d) {
        throw std::invalid_argument("probe point must have 2d components");
    }
    for (double xi : x) {
        if (!is_finite(xi)) throw std::invalid_argument("non-finite argument");
    }
    OffspringCurve plain(c, {C(0.0, 0.0)});
    CurveEval ev(plain);
    Domain dom = domain_for(f);
    auto integrand = [&](C z) -> C {
        double fw = f_eval(f, z) * ev.weight(z);
        if (fw == 0.0) return C(0.0, 0.0);
        double ph = ev.phase(x, z);
        return fw * C(std::cos(ph), std::sin(ph));
    };
    return refine_integral(dom, integrand, opt, 0);
}

QuadValue weighted_l1_norm(const OffspringCurve& o, const FunctionSpec& f,
                           const QuadOptions& opt) {
    CurveEval ev(o);
    Domain dom = domain_for(f);
    auto integrand = [&](C z) -> C {
        return C(std::fabs(f_eval(f, z)) * ev.weight(z), 0.0);
    };
    return refine_integral(dom, integrand, opt, 0);
}

QuadValue t_lambda_value(const OffspringCurve& o, const FunctionSpec& f,
                         std::span<const double> x, double lambda, const QuadOptions& opt) {
    int d = o.base.d;
    if (static_cast<int>(x.size()) != 2 * d) {
        throw std::invalid_argument("probe point must have 2d components");
    }
    double psi = cutoff_bump(x);
    CurveEval ev(o);
    Domain dom;
    dom.polar = true;
    dom.polar_radius = 1.0;

    double xnorm = 0.0;
    for (double xi : x) xnorm += xi * xi;
    xnorm = std::sqrt(xnorm);

    int min_level = 0;
    if (lambda * xnorm > 0.0) {
        double bound = ev.derivative_bound(1.0);
        double spacing_needed = 2.0 * kPi / (opt.oscillation_factor * lambda * xnorm *
                                             std::max(bound, 1e-12));
        // domain extent ~ 2 pi (angular) over panels * nodes
        double need_panels = 2.0 * kPi / (spacing_needed * opt.base_nodes);
        while ((1 << min_level) < need_panels && min_level < opt.max_level) ++min_level;
    }

    std::vector<double> xs(x.begin(), x.end());
    for (double& xi : xs) xi *= lambda;
    auto integrand = [&](C z) -> C {
        double fw = f_eval(f, z) * ev.weight(z);
        if (fw == 0.0) return C(0.0, 0.0);
        double ph = ev.phase(xs, z);
        return fw * C(std::cos(ph), std::sin(ph));
    };
    QuadValue q = refine_integral(dom, integrand, opt, min_level);
    q.value *= psi;
    return q;
}

namespace {

double fit_exponent(const std::vector<double>& grid, const std::vector<double>& vals,
                    double* residual) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        xs.push_back(std::log(grid[i]));
        ys.push_back(std::log(std::max(vals[i], 1e-300)));
    }
    double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double icept = (sy - slope * sx) / n;
    if (residual) {
        double worst = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            worst = std::max(worst, std::fabs(slope * xs[i] + icept - ys[i]));
        }
        *residual = worst;
    }
    return slope;
}

}  // namespace

ExtensionScanResult homogeneity_scan(const SimpleCurve& c, const HomogeneityConfig& cfg) {
    int d = c.d;
    int N = c.phi.degree();
    const auto& cs = c.phi.coeffs();
    for (int i = 0; i < N; ++i) {
        if (cs[i] != C(0.0, 0.0)) {
            throw std::invalid_argument("homogeneity scan requires monomial phi");
        }
    }
    if (N < d) throw std::invalid_argument("homogeneity scan requires N >= d");

    ExtensionScanResult res;
    res.grid = cfg.R_grid;
    res.analytic_exponent = 4.0 * (N - d) / (static_cast<double>(d) * d + d) + 2.0;

    // Center values T chi_{B_R}(0) = int_{B_R} w.
    std::vector<double> centers;
    std::vector<double> x0(2 * d, 0.0);
    for (double R : cfg.R_grid) {
        FunctionSpec f;
        f.kind = FunctionSpec::Kind::IndicatorBall;
        f.radius = R;
        QuadValue q = extension_value(c, f, x0, cfg.quad);
        centers.push_back(std::abs(q.value));
        res.rows.push_back({R, "center", std::abs(q.value), q.converged});
        if (!q.converged) res.all_converged = false;
    }
    res.values = centers;
    res.fitted_exponent = fit_exponent(res.grid, centers, &res.residual);

    // Exponents of the anisotropic box per complex coordinate.
    std::vector<int> exps;
    for (int k = 1; k <= d - 1; ++k) exps.push_back(k);
    exps.push_back(N);

    double a = 1.0;
    bool ok_found = false;
    for (; a >= cfg.a_floor; a *= 0.5) {
        bool all_ok = true;
        for (std::size_t ri = 0; ri < cfg.R_grid.size() && all_ok; ++ri) {
            double R = cfg.R_grid[ri];
            FunctionSpec f;
            f.kind = FunctionSpec::Kind::IndicatorBall;
            f.radius = R;
            int combos = 1 << (2 * d);
            for (int mask = 0; mask < combos && all_ok; ++mask) {
                std::vector<double> x(2 * d);
                for (int i = 0; i < 2 * d; ++i) {
                    double mag = a * std::pow(R, -exps[i / 2]);
                    x[i] = ((mask >> i) & 1) ? mag : -mag;
                }
                QuadValue q = extension_value(c, f, x, cfg.quad);
                if (!q.converged) res.all_converged = false;
                if (std::abs(q.value) < 0.5 * centers[ri]) all_ok = false;
            }
        }
        if (all_ok) {
            ok_found = true;
            break;
        }
    }
    if (!ok_found) {
        throw NoConvergence("no scale a above the floor kept all probes above half the center "
                            "value",
                            {}, 0.0);
    }
    res.a_found = a;

    // Record the probe values at the found scale for the largest R.
    double Rbig = cfg.R_grid.back();
    FunctionSpec f;
    f.kind = FunctionSpec::Kind::IndicatorBall;
    f.radius = Rbig;
    int combos = 1 << (2 * d);
    for (int mask = 0; mask < combos; ++mask) {
        std::vector<double> x(2 * d);
        for (int i = 0; i < 2 * d; ++i) {
            double mag = a * std::pow(Rbig, -exps[i / 2]);
            x[i] = ((mask >> i) & 1) ? mag : -mag;
        }
        QuadValue q = extension_value(c, f, x, cfg.quad);
        res.rows.push_back({Rbig, "corner_" + std::to_string(mask), std::abs(q.value),
                            q.converged});
        res.probe_points.push_back(std::move(x));
    }
    return res;
}

ExtensionScanResult t_lambda_scan(const OffspringCurve& o, const LambdaScanConfig& cfg) {
    ExtensionScanResult res;
    res.grid = cfg.lambda_grid;
    for (double la : cfg.lambda_grid) {
        QuadValue q = t_lambda_value(o, cfg.f, cfg.x, la, cfg.quad);
        res.values.push_back(std::abs(q.value));
        res.rows.push_back({la, "probe", std::abs(q.value), q.converged});
        if (!q.converged) res.all_converged = false;
    }
    res.fitted_exponent = fit_exponent(res.grid, res.values, &res.residual);
    res.probe_points.push_back(cfg.x);
    return res;
}

Json ExtensionScanResult::to_json(const std::string& id) const {
    Json j;
    j["scan_id"] = id;
    j["grid"] = grid;
    j["values"] = values;
    j["fitted_exponent"] = fitted_exponent;
    j["residual"] = residual;
    j["analytic_exponent"] = analytic_exponent;
    j["a_found"] = a_found;
    j["all_converged"] = all_converged;
    return j;
}

std::string ExtensionScanResult::to_csv() const {
    std::string out = "grid_value,probe_id,abs_value,converged\n";
    for (const auto& r : rows) {
        out += format_double(r.grid_value);
        out += ',';
        out += csv_escape(r.probe_id);
        out += ',';
        out += format_double(r.abs_value);
        out += ',';
        out += r.converged ? "1" : "0";
        out += '\n';
    }
    return out;
}

}  // namespace cxr
