#include "cx/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace cxr {

namespace {

void trim_leading_zeros(std::vector<C>& c) {
    while (c.size() > 1 && c.back() == C(0.0, 0.0)) c.pop_back();
}

}  // namespace

Poly Poly::from_coeffs(std::vector<C> coeffs) {
    if (coeffs.empty()) coeffs.push_back(C(0.0, 0.0));
    for (const C& c : coeffs) {
        if (!is_finite(c)) throw std::invalid_argument("polynomial coefficient not finite");
    }
    trim_leading_zeros(coeffs);
    if (static_cast<int>(coeffs.size()) - 1 > kMaxDegree) {
        throw std::invalid_argument("polynomial degree exceeds configured maximum");
    }
    Poly p;
    p.coeff_ = std::move(coeffs);
    return p;
}

Poly Poly::from_roots(std::vector<C> roots, C leading) {
    if (leading == C(0.0, 0.0)) throw std::invalid_argument("leading coefficient must be nonzero");
    for (const C& r : roots) {
        if (!is_finite(r)) throw std::invalid_argument("polynomial root not finite");
    }
    if (static_cast<int>(roots.size()) > kMaxDegree) {
        throw std::invalid_argument("polynomial degree exceeds configured maximum");
    }
    Poly p;
    p.coeff_ = expand_from_roots(roots, leading);
    p.roots_ = std::move(roots);
    p.root_leading_ = leading;
    return p;
}

Poly Poly::monomial(int n, C lead) {
    std::vector<C> c(static_cast<std::size_t>(n) + 1, C(0.0, 0.0));
    c.back() = lead;
    return from_coeffs(std::move(c));
}

const std::vector<C>& Poly::roots() const {
    if (!roots_) throw std::logic_error("polynomial has no factored form");
    return *roots_;
}

C Poly::eval(C z) const {
    if (!is_finite(z)) throw std::invalid_argument("non-finite argument");
    C acc(0.0, 0.0);
    for (auto it = coeff_.rbegin(); it != coeff_.rend(); ++it) acc = acc * z + *it;
    return acc;
}

C Poly::eval_factored(C z) const {
    if (!is_finite(z)) throw std::invalid_argument("non-finite argument");
    const auto& rs = roots();
    C acc = root_leading_;
    for (const C& r : rs) acc *= (z - r);
    return acc;
}

Poly Poly::derivative(int k) const {
    if (k < 1) throw std::invalid_argument("derivative order must be >= 1");
    std::vector<C> cur = coeff_;
    for (int pass = 0; pass < k; ++pass) {
        if (cur.size() == 1) {
            cur[0] = C(0.0, 0.0);
            break;
        }
        std::vector<C> next(cur.size() - 1);
        for (std::size_t i = 1; i < cur.size(); ++i) {
            next[i - 1] = cur[i] * static_cast<double>(i);
        }
        cur = std::move(next);
    }
    return from_coeffs(std::move(cur));
}

Poly Poly::shift(C a) const {
    // Repeated synthetic division: coefficients of p(z + a).
    std::vector<C> c = coeff_;
    int n = degree();
    for (int j = 0; j < n; ++j) {
        for (int i = n - 1; i >= j; --i) c[i] += a * c[i + 1];
    }
    return from_coeffs(std::move(c));
}

Poly Poly::scaled(C factor) const {
    std::vector<C> c = coeff_;
    for (C& x : c) x *= factor;
    Poly p = from_coeffs(std::move(c));
    if (roots_ && factor != C(0.0, 0.0)) {
        p.roots_ = roots_;
        p.root_leading_ = root_leading_ * factor;
    }
    return p;
}

double Poly::max_coeff_abs() const {
    double m = 0.0;
    for (const C& c : coeff_) m = std::max(m, std::abs(c));
    return m;
}

std::vector<C> expand_from_roots(std::span<const C> roots, C leading) {
    // Ascending coefficients; multiply by (z - r) one root at a time.
    std::vector<C> c{leading};
    for (const C& r : roots) {
        c.push_back(C(0.0, 0.0));
        for (std::size_t i = c.size() - 1; i >= 1; --i) {
            c[i] = c[i - 1] - r * c[i];
        }
        c[0] = -r * c[0];
    }
    return c;
}

namespace {

double scaled_residual(const std::vector<C>& monic, C z) {
    C acc(0.0, 0.0);
    for (auto it = monic.rbegin(); it != monic.rend(); ++it) acc = acc * z + *it;
    int n = static_cast<int>(monic.size()) - 1;
    double denom = std::pow(1.0 + std::abs(z), n);
    return std::abs(acc) / denom;
}

}  // namespace

RootFindResult find_roots(const Poly& p, const RootFindOptions& opts) {
    int n = p.degree();
    if (n < 1) throw std::invalid_argument("find_roots requires degree >= 1");

    // Monic normalization.
    std::vector<C> monic(p.coeffs());
    C lead = monic.back();
    for (C& c : monic) c /= lead;

    double ratio = 0.0;
    for (int i = 0; i < n; ++i) ratio = std::max(ratio, std::abs(monic[i]));
    double r0 = 1.0 + ratio;

    std::vector<C> w(n);
    for (int i = 0; i < n; ++i) {
        double t = 2.0 * kPi * i / n + 0.376991118;
        w[i] = r0 * C(std::cos(t), std::sin(t));
    }

    auto eval_monic = [&](C z) {
        C acc(0.0, 0.0);
        for (auto it = monic.rbegin(); it != monic.rend(); ++it) acc = acc * z + *it;
        return acc;
    };

    int it = 0;
    for (; it < opts.max_iterations; ++it) {
        double step = 0.0;
        for (int i = 0; i < n; ++i) {
            C denom(1.0, 0.0);
            for (int j = 0; j < n; ++j) {
                if (j != i) denom *= (w[i] - w[j]);
            }
            if (denom == C(0.0, 0.0)) {
                // Coincident iterates: nudge and continue.
                w[i] += C(1e-8 * (1.0 + std::abs(w[i])), 0.0);
                continue;
            }
            C delta = eval_monic(w[i]) / denom;
            w[i] -= delta;
            step = std::max(step, std::abs(delta) / (1.0 + std::abs(w[i])));
        }
        if (step < 1e-14) break;
    }

    // Newton polish, guarded against divergence on multiple roots.
    std::vector<C> dmonic(std::max<std::size_t>(monic.size() - 1, 1), C(0.0, 0.0));
    for (std::size_t i = 1; i < monic.size(); ++i) dmonic[i - 1] = monic[i] * static_cast<double>(i);
    auto eval_d = [&](C z) {
        C acc(0.0, 0.0);
        for (auto it2 = dmonic.rbegin(); it2 != dmonic.rend(); ++it2) acc = acc * z + *it2;
        return acc;
    };
    for (int i = 0; i < n; ++i) {
        C z = w[i];
        double best = scaled_residual(monic, z);
        C zbest = z;
        for (int s = 0; s < opts.polish_steps; ++s) {
            C dp = eval_d(z);
            if (dp == C(0.0, 0.0)) break;
            z -= eval_monic(z) / dp;
            double res = scaled_residual(monic, z);
            if (res < best) {
                best = res;
                zbest = z;
            }
        }
        w[i] = zbest;
    }

    // Multiplicity recovery: cluster, replace members by the centroid.
    auto clusters = cluster_roots(w, opts.cluster_rel);
    std::vector<C> out;
    out.reserve(n);
    for (const auto& cl : clusters) {
        for (int k = 0; k < cl.multiplicity; ++k) out.push_back(cl.value);
    }

    double worst = 0.0;
    for (const C& z : out) worst = std::max(worst, scaled_residual(monic, z));
    RootFindResult result{std::move(out), worst, it};
    if (worst > opts.residual_tol) {
        throw NoConvergence("root finding did not reach the residual tolerance",
                            result.roots, worst);
    }
    return result;
}

RootOrdering order_roots(std::span<const C> roots) {
    if (roots.empty()) throw std::invalid_argument("order_roots requires a nonempty list");
    std::vector<C> sorted(roots.begin(), roots.end());
    std::stable_sort(sorted.begin(), sorted.end(), [](const C& a, const C& b) {
        double ma = std::abs(a), mb = std::abs(b);
        if (ma != mb) return ma < mb;
        return std::arg(a) < std::arg(b);
    });
    RootOrdering ord;
    ord.moduli.reserve(sorted.size());
    for (const C& z : sorted) ord.moduli.push_back(std::abs(z));
    ord.roots = std::move(sorted);
    return ord;
}

C complete_homogeneous(int N, std::span<const C> points) {
    if (points.empty()) throw std::invalid_argument("complete_homogeneous requires points");
    if (N < 0) throw std::invalid_argument("complete_homogeneous requires N >= 0");
    // h_n(z_1..z_k) = h_n(z_1..z_{k-1}) + z_k * h_{n-1}(z_1..z_k); the
    // in-place ascending update realizes the expansion in powers of the
    // newly added variable.
    std::vector<C> dp(static_cast<std::size_t>(N) + 1, C(0.0, 0.0));
    dp[0] = C(1.0, 0.0);
    for (const C& z : points) {
        for (int m = 1; m <= N; ++m) dp[m] += z * dp[m - 1];
    }
    return dp[N];
}

std::vector<ClusteredRoot> cluster_roots(std::span<const C> roots, double rel) {
    std::vector<C> sorted(roots.begin(), roots.end());
    std::sort(sorted.begin(), sorted.end(), [](const C& a, const C& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    std::vector<ClusteredRoot> out;
    std::vector<bool> used(sorted.size(), false);
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (used[i]) continue;
        // Greedy ball gather around the current point, then re-centre.
        std::vector<std::size_t> members{i};
        used[i] = true;
        C centroid = sorted[i];
        bool grew = true;
        while (grew) {
            grew = false;
            double radius = rel * (1.0 + std::abs(centroid));
            for (std::size_t j = 0; j < sorted.size(); ++j) {
                if (used[j]) continue;
                if (std::abs(sorted[j] - centroid) <= radius) {
                    used[j] = true;
                    members.push_back(j);
                    grew = true;
                }
            }
            C sum(0.0, 0.0);
            for (auto m : members) sum += sorted[m];
            centroid = sum / static_cast<double>(members.size());
        }
        out.push_back({centroid, static_cast<int>(members.size())});
    }
    std::sort(out.begin(), out.end(), [](const ClusteredRoot& a, const ClusteredRoot& b) {
        if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
        return a.value.imag() < b.value.imag();
    });
    return out;
}

}  // namespace cxr
