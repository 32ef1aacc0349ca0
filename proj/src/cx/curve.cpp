#include "cx/curve.hpp"

#include <cmath>

namespace cxr {

SimpleCurve::SimpleCurve(int dim, Poly p) : d(dim), phi(std::move(p)) {
    if (d < 2) throw std::invalid_argument("curve dimension must be >= 2");
}

OffspringCurve::OffspringCurve(SimpleCurve c, std::vector<C> b, double bound)
    : base(std::move(c)), shifts(std::move(b)), shift_bound(bound) {
    if (shifts.empty()) throw std::invalid_argument("offspring curve needs at least one shift");
    if (shifts[0] != C(0.0, 0.0)) throw std::invalid_argument("first shift must be exactly 0");
    for (const C& s : shifts) {
        if (!is_finite(s)) throw std::invalid_argument("shift not finite");
        if (std::abs(s) > shift_bound + 1e-12) {
            throw std::invalid_argument("shift modulus exceeds the configured bound");
        }
    }
}

double torsion_constant(int d) {
    double c = 1.0;
    double fact = 1.0;
    for (int k = 2; k <= d - 1; ++k) {
        fact *= k;
        c *= fact;
    }
    return c;
}

double weight_exponent(int d) {
    return 4.0 / (static_cast<double>(d) * d + d);
}

std::vector<C> gamma_eval(const SimpleCurve& c, C z) {
    if (!is_finite(z)) throw std::invalid_argument("non-finite argument");
    std::vector<C> out(c.d);
    C p(1.0, 0.0);
    for (int k = 1; k <= c.d - 1; ++k) {
        p *= z;
        out[k - 1] = p;
    }
    out[c.d - 1] = c.phi.eval(z);
    return out;
}

std::vector<double> real_embed(const SimpleCurve& c, C z) {
    auto g = gamma_eval(c, z);
    std::vector<double> out(2 * g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
        out[2 * k] = g[k].real();
        out[2 * k + 1] = g[k].imag();
    }
    return out;
}

WeightValue torsion(const SimpleCurve& c, C z) {
    WeightValue w;
    w.exponent = weight_exponent(c.d);
    if (c.phi.degree() < c.d) return w;  // exactly zero
    C pd = c.phi.derivative(c.d).eval(z);
    w.torsion = torsion_constant(c.d) * pd;
    w.weight = std::pow(std::abs(w.torsion), w.exponent);
    return w;
}

std::vector<C> offspring_eval(const OffspringCurve& o, C z) {
    std::vector<C> acc(o.base.d, C(0.0, 0.0));
    for (const C& b : o.shifts) {
        auto g = gamma_eval(o.base, z + b);
        for (int k = 0; k < o.base.d; ++k) acc[k] += g[k];
    }
    double inv = 1.0 / o.m();
    for (C& v : acc) v *= inv;
    return acc;
}

Poly offspring_phi(const OffspringCurve& o) {
    std::vector<C> acc;
    for (const C& b : o.shifts) {
        Poly shifted = o.base.phi.shift(b);
        const auto& cs = shifted.coeffs();
        if (cs.size() > acc.size()) acc.resize(cs.size(), C(0.0, 0.0));
        for (std::size_t i = 0; i < cs.size(); ++i) acc[i] += cs[i];
    }
    double inv = 1.0 / o.m();
    for (C& v : acc) v *= inv;
    return Poly::from_coeffs(std::move(acc));
}

C offspring_phi_d(const OffspringCurve& o, C z) {
    int d = o.base.d;
    if (o.base.phi.degree() < d) return C(0.0, 0.0);
    Poly pd = o.base.phi.derivative(d);
    C acc(0.0, 0.0);
    for (const C& b : o.shifts) acc += pd.eval(z + b);
    return acc / static_cast<double>(o.m());
}

C offspring_torsion(const OffspringCurve& o, C z, std::span<const C> h) {
    int d = o.base.d;
    if (static_cast<int>(h.size()) != d - 1) {
        throw std::invalid_argument("offspring_torsion expects d-1 offsets (h_1 = 0 implicit)");
    }
    if (o.base.phi.degree() < d) return C(0.0, 0.0);
    Poly pd = o.base.phi.derivative(d);
    C sum(0.0, 0.0);
    for (int i = 0; i < d; ++i) {
        C hi = (i == 0) ? C(0.0, 0.0) : h[i - 1];
        for (const C& b : o.shifts) sum += pd.eval(z + b + hi);
    }
    double scale = std::pow(static_cast<double>(d), d - 1) * torsion_constant(d) / o.m();
    return scale * sum;
}

std::vector<C> offspring_derivative_column(const OffspringCurve& o, const Poly& dphi, C p) {
    int d = o.base.d;
    double inv = 1.0 / o.m();
    std::vector<C> col(d, C(0.0, 0.0));
    col[0] = C(1.0, 0.0);
    for (int i = 2; i <= d - 1; ++i) {
        C s(0.0, 0.0);
        for (const C& b : o.shifts) {
            C base = p + b;
            C pw(1.0, 0.0);
            for (int k = 0; k < i - 1; ++k) pw *= base;
            s += pw;
        }
        col[i - 1] = static_cast<double>(i) * inv * s;
    }
    C s(0.0, 0.0);
    for (const C& b : o.shifts) s += dphi.eval(p + b);
    col[d - 1] = inv * s;
    return col;
}

}  // namespace cxr
