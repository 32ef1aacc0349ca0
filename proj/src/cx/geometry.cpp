#include "cx/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace cxr {

namespace {

inline double cross(C a, C b) { return a.real() * b.imag() - a.imag() * b.real(); }

}  // namespace

double polygon_area(const Polygon& p) {
    if (p.size() < 3) return 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const C& a = p[i];
        const C& b = p[(i + 1) % p.size()];
        acc += cross(a, b);
    }
    return 0.5 * acc;
}

C polygon_centroid(const Polygon& p) {
    double a6 = 0.0;
    C acc(0.0, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        const C& u = p[i];
        const C& v = p[(i + 1) % p.size()];
        double c = cross(u, v);
        a6 += c;
        acc += c * (u + v);
    }
    if (a6 == 0.0) {
        C sum(0.0, 0.0);
        for (const C& v : p) sum += v;
        return sum / static_cast<double>(p.size());
    }
    return acc / (3.0 * a6);
}

bool is_convex_ccw(const Polygon& p, double tol) {
    if (p.size() < 3) return false;
    double scale = 0.0;
    for (const C& v : p) scale = std::max(scale, std::abs(v));
    double floor = -tol * std::max(scale * scale, 1e-30);
    for (std::size_t i = 0; i < p.size(); ++i) {
        C e1 = p[(i + 1) % p.size()] - p[i];
        C e2 = p[(i + 2) % p.size()] - p[(i + 1) % p.size()];
        if (cross(e1, e2) < floor) return false;
    }
    return true;
}

double polygon_diameter(const Polygon& p) {
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t j = i + 1; j < p.size(); ++j) {
            d = std::max(d, std::abs(p[i] - p[j]));
        }
    }
    return d;
}

bool point_in_convex(const Polygon& p, C z, double margin) {
    if (p.size() < 3) return false;
    for (std::size_t i = 0; i < p.size(); ++i) {
        C a = p[i];
        C b = p[(i + 1) % p.size()];
        C e = b - a;
        double len = std::abs(e);
        if (len == 0.0) continue;
        if (cross(e, z - a) < margin * len) return false;
    }
    return true;
}

Polygon clip_half_plane(const Polygon& poly, C p0, C inward_normal) {
    Polygon out;
    if (poly.empty()) return out;
    auto side = [&](C z) {
        C d = z - p0;
        return inward_normal.real() * d.real() + inward_normal.imag() * d.imag();
    };
    std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        C cur = poly[i];
        C nxt = poly[(i + 1) % n];
        double sc = side(cur);
        double sn = side(nxt);
        if (sc >= 0.0) out.push_back(cur);
        if ((sc > 0.0 && sn < 0.0) || (sc < 0.0 && sn > 0.0)) {
            double t = sc / (sc - sn);
            out.push_back(cur + t * (nxt - cur));
        }
    }
    return out;
}

std::pair<Polygon, Polygon> split_by_line(const Polygon& poly, C a, C b) {
    C dir = b - a;
    C left_normal(-dir.imag(), dir.real());
    Polygon left = clip_half_plane(poly, a, left_normal);
    Polygon right = clip_half_plane(poly, a, -left_normal);
    return {std::move(left), std::move(right)};
}

Polygon tidy_polygon(Polygon p, double min_area) {
    if (p.size() < 3) return {};
    Polygon out;
    double scale = 0.0;
    for (const C& v : p) scale = std::max(scale, std::abs(v));
    double tol = 1e-13 * std::max(scale, 1.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        const C& prev = out.empty() ? p.back() : out.back();
        if (std::abs(p[i] - prev) > tol) out.push_back(p[i]);
    }
    while (out.size() > 1 && std::abs(out.front() - out.back()) <= tol) out.pop_back();
    // drop collinear vertices
    Polygon final;
    std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) {
        C prev = out[(i + n - 1) % n];
        C cur = out[i];
        C nxt = out[(i + 1) % n];
        if (std::fabs(cross(cur - prev, nxt - cur)) > 1e-16 * std::max(scale * scale, 1e-30)) {
            final.push_back(cur);
        }
    }
    if (final.size() < 3) return {};
    if (polygon_area(final) < min_area) return {};
    return final;
}

PolygonSampler::PolygonSampler(const Polygon& p) : poly_(p) {
    if (poly_.size() < 3) return;
    cum_.resize(poly_.size() - 2);
    double acc = 0.0;
    for (std::size_t i = 1; i + 1 < poly_.size(); ++i) {
        C u = poly_[i] - poly_[0];
        C v = poly_[i + 1] - poly_[0];
        acc += 0.5 * std::fabs(cross(u, v));
        cum_[i - 1] = acc;
    }
    total_ = acc;
}

C PolygonSampler::sample(Rng& rng) const {
    if (poly_.size() < 3 || total_ <= 0.0) {
        return poly_.empty() ? C(0.0, 0.0) : poly_[0];
    }
    double pick = rng.uniform() * total_;
    std::size_t tri = std::lower_bound(cum_.begin(), cum_.end(), pick) - cum_.begin();
    tri = std::min(tri, cum_.size() - 1);
    C a = poly_[0];
    C b = poly_[tri + 1];
    C c = poly_[tri + 2];
    double r1 = rng.uniform();
    double r2 = rng.uniform();
    if (r1 + r2 > 1.0) {
        r1 = 1.0 - r1;
        r2 = 1.0 - r2;
    }
    return a + r1 * (b - a) + r2 * (c - a);
}

Polygon inscribed_disk_polygon(C center, double radius, int sides) {
    Polygon p(sides);
    for (int i = 0; i < sides; ++i) {
        double t = 2.0 * kPi * i / sides;
        p[i] = center + radius * C(std::cos(t), std::sin(t));
    }
    return p;
}

}  // namespace cxr
