#pragma once

#include <span>
#include <vector>

#include "cx/common.hpp"
#include "cx/rng.hpp"

namespace cxr {

/// Convex polygon, counterclockwise vertex list.
using Polygon = std::vector<C>;

double polygon_area(const Polygon& p);

C polygon_centroid(const Polygon& p);

/// Exact sign test: all cross products of consecutive edges >= -tol * scale^2.
bool is_convex_ccw(const Polygon& p, double tol = 1e-12);

/// Max pairwise vertex distance.
double polygon_diameter(const Polygon& p);

/// Signed margin >= 0 required strictly inside; negative margin admits
/// points slightly outside.
bool point_in_convex(const Polygon& p, C z, double margin = 0.0);

/// Clip by the half-plane { z : Re(conj(n) * (z - p0)) >= 0 }, n the inward
/// normal. Result is convex, possibly empty.
Polygon clip_half_plane(const Polygon& poly, C p0, C inward_normal);

/// Split by the oriented line through a and b; first result on the left of
/// a->b, second on the right. The pieces exactly partition the input.
std::pair<Polygon, Polygon> split_by_line(const Polygon& poly, C a, C b);

/// Drop near-collinear vertices and enforce a minimum area; returns an
/// empty polygon when degenerate.
Polygon tidy_polygon(Polygon p, double min_area);

/// Uniform sample inside a convex polygon (fan triangulation).
class PolygonSampler {
  public:
    explicit PolygonSampler(const Polygon& p);
    C sample(Rng& rng) const;
    double area() const { return total_; }

  private:
    Polygon poly_;
    std::vector<double> cum_;
    double total_ = 0.0;
};

/// Regular polygon inscribed in the circle |z - center| = radius.
Polygon inscribed_disk_polygon(C center, double radius, int sides);

}  // namespace cxr
