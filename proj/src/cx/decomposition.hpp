#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cx/geometry.hpp"
#include "cx/polynomial.hpp"
#include "cx/report.hpp"

namespace cxr {

enum class AnnulusKind { Gap, Dyadic };

/// Radial band around one root of phi^(d). Raw bounds follow the defining
/// inequalities (gap: [A|z_j|, |z_{j+1}|/A]; dyadic: (|z_j|/A1, A1|z_j|));
/// effective bounds are the disjoint cover after ceding every gap/dyadic
/// overlap strip to the dyadic side.
struct RadialInterval {
    AnnulusKind kind = AnnulusKind::Gap;
    int index_j = 0;  // roots counted at or below this band
    double raw_lo = 0.0, raw_hi = 0.0;
    double lo = 0.0, hi = 0.0;  // effective, clipped to [0, reach]
    bool empty = false;
};

struct CellTags {
    int root_index = 0;
    int sector_index = 0;
    AnnulusKind kind = AnnulusKind::Gap;
    int annulus_index = 0;
};

struct ConvexCell {
    Polygon vertices;  // counterclockwise
    CellTags tags;
    double area = 0.0;
    double comparability = 1.0;  // K: max(ratio, 1/ratio) over samples
    double g_spread = 0.0;       // max angular deviation of g from its mean direction
    double g_mean_dir = 0.0;
    double g_min_abs = 0.0;
    double g_max_abs = 0.0;
};

/// Per-root data of the shifted polynomial P(w) = phi^(d)(w + root).
struct RootContext {
    C root{0.0, 0.0};
    int multiplicity = 1;
    std::vector<C> shifted_roots;  // ordered by modulus ascending, w-coordinates
    std::vector<double> moduli;
    std::vector<C> shifted_coeffs;  // nu_k of P(w)
    std::vector<RadialInterval> intervals;
    double reach = 0.0;
};

struct DecompParams {
    double b0 = 8.0;
    double c0_factor = 3.0;  // C0 = c0_factor * b0
    double delta0 = 0.1;     // A1 = (1 + delta0) * A
    double sector_eps = 0.1;
    double kmax = 16.0;
    double coverage_tol = 1e-3;
    int max_depth = 16;
    std::size_t max_cells = 60000;
    int check_samples = 96;
    std::size_t coverage_samples = 100000;
    std::uint64_t seed = 1;
    int max_eps_halvings = 4;
    double cluster_rel = 1e-6;
    int disk_polygon_sides = 720;
};

struct Certificate {
    bool trivial_zero_weight = false;  // deg phi < d: the weight vanishes identically
    int d = 3;
    C disk_center{0.0, 0.0};
    double disk_radius = 2.0;
    double A = 0.0, A1 = 0.0;
    double sector_eps_used = 0.0;  // final half-angle parameter after halving
    double sector_width = 0.0;     // wedge angular width = atan(sector_eps_used)
    int sectors = 0;
    int degree_P = 0;
    DecompParams params;
    std::vector<RootContext> roots;
    std::vector<ConvexCell> cells;
    double coverage_fraction = 0.0;

    Json to_json() const;
};

/// Gap and dyadic radial bands for ordered root moduli; the outer gap is
/// clipped to [0, reach].
std::vector<RadialInterval> gap_dyadic_annuli(const RootOrdering& roots, double A, double A1,
                                              double reach);

struct CoefficientComparability {
    C nu_j{0.0, 0.0};
    double predicted = 0.0;  // |D| * prod_{l > j} |z_l|
};

/// Coefficient vs root-tail product, Lemma-style; requires the factored form.
CoefficientComparability coefficient_comparability(const Poly& p, int j);

/// The root-cancellation factor g at w (shifted coordinates), split at
/// index j: prod_{i<=j} (1 - z_i/w) * prod_{l>j} (1 - w/z_l).
C g_value(const RootContext& ctx, int j, C w);

/// Voronoi-cell x sector x annulus decomposition of the disk, refined until
/// every cell passes the comparability and g-angular-spread checks.
Certificate build_certificate(const Poly& phi, int d, C center, double radius,
                              const DecompParams& params);

struct GBoundRow {
    std::size_t cell_index = 0;
    int annulus_index = 0;
    double min_abs_g = 0.0;
    double threshold = 0.0;
    bool flagged = false;
};

struct GBoundReport {
    double threshold = 0.0;  // 2^{2-N} * (1 - tol)
    double tol = 0.0;
    std::vector<GBoundRow> rows;
    bool all_pass = true;
    std::string to_csv() const;
};

/// Min sampled |g| per dyadic cell against the 2^{2-N} separation bound.
GBoundReport g_lower_bound_check(const Certificate& cert, double tol = 0.05,
                                 int samples_per_cell = 256);

/// Uniform-grid index over cell bounding boxes for fast point location.
class CellLocator {
  public:
    explicit CellLocator(const Certificate& cert, int grid = 192);
    /// Number of cells containing z (interior by `margin`); if nonzero and
    /// first_hit is given, receives the lowest such cell index.
    int count_hits(C z, double margin = 0.0, int* first_hit = nullptr) const;

  private:
    const Certificate& cert_;
    double x0_, y0_, cellsize_;
    int nx_, ny_;
    std::vector<std::vector<int>> bins_;
};

}  // namespace cxr
