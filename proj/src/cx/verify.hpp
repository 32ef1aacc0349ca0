#pragma once

#include "cx/curve.hpp"
#include "cx/decomposition.hpp"
#include "cx/determinants.hpp"
#include "cx/report.hpp"

namespace cxr {

/// Sampling domains sit inside one sector  0 < y < eps * x  (rotations of it
/// cover the plane; homogeneity makes one representative enough).
struct SectorSpec {
    double eps = 0.05;
    double x_lo = 0.35;
    double x_hi = 0.95;
};

struct MonomialJacobianConfig {
    int d = 3;
    int N = 6;
    int m = 2;
    C lead{1.0, 0.0};
    SectorSpec sector;
    std::uint64_t samples = 100000;
    double floor = 1e-12;
    std::uint64_t seed = 1;
    int shards = 64;
    double degenerate_rel = 1e-5;  // min pairwise |h_k - h_l| relative to scale
};

/// |J(z,h)| >= c(d,N) v(h) max_k m^{-1} sum_j |phi^(d)(z+b_j+h_k)| with all
/// points in one sector; reports the empirical constant.
VerificationReport verify_jacobian_monomial(const MonomialJacobianConfig& cfg);

struct SimpleD3Config {
    std::uint64_t samples_per_cell = 1000;
    double floor = 1e-12;
    std::uint64_t seed = 1;
    double degenerate_rel = 1e-5;
    double min_cell_diameter = 1e-7;
    std::uint64_t crosscheck_per_cell = 0;  // jacobian_integral_d3 comparisons
    double crosscheck_tol = 1e-6;
};

/// Per-cell |J(u1,u2,u3)| >= c V(u) max_i |phi'''(u_i)| over a certificate.
VerificationReport verify_jacobian_simple_d3(const Certificate& cert, const Poly& phi,
                                             const SimpleD3Config& cfg);

struct TorsionConfig {
    SectorSpec sector;
    std::uint64_t samples = 100000;
    double floor = 1e-12;
    std::uint64_t seed = 1;
    int shards = 64;
};

/// |tau(z,h)| >= c sum_i m^{-1} sum_j |phi^(d)(z+b_j+h_i)| in one sector.
VerificationReport verify_torsion_bound(const OffspringCurve& o, const TorsionConfig& cfg);

/// Same bound with all points confined to one certificate cell.
VerificationReport verify_torsion_bound_cell(const OffspringCurve& o, const ConvexCell& cell,
                                             const TorsionConfig& cfg);

struct SublevelConfig {
    int d = 3;
    std::uint64_t samples = 10000000;
    double u_min = 1e-4;
    double u_max = 1e-1;
    int grid_points = 13;
    std::uint64_t min_hits = 100;
    std::uint64_t seed = 1;
    int shards = 64;
};

struct SublevelRow {
    double u = 0.0;
    std::uint64_t hits = 0;
    double measure = 0.0;
    bool used = true;  // dropped from the fit when hits < min_hits
};

struct SublevelReport {
    SublevelConfig cfg;
    std::vector<SublevelRow> rows;
    double slope = 0.0;
    double intercept = 0.0;  // log-measure intercept at log u = 0
    double target = 0.0;     // 4 / d
    double domain_volume = 0.0;
    Json to_json() const;
    std::string to_csv() const;
};

/// Monte Carlo measure of { h : v(h) <= u } on B(0,2)^{d-1} with a
/// log-log slope fit against the 4/d law.
SublevelReport verify_sublevel(const SublevelConfig& cfg);

struct WeightGrowthConfig {
    int d = 3;
    int N = 4;
    std::vector<double> R_grid{2.0, 4.0, 8.0, 16.0, 32.0};
    int quad_nodes = 128;
};

struct WeightGrowthRow {
    double R = 0.0;
    double integral = 0.0;
    double closed_form = 0.0;
};

struct WeightGrowthReport {
    WeightGrowthConfig cfg;
    std::vector<WeightGrowthRow> rows;
    double slope = 0.0;
    double analytic_slope = 0.0;  // 4(N-d)/(d^2+d) + 2
    Json to_json() const;
    std::string to_csv() const;
};

/// int_{|z|<=R} w dmu for phi = z^N by polar quadrature, with the closed
/// form (2 pi / (beta+2)) (c_d N!/(N-d)!)^{4/(d^2+d)} R^{beta+2}.
WeightGrowthReport weight_growth_exponent(const WeightGrowthConfig& cfg);

struct Parallelepiped {
    std::vector<double> anchor;            // gamma(a) embedded, 2d reals
    std::vector<double> generator_matrix;  // 2d x 2d row-major
    double volume = 0.0;                   // |det(generator_matrix)|
    double closed_form = 0.0;              // 2^{2d} (2!..d!)^{-2} eps^{d^2+d} |tau|^2
};

/// Image of the Taylor box under z_j -> (2 eps^j / j!) gamma^(j)(a).
Parallelepiped build_parallelepiped(const SimpleCurve& c, C a, double eps);

struct ContainmentConfig {
    double eps_start = 1e-2;
    int max_halvings = 30;
    std::uint64_t samples = 10000;
    std::uint64_t seed = 1;
    std::vector<double> ratio_sweep;  // eps values for the Lebesgue-ratio report
    std::uint64_t ratio_samples = 20000;
    double window_factor = 6.0;  // ratio integral window |z - a| <= factor * eps
};

struct ContainmentRow {
    double eps = 0.0;
    double integral = 0.0;  // int chi_P(gamma(z)) w dmu over the window
    double volume = 0.0;
    double ratio = 0.0;  // integral / |P|^{2/(d^2+d)}
};

struct ContainmentReport {
    double eps_found = 0.0;
    double fraction = 0.0;  // containment fraction at eps_found
    std::uint64_t samples = 0;
    double volume = 0.0;
    double closed_form = 0.0;
    std::vector<ContainmentRow> sweep;
    std::uint64_t seed = 0;
    Json to_json() const;
    std::string to_csv() const;
};

/// Adaptive-epsilon containment of gamma(a+z), |z| <= eps, in the
/// parallelepiped box |coord_j| <= 2 eps^j, plus the ratio sweep bounded in
/// the sharpness argument. Throws when no eps in range reaches 100%.
ContainmentReport verify_containment(const SimpleCurve& c, C a, const ContainmentConfig& cfg);

}  // namespace cxr
