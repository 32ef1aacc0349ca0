#pragma once

#include <span>
#include <string>
#include <vector>

#include "cx/curve.hpp"
#include "cx/report.hpp"

namespace cxr {

struct FunctionSpec {
    enum class Kind { IndicatorBall, GaussianBump, Constant };
    Kind kind = Kind::IndicatorBall;
    double radius = 1.0;  // indicator/constant support radius
    C center{0.0, 0.0};   // gaussian center
    double width = 1.0;   // gaussian width; support truncated at 6 widths
    double amplitude = 1.0;
};

struct QuadOptions {
    double rel_tol = 1e-8;
    int max_level = 6;
    int base_nodes = 8;
    double oscillation_factor = 10.0;  // nodes per phase cycle guard for T_lambda
};

struct QuadValue {
    C value{0.0, 0.0};
    bool converged = false;
    int levels_used = 0;
    double last_diff = 0.0;
};

/// T f(x) = int e^{i x . gamma(z)} f(z) w(z) dmu(z); x has 2d components.
QuadValue extension_value(const SimpleCurve& c, const FunctionSpec& f, std::span<const double> x,
                          const QuadOptions& opt = {});

/// || f ||_{L^1(w dmu)} over the support of f, same quadrature contract.
QuadValue weighted_l1_norm(const OffspringCurve& o, const FunctionSpec& f,
                           const QuadOptions& opt = {});

/// psi(x) = prod max(0, 1 - x_i^2)^2, the fixed C^2 cutoff.
double cutoff_bump(std::span<const double> x);

/// T_lambda f(x) = psi(x) int_{B(1)} e^{i lambda x . Gamma(z)} f(z) w(z) dmu,
/// with oscillation-aware node density.
QuadValue t_lambda_value(const OffspringCurve& o, const FunctionSpec& f,
                         std::span<const double> x, double lambda, const QuadOptions& opt = {});

struct ScanRow {
    double grid_value = 0.0;
    std::string probe_id;
    double abs_value = 0.0;
    bool converged = true;
};

struct ExtensionScanResult {
    std::vector<double> grid;    // R or lambda values, strictly increasing
    std::vector<double> values;  // fitted series (center values / probe moduli)
    double fitted_exponent = 0.0;
    double residual = 0.0;  // max |fit - data| on the log-log scale
    double analytic_exponent = 0.0;
    double a_found = 0.0;
    bool all_converged = true;
    std::vector<std::vector<double>> probe_points;
    std::vector<ScanRow> rows;

    Json to_json(const std::string& id) const;
    std::string to_csv() const;
};

struct HomogeneityConfig {
    std::vector<double> R_grid{2.0, 4.0, 8.0, 16.0, 32.0};
    double a_floor = 1.0 / 4096.0;
    QuadOptions quad;
};

/// Probes |T chi_{B_R}| at the center and corners of a E_R, searching the
/// largest dyadic a keeping every probe above half the center value, and
/// fits the R-exponent of the center value.
ExtensionScanResult homogeneity_scan(const SimpleCurve& c, const HomogeneityConfig& cfg);

struct LambdaScanConfig {
    std::vector<double> lambda_grid{10, 20, 40, 80, 160, 320, 640};
    std::vector<double> x;  // probe point, 2d reals
    FunctionSpec f{FunctionSpec::Kind::GaussianBump, 1.0, C(0.1, 0.05), 0.25, 1.0};
    QuadOptions quad;
};

/// Exploratory |T_lambda f(x)| decay scan at a fixed probe; reports the fit
/// with no pass target.
ExtensionScanResult t_lambda_scan(const OffspringCurve& o, const LambdaScanConfig& cfg);

}  // namespace cxr
