#pragma once

#include "hemi/field.hpp"
#include "hemi/report.hpp"

#include <vector>

namespace hemi {

/// The one-parameter comparison family S(q).
///
/// Euclidean: unit spheres centred at (0, ..., 0, q), mean curvature n with
/// respect to the inward normal.
/// Hyperbolic: geodesic spheres of Euclidean radius q / sqrt 2 centred at
/// height q; their lower caps are the graphs of v_q and all carry hyperbolic
/// mean curvature sqrt(2) n.
struct SphereFamily {
    Ambient ambient = Ambient::euclidean;

    [[nodiscard]] double center_height(double q) const noexcept { return q; }
    [[nodiscard]] double radius(double q) const noexcept;
    [[nodiscard]] double mean_curvature(int n) const noexcept;
};

/// Sum of a~^{ij}(Du) u_ij with a~^{ij} = (delta_ij - u_i u_j / W^2) / W, the
/// expanded form of div(Du / W). Upward normal: the hemisphere gives -n.
[[nodiscard]] double mean_curvature_euclidean(const ScalarField& u, const Vec& x);

/// n / W + u H_0(u). Throws AmbientError when u(x) <= 0.
[[nodiscard]] double mean_curvature_hyperbolic(const ScalarField& u, const Vec& x);

/// (q / a) n. Throws NotContainedError unless q > a > 0.
[[nodiscard]] double geodesic_sphere_mean_curvature(double q, double a, int n);

/// Total mean curvature over the exhausting disk B_a, a = 1 - 2h.
struct QuadratureReport {
    double integral_value = 0.0; // midpoint rule over B_a
    double flux_value = 0.0;     // trapezoid rule for the boundary flux over dB_a
    double bound = 0.0;          // n Vol(B_1)
    double grid_h = 0.0;
    double radius = 0.0;         // a
    double tolerance = 0.0;      // 10 h^2
    double slack = 0.0;          // bound - |integral_value|
    bool pass = false;           // slack >= -tolerance
};

void to_json(Json& j, const QuadratureReport& r);

/// Volume of the unit ball in R^n.
[[nodiscard]] double unit_ball_volume(int n);

/// Planar (n = 2) analytic fields only. Throws ConfigError when h > 0.1 or
/// the field is not planar and closed-form.
[[nodiscard]] QuadratureReport total_mean_curvature(const ScalarField& u, double h);

/// Reports along a decreasing sequence of spacings plus the a -> 1 limit
/// obtained by linear extrapolation in a from the last two radii.
struct ExhaustionTrend {
    std::vector<QuadratureReport> steps;
    double extrapolated = 0.0;
    double bound = 0.0;
    bool monotone = false; // |integral| non-decreasing as h shrinks
};

[[nodiscard]] ExhaustionTrend total_mean_curvature_trend(const ScalarField& u, const std::vector<double>& spacings);

/// Grid verification that u1 = 1, u2 and the model sphere v defeat the
/// comparison principle for the hyperbolic mean curvature operator.
struct CounterexampleReport {
    int n = 2;
    double epsilon = 0.0;
    double grid_h = 0.0;
    std::vector<Claim> claims;
    double min_u1_minus_v = 0.0;
    double min_v_minus_u2 = 0.0;
    double max_u1_minus_v = 0.0;
    double max_v_minus_u2 = 0.0;
    bool pass = false;
};

void to_json(Json& j, const CounterexampleReport& r);

/// Throws DomainError unless 0 < epsilon < 1/2, ConfigError for bad h.
[[nodiscard]] CounterexampleReport counterexample_report(int n, double epsilon, double h);

} // namespace hemi
