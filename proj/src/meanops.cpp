#include "hemi/meanops.hpp"

#include "hemi/errors.hpp"
#include "hemi/fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace hemi {

double SphereFamily::radius(double q) const noexcept
{
    return ambient == Ambient::euclidean ? 1.0 : q / std::numbers::sqrt2;
}

double SphereFamily::mean_curvature(int n) const noexcept
{
    return ambient == Ambient::euclidean ? static_cast<double>(n) : std::numbers::sqrt2 * n;
}

double mean_curvature_euclidean(const ScalarField& u, const Vec& x)
{
    const Jet j = u.jet(x);
    const int n = u.dimension();
    const double W2 = 1.0 + j.gradient.squaredNorm();
    const double W = std::sqrt(W2);
    const Mat a = (Mat::Identity(n, n) - j.gradient * j.gradient.transpose() / W2) / W;
    return a.cwiseProduct(j.hessian).sum();
}

double mean_curvature_hyperbolic(const ScalarField& u, const Vec& x)
{
    const Jet j = u.jet(x);
    if (!(j.value > 0.0)) {
        std::ostringstream os;
        os << "mean_curvature_hyperbolic: u(x) = " << j.value << " is not in the upper half-space";
        throw AmbientError(os.str());
    }
    const double W = std::sqrt(1.0 + j.gradient.squaredNorm());
    return u.dimension() / W + j.value * mean_curvature_euclidean(u, x);
}

double geodesic_sphere_mean_curvature(double q, double a, int n)
{
    if (!(a > 0.0) || !(q > a)) {
        std::ostringstream os;
        os << "geodesic sphere with centre height " << q << " and radius " << a
           << " is not contained in the upper half-space";
        throw NotContainedError(os.str());
    }
    return q / a * n;
}

void to_json(Json& j, const QuadratureReport& r)
{
    j = Json{{"claim", "|integral of H0 over B_a| <= n Vol(B_1)"},
             {"lhs", std::abs(r.integral_value)},
             {"rhs", r.bound},
             {"slack", r.slack},
             {"grid_h", r.grid_h},
             {"tolerance", r.tolerance},
             {"pass", r.pass},
             {"integral_value", r.integral_value},
             {"flux_value", r.flux_value},
             {"radius", r.radius}};
}

double unit_ball_volume(int n)
{
    return std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

QuadratureReport total_mean_curvature(const ScalarField& u, double h)
{
    if (!(h > 0.0) || h > 0.1) {
        throw ConfigError("total_mean_curvature: grid spacing must lie in (0, 0.1]");
    }
    if (u.dimension() != 2 || u.is_grid()) {
        throw ConfigError("total_mean_curvature: needs a planar closed-form field");
    }
    const double a = 1.0 - 2.0 * h;

    // Midpoint rule: cells of side h centred at ((i + 1/2) h, (j + 1/2) h).
    const int m = static_cast<int>(std::ceil(a / h)) + 1;
    std::vector<double> cells;
    Vec x(2);
    for (int i = -m; i < m; ++i) {
        for (int j = -m; j < m; ++j) {
            x << (i + 0.5) * h, (j + 0.5) * h;
            if (x.norm() < a) {
                cells.push_back(mean_curvature_euclidean(u, x) * h * h);
            }
        }
    }

    // Boundary flux of Du / W through the circle of radius a.
    const int samples = std::max(64, 4 * static_cast<int>(std::ceil(2.0 * std::numbers::pi * a / h)));
    std::vector<double> flux;
    flux.reserve(static_cast<std::size_t>(samples));
    const double ds = 2.0 * std::numbers::pi * a / samples;
    for (int k = 0; k < samples; ++k) {
        const double t = 2.0 * std::numbers::pi * k / samples;
        Vec nu(2);
        nu << std::cos(t), std::sin(t);
        const Jet jet = u.jet(a * nu);
        flux.push_back(jet.gradient.dot(nu) / std::sqrt(1.0 + jet.gradient.squaredNorm()) * ds);
    }

    QuadratureReport r;
    r.integral_value = pairwise_sum(cells);
    r.flux_value = pairwise_sum(flux);
    r.bound = 2.0 * unit_ball_volume(2);
    r.grid_h = h;
    r.radius = a;
    r.tolerance = 10.0 * h * h;
    r.slack = r.bound - std::abs(r.integral_value);
    r.pass = r.slack >= -r.tolerance;
    return r;
}

ExhaustionTrend total_mean_curvature_trend(const ScalarField& u, const std::vector<double>& spacings)
{
    if (spacings.size() < 2) {
        throw ConfigError("total_mean_curvature_trend: need at least two spacings");
    }
    ExhaustionTrend t;
    for (double h : spacings) {
        t.steps.push_back(total_mean_curvature(u, h));
    }
    t.bound = t.steps.front().bound;
    t.monotone = true;
    for (std::size_t i = 1; i < t.steps.size(); ++i) {
        if (t.steps[i].radius <= t.steps[i - 1].radius) {
            throw ConfigError("total_mean_curvature_trend: spacings must decrease");
        }
        if (std::abs(t.steps[i].integral_value) < std::abs(t.steps[i - 1].integral_value)) {
            t.monotone = false;
        }
    }
    const auto& p = t.steps[t.steps.size() - 2];
    const auto& l = t.steps.back();
    t.extrapolated = l.integral_value + (l.integral_value - p.integral_value) * (1.0 - l.radius) / (l.radius - p.radius);
    return t;
}

void to_json(Json& j, const CounterexampleReport& r)
{
    j = Json{{"n", r.n},
             {"epsilon", r.epsilon},
             {"grid_h", r.grid_h},
             {"claims", r.claims},
             {"min_u1_minus_v", r.min_u1_minus_v},
             {"min_v_minus_u2", r.min_v_minus_u2},
             {"max_u1_minus_v", r.max_u1_minus_v},
             {"max_v_minus_u2", r.max_v_minus_u2},
             {"pass", r.pass}};
}

CounterexampleReport counterexample_report(int n, double epsilon, double h)
{
    if (!(epsilon > 0.0 && epsilon < 0.5)) {
        throw DomainError("counterexample_report: epsilon must lie in (0, 1/2)");
    }
    if (!(h > 0.0) || h > 0.1) {
        throw ConfigError("counterexample_report: grid spacing must lie in (0, 0.1]");
    }
    if (n < 2) {
        throw DomainError("counterexample_report: needs n >= 2");
    }
    constexpr double kCurvatureTol = 1e-9;
    constexpr double kOrderTol = 1e-12;

    const ScalarField f1 = fields::u1(n);
    const ScalarField f2 = fields::u2(n, epsilon);
    const ScalarField v = fields::model_sphere(n);
    const double critical = std::numbers::sqrt2 * n;
    const double h2_exact = n * (1.0 + epsilon) / std::sqrt(1.0 + epsilon * epsilon);

    double h1_max = -INFINITY;
    double h1_dev = 0.0;
    double h2_max = -INFINITY;
    double h2_dev = 0.0;
    double min_a = INFINITY;
    double min_b = INFINITY;
    double max_a = -INFINITY;
    double max_b = -INFINITY;

    // The fields are radial, so the planar slice (x1, x2, 0, ..., 0) of the
    // closed unit disk covers every radius.
    const int m = static_cast<int>(std::floor(1.0 / h));
    Vec x = Vec::Zero(n);
    for (int i = -m; i <= m; ++i) {
        for (int j = -m; j <= m; ++j) {
            x(0) = i * h;
            x(1) = j * h;
            if (x.norm() > 1.0) {
                continue;
            }
            const double H1 = mean_curvature_hyperbolic(f1, x);
            const double H2 = mean_curvature_hyperbolic(f2, x);
            h1_max = std::max(h1_max, H1);
            h2_max = std::max(h2_max, H2);
            h1_dev = std::max(h1_dev, std::abs(H1 - n));
            h2_dev = std::max(h2_dev, std::abs(H2 - h2_exact));
            const double a = f1.sample(x) - v.sample(x);
            const double b = v.sample(x) - f2.sample(x);
            min_a = std::min(min_a, a);
            min_b = std::min(min_b, b);
            max_a = std::max(max_a, a);
            max_b = std::max(max_b, b);
        }
    }

    double bdy_dev = 0.0;
    constexpr int kRimSamples = 720;
    for (int k = 0; k < kRimSamples; ++k) {
        const double t = 2.0 * std::numbers::pi * k / kRimSamples;
        x.setZero();
        x(0) = std::cos(t);
        x(1) = std::sin(t);
        x /= x.norm();
        for (const ScalarField* f : {&f1, &f2, &v}) {
            bdy_dev = std::max(bdy_dev, std::abs(f->sample(x) - 1.0));
        }
        // Ordering on the rim itself.
        min_a = std::min(min_a, f1.sample(x) - v.sample(x));
        min_b = std::min(min_b, v.sample(x) - f2.sample(x));
    }

    CounterexampleReport r;
    r.n = n;
    r.epsilon = epsilon;
    r.grid_h = h;
    r.min_u1_minus_v = min_a;
    r.min_v_minus_u2 = min_b;
    r.max_u1_minus_v = max_a;
    r.max_v_minus_u2 = max_b;

    Claim c1{"H(u1) = n < sqrt(2) n", h1_max, critical, critical - h1_max, h, kCurvatureTol, h1_dev, false};
    c1.pass = h1_dev <= kCurvatureTol && c1.slack > 0.0;
    Claim c2{"H(u2) = n (1 + eps) / sqrt(1 + eps^2) < sqrt(2) n", h2_max, critical, critical - h2_max, h,
             kCurvatureTol, h2_dev, false};
    c2.pass = h2_dev <= kCurvatureTol && c2.slack > 0.0;
    const double order_min = std::min(min_a, min_b);
    Claim c3{"u1 >= v >= u2 on the closed unit disk", order_min, 0.0, order_min, h, kOrderTol, 0.0, false};
    c3.pass = order_min >= -kOrderTol;
    Claim c4{"u1 = u2 = v = 1 on the unit circle", bdy_dev, 0.0, kOrderTol - bdy_dev, h, kOrderTol, bdy_dev, false};
    c4.pass = bdy_dev <= kOrderTol;
    r.claims = {c1, c2, c3, c4};
    r.pass = all_pass(r.claims);
    return r;
}

} // namespace hemi
