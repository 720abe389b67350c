#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hemi/errors.hpp"
#include "hemi/fields.hpp"
#include "hemi/graphs.hpp"
#include "hemi/meanops.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace hemi;

namespace {

Vec planar_point(int n, double x, double y)
{
    Vec p = Vec::Zero(n);
    p(0) = x;
    p(1) = y;
    return p;
}

// Oracle for the Euclidean operator: central differences of the flux Du / W
// taken from the closed-form gradient only.
double divergence_oracle(const ScalarField& u, const Vec& x)
{
    const double d = 1e-5;
    double div = 0.0;
    for (int i = 0; i < u.dimension(); ++i) {
        Vec xp = x;
        Vec xm = x;
        xp(i) += d;
        xm(i) -= d;
        const Vec gp = u.gradient(xp);
        const Vec gm = u.gradient(xm);
        div += (gp(i) / std::sqrt(1.0 + gp.squaredNorm()) - gm(i) / std::sqrt(1.0 + gm.squaredNorm())) / (2.0 * d);
    }
    return div;
}

} // namespace

TEST_CASE("mean_curvature_euclidean equals div(Du / W)")
{
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 2 + trial % 3;
        const auto u = fields::random_bumps(n, rng);
        const Vec x = planar_point(n, 0.2, -0.3);
        CHECK(std::abs(mean_curvature_euclidean(u, x) - divergence_oracle(u, x)) <= 1e-6);
    }
}

TEST_CASE("mean curvature equals the trace of the shape operator")
{
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 40; ++trial) {
        const auto u = fields::random_bumps(3, rng);
        const Vec x = planar_point(3, -0.1, 0.25);
        CHECK(std::abs(mean_curvature_euclidean(u, x) - curvature_profile(shape_operator_euclidean(u, x)).mean_curvature)
              <= 1e-10);
        if (u.value(x) > 0.0) {
            CHECK(std::abs(mean_curvature_hyperbolic(u, x)
                           - curvature_profile(shape_operator_hyperbolic(u, x)).mean_curvature)
                  <= 1e-10);
        }
    }
}

TEST_CASE("constants of the example surfaces")
{
    for (int n : {2, 3, 5}) {
        const double crit = std::numbers::sqrt2 * n;
        for (double r : {0.0, 0.5, 0.9, 1.0}) {
            const Vec x = planar_point(n, r, 0.0);
            CHECK(std::abs(mean_curvature_hyperbolic(fields::u1(n), x) - n) <= 1e-9);
            CHECK(std::abs(mean_curvature_hyperbolic(fields::model_sphere(n), x) - crit) <= 1e-9);
            for (double eps : {0.1, 0.25, 0.49}) {
                const double expected = n * (1.0 + eps) / std::sqrt(1.0 + eps * eps);
                CHECK(std::abs(mean_curvature_hyperbolic(fields::u2(n, eps), x) - expected) <= 1e-9);
                CHECK(expected < crit);
            }
        }
    }
}

TEST_CASE("geodesic sphere mean curvature")
{
    CHECK(geodesic_sphere_mean_curvature(2.0, std::numbers::sqrt2, 3) == doctest::Approx(3.0 * std::numbers::sqrt2));
    CHECK(geodesic_sphere_mean_curvature(5.0, 1.0, 2) == 10.0);
    CHECK_THROWS_AS((void)geodesic_sphere_mean_curvature(1.0, 1.0, 2), NotContainedError);
    CHECK_THROWS_AS((void)geodesic_sphere_mean_curvature(1.0, 2.0, 2), NotContainedError);
    CHECK_THROWS_AS((void)geodesic_sphere_mean_curvature(1.0, 0.0, 2), NotContainedError);

    // Every member of the hyperbolic family carries sqrt(2) n.
    const SphereFamily fam{Ambient::hyperbolic};
    for (double q : {0.5, 1.0, 2.0, 7.0}) {
        CHECK(geodesic_sphere_mean_curvature(fam.center_height(q), fam.radius(q), 4)
              == doctest::Approx(fam.mean_curvature(4)));
        const auto vq = fields::v_q(2, q);
        const double r = 0.5 * std::min(1.0, q / std::numbers::sqrt2);
        CHECK(std::abs(mean_curvature_hyperbolic(vq, planar_point(2, r, 0.0)) - fam.mean_curvature(2)) <= 1e-9);
    }
}

TEST_CASE("sliding family boundary values")
{
    CHECK(std::abs(fields::v_q_value(2.0, 1.0) - 1.0) <= 1e-15);
    for (double q : {std::numbers::sqrt2, 1.5, 3.0}) {
        CHECK(fields::v_q_value(q, 1.0) > 1.0);
    }
    // v_q(r) >= r: the cap stays above the cone z = r.
    for (double q : {0.5, 1.0, std::numbers::sqrt2, 2.0, 3.0}) {
        const double rmax = std::min(1.0, q / std::numbers::sqrt2);
        for (int k = 0; k <= 200; ++k) {
            const double r = rmax * k / 200.0;
            CHECK(fields::v_q_value(q, r) >= r - 1e-15);
        }
    }
    CHECK_THROWS_AS((void)fields::v_q(2, 0.0), DomainError);
}

TEST_CASE("mean_curvature_hyperbolic rejects u <= 0")
{
    CHECK_THROWS_AS((void)mean_curvature_hyperbolic(fields::constant(2, -0.5), planar_point(2, 0, 0)), AmbientError);
}

TEST_CASE("total mean curvature: area integral agrees with the boundary flux")
{
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 10; ++trial) {
        const auto u = fields::random_bumps(2, rng);
        const auto r = total_mean_curvature(u, 1.0 / 64);
        // Staircase approximation of B_a costs O(h) times the size of H0.
        CHECK(std::abs(r.integral_value - r.flux_value) <= 0.5);
        CHECK(std::abs(r.flux_value) <= 2.0 * std::numbers::pi * r.radius);
    }
    // Hemisphere: Du / W = -x, so the flux is exactly -2 pi a^2.
    const auto r = total_mean_curvature(fields::hemisphere(2), 1.0 / 128);
    const double exact = -2.0 * std::numbers::pi * r.radius * r.radius;
    CHECK(std::abs(r.flux_value - exact) <= 1e-12);
    CHECK(std::abs(r.integral_value - exact) <= 2e-2);
    CHECK(r.pass);
    CHECK(r.bound == doctest::Approx(2.0 * std::numbers::pi));
}

TEST_CASE("total mean curvature trend for the hemisphere")
{
    const auto t = total_mean_curvature_trend(fields::hemisphere(2), {1.0 / 64, 1.0 / 128, 1.0 / 256});
    CHECK(t.monotone);
    CHECK(std::abs(std::abs(t.extrapolated) - t.bound) <= 1e-2);
    CHECK_THROWS_AS((void)total_mean_curvature_trend(fields::hemisphere(2), {1.0 / 128, 1.0 / 64}), ConfigError);
}

TEST_CASE("total mean curvature configuration errors")
{
    CHECK_THROWS_AS((void)total_mean_curvature(fields::hemisphere(2), 0.2), ConfigError);
    CHECK_THROWS_AS((void)total_mean_curvature(fields::hemisphere(3), 0.05), ConfigError);
    CHECK(unit_ball_volume(2) == doctest::Approx(std::numbers::pi));
    CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * std::numbers::pi / 3.0));
}

TEST_CASE("counterexample report")
{
    for (int n : {2, 3}) {
        const auto r = counterexample_report(n, 0.25, 1.0 / 64);
        CHECK(r.pass);
        REQUIRE(r.claims.size() == 4);
        CHECK(r.min_u1_minus_v >= -1e-12);
        CHECK(r.min_v_minus_u2 >= -1e-12);
        CHECK(r.max_u1_minus_v > 0.0);
    }
    CHECK_THROWS_AS((void)counterexample_report(2, 0.5, 0.01), DomainError);
    CHECK_THROWS_AS((void)counterexample_report(2, 0.0, 0.01), DomainError);
    CHECK_THROWS_AS((void)counterexample_report(2, 0.2, 0.5), ConfigError);
}
