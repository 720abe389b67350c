#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hemi/errors.hpp"
#include "hemi/fields.hpp"
#include "hemi/graphs.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <random>

using namespace hemi;

namespace {

Mat random_symmetric(std::mt19937_64& rng, int n, double scale)
{
    std::normal_distribution<double> d(0.0, scale);
    Mat M(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            M(i, j) = M(j, i) = d(rng);
        }
    }
    return M;
}

Vec planar_point(int n, double x, double y)
{
    Vec p = Vec::Zero(n);
    p(0) = x;
    p(1) = y;
    return p;
}

// Independent route: principal curvatures as the generalized eigenvalues of
// the pencil (h, g).
Vec pencil_eigenvalues(const ShapeData& s)
{
    Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(s.second_form, s.metric);
    return es.eigenvalues();
}

} // namespace

TEST_CASE("jacobi_eigen agrees with Eigen's symmetric solver")
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 1 + trial % 8;
        const Mat M = random_symmetric(rng, n, 2.0);
        const auto mine = jacobi_eigen(M);
        Eigen::SelfAdjointEigenSolver<Mat> ref(M);
        CHECK((mine.values - ref.eigenvalues()).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + M.norm()));
        const Mat recon = mine.vectors * mine.values.asDiagonal() * mine.vectors.transpose();
        CHECK((recon - M).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + M.norm()));
    }
}

TEST_CASE("hemisphere: Euclidean curvatures are -1 with the upward normal")
{
    for (int n : {2, 3, 5}) {
        const auto u = fields::hemisphere(n);
        for (double r : {0.0, 0.3, 0.7, 0.95}) {
            const auto s = shape_operator_euclidean(u, planar_point(n, r * 0.6, r * 0.8));
            const auto p = curvature_profile(s);
            for (int i = 0; i < n; ++i) {
                CHECK(p.kappa[i] == doctest::Approx(-1.0).epsilon(1e-12));
            }
            CHECK(p.mean_curvature == doctest::Approx(-n).epsilon(1e-12));
            CHECK(is_umbilic(p));
            CHECK(p.traceless_norm_sq <= 1e-20);
        }
    }
}

TEST_CASE("hemisphere on the boundary plane is totally geodesic in hyperbolic space")
{
    const auto u = fields::hemisphere(3);
    for (double r : {0.0, 0.4, 0.9}) {
        const auto p = curvature_profile(shape_operator_hyperbolic(u, planar_point(3, r, 0.0)));
        for (int i = 0; i < 3; ++i) {
            CHECK(std::abs(p.kappa[i]) <= 1e-12);
        }
    }
}

TEST_CASE("model sphere is umbilic with curvature sqrt 2")
{
    for (int n : {2, 3, 4}) {
        const auto v = fields::model_sphere(n);
        for (double r : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            const auto p = curvature_profile(shape_operator_hyperbolic(v, planar_point(n, 0.0, r)));
            for (int i = 0; i < n; ++i) {
                CHECK(std::abs(p.kappa[i] - std::numbers::sqrt2) <= 1e-9);
            }
            CHECK(p.traceless_norm_sq <= 1e-12);
            CHECK(std::abs(p.mean_curvature - std::numbers::sqrt2 * n) <= 1e-9);
        }
    }
}

TEST_CASE("flat graph has zero curvature; paraboloid vertex has curvature scale")
{
    Vec slope(2);
    slope << 0.3, -1.2;
    const auto p = curvature_profile(shape_operator_euclidean(fields::affine(2, 1.0, slope), planar_point(2, 0.2, 0.1)));
    CHECK(std::abs(p.kappa[0]) <= 1e-15);
    CHECK(std::abs(p.kappa[1]) <= 1e-15);

    const auto q = curvature_profile(shape_operator_euclidean(fields::paraboloid(3, 2.5), Vec::Zero(3)));
    for (int i = 0; i < 3; ++i) {
        CHECK(q.kappa[i] == doctest::Approx(2.5).epsilon(1e-14));
    }
}

TEST_CASE("saddle vertex has curvatures -2s and 2s")
{
    const auto p = curvature_profile(shape_operator_euclidean(fields::saddle(0.7, 0.0), planar_point(2, 0.0, 0.0)));
    CHECK(p.kappa[0] == doctest::Approx(-1.4));
    CHECK(p.kappa[1] == doctest::Approx(1.4));
    CHECK_FALSE(p.gamma_flags[1]);
}

TEST_CASE("principal curvatures match the (h, g) pencil on random graphs")
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> coord(-0.6, 0.6);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + trial % 4;
        const auto u = fields::random_bumps(n, rng);
        Vec x = Vec::Zero(n);
        for (int i = 0; i < n; ++i) {
            x(i) = coord(rng) / std::sqrt(static_cast<double>(n));
        }
        for (auto amb : {Ambient::euclidean, Ambient::hyperbolic}) {
            if (amb == Ambient::hyperbolic && !(u.value(x) > 0.0)) {
                continue;
            }
            const auto s = amb == Ambient::euclidean ? shape_operator_euclidean(u, x) : shape_operator_hyperbolic(u, x);
            const auto p = curvature_profile(s);
            const Vec ref = pencil_eigenvalues(s);
            for (int i = 0; i < n; ++i) {
                CHECK(std::abs(p.kappa[i] - ref(i)) <= 1e-10 * (1.0 + std::abs(ref(i))));
            }
            // A = g^{-1} h has the same spectrum.
            Eigen::EigenSolver<Mat> es(s.shape);
            Vec ev = es.eigenvalues().real();
            std::sort(ev.data(), ev.data() + n);
            for (int i = 0; i < n; ++i) {
                CHECK(std::abs(p.kappa[i] - ev(i)) <= 1e-9 * (1.0 + std::abs(ev(i))));
            }
        }
    }
}

TEST_CASE("hyperbolic shape operator is u A_euc + I / W")
{
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        const auto u = fields::random_bumps(3, rng);
        const Vec x = planar_point(3, 0.1, -0.2);
        if (!(u.value(x) > 0.0)) {
            continue;
        }
        const auto e = shape_operator_euclidean(u, x);
        const auto h = shape_operator_hyperbolic(u, x);
        const double W = std::sqrt(1.0 + u.gradient(x).squaredNorm());
        const Mat expected = u.value(x) * e.shape + Mat::Identity(3, 3) / W;
        CHECK((h.shape - expected).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("hyperbolic shape operator rejects u <= 0")
{
    CHECK_THROWS_AS((void)shape_operator_hyperbolic(fields::constant(2, 0.0), planar_point(2, 0.1, 0.1)), AmbientError);
    CHECK_THROWS_AS((void)shape_operator_hyperbolic(fields::constant(2, -1.0), planar_point(2, 0.1, 0.1)), AmbientError);
}

TEST_CASE("curvature_profile rejects an indefinite metric")
{
    ShapeData s = ShapeData::from_operator(Mat::Identity(2, 2), Ambient::euclidean);
    s.metric(1, 1) = -1.0;
    CHECK_THROWS_AS((void)curvature_profile(s), GeometryError);
}

TEST_CASE("identity residuals vanish on random symmetric shape operators")
{
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 2000; ++trial) {
        const int n = 2 + trial % 7;
        const Mat A = random_symmetric(rng, n, 1.5);
        const double H = A.trace();
        const double tol = 1e-12 * (1.0 + H * H);
        CHECK(std::abs(check_identity_euclidean(ShapeData::from_operator(A, Ambient::euclidean))) <= tol);
        const auto hyp = ShapeData::from_operator(A, Ambient::hyperbolic);
        CHECK(std::abs(check_identity_hyperbolic(hyp)) <= tol);
        CHECK(std::abs(check_gauss_equation(hyp)) <= tol);
    }
}

TEST_CASE("identity checks reject the wrong ambient and n < 2")
{
    const Mat A = Mat::Identity(2, 2);
    CHECK_THROWS_AS((void)check_identity_euclidean(ShapeData::from_operator(A, Ambient::hyperbolic)), DomainError);
    CHECK_THROWS_AS((void)check_identity_hyperbolic(ShapeData::from_operator(A, Ambient::euclidean)), DomainError);
    CHECK_THROWS_AS((void)check_gauss_equation(ShapeData::from_operator(A, Ambient::euclidean)), DomainError);
    CHECK_THROWS_AS((void)check_identity_euclidean(ShapeData::from_operator(Mat::Identity(1, 1), Ambient::euclidean)),
                    DomainError);
}

TEST_CASE("property: curvatures are invariant under rotations of the domain")
{
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
    for (int trial = 0; trial < 100; ++trial) {
        const Mat A = random_symmetric(rng, 2, 1.0);
        const double t = ang(rng);
        Mat Q(2, 2);
        Q << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
        const Mat B = Q * A * Q.transpose();
        const auto pa = curvature_profile(ShapeData::from_operator(A, Ambient::euclidean));
        const auto pb = curvature_profile(ShapeData::from_operator(B, Ambient::euclidean));
        CHECK(std::abs(pa.kappa[0] - pb.kappa[0]) <= 1e-12);
        CHECK(std::abs(pa.kappa[1] - pb.kappa[1]) <= 1e-12);
    }
    // Same for a radial graph sampled at rotated points.
    const auto u = fields::model_sphere(2);
    for (int k = 0; k < 12; ++k) {
        const double t = 2.0 * std::numbers::pi * k / 12;
        const auto p = curvature_profile(shape_operator_euclidean(u, planar_point(2, 0.6 * std::cos(t), 0.6 * std::sin(t))));
        const auto p0 = curvature_profile(shape_operator_euclidean(u, planar_point(2, 0.6, 0.0)));
        CHECK(std::abs(p.kappa[0] - p0.kappa[0]) <= 1e-12);
        CHECK(std::abs(p.kappa[1] - p0.kappa[1]) <= 1e-12);
    }
}

TEST_CASE("grid provider reproduces model sphere curvatures to O(h^2)")
{
    const double h = 1.0 / 64;
    const auto grid = ScalarField::grid(GridField::sample(fields::model_sphere(2), h, 1.0));
    const auto* g = grid.grid_data();
    REQUIRE(g != nullptr);
    double worst = 0.0;
    for (int i = -g->extent(); i <= g->extent(); ++i) {
        for (int j = -g->extent(); j <= g->extent(); ++j) {
            if (!g->differentiable_at(i, j)) {
                continue;
            }
            const auto p = curvature_profile(shape_operator_hyperbolic(grid, g->node(i, j)));
            worst = std::max({worst, std::abs(p.kappa[0] - std::numbers::sqrt2), std::abs(p.kappa[1] - std::numbers::sqrt2)});
        }
    }
    CHECK(worst <= 10.0 * h * h);
}

TEST_CASE("identity sweep")
{
    const auto s = identity_sweep(500, 7);
    CHECK(s.pass);
    CHECK(s.failures == 0);
    CHECK(s.claims.size() == 3);
    CHECK(s.max_euclidean <= 1e-12);
    const auto again = identity_sweep(500, 7);
    CHECK(again.max_gauss == s.max_gauss);
    CHECK_THROWS_AS((void)identity_sweep(0, 1), DomainError);
    CHECK_THROWS_AS((void)identity_sweep(10, 1, 1, 3), DomainError);
}
