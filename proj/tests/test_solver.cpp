#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hemi/errors.hpp"
#include "hemi/fields.hpp"
#include "hemi/solver.hpp"

#include <cmath>
#include <numbers>

using namespace hemi;

namespace {

DirichletProblem hemisphere_problem(double rho, double h)
{
    DirichletProblem p;
    p.op = QuasilinearOperator::euclidean(2);
    p.f = constant_function(-2.0);
    p.g = constant_function(std::sqrt(1.0 - rho * rho));
    p.rho = rho;
    p.h = h;
    return p;
}

DirichletProblem model_problem(double rho, double h)
{
    DirichletProblem p;
    p.op = QuasilinearOperator::hyperbolic(2);
    p.f = constant_function(2.0 * std::numbers::sqrt2);
    p.g = constant_function(2.0 - std::sqrt(2.0 - rho * rho));
    p.rho = rho;
    p.h = h;
    return p;
}

} // namespace

TEST_CASE("euclidean cap: second-order convergence to the hemisphere")
{
    const double rho = 0.5;
    const auto ref = fields::hemisphere(2);
    const auto guess = fields::constant(2, std::sqrt(1.0 - rho * rho), rho);
    double prev = 0.0;
    for (double h : {1.0 / 32, 1.0 / 64, 1.0 / 128}) {
        const auto r = solve_dirichlet(hemisphere_problem(rho, h), guess, {}, ref);
        REQUIRE(r.converged);
        CHECK(r.residual_norm <= 1e-9);
        CHECK(r.min_theta > 0.0);
        REQUIRE(r.distance_to_reference.has_value());
        const double err = *r.distance_to_reference;
        if (h == 1.0 / 128) {
            CHECK(err <= 1e-3);
            CHECK(std::log2(prev / err) >= 1.8);
        }
        prev = err;
    }
}

TEST_CASE("hyperbolic cap: the model sphere is recovered")
{
    const double h = 1.0 / 64;
    const auto r = solve_dirichlet(model_problem(0.9, h), fields::constant(2, 1.0, 0.9), {}, fields::model_sphere(2));
    REQUIRE(r.converged);
    CHECK(*r.distance_to_reference <= 10.0 * h * h);
    // theta of v is at least 2^{-3/2}.
    CHECK(r.min_theta >= std::pow(2.0, -1.5) - 1e-3);
}

TEST_CASE("manufactured solution: u2 with its own mean curvature as data")
{
    const double eps = 0.25;
    const double h = 1.0 / 64;
    const auto u2 = fields::u2(2, eps);
    DirichletProblem p;
    p.op = QuasilinearOperator::hyperbolic(2);
    p.f = constant_function(2.0 * (1.0 + eps) / std::sqrt(1.0 + eps * eps));
    p.g = field_function(u2);
    p.rho = 0.9;
    p.h = h;
    const auto near = fields::paraboloid(2, 0.1, u2.sample(Vec::Zero(2)), 0.9);
    const auto r = solve_dirichlet(p, near, {}, u2);
    REQUIRE(r.converged);
    CHECK(r.residual_norm <= 1e-9);
    CHECK(*r.distance_to_reference <= 10.0 * h * h);
    CHECK(r.status == "converged");

    // The same data admit a second discrete solution, reached from u = 1.
    const auto other = solve_dirichlet(p, fields::constant(2, 1.0, 0.9), {}, u2);
    REQUIRE(other.converged);
    CHECK(other.residual_norm <= 1e-9);
    CHECK(*other.distance_to_reference > 0.1);
}

TEST_CASE("a far guess still converges")
{
    const auto r = solve_dirichlet(hemisphere_problem(0.5, 1.0 / 64), fields::paraboloid(2, 2.0, 0.0, 0.5), {},
                                   fields::hemisphere(2));
    REQUIRE(r.converged);
    CHECK(r.boundary_gap > 0.5);
    CHECK(*r.distance_to_reference <= 1e-3);
}

TEST_CASE("newton tail is quadratic on the exact-solution examples")
{
    const auto euc = solve_dirichlet(hemisphere_problem(0.5, 1.0 / 64), fields::constant(2, std::sqrt(0.75), 0.5));
    const auto hyp = solve_dirichlet(model_problem(0.9, 1.0 / 64), fields::constant(2, 1.0, 0.9));
    for (const auto* r : {&euc, &hyp}) {
        REQUIRE(r->converged);
        CHECK(r->stages == 1);
        const auto& hist = r->residual_history;
        REQUIRE(hist.size() >= 3);
        // Below 1e-3 every step cuts the residual at least tenfold.
        std::size_t tail = 0;
        for (std::size_t k = 0; k + 1 < hist.size(); ++k) {
            if (hist[k] < 1e-3) {
                CHECK(hist[k + 1] <= 0.1 * hist[k]);
                ++tail;
            }
        }
        CHECK(tail >= 1);
        for (double a : r->step_lengths) {
            CHECK(a > 0.0);
            CHECK(a <= 1.0);
        }
    }
}

TEST_CASE("independent residual through apply_Q agrees with the solver's")
{
    const auto r = solve_dirichlet(model_problem(0.9, 1.0 / 64), fields::constant(2, 1.2, 0.9));
    REQUIRE(r.converged);
    CHECK(r.residual_agreement <= 1e-12);
    CHECK(r.independent_residual <= 1e-9 + 1e-12);
}

TEST_CASE("solution grid carries boundary data and interior unknowns")
{
    const double rho = 0.5;
    const double h = 1.0 / 32;
    const auto r = solve_dirichlet(hemisphere_problem(rho, h), fields::constant(2, 0.8, rho));
    CHECK(r.u.present(0, 0));
    CHECK(r.u.present(16, 0)); // on the circle
    CHECK(r.u.at(16, 0) == doctest::Approx(std::sqrt(1.0 - rho * rho)).epsilon(1e-15));
    CHECK_FALSE(r.u.present(16, 1));
    CHECK(r.unknowns > 0);
}

TEST_CASE("errors")
{
    const auto p = model_problem(0.9, 1.0 / 32);
    CHECK_THROWS_AS((void)solve_dirichlet(p, fields::constant(2, -1.0, 0.9)), EllipticityError);
    CHECK_THROWS_AS((void)solve_dirichlet(p, fields::constant(2, 0.0, 0.9)), EllipticityError);
    auto q = p;
    q.h = 0.5;
    CHECK_THROWS_AS((void)solve_dirichlet(q, fields::constant(2, 1.0, 0.9)), ConfigError);
    q = p;
    q.op = QuasilinearOperator::hyperbolic(3);
    CHECK_THROWS_AS((void)solve_dirichlet(q, fields::constant(3, 1.0, 0.9)), ConfigError);
    SolverConfig cfg;
    cfg.max_iter = 0;
    CHECK_THROWS_AS((void)solve_dirichlet(p, fields::constant(2, 1.0, 0.9), cfg), ConfigError);
    CHECK_THROWS_AS((void)rigidity_experiment(Ambient::hyperbolic, 3, 1.0 / 32), ConfigError);
}

TEST_CASE("iteration cap reports non-convergence")
{
    SolverConfig cfg;
    cfg.max_iter = 1;
    const auto r = solve_dirichlet(model_problem(0.9, 1.0 / 32), fields::constant(2, 1.2, 0.9), cfg);
    CHECK_FALSE(r.converged);
    CHECK(r.status != "converged");
    CHECK(r.residual_norm > cfg.rtol);
}

TEST_CASE("rigidity experiment, coarse grid")
{
    const double h = 1.0 / 32;
    const auto euc = rigidity_experiment(Ambient::euclidean, 2, h);
    CHECK(euc.runs.size() == 9);
    CHECK(euc.all_agree);
    CHECK(euc.pass);
    const auto hyp = rigidity_experiment(Ambient::hyperbolic, 2, h);
    CHECK(hyp.runs.size() == 9);
    for (const auto& run : hyp.runs) {
        INFO(run.initial, " rho=", run.rho, " d=", run.distance_to_reference, " c=", run.center_value);
        CHECK(run.converged);
    }
    CHECK(hyp.subcritical_checked);
    CHECK(hyp.subcritical_converged);
    CHECK(hyp.subcritical_distinct);
    MESSAGE("hyperbolic all_agree = " << hyp.all_agree);
}
