#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hemi/errors.hpp"
#include "hemi/symfuncs.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace hemi;

namespace {

// Test oracle: sigma_k by enumerating every k-subset through a bitmask.
double subset_sigma(int k, const std::vector<double>& x)
{
    const int n = static_cast<int>(x.size());
    double s = 0.0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (__builtin_popcount(mask) != k) {
            continue;
        }
        double p = 1.0;
        for (int i = 0; i < n; ++i) {
            if (mask & (1u << i)) {
                p *= x[static_cast<std::size_t>(i)];
            }
        }
        s += p;
    }
    return s;
}

// Scale for relative comparison that does not collapse under cancellation.
double subset_abs_sigma(int k, const std::vector<double>& x)
{
    std::vector<double> a(x.size());
    std::transform(x.begin(), x.end(), a.begin(), [](double v) { return std::abs(v); });
    return subset_sigma(k, a);
}

std::vector<double> random_vector(std::mt19937_64& rng, int n, double lo, double hi)
{
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& e : v) {
        e = d(rng);
    }
    return v;
}

} // namespace

TEST_CASE("elem_sym small examples")
{
    CHECK(elem_sym(2, CurvatureVector{1, 1, 1}) == 3.0);
    CHECK(elem_sym(3, CurvatureVector{1, 2, 3}) == 6.0);
    CHECK(elem_sym(2, CurvatureVector{1, 2, 3}) == subset_sigma(2, {1, 2, 3}));
    CHECK(subset_sigma(2, {1, 2, 3}) == 11.0);
    CHECK(elem_sym(1, CurvatureVector{3, -1}) == 2.0);
}

TEST_CASE("elem_sym rejects k outside [1, n]")
{
    CHECK_THROWS_AS((void)elem_sym(0, CurvatureVector{1, 2}), DomainError);
    CHECK_THROWS_AS((void)elem_sym(3, CurvatureVector{1, 2}), DomainError);
    CHECK_THROWS_AS(CurvatureVector(std::vector<double>{}), DomainError);
    CHECK_THROWS_AS((CurvatureVector{1.0, NAN}), DomainError);
}

TEST_CASE("elem_sym matches subset enumeration for n <= 8")
{
    std::mt19937_64 rng(20240611);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 1 + trial % 8;
        const auto x = random_vector(rng, n, -2.0, 2.0);
        const CurvatureVector lam(x);
        for (int k = 1; k <= n; ++k) {
            const double ref = subset_sigma(k, x);
            const double scale = std::max(subset_abs_sigma(k, x), 1e-300);
            worst = std::max(worst, std::abs(elem_sym(k, lam) - ref) / scale);
        }
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("binomial")
{
    CHECK(binomial(8, 4) == 70.0);
    CHECK(binomial(5, 0) == 1.0);
    CHECK(binomial(3, 4) == 0.0);
}

TEST_CASE("maclaurin_chain examples")
{
    const auto ones = maclaurin_chain(CurvatureVector{1, 1, 1, 1}, 4);
    REQUIRE(ones.maclaurin_chain.size() == 4);
    for (double c : ones.maclaurin_chain) {
        CHECK(c == doctest::Approx(1.0).epsilon(1e-15));
    }

    const auto p = maclaurin_chain(CurvatureVector{2, 1, 1}, 2);
    REQUIRE(p.maclaurin_chain.size() == 2);
    CHECK(p.maclaurin_chain[0] == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(p.maclaurin_chain[1] == doctest::Approx(std::sqrt(5.0 / 3.0)).epsilon(1e-15));
    CHECK(p.maclaurin_chain[1] <= p.maclaurin_chain[0]);
    CHECK(p.sigma.size() == 3);
    CHECK(p.normalized[2] == doctest::Approx(2.0));
}

TEST_CASE("maclaurin_chain reports the first non-positive sigma_j")
{
    try {
        (void)maclaurin_chain(CurvatureVector{-1, 3}, 2);
        FAIL("expected PreconditionError");
    } catch (const PreconditionError& e) {
        CHECK(e.index() == 2);
    }
    try {
        (void)maclaurin_chain(CurvatureVector{-3, 1, 1}, 3);
        FAIL("expected PreconditionError");
    } catch (const PreconditionError& e) {
        CHECK(e.index() == 1);
    }
    // Exact zero is a failure: the cone is open.
    CHECK_THROWS_AS((void)maclaurin_chain(CurvatureVector{1, 0}, 2), PreconditionError);
    // So is a value within the tie tolerance.
    CHECK_THROWS_AS((void)maclaurin_chain(CurvatureVector{1e-15, 1.0}, 2), PreconditionError);
    CHECK_THROWS_AS((void)maclaurin_chain(CurvatureVector{1, 1}, 3), DomainError);
}

TEST_CASE("gamma_k_membership examples")
{
    CHECK(gamma_k_membership(CurvatureVector{1, 1, 1, 1, 1}, 5));
    CHECK_FALSE(gamma_k_membership(CurvatureVector{-1, 3}, 2));
    CHECK(gamma_k_membership(CurvatureVector{3, -1}, 1));
    CHECK_THROWS_AS((void)gamma_k_membership(CurvatureVector{3, -1}, 3), DomainError);
}

TEST_CASE("property: Maclaurin chain is non-increasing on Gamma_k")
{
    std::mt19937_64 rng(7);
    int tested = 0;
    while (tested < 2000) {
        const int n = 2 + static_cast<int>(rng() % 7);
        const int k = 1 + static_cast<int>(rng() % static_cast<unsigned>(n));
        const auto x = random_vector(rng, n, -1.0, 3.0);
        const CurvatureVector lam(x);
        if (!gamma_k_membership(lam, k)) {
            continue;
        }
        ++tested;
        const auto p = maclaurin_chain(lam, k);
        for (std::size_t j = 1; j < p.maclaurin_chain.size(); ++j) {
            CHECK(p.maclaurin_chain[j] <= p.maclaurin_chain[j - 1] * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("property: Gamma_k membership is permutation invariant")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 500; ++trial) {
        const int n = 2 + trial % 6;
        auto x = random_vector(rng, n, -1.0, 2.0);
        const int k = 1 + trial % n;
        const bool base = gamma_k_membership(CurvatureVector(x), k);
        std::shuffle(x.begin(), x.end(), rng);
        CHECK(gamma_k_membership(CurvatureVector(x), k) == base);
    }
}

TEST_CASE("property: sigma_k is homogeneous of degree k")
{
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> cdist(-3.0, 3.0);
    for (int trial = 0; trial < 500; ++trial) {
        const int n = 1 + trial % 8;
        const auto x = random_vector(rng, n, -2.0, 2.0);
        const double c = cdist(rng);
        std::vector<double> cx(x);
        for (auto& e : cx) {
            e *= c;
        }
        for (int k = 1; k <= n; ++k) {
            const double lhs = elem_sym(k, CurvatureVector(cx));
            const double rhs = std::pow(c, k) * elem_sym(k, CurvatureVector(x));
            const double scale = std::pow(std::abs(c), k) * std::max(subset_abs_sigma(k, x), 1e-300);
            CHECK(std::abs(lhs - rhs) <= 1e-12 * scale);
        }
    }
}
