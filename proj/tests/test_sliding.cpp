#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hemi/errors.hpp"
#include "hemi/fields.hpp"
#include "hemi/sliding.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace hemi;

namespace {

// Oracle: the constrained minimiser is either the plane projection (when its
// barycentric coordinates are all non-negative) or lies on an edge.
Point3 closest_oracle(const Point3& p, const Point3& a, const Point3& b, const Point3& c)
{
    Eigen::Matrix<double, 3, 2> E;
    E.col(0) = b - a;
    E.col(1) = c - a;
    const Eigen::Vector2d st = (E.transpose() * E).ldlt().solve(E.transpose() * (p - a));
    if (st(0) >= 0.0 && st(1) >= 0.0 && st(0) + st(1) <= 1.0) {
        return a + E * st;
    }
    auto seg = [&p](const Point3& u, const Point3& v) {
        const double t = std::clamp((p - u).dot(v - u) / (v - u).squaredNorm(), 0.0, 1.0);
        return Point3(u + t * (v - u));
    };
    Point3 best = seg(a, b);
    for (const Point3& q : {seg(b, c), seg(c, a)}) {
        if ((q - p).norm() < (best - p).norm()) {
            best = q;
        }
    }
    return best;
}

HypersurfaceMesh lower_hemisphere_mesh(double R = 1.0, int rings = 50, int segments = 100)
{
    return graph_mesh(fields::lower_hemisphere(2, R), rings, segments, Ambient::euclidean, RingSpacing::spherical);
}

} // namespace

TEST_CASE("graph_mesh structure")
{
    const auto m = lower_hemisphere_mesh();
    CHECK(m.faces().size() == 9900);
    CHECK(m.vertices().size() == 5001);
    REQUIRE(m.boundary_loops().size() == 1);
    CHECK(m.boundary_loop().size() == 100);
    CHECK(m.is_boundary_vertex(5000));
    CHECK_FALSE(m.is_boundary_vertex(0));
    CHECK(m.vertices()[0].z() == doctest::Approx(-1.0));
}

TEST_CASE("mesh I/O round trip and malformed input")
{
    const auto m = graph_mesh(fields::paraboloid(2, 1.0, -0.5), 4, 8, Ambient::euclidean);
    std::stringstream ss;
    write_mesh(ss, m);
    const auto back = read_mesh(ss, Ambient::euclidean);
    REQUIRE(back.vertices().size() == m.vertices().size());
    for (std::size_t k = 0; k < m.vertices().size(); ++k) {
        CHECK((back.vertices()[k] - m.vertices()[k]).norm() == 0.0);
    }
    CHECK(back.faces() == m.faces());

    std::stringstream bad1("3 1\n0 0 0\n1 0 0\n");
    CHECK_THROWS_AS((void)read_mesh(bad1, Ambient::euclidean), MeshError);
    std::stringstream bad2("3 1\n0 0 0\n1 0 0\n0 1 0\n0 1 5\n");
    CHECK_THROWS_AS((void)read_mesh(bad2, Ambient::euclidean), MeshError);
    std::stringstream bad3("x y\n");
    CHECK_THROWS_AS((void)read_mesh(bad3, Ambient::euclidean), MeshError);
}

TEST_CASE("non-manifold edge is rejected")
{
    std::vector<Point3> v{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}};
    std::vector<Face> f{{0, 1, 2}, {0, 1, 3}, {0, 1, 4}};
    CHECK_THROWS_AS(HypersurfaceMesh(v, f, Ambient::euclidean), MeshError);
}

TEST_CASE("closest_point_on_triangle matches the projection oracle")
{
    std::mt19937_64 rng(71);
    std::normal_distribution<double> g(0.0, 1.0);
    auto rp = [&] { return Point3(g(rng), g(rng), g(rng)); };
    for (int trial = 0; trial < 2000; ++trial) {
        const Point3 a = rp();
        const Point3 b = rp();
        const Point3 c = rp();
        const Point3 p = 2.0 * rp();
        const Point3 mine = closest_point_on_triangle(p, a, b, c);
        const Point3 ref = closest_oracle(p, a, b, c);
        CHECK(std::abs((mine - p).norm() - (ref - p).norm()) <= 1e-10);
    }
}

TEST_CASE("Euclidean incorporation examples")
{
    const auto lower = lower_hemisphere_mesh(1.0, 20, 40);
    const auto ok = incorporation_check(lower);
    CHECK(ok.satisfied);

    const auto upper = graph_mesh(fields::hemisphere(2), 20, 40, Ambient::euclidean, RingSpacing::spherical);
    const auto up = incorporation_check(upper);
    CHECK_FALSE(up.satisfied);
    CHECK(up.boundary_on_plane);
    CHECK(up.encloses_unit_disk);
    CHECK_FALSE(up.avoids_region);
    CHECK_FALSE(up.offending_vertices.empty());

    auto verts = lower.vertices();
    verts[lower.boundary_loop()[0]].z() = 0.1;
    const HypersurfaceMesh tilted(verts, lower.faces(), Ambient::euclidean);
    const auto t = incorporation_check(tilted);
    CHECK_FALSE(t.satisfied);
    CHECK_FALSE(t.boundary_on_plane);

    // A small disk does not enclose B_1.
    const auto small = graph_mesh(fields::lower_hemisphere(2, 0.5), 10, 40, Ambient::euclidean);
    const auto s = incorporation_check(small);
    CHECK_FALSE(s.satisfied);
    CHECK_FALSE(s.encloses_unit_disk);

    // Annulus: two boundary cycles.
    std::vector<Point3> av;
    std::vector<Face> af;
    const int segs = 24;
    for (int ring = 0; ring < 2; ++ring) {
        for (int k = 0; k < segs; ++k) {
            const double t0 = 2.0 * std::numbers::pi * k / segs;
            const double r = ring == 0 ? 1.2 : 2.0;
            av.emplace_back(r * std::cos(t0), r * std::sin(t0), 0.0);
        }
    }
    for (int k = 0; k < segs; ++k) {
        const int k1 = (k + 1) % segs;
        af.push_back({k, segs + k, segs + k1});
        af.push_back({k, segs + k1, k1});
    }
    const auto ann = incorporation_check(HypersurfaceMesh(av, af, Ambient::euclidean));
    CHECK_FALSE(ann.single_boundary_cycle);
    CHECK_FALSE(ann.satisfied);
}

TEST_CASE("hyperbolic incorporation examples")
{
    // Graph of v: boundary at height 1, body below the plane.
    const auto below = graph_mesh(fields::model_sphere(2), 20, 40, Ambient::hyperbolic);
    CHECK(hyperbolic_incorporation_check(below).satisfied);

    // Its reflection 2 - v = sqrt(2 - r^2) sits inside the half-cone.
    const auto above = graph_mesh(fields::spherical_cap(2, 0.0, std::sqrt(2.0), +1, 1.0, "reflected"), 20, 40,
                                  Ambient::hyperbolic);
    const auto r = hyperbolic_incorporation_check(above);
    CHECK_FALSE(r.satisfied);
    CHECK_FALSE(r.avoids_region);
    CHECK_FALSE(r.offending_vertices.empty());

    const auto flat = graph_mesh(fields::constant(2, 1.0), 10, 40, Ambient::hyperbolic);
    CHECK(hyperbolic_incorporation_check(flat).satisfied);

    const auto sunk = graph_mesh(fields::constant(2, -1.0), 4, 8, Ambient::hyperbolic);
    CHECK_THROWS_AS((void)hyperbolic_incorporation_check(sunk), AmbientError);
}

TEST_CASE("first contact: lower unit hemisphere is rigid")
{
    const auto m = lower_hemisphere_mesh();
    const auto rep = first_contact(m, SphereFamily{Ambient::euclidean});
    CHECK(std::abs(rep.q0) <= 1e-6);
    CHECK(rep.classification == ContactClass::interior_tangency);
    CHECK(rep.verdict == Verdict::rigid);
    CHECK(rep.containment_residual <= rep.containment_tolerance);
}

TEST_CASE("first contact: radius-2 lower hemisphere violates the hypothesis")
{
    const auto m = lower_hemisphere_mesh(2.0);
    const auto rep = first_contact(m, SphereFamily{Ambient::euclidean});
    CHECK(std::abs(rep.q0 + 1.0) <= 1e-3);
    CHECK(rep.classification == ContactClass::interior_tangency);
    CHECK(rep.verdict == Verdict::hypothesis_violated);
    REQUIRE_FALSE(rep.contact_points.empty());
    CHECK((rep.contact_points.front() - Point3(0, 0, -2)).norm() <= 1e-6);
}

TEST_CASE("first contact: hyperbolic model sphere cap touches at q = 2")
{
    const auto m = graph_mesh(fields::model_sphere(2), 40, 80, Ambient::hyperbolic, RingSpacing::uniform);
    const auto rep = first_contact(m, SphereFamily{Ambient::hyperbolic});
    CHECK(std::abs(rep.q0 - 2.0) <= 1e-6);
    CHECK_FALSE(rep.equator_contact);
    CHECK(rep.verdict == Verdict::rigid);
}

TEST_CASE("first contact preconditions")
{
    const auto upper = graph_mesh(fields::hemisphere(2), 10, 20, Ambient::euclidean);
    CHECK_THROWS_AS((void)first_contact(upper, SphereFamily{Ambient::euclidean}), PreconditionError);
    const auto lower = lower_hemisphere_mesh(1.0, 10, 20);
    CHECK_THROWS_AS((void)first_contact(lower, SphereFamily{Ambient::hyperbolic}), ConfigError);
    SlideConfig cfg;
    cfg.q_start = 0.0;
    CHECK_THROWS_AS((void)first_contact(lower, SphereFamily{Ambient::euclidean}, cfg), ConfigError);
    cfg.q_start = 5.0;
    cfg.q_min = 3.0;
    CHECK_THROWS_AS((void)first_contact(lower, SphereFamily{Ambient::euclidean}, cfg), NoContactError);
}

TEST_CASE("property: indicator is non-decreasing in q above first contact")
{
    const auto m = lower_hemisphere_mesh(2.0, 20, 40);
    const SphereFamily fam{Ambient::euclidean};
    const auto rep = first_contact(m, fam);
    double prev = -INFINITY;
    for (int k = 0; k <= 50; ++k) {
        const double q = rep.q0 + 4.0 * k / 50.0;
        const double d = contact_indicator(m, fam, q);
        CHECK(d >= prev - 1e-12);
        prev = d;
    }
}

TEST_CASE("property: classification is invariant under rotation about the axis")
{
    const auto m = lower_hemisphere_mesh(2.0, 20, 40);
    const auto base = first_contact(m, SphereFamily{Ambient::euclidean});
    for (double a : {0.3, 1.0, 2.5}) {
        const auto r = first_contact(m.rotated(a), SphereFamily{Ambient::euclidean});
        CHECK(r.classification == base.classification);
        CHECK(r.verdict == base.verdict);
        CHECK(std::abs(r.q0 - base.q0) <= 1e-9);
    }
}

TEST_CASE("property: refining a bowl mesh moves q0 by O(edge^2)")
{
    // z = (r^2 - 1) / 2 touches S(q) first at the bottom, q0 = 1/2.
    const auto f = fields::paraboloid(2, 1.0, -0.5);
    const auto coarse = first_contact(graph_mesh(f, 10, 24, Ambient::euclidean), SphereFamily{Ambient::euclidean});
    const auto fine = first_contact(graph_mesh(f, 20, 48, Ambient::euclidean), SphereFamily{Ambient::euclidean});
    const double e = graph_mesh(f, 10, 24, Ambient::euclidean).max_edge_length();
    CHECK(std::abs(coarse.q0 - fine.q0) <= e * e);
    CHECK(std::abs(fine.q0 - 0.5) <= 1e-6);
    CHECK(fine.verdict == Verdict::hypothesis_violated);
}

TEST_CASE("plane contact point")
{
    const auto m = lower_hemisphere_mesh(1.0, 30, 60);
    const auto pc = plane_contact_point(m);
    CHECK((pc.point - Point3(0, 0, -1)).norm() <= 1e-12);
    CHECK(pc.from_graph);
    CHECK(pc.profile.kappa[0] == doctest::Approx(1.0));
    CHECK(pc.profile.kappa[1] == doctest::Approx(1.0));
    CHECK(pc.nonnegative);

    // Without the underlying field the quadratic fit takes over.
    const auto fit = plane_contact_point(m.rotated(0.0));
    CHECK_FALSE(fit.from_graph);
    CHECK(std::abs(fit.profile.kappa[0] - 1.0) <= 1e-2);
    CHECK(std::abs(fit.profile.kappa[1] - 1.0) <= 1e-2);

    const auto flat = plane_contact_point(graph_mesh(fields::constant(2, 0.0), 5, 12, Ambient::euclidean));
    CHECK(std::abs(flat.profile.kappa[0]) <= 1e-12);
    CHECK(std::abs(flat.profile.kappa[1]) <= 1e-12);

    const auto saddle = graph_mesh(fields::saddle(0.1, -1.0), 20, 40, Ambient::euclidean);
    CHECK_THROWS_AS((void)plane_contact_point(saddle), DegenerateContactError);
}
