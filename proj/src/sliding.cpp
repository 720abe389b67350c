#include "hemi/sliding.hpp"

#include "hemi/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

namespace hemi {

namespace {

double lipschitz(const SphereFamily& family)
{
    // |dc/dq| = 1 plus |d radius / dq|.
    return family.ambient == Ambient::euclidean ? 1.0 : 1.0 + 1.0 / std::numbers::sqrt2;
}

double circumradius(const Point3& a, const Point3& b, const Point3& c)
{
    const double la = (b - c).norm();
    const double lb = (a - c).norm();
    const double lc = (a - b).norm();
    const double area2 = (b - a).cross(c - a).norm();
    if (!(area2 > 0.0)) {
        return INFINITY;
    }
    return la * lb * lc / (2.0 * area2);
}

double sagitta(double radius, double circ)
{
    return circ < radius ? radius - std::sqrt(radius * radius - circ * circ) : radius;
}

struct Sample {
    Point3 point;
    double d;
};

// Per-vertex and per-face clearances against S(q).
std::vector<Sample> clearances(const HypersurfaceMesh& mesh, const SphereFamily& family, double q)
{
    const Point3 c(0.0, 0.0, family.center_height(q));
    const double rho = family.radius(q);
    const auto& V = mesh.vertices();
    std::vector<Sample> out;
    out.reserve(V.size() + mesh.faces().size());
    for (const auto& p : V) {
        out.push_back({p, (p - c).norm() - rho});
    }
    for (const auto& f : mesh.faces()) {
        const Point3& a = V[static_cast<std::size_t>(f[0])];
        const Point3& b = V[static_cast<std::size_t>(f[1])];
        const Point3& e = V[static_cast<std::size_t>(f[2])];
        const Point3 x = closest_point_on_triangle(c, a, b, e);
        out.push_back({x, (x - c).norm() - rho + sagitta(rho, circumradius(a, b, e))});
    }
    return out;
}

void check_family_q(const SphereFamily& family, double q)
{
    if (family.ambient == Ambient::hyperbolic && !(q > 0.0)) {
        throw DomainError("hyperbolic sphere family needs q > 0");
    }
}

} // namespace

const char* to_string(ContactClass c) noexcept
{
    switch (c) {
    case ContactClass::interior_tangency:
        return "interior_tangency";
    case ContactClass::boundary_only:
        return "boundary_only";
    case ContactClass::transversal_violation:
        return "transversal_violation";
    }
    return "unknown";
}

const char* to_string(Verdict v) noexcept
{
    switch (v) {
    case Verdict::rigid:
        return "rigid";
    case Verdict::hypothesis_violated:
        return "hypothesis_violated";
    case Verdict::inconclusive:
        return "inconclusive";
    }
    return "unknown";
}

double contact_indicator(const HypersurfaceMesh& mesh, const SphereFamily& family, double q)
{
    check_family_q(family, q);
    double d = INFINITY;
    for (const auto& s : clearances(mesh, family, q)) {
        d = std::min(d, s.d);
    }
    return d;
}

void to_json(Json& j, const ContactReport& r)
{
    constexpr std::size_t kMaxListed = 100;
    Json pts = Json::array();
    for (std::size_t k = 0; k < std::min(kMaxListed, r.contact_points.size()); ++k) {
        const auto& p = r.contact_points[k];
        pts.push_back({p.x(), p.y(), p.z()});
    }
    j = Json{{"ambient", to_string(r.ambient)},
             {"q0", r.q0},
             {"indicator_at_q0", r.indicator_at_q0},
             {"contact_point_count", r.contact_points.size()},
             {"contact_points", pts},
             {"classification", to_string(r.classification)},
             {"containment_residual", r.containment_residual},
             {"containment_tolerance", r.containment_tolerance},
             {"verdict", to_string(r.verdict)},
             {"max_edge", r.max_edge},
             {"tol_band", r.tol_band},
             {"max_contact_distance_to_boundary", r.max_contact_distance_to_boundary},
             {"equator_contact", r.equator_contact},
             {"evaluations", r.evaluations},
             {"diagnostics", r.diagnostics}};
}

ContactReport first_contact(const HypersurfaceMesh& mesh, const SphereFamily& family, const SlideConfig& cfg)
{
    if (mesh.ambient() != family.ambient) {
        throw ConfigError("first_contact: mesh and sphere family live in different ambients");
    }
    const auto inc = family.ambient == Ambient::euclidean ? incorporation_check(mesh)
                                                          : hyperbolic_incorporation_check(mesh);
    if (!inc.satisfied) {
        throw PreconditionError("first_contact: incorporation condition fails: " + inc.reason, 0);
    }

    double zmin = INFINITY;
    double zmax = -INFINITY;
    for (const auto& p : mesh.vertices()) {
        zmin = std::min(zmin, p.z());
        zmax = std::max(zmax, p.z());
    }
    const bool euclid = family.ambient == Ambient::euclidean;
    double q = std::isnan(cfg.q_start) ? (euclid ? zmax + 2.0 : (zmax + 1.0) / (1.0 - 1.0 / std::numbers::sqrt2))
                                       : cfg.q_start;
    const double q_min = std::isnan(cfg.q_min) ? (euclid ? zmin - 2.0 : 1e-6) : cfg.q_min;
    const double L = lipschitz(family);

    ContactReport rep;
    rep.ambient = family.ambient;
    auto eval = [&](double s) {
        ++rep.evaluations;
        return contact_indicator(mesh, family, s);
    };

    double d = eval(q);
    if (!(d > 0.0)) {
        std::ostringstream os;
        os << "first_contact: S(q_start) already meets the mesh (q_start = " << q << ", d = " << d << ")";
        throw ConfigError(os.str());
    }

    // d is L-Lipschitz in q, so a step of d / L cannot skip a contact.
    double hi = q;
    double lo = NAN;
    while (std::isnan(lo)) {
        double next = q - std::max(d / L, cfg.min_step);
        if (next < q_min) {
            next = q_min;
        }
        const double dn = eval(next);
        if (dn <= 0.0) {
            hi = q;
            lo = next;
        } else if (next <= q_min) {
            std::ostringstream os;
            os << "first_contact: no contact for q down to " << q_min;
            throw NoContactError(os.str());
        } else {
            q = next;
            d = dn;
        }
    }
    while (hi - lo > cfg.q_tol) {
        const double mid = 0.5 * (lo + hi);
        if (eval(mid) <= 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    rep.q0 = lo;

    const auto samples = clearances(mesh, family, rep.q0);
    double dmin = INFINITY;
    for (const auto& s : samples) {
        dmin = std::min(dmin, s.d);
    }
    rep.indicator_at_q0 = dmin;
    const double contact_tol = std::max(1e-7, 100.0 * L * cfg.q_tol);
    for (const auto& s : samples) {
        if (s.d <= dmin + contact_tol) {
            rep.contact_points.push_back(s.point);
        }
    }

    rep.max_edge = mesh.max_edge_length();
    rep.tol_band = 3.0 * mesh.max_boundary_edge_length();
    bool interior = false;
    for (const auto& p : rep.contact_points) {
        const double db = mesh.distance_to_boundary(p);
        rep.max_contact_distance_to_boundary = std::max(rep.max_contact_distance_to_boundary, db);
        interior = interior || db > rep.tol_band;
        if (!euclid) {
            const double r = std::hypot(p.x(), p.y());
            if (r >= rep.q0 / std::numbers::sqrt2 - rep.tol_band || p.z() >= rep.q0 - rep.tol_band) {
                rep.equator_contact = true;
            }
        }
    }

    const Point3 c(0.0, 0.0, family.center_height(rep.q0));
    const double rho = family.radius(rep.q0);
    for (const auto& p : mesh.vertices()) {
        rep.containment_residual = std::max(rep.containment_residual, std::abs((p - c).norm() - rho));
    }
    rep.containment_tolerance = 5.0 * rep.max_edge * rep.max_edge;

    if (rep.equator_contact) {
        rep.classification = ContactClass::transversal_violation;
        rep.verdict = Verdict::inconclusive;
        rep.diagnostics.emplace_back("contact at or above the equator of S(q0); no finite-mesh analogue of the "
                                     "vertical-slope argument");
    } else if (interior) {
        rep.classification = ContactClass::interior_tangency;
        if (rep.containment_residual <= rep.containment_tolerance) {
            rep.verdict = Verdict::rigid;
        } else {
            rep.verdict = Verdict::hypothesis_violated;
            rep.diagnostics.emplace_back("interior tangency but the mesh is not contained in S(q0)");
        }
    } else {
        rep.classification = ContactClass::boundary_only;
        rep.verdict = Verdict::inconclusive;
        rep.diagnostics.emplace_back("all contact points lie within tol_band of the boundary");
    }
    return rep;
}

void to_json(Json& j, const PlaneContact& c)
{
    const auto& k = c.profile.kappa.entries();
    j = Json{{"point", {c.point.x(), c.point.y(), c.point.z()}},
             {"vertex", c.vertex},
             {"kappa", k},
             {"from_graph", c.from_graph},
             {"nonnegative", c.nonnegative},
             {"tolerance", c.tolerance}};
}

PlaneContact plane_contact_point(const HypersurfaceMesh& mesh, double tol)
{
    const auto& V = mesh.vertices();
    double zmin = INFINITY;
    for (const auto& p : V) {
        zmin = std::min(zmin, p.z());
    }
    int best = -1;
    for (std::size_t k = 0; k < V.size(); ++k) {
        if (V[k].z() <= zmin + tol && !mesh.is_boundary_vertex(static_cast<int>(k))) {
            if (best < 0 || V[k].z() < V[static_cast<std::size_t>(best)].z()) {
                best = static_cast<int>(k);
            }
        }
    }
    if (best < 0) {
        std::ostringstream os;
        os << "plane_contact_point: the lowest points (height " << zmin << ") all lie on the boundary";
        throw DegenerateContactError(os.str());
    }

    PlaneContact pc;
    pc.vertex = best;
    pc.point = V[static_cast<std::size_t>(best)];
    pc.tolerance = tol;
    Vec x(2);
    x << pc.point.x(), pc.point.y();

    ScalarField local = ScalarField::analytic(2, 1.0, [](const Vec&) { return Jet{}; });
    if (mesh.graph()) {
        local = *mesh.graph();
        pc.from_graph = true;
    } else {
        // Least-squares quadratic over the two-ring neighbourhood.
        std::set<int> ring;
        for (int v : mesh.neighbours(best)) {
            ring.insert(v);
            for (int w : mesh.neighbours(v)) {
                ring.insert(w);
            }
        }
        ring.erase(best);
        if (ring.size() < 6) {
            throw DegenerateContactError("plane_contact_point: too few neighbours for a quadratic fit");
        }
        Mat A(static_cast<Eigen::Index>(ring.size()), 6);
        Vec rhs(static_cast<Eigen::Index>(ring.size()));
        Eigen::Index row = 0;
        for (int v : ring) {
            const Point3 d = V[static_cast<std::size_t>(v)] - pc.point;
            A.row(row) << 1.0, d.x(), d.y(), d.x() * d.x(), d.x() * d.y(), d.y() * d.y();
            rhs(row) = d.z();
            ++row;
        }
        const Vec coef = A.colPivHouseholderQr().solve(rhs);
        Jet j;
        j.value = pc.point.z() + coef(0);
        j.gradient = Vec(2);
        j.gradient << coef(1), coef(2);
        j.hessian = Mat(2, 2);
        j.hessian << 2.0 * coef(3), coef(4), coef(4), 2.0 * coef(5);
        local = ScalarField::analytic(2, x.norm() + 1.0, [j](const Vec&) { return j; }, "local_fit");
    }
    const auto shape = mesh.ambient() == Ambient::euclidean ? shape_operator_euclidean(local, x)
                                                            : shape_operator_hyperbolic(local, x);
    pc.profile = curvature_profile(shape);
    pc.nonnegative = true;
    for (double k : pc.profile.kappa.entries()) {
        pc.nonnegative = pc.nonnegative && k >= -tol;
    }
    return pc;
}

} // namespace hemi
