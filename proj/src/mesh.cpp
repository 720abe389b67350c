#include "hemi/mesh.hpp"

#include "hemi/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

namespace hemi {

namespace {

using Edge = std::pair<int, int>;

Edge make_edge(int a, int b)
{
    return a < b ? Edge{a, b} : Edge{b, a};
}

double segment_distance(const Point3& p, const Point3& a, const Point3& b)
{
    const Point3 ab = b - a;
    const double len2 = ab.squaredNorm();
    double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return (p - (a + t * ab)).norm();
}

double segment_distance_2d(const Eigen::Vector2d& p, const Eigen::Vector2d& a, const Eigen::Vector2d& b)
{
    const Eigen::Vector2d ab = b - a;
    const double len2 = ab.squaredNorm();
    double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return (p - (a + t * ab)).norm();
}

// Winding number of the closed polygon around p.
int winding_number(const Eigen::Vector2d& p, const std::vector<Eigen::Vector2d>& poly)
{
    int wn = 0;
    const std::size_t m = poly.size();
    for (std::size_t k = 0; k < m; ++k) {
        const auto& a = poly[k];
        const auto& b = poly[(k + 1) % m];
        const double cross = (b.x() - a.x()) * (p.y() - a.y()) - (p.x() - a.x()) * (b.y() - a.y());
        if (a.y() <= p.y()) {
            if (b.y() > p.y() && cross > 0.0) {
                ++wn;
            }
        } else if (b.y() <= p.y() && cross < 0.0) {
            --wn;
        }
    }
    return wn;
}

// Part of the triangle with z >= level (Sutherland-Hodgman against one plane).
std::vector<Point3> clip_above(const std::array<Point3, 3>& tri, double level)
{
    std::vector<Point3> out;
    for (std::size_t k = 0; k < 3; ++k) {
        const Point3& a = tri[k];
        const Point3& b = tri[(k + 1) % 3];
        const bool ina = a.z() >= level;
        const bool inb = b.z() >= level;
        if (ina) {
            out.push_back(a);
        }
        if (ina != inb) {
            const double t = (level - a.z()) / (b.z() - a.z());
            out.push_back(a + t * (b - a));
        }
    }
    return out;
}

// Whether the xy-projection of a convex polygon meets the closed unit disk.
bool projection_meets_unit_disk(const std::vector<Point3>& poly)
{
    if (poly.empty()) {
        return false;
    }
    std::vector<Eigen::Vector2d> p2;
    for (const auto& p : poly) {
        p2.emplace_back(p.x(), p.y());
    }
    for (const auto& q : p2) {
        if (q.norm() <= 1.0) {
            return true;
        }
    }
    const Eigen::Vector2d origin(0.0, 0.0);
    for (std::size_t k = 0; k < p2.size(); ++k) {
        if (segment_distance_2d(origin, p2[k], p2[(k + 1) % p2.size()]) <= 1.0) {
            return true;
        }
    }
    return p2.size() >= 3 && winding_number(origin, p2) != 0;
}

// In the solid half-cone {z >= r, z > level}.
bool in_cone(const Point3& p, double level)
{
    return p.z() > level && p.z() >= std::hypot(p.x(), p.y());
}

IncorporationResult check_boundary(const HypersurfaceMesh& mesh, double height, double tol)
{
    IncorporationResult r;
    r.plane_height = height;
    r.single_boundary_cycle = mesh.boundary_loops().size() == 1;
    if (!r.single_boundary_cycle) {
        r.reason = "boundary has " + std::to_string(mesh.boundary_loops().size()) + " cycles";
        return r;
    }
    const auto& loop = mesh.boundary_loop();
    std::vector<Eigen::Vector2d> poly;
    for (int v : loop) {
        const Point3& p = mesh.vertices()[static_cast<std::size_t>(v)];
        r.max_boundary_offset = std::max(r.max_boundary_offset, std::abs(p.z() - height));
        poly.emplace_back(p.x(), p.y());
    }
    r.boundary_on_plane = r.max_boundary_offset <= tol;

    // A circle sample on the boundary polygon itself (within one edge) counts
    // as enclosed, so an inscribed boundary passes.
    const double slack = mesh.max_boundary_edge_length();
    constexpr int kSamples = 360;
    for (int k = 0; k < kSamples; ++k) {
        const double t = 2.0 * std::numbers::pi * k / kSamples;
        const Eigen::Vector2d s(std::cos(t), std::sin(t));
        if (winding_number(s, poly) != 0) {
            continue;
        }
        double d = INFINITY;
        for (std::size_t e = 0; e < poly.size(); ++e) {
            d = std::min(d, segment_distance_2d(s, poly[e], poly[(e + 1) % poly.size()]));
        }
        if (d > slack) {
            ++r.unenclosed_samples;
        }
    }
    r.encloses_unit_disk = r.unenclosed_samples == 0;
    if (!r.boundary_on_plane) {
        std::ostringstream os;
        os << "boundary leaves the plane x^{n+1} = " << height << " by " << r.max_boundary_offset;
        r.reason = os.str();
    } else if (!r.encloses_unit_disk) {
        r.reason = std::to_string(r.unenclosed_samples) + " samples of the unit circle lie outside the boundary";
    }
    return r;
}

void finish(IncorporationResult& r)
{
    r.satisfied = r.single_boundary_cycle && r.boundary_on_plane && r.encloses_unit_disk && r.avoids_region;
    if (r.satisfied) {
        r.reason.clear();
    } else if (r.reason.empty() && !r.avoids_region) {
        r.reason = std::to_string(r.offending_vertices.size()) + " vertices and "
                   + std::to_string(r.offending_faces.size()) + " faces meet the forbidden region";
    }
}

} // namespace

HypersurfaceMesh::HypersurfaceMesh(std::vector<Point3> vertices, std::vector<Face> faces, Ambient ambient)
    : vertices_(std::move(vertices)), faces_(std::move(faces)), ambient_(ambient)
{
    const int nv = static_cast<int>(vertices_.size());
    if (nv < 3 || faces_.empty()) {
        throw MeshError("mesh needs at least three vertices and one face");
    }
    for (const auto& p : vertices_) {
        if (!p.allFinite()) {
            throw MeshError("mesh vertex with non-finite coordinates");
        }
    }
    std::map<Edge, int> use;
    for (std::size_t f = 0; f < faces_.size(); ++f) {
        const auto& t = faces_[f];
        for (int v : t) {
            if (v < 0 || v >= nv) {
                throw MeshError("face " + std::to_string(f) + " references vertex " + std::to_string(v));
            }
        }
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
            throw MeshError("face " + std::to_string(f) + " repeats a vertex");
        }
        for (int k = 0; k < 3; ++k) {
            if (++use[make_edge(t[k], t[(k + 1) % 3])] > 2) {
                throw MeshError("edge shared by more than two faces");
            }
        }
    }

    std::map<int, std::vector<int>> adj;
    for (const auto& [e, count] : use) {
        if (count == 1) {
            adj[e.first].push_back(e.second);
            adj[e.second].push_back(e.first);
        }
    }
    on_boundary_.assign(vertices_.size(), false);
    for (const auto& [v, nb] : adj) {
        if (nb.size() != 2) {
            throw MeshError("boundary vertex " + std::to_string(v) + " has " + std::to_string(nb.size())
                            + " boundary edges");
        }
        on_boundary_[static_cast<std::size_t>(v)] = true;
    }
    std::set<int> seen;
    for (const auto& [start, nb0] : adj) {
        if (seen.count(start)) {
            continue;
        }
        std::vector<int> loop{start};
        seen.insert(start);
        int prev = start;
        int cur = nb0[0];
        while (cur != start) {
            loop.push_back(cur);
            seen.insert(cur);
            const auto& nb = adj[cur];
            const int next = nb[0] == prev ? nb[1] : nb[0];
            prev = cur;
            cur = next;
        }
        if (loop.size() < 3) {
            throw MeshError("degenerate boundary cycle");
        }
        loops_.push_back(std::move(loop));
    }
}

const std::vector<int>& HypersurfaceMesh::boundary_loop() const
{
    if (loops_.size() != 1) {
        throw MeshError("mesh has " + std::to_string(loops_.size()) + " boundary cycles, expected one");
    }
    return loops_.front();
}

double HypersurfaceMesh::max_edge_length() const
{
    double m = 0.0;
    for (const auto& t : faces_) {
        for (int k = 0; k < 3; ++k) {
            m = std::max(m, (vertices_[static_cast<std::size_t>(t[k])] - vertices_[static_cast<std::size_t>(t[(k + 1) % 3])]).norm());
        }
    }
    return m;
}

double HypersurfaceMesh::max_boundary_edge_length() const
{
    double m = 0.0;
    for (const auto& loop : loops_) {
        for (std::size_t k = 0; k < loop.size(); ++k) {
            m = std::max(m, (vertices_[static_cast<std::size_t>(loop[k])]
                             - vertices_[static_cast<std::size_t>(loop[(k + 1) % loop.size()])])
                                .norm());
        }
    }
    return m;
}

double HypersurfaceMesh::distance_to_boundary(const Point3& p) const
{
    double d = INFINITY;
    for (const auto& loop : loops_) {
        for (std::size_t k = 0; k < loop.size(); ++k) {
            d = std::min(d, segment_distance(p, vertices_[static_cast<std::size_t>(loop[k])],
                                             vertices_[static_cast<std::size_t>(loop[(k + 1) % loop.size()])]));
        }
    }
    return d;
}

std::vector<int> HypersurfaceMesh::neighbours(int v) const
{
    std::set<int> nb;
    for (const auto& t : faces_) {
        if (t[0] == v || t[1] == v || t[2] == v) {
            for (int w : t) {
                if (w != v) {
                    nb.insert(w);
                }
            }
        }
    }
    return {nb.begin(), nb.end()};
}

HypersurfaceMesh HypersurfaceMesh::rotated(double angle) const
{
    const Eigen::Matrix3d R = Eigen::AngleAxisd(angle, Point3::UnitZ()).toRotationMatrix();
    std::vector<Point3> v;
    v.reserve(vertices_.size());
    for (const auto& p : vertices_) {
        v.push_back(R * p);
    }
    return {std::move(v), faces_, ambient_};
}

HypersurfaceMesh read_mesh(std::istream& in, Ambient ambient)
{
    long nv = 0;
    long nf = 0;
    if (!(in >> nv >> nf) || nv <= 0 || nf <= 0) {
        throw MeshError("mesh header must be \"n_vertices n_faces\" with positive counts");
    }
    std::vector<Point3> vertices(static_cast<std::size_t>(nv));
    for (auto& p : vertices) {
        if (!(in >> p.x() >> p.y() >> p.z())) {
            throw MeshError("mesh file ends inside the vertex block");
        }
    }
    std::vector<Face> faces(static_cast<std::size_t>(nf));
    for (auto& f : faces) {
        if (!(in >> f[0] >> f[1] >> f[2])) {
            throw MeshError("mesh file ends inside the face block");
        }
    }
    std::string extra;
    if (in >> extra) {
        throw MeshError("unexpected trailing content in mesh file: " + extra);
    }
    return {std::move(vertices), std::move(faces), ambient};
}

HypersurfaceMesh read_mesh_file(const std::string& path, Ambient ambient)
{
    std::ifstream in(path);
    if (!in) {
        throw MeshError("cannot open mesh file " + path);
    }
    return read_mesh(in, ambient);
}

void write_mesh(std::ostream& out, const HypersurfaceMesh& mesh)
{
    out << mesh.vertices().size() << ' ' << mesh.faces().size() << '\n';
    out << std::setprecision(17);
    for (const auto& p : mesh.vertices()) {
        out << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
    }
    for (const auto& f : mesh.faces()) {
        out << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
    }
}

void write_mesh_file(const std::string& path, const HypersurfaceMesh& mesh)
{
    std::ofstream out(path);
    if (!out) {
        throw MeshError("cannot write mesh file " + path);
    }
    write_mesh(out, mesh);
}

HypersurfaceMesh graph_mesh(const ScalarField& u, int rings, int segments, Ambient ambient, RingSpacing spacing)
{
    if (u.dimension() != 2) {
        throw MeshError("graph_mesh: only surfaces in R^3 (n = 2)");
    }
    if (rings < 1 || segments < 3) {
        throw MeshError("graph_mesh: need rings >= 1 and segments >= 3");
    }
    const double R = u.domain_radius();
    std::vector<Point3> v;
    Vec x = Vec::Zero(2);
    v.emplace_back(0.0, 0.0, u.sample(x));
    for (int k = 1; k <= rings; ++k) {
        double r = spacing == RingSpacing::uniform ? R * k / rings
                                                   : R * std::sin(0.5 * std::numbers::pi * k / rings);
        if (k == rings) {
            r = R;
        }
        for (int s = 0; s < segments; ++s) {
            const double t = 2.0 * std::numbers::pi * s / segments;
            x << r * std::cos(t), r * std::sin(t);
            v.emplace_back(x(0), x(1), u.sample(x));
        }
    }
    auto id = [segments](int ring, int s) { return 1 + (ring - 1) * segments + (s % segments); };
    std::vector<Face> f;
    for (int s = 0; s < segments; ++s) {
        f.push_back({0, id(1, s), id(1, s + 1)});
    }
    for (int k = 1; k < rings; ++k) {
        for (int s = 0; s < segments; ++s) {
            f.push_back({id(k, s), id(k + 1, s), id(k + 1, s + 1)});
            f.push_back({id(k, s), id(k + 1, s + 1), id(k, s + 1)});
        }
    }
    HypersurfaceMesh mesh(std::move(v), std::move(f), ambient);
    mesh.set_graph(u);
    return mesh;
}

void to_json(Json& j, const IncorporationResult& r)
{
    j = Json{{"satisfied", r.satisfied},
             {"single_boundary_cycle", r.single_boundary_cycle},
             {"boundary_on_plane", r.boundary_on_plane},
             {"encloses_unit_disk", r.encloses_unit_disk},
             {"avoids_region", r.avoids_region},
             {"plane_height", r.plane_height},
             {"max_boundary_offset", r.max_boundary_offset},
             {"unenclosed_samples", r.unenclosed_samples},
             {"offending_vertices", r.offending_vertices},
             {"offending_faces", r.offending_faces},
             {"reason", r.reason}};
}

IncorporationResult incorporation_check(const HypersurfaceMesh& mesh, double tol)
{
    IncorporationResult r = check_boundary(mesh, 0.0, tol);
    const auto& V = mesh.vertices();
    for (std::size_t k = 0; k < V.size(); ++k) {
        if (V[k].z() > tol && std::hypot(V[k].x(), V[k].y()) <= 1.0) {
            r.offending_vertices.push_back(static_cast<int>(k));
        }
    }
    for (std::size_t f = 0; f < mesh.faces().size(); ++f) {
        const auto& t = mesh.faces()[f];
        const std::array<Point3, 3> tri{V[static_cast<std::size_t>(t[0])], V[static_cast<std::size_t>(t[1])],
                                        V[static_cast<std::size_t>(t[2])]};
        if (projection_meets_unit_disk(clip_above(tri, tol))) {
            r.offending_faces.push_back(static_cast<int>(f));
        }
    }
    r.avoids_region = r.offending_vertices.empty() && r.offending_faces.empty();
    finish(r);
    return r;
}

IncorporationResult hyperbolic_incorporation_check(const HypersurfaceMesh& mesh, double tol)
{
    const auto& V = mesh.vertices();
    for (std::size_t k = 0; k < V.size(); ++k) {
        if (!(V[k].z() > 0.0)) {
            std::ostringstream os;
            os << "vertex " << k << " has height " << V[k].z() << ", outside the upper half-space";
            throw AmbientError(os.str());
        }
    }
    IncorporationResult r = check_boundary(mesh, 1.0, tol);
    const double level = 1.0 + tol;
    for (std::size_t k = 0; k < V.size(); ++k) {
        if (in_cone(V[k], level)) {
            r.offending_vertices.push_back(static_cast<int>(k));
        }
    }
    // Faces: barycentric samples of the part above the plane. The cone is
    // not polyhedral, so this is a sampled test at resolution edge / 16.
    constexpr int kSub = 16;
    for (std::size_t f = 0; f < mesh.faces().size(); ++f) {
        const auto& t = mesh.faces()[f];
        const Point3& a = V[static_cast<std::size_t>(t[0])];
        const Point3& b = V[static_cast<std::size_t>(t[1])];
        const Point3& c = V[static_cast<std::size_t>(t[2])];
        if (std::max({a.z(), b.z(), c.z()}) <= level) {
            continue;
        }
        bool hit = false;
        for (int i = 0; i <= kSub && !hit; ++i) {
            for (int j = 0; i + j <= kSub && !hit; ++j) {
                const double s = static_cast<double>(i) / kSub;
                const double w = static_cast<double>(j) / kSub;
                hit = in_cone((1.0 - s - w) * a + s * b + w * c, level);
            }
        }
        if (hit) {
            r.offending_faces.push_back(static_cast<int>(f));
        }
    }
    r.avoids_region = r.offending_vertices.empty() && r.offending_faces.empty();
    finish(r);
    return r;
}

Point3 closest_point_on_triangle(const Point3& p, const Point3& a, const Point3& b, const Point3& c)
{
    // Voronoi-region walk over vertices, edges and the face interior.
    const Point3 ab = b - a;
    const Point3 ac = c - a;
    const Point3 ap = p - a;
    const double d1 = ab.dot(ap);
    const double d2 = ac.dot(ap);
    if (d1 <= 0.0 && d2 <= 0.0) {
        return a;
    }
    const Point3 bp = p - b;
    const double d3 = ab.dot(bp);
    const double d4 = ac.dot(bp);
    if (d3 >= 0.0 && d4 <= d3) {
        return b;
    }
    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
        return a + d1 / (d1 - d3) * ab;
    }
    const Point3 cp = p - c;
    const double d5 = ab.dot(cp);
    const double d6 = ac.dot(cp);
    if (d6 >= 0.0 && d5 <= d6) {
        return c;
    }
    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
        return a + d2 / (d2 - d6) * ac;
    }
    const double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
        return b + (d4 - d3) / ((d4 - d3) + (d5 - d6)) * (c - b);
    }
    const double denom = 1.0 / (va + vb + vc);
    return a + ab * (vb * denom) + ac * (vc * denom);
}

} // namespace hemi
