#pragma once

#include "hemi/field.hpp"
#include "hemi/report.hpp"

#include <Eigen/Dense>

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hemi {

using Point3 = Eigen::Vector3d;
using Face = std::array<int, 3>;

/// Triangulated surface in R^3. Validation computes the boundary loops
/// (cycles of edges used by exactly one face) and rejects non-manifold
/// edges.
class HypersurfaceMesh {
public:
    HypersurfaceMesh() = default;
    /// Throws MeshError on bad indices, degenerate faces, an edge shared by
    /// more than two faces or a boundary vertex of boundary degree other than 2.
    HypersurfaceMesh(std::vector<Point3> vertices, std::vector<Face> faces, Ambient ambient);

    [[nodiscard]] const std::vector<Point3>& vertices() const noexcept { return vertices_; }
    [[nodiscard]] const std::vector<Face>& faces() const noexcept { return faces_; }
    [[nodiscard]] Ambient ambient() const noexcept { return ambient_; }
    void set_ambient(Ambient a) noexcept { ambient_ = a; }

    [[nodiscard]] const std::vector<std::vector<int>>& boundary_loops() const noexcept { return loops_; }
    /// The single boundary cycle; throws MeshError if there is not exactly one.
    [[nodiscard]] const std::vector<int>& boundary_loop() const;
    [[nodiscard]] bool is_boundary_vertex(int v) const { return on_boundary_.at(static_cast<std::size_t>(v)); }

    [[nodiscard]] double max_edge_length() const;
    [[nodiscard]] double max_boundary_edge_length() const;
    /// Distance from p to the boundary polyline.
    [[nodiscard]] double distance_to_boundary(const Point3& p) const;
    /// Vertex indices sharing a face with v.
    [[nodiscard]] std::vector<int> neighbours(int v) const;

    /// The graph x^{n+1} = u(x) the mesh was sampled from, if any.
    [[nodiscard]] const std::optional<ScalarField>& graph() const noexcept { return graph_; }
    void set_graph(ScalarField u) { graph_ = std::move(u); }

    /// Rotation by `angle` about the vertical axis; the graph is dropped.
    [[nodiscard]] HypersurfaceMesh rotated(double angle) const;

private:
    std::vector<Point3> vertices_;
    std::vector<Face> faces_;
    Ambient ambient_ = Ambient::euclidean;
    std::vector<std::vector<int>> loops_;
    std::vector<bool> on_boundary_;
    std::optional<ScalarField> graph_;
};

/// ASCII: header "n_vertices n_faces", one "x y z" line per vertex, then one
/// "i j k" line per face with 0-based indices. Throws MeshError on malformed
/// input.
[[nodiscard]] HypersurfaceMesh read_mesh(std::istream& in, Ambient ambient);
[[nodiscard]] HypersurfaceMesh read_mesh_file(const std::string& path, Ambient ambient);
void write_mesh(std::ostream& out, const HypersurfaceMesh& mesh);
void write_mesh_file(const std::string& path, const HypersurfaceMesh& mesh);

enum class RingSpacing {
    uniform,   // r_k = R k / rings
    spherical, // r_k = R sin(pi k / (2 rings)); even spacing along a hemisphere
};

/// Polar triangulation of the graph of u over the disk of radius R = the
/// field's domain radius: a pole vertex, `rings` rings of `segments`
/// vertices, 2 segments (rings - 1) + segments faces. Heights come from
/// u.sample so the rim may have unbounded slope. The field is kept as the
/// mesh's graph.
[[nodiscard]] HypersurfaceMesh graph_mesh(const ScalarField& u, int rings, int segments, Ambient ambient,
                                          RingSpacing spacing = RingSpacing::uniform);

/// Result of an incorporation check with per-condition diagnostics.
struct IncorporationResult {
    bool satisfied = false;
    bool single_boundary_cycle = false;   // (i)
    bool boundary_on_plane = false;       // (ii), first half
    bool encloses_unit_disk = false;      // (ii), second half
    bool avoids_region = false;           // (iii)
    double plane_height = 0.0;
    double max_boundary_offset = 0.0;
    int unenclosed_samples = 0;
    std::vector<int> offending_vertices;
    std::vector<int> offending_faces;
    std::string reason;
};

void to_json(Json& j, const IncorporationResult& r);

/// Rim vertices sampled from caps with vertical slope carry O(sqrt(eps))
/// height noise, hence the loose default.
inline constexpr double kIncorporationTolerance = 1e-6;

/// Boundary in {x^{n+1} = 0} enclosing B_1, surface disjoint from the solid
/// half-cylinder {r <= 1, x^{n+1} > 0}.
[[nodiscard]] IncorporationResult incorporation_check(const HypersurfaceMesh& mesh,
                                                      double tol = kIncorporationTolerance);

/// Boundary in {x^{n+1} = 1} enclosing B_1, surface disjoint from the solid
/// half-cone {x^{n+1} >= r, x^{n+1} > 1}. Throws AmbientError when a vertex
/// has x^{n+1} <= 0.
[[nodiscard]] IncorporationResult hyperbolic_incorporation_check(const HypersurfaceMesh& mesh,
                                                                 double tol = kIncorporationTolerance);

/// Closest point to p on triangle (a, b, c).
[[nodiscard]] Point3 closest_point_on_triangle(const Point3& p, const Point3& a, const Point3& b, const Point3& c);

} // namespace hemi
