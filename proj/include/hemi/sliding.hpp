#pragma once

#include "hemi/graphs.hpp"
#include "hemi/meanops.hpp"
#include "hemi/mesh.hpp"
#include "hemi/report.hpp"

#include <string>
#include <vector>

namespace hemi {

enum class ContactClass { interior_tangency, boundary_only, transversal_violation };
enum class Verdict { rigid, hypothesis_violated, inconclusive };

[[nodiscard]] const char* to_string(ContactClass c) noexcept;
[[nodiscard]] const char* to_string(Verdict v) noexcept;

struct ContactReport {
    Ambient ambient = Ambient::euclidean;
    double q0 = 0.0;
    double indicator_at_q0 = 0.0;     // d(q0)
    std::vector<Point3> contact_points;
    ContactClass classification = ContactClass::boundary_only;
    double containment_residual = 0.0; // max over vertices of | |p - c| - radius |
    double containment_tolerance = 0.0;
    Verdict verdict = Verdict::inconclusive;
    double max_edge = 0.0;
    double tol_band = 0.0;
    double max_contact_distance_to_boundary = 0.0;
    bool equator_contact = false;      // hyperbolic: contact at or above r = q0 / sqrt 2
    int evaluations = 0;
    std::vector<std::string> diagnostics;
};

void to_json(Json& j, const ContactReport& r);

struct SlideConfig {
    double q_start = NAN;    // NaN: chosen so that S(q_start) clears the mesh
    double q_min = NAN;      // NaN: a default below which no contact is sought
    double q_tol = 1e-10;    // bisection width
    double min_step = 1e-4;  // floor for the conservative descent step
};

/// Signed clearance between S(q) and the mesh: min over vertices of
/// |p - c| - radius and over faces of |closest point - c| - radius + s_f,
/// with s_f = radius - sqrt(radius^2 - R_f^2) the sagitta allowance of a face
/// with circumradius R_f (a face inscribed in S(q) does not count as
/// penetrating it).
[[nodiscard]] double contact_indicator(const HypersurfaceMesh& mesh, const SphereFamily& family, double q);

/// Slides S(q) down from q_start: conservative descent by d(q) / Lip until
/// d <= 0, then bisection. Throws PreconditionError if the matching
/// incorporation check fails, NoContactError if q reaches q_min, ConfigError
/// if d(q_start) <= 0 or the mesh and family ambients differ.
[[nodiscard]] ContactReport first_contact(const HypersurfaceMesh& mesh, const SphereFamily& family,
                                          const SlideConfig& cfg = {});

struct PlaneContact {
    Point3 point;
    int vertex = -1;
    CurvatureProfile profile;
    bool from_graph = false; // curvature from the underlying field, else a local fit
    bool nonnegative = false; // all kappa_i >= -tol
    double tolerance = 0.0;
};

void to_json(Json& j, const PlaneContact& c);

/// Lowest interior point of the mesh (first contact of a rising horizontal
/// plane) with its curvatures for the upward normal. Throws
/// DegenerateContactError when the lowest points are all on the boundary.
[[nodiscard]] PlaneContact plane_contact_point(const HypersurfaceMesh& mesh, double tol = 1e-6);

} // namespace hemi
