#pragma once

// Closed-form fields used throughout: flat graphs, spherical caps (the
// hemisphere, the model sphere v, the sliding family v_q, Example surfaces
// u1 and u2) and smooth random bumps for property sweeps.

#include "hemi/field.hpp"

#include <random>
#include <string>

namespace hemi::fields {

[[nodiscard]] ScalarField constant(int n, double c, double domain_radius = 1.0);

/// c + slope . x
[[nodiscard]] ScalarField affine(int n, double c, const Vec& slope, double domain_radius = 1.0);

/// scale |x|^2 / 2 + c
[[nodiscard]] ScalarField paraboloid(int n, double scale = 1.0, double c = 0.0, double domain_radius = 1.0);

/// c + sign * sqrt(a^2 - r^2) on the disk of radius min(domain_radius, a).
/// sign = +1 gives an upper cap, -1 a lower cap.
[[nodiscard]] ScalarField spherical_cap(int n, double c, double a, int sign, double domain_radius,
                                        std::string name);

/// sqrt(1 - r^2)
[[nodiscard]] ScalarField hemisphere(int n);

/// -sqrt(R^2 - r^2) over the disk of radius R.
[[nodiscard]] ScalarField lower_hemisphere(int n, double R = 1.0);

/// v = 2 - sqrt(2 - r^2), the model sphere, on the closed unit disk.
[[nodiscard]] ScalarField model_sphere(int n);

/// v_q = q - sqrt(q^2/2 - r^2) on r <= min(1, q / sqrt 2).
[[nodiscard]] ScalarField v_q(int n, double q);

/// Value of v_q at radius r (no derivatives; used for boundary checks).
[[nodiscard]] double v_q_value(double q, double r);

/// u1 = 1
[[nodiscard]] ScalarField u1(int n);

/// u2 = 1 + eps - sqrt(1 + eps^2 - r^2)
[[nodiscard]] ScalarField u2(int n, double eps);

/// s (x^2 - y^2) + c, planar.
[[nodiscard]] ScalarField saddle(double s, double c, double domain_radius = 1.0);

/// Sum of three Gaussian bumps plus a tilt, parameters drawn from `rng`.
[[nodiscard]] ScalarField random_bumps(int n, std::mt19937_64& rng);

/// Looks up a field by CLI name: hemisphere, model_sphere, u1, u2, v_q,
/// plane, paraboloid, lower_hemisphere.
[[nodiscard]] ScalarField by_name(const std::string& name, int n, double epsilon, double q, double c);

} // namespace hemi::fields
