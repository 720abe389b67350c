#pragma once

#include "hemi/field.hpp"
#include "hemi/maxprinciple.hpp"
#include "hemi/report.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace hemi {

/// Q(u) = f in B_rho, u = g on dB_rho, discretised on the nodes (i h, j h)
/// with |x| < rho. Planar (n = 2) only.
struct DirichletProblem {
    QuasilinearOperator op = QuasilinearOperator::euclidean(2);
    std::function<double(const Vec&)> f;
    std::function<double(const Vec&)> g;
    double rho = 0.9;
    double h = 1.0 / 64;
    std::string f_label = "f";
    std::string g_label = "g";
};

/// Constant right-hand side / boundary data helpers.
[[nodiscard]] std::function<double(const Vec&)> constant_function(double c);
/// x -> u.sample(x); keeps a copy of the field.
[[nodiscard]] std::function<double(const Vec&)> field_function(const ScalarField& u);

struct SolverConfig {
    double rtol = 1e-9;
    int max_iter = 50;
    double min_step = 1.0 / 64;
    int divergence_window = 5;
};

struct SolveResult {
    GridField u{1.0, 1.0, 1};
    double residual_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    std::string status;
    std::optional<double> distance_to_reference;
    std::vector<double> residual_history; // max |Q_h(u) - f| after each accepted step, starting with the guess
    std::vector<double> step_lengths;
    double min_theta = 0.0;               // min over nodes and accepted iterates of z(u) / W^3
    int unknowns = 0;
    double h = 0.0;
    double rho = 0.0;
    /// Residual at nodes at least 2h inside, recomputed through apply_Q on a
    /// grid-backed field, and its largest disagreement with the internal one.
    double independent_residual = 0.0;
    double residual_agreement = 0.0;
    /// Largest |g - initial| on the circle, removed by lifting the guess.
    double boundary_gap = 0.0;
    /// Newton solves run (including failed attempts) and the homotopy
    /// parameter reached, 1 meaning the full right-hand side.
    int stages = 0;
    double continuation = 0.0;
    double rtol_used = 0.0;
};

void to_json(Json& j, const SolveResult& r);

/// Damped Newton iteration whose Jacobian is the linearization L at
/// phi = psi = current iterate, discretised with the residual's stencils.
/// The guess is first lifted to match g on the circle; if Newton fails from
/// there, the right-hand side is continued from Q_h(guess) to f.
/// Throws ConfigError for bad parameters and EllipticityError when z of the
/// initial guess is not positive at some node.
[[nodiscard]] SolveResult solve_dirichlet(const DirichletProblem& p, const ScalarField& initial,
                                          const SolverConfig& cfg = {},
                                          const std::optional<ScalarField>& reference = std::nullopt);

/// Max |u - v| over the nodes present in u.
[[nodiscard]] double grid_distance(const GridField& u, const ScalarField& v);

struct RigidityRun {
    double rho = 0.0;
    std::string initial;
    bool converged = false;
    int iterations = 0;
    double residual_norm = 0.0;
    double distance_to_reference = 0.0;
    double center_value = 0.0;
    int branch = -1;
};

struct RigidityBranch {
    double center_value = 0.0;
    double distance_to_reference = 0.0;
    bool is_reference = false;
    /// For a branch that is itself a spherical cap of the same family, the
    /// centre height q of that cap (NaN when no such cap matches).
    double matching_cap_q = NAN;
};

struct RigidityReport {
    Ambient ambient = Ambient::hyperbolic;
    int n = 2;
    double h = 0.0;
    double agreement_tolerance = 0.0; // 10 h^2
    double f = 0.0;
    std::vector<RigidityRun> runs;
    std::vector<std::vector<RigidityBranch>> branches; // per rho
    bool all_agree = false;
    // Subcritical branch (hyperbolic only): f = n, g = 1 on rho = 0.9.
    bool subcritical_checked = false;
    bool subcritical_converged = false;
    double subcritical_residual = 0.0;
    double subcritical_distance_to_one = 0.0;
    double subcritical_distance_to_reference = 0.0;
    bool subcritical_distinct = false;
    std::vector<Claim> claims;
    bool pass = false;
};

void to_json(Json& j, const RigidityReport& r);

/// Multi-start solves of the critical problem on B_rho, rho in {0.7, 0.8,
/// 0.9}: hyperbolic H = sqrt(2) n with g = v, Euclidean H_0 = -n with g the
/// hemisphere. Only n = 2 grids are supported.
[[nodiscard]] RigidityReport rigidity_experiment(Ambient ambient, int n, double h, const SolverConfig& cfg = {});

} // namespace hemi
