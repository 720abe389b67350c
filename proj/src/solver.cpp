#include "hemi/solver.hpp"

#include "hemi/errors.hpp"
#include "hemi/fields.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace hemi {

namespace {

// Stencil slots: centre, then E, W, N, S, NE, SW, NW, SE.
// Slots: centre, the 8 neighbours, then the nodes two steps out along each
// direction (used for the four-point second differences).
constexpr int kSlots = 17;
constexpr std::array<std::array<int, 2>, 8> kDirs{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}, {-1, 1}, {1, -1}}};

enum Deriv { dx = 0, dy, dxx, dyy, dxy, kDerivs };

struct Node {
    int i = 0;
    int j = 0;
    Vec x;
    std::array<int, kSlots> unknown{};    // index into the unknown vector, -1 if known
    std::array<double, kSlots> known{};   // value when the slot is known
    std::array<std::array<double, kSlots>, kDerivs> w{};
    double f = 0.0;        // right-hand side in use
    double f_target = 0.0; // f(x)
    double f_start = 0.0;  // Q_h of the starting iterate
};

// Weights of the three-point formulas on a line with spacings tp s (ahead)
// and tm s (behind); second-order for the first derivative.
void first_weights(double tp, double tm, double s, double& wp, double& w0, double& wm)
{
    const double D = tp * tm * (tp + tm) * s;
    wp = tm * tm / D;
    wm = -tp * tp / D;
    w0 = (tp * tp - tm * tm) / D;
}

void second_weights(double tp, double tm, double s, double& wp, double& w0, double& wm)
{
    wp = 2.0 / (tp * (tp + tm) * s * s);
    wm = 2.0 / (tm * (tp + tm) * s * s);
    w0 = -(wp + wm);
}

// Second derivative at 0 of the cubic through offsets t[0..3] (units of s).
std::array<double, 4> cubic_second_weights(const std::array<double, 4>& t, double s)
{
    std::array<double, 4> w{};
    for (std::size_t k = 0; k < 4; ++k) {
        double sum = 0.0;
        double den = 1.0;
        for (std::size_t m = 0; m < 4; ++m) {
            if (m != k) {
                sum += t[m];
                den *= t[k] - t[m];
            }
        }
        w[k] = -2.0 * sum / (den * s * s);
    }
    return w;
}

class Discretisation {
public:
    Discretisation(const DirichletProblem& p) : p_(p)
    {
        const double h = p.h;
        extent_ = static_cast<int>(std::ceil(p.rho / h)) + 2;
        const double on_circle = 1e-6 * h;
        // Index the unknowns first so neighbours can refer to them.
        const int side = 2 * extent_ + 1;
        index_.assign(static_cast<std::size_t>(side * side), -1);
        for (int i = -extent_; i <= extent_; ++i) {
            for (int j = -extent_; j <= extent_; ++j) {
                if (p.rho - std::hypot(i * h, j * h) > on_circle) {
                    index_[flat(i, j)] = static_cast<int>(nodes_.size());
                    Node nd;
                    nd.i = i;
                    nd.j = j;
                    nd.x = Vec(2);
                    nd.x << i * h, j * h;
                    nodes_.push_back(std::move(nd));
                }
            }
        }
        for (auto& nd : nodes_) {
            build(nd, on_circle);
            nd.f_target = nd.f;
        }
    }

    /// Homotopy start: the right-hand side that U solves exactly.
    void set_start(const Vec& U)
    {
        const Vec F = residual(U);
        for (std::size_t k = 0; k < nodes_.size(); ++k) {
            nodes_[k].f_start = nodes_[k].f_target + F(static_cast<Eigen::Index>(k));
        }
    }

    /// Right-hand side (1 - s) Q_h(U_start) + s f.
    void blend(double s)
    {
        for (auto& nd : nodes_) {
            nd.f = s >= 1.0 ? nd.f_target : (1.0 - s) * nd.f_start + s * nd.f_target;
        }
    }

    [[nodiscard]] std::size_t size() const noexcept { return nodes_.size(); }
    [[nodiscard]] const std::vector<Node>& nodes() const noexcept { return nodes_; }
    [[nodiscard]] int extent() const noexcept { return extent_; }
    [[nodiscard]] int index_of(int i, int j) const
    {
        if (std::abs(i) > extent_ || std::abs(j) > extent_) {
            return -1;
        }
        return index_[flat(i, j)];
    }

    [[nodiscard]] Jet jet(const Node& nd, const Vec& U) const
    {
        std::array<double, kSlots> v{};
        for (int s = 0; s < kSlots; ++s) {
            v[static_cast<std::size_t>(s)] = nd.unknown[static_cast<std::size_t>(s)] >= 0
                                                 ? U(nd.unknown[static_cast<std::size_t>(s)])
                                                 : nd.known[static_cast<std::size_t>(s)];
        }
        std::array<double, kDerivs> d{};
        for (int k = 0; k < kDerivs; ++k) {
            double acc = 0.0;
            for (int s = 0; s < kSlots; ++s) {
                acc += nd.w[static_cast<std::size_t>(k)][static_cast<std::size_t>(s)] * v[static_cast<std::size_t>(s)];
            }
            d[static_cast<std::size_t>(k)] = acc;
        }
        Jet j;
        j.value = v[0];
        j.gradient = Vec(2);
        j.gradient << d[dx], d[dy];
        j.hessian = Mat(2, 2);
        j.hessian << d[dxx], d[dxy], d[dxy], d[dyy];
        return j;
    }

    // Max-norm residual; throws DomainError if z is undefined somewhere.
    [[nodiscard]] Vec residual(const Vec& U) const
    {
        Vec F(static_cast<Eigen::Index>(nodes_.size()));
        for (std::size_t k = 0; k < nodes_.size(); ++k) {
            F(static_cast<Eigen::Index>(k)) = p_.op.apply(jet(nodes_[k], U)) - nodes_[k].f;
        }
        return F;
    }

    [[nodiscard]] Eigen::SparseMatrix<double> jacobian(const Vec& U, double& min_theta) const
    {
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(nodes_.size() * kSlots);
        min_theta = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < nodes_.size(); ++k) {
            const Node& nd = nodes_[k];
            const Jet j = jet(nd, U);
            // With phi = psi the path integrands are constant in t, so the
            // lowest quadrature order is already exact.
            const auto pc = linearize_at(p_.op, j, j, 8);
            min_theta = std::min(min_theta, pc.theta);
            for (int s = 0; s < kSlots; ++s) {
                const int col = nd.unknown[static_cast<std::size_t>(s)];
                if (col < 0) {
                    continue;
                }
                const auto& w = nd.w;
                const auto us = static_cast<std::size_t>(s);
                double v = pc.a(0, 0) * w[dxx][us] + pc.a(1, 1) * w[dyy][us] + 2.0 * pc.a(0, 1) * w[dxy][us]
                           + pc.b(0) * w[dx][us] + pc.b(1) * w[dy][us];
                if (s == 0) {
                    v += pc.c;
                }
                trip.emplace_back(static_cast<int>(k), col, v);
            }
        }
        Eigen::SparseMatrix<double> J(static_cast<Eigen::Index>(nodes_.size()),
                                      static_cast<Eigen::Index>(nodes_.size()));
        J.setFromTriplets(trip.begin(), trip.end());
        return J;
    }

private:
    [[nodiscard]] std::size_t flat(int i, int j) const
    {
        const int side = 2 * extent_ + 1;
        return static_cast<std::size_t>((i + extent_) * side + (j + extent_));
    }

    void build(Node& nd, double on_circle)
    {
        const double h = p_.h;
        nd.f = p_.f(nd.x);
        nd.unknown[0] = index_of(nd.i, nd.j);
        std::array<double, kSlots> theta{};
        theta[0] = 0.0;
        for (std::size_t d = 0; d < kDirs.size(); ++d) {
            const int ni = nd.i + kDirs[d][0];
            const int nj = nd.j + kDirs[d][1];
            const std::size_t slot = d + 1;
            const int idx = index_of(ni, nj);
            Vec y(2);
            y << ni * h, nj * h;
            if (idx >= 0) {
                nd.unknown[slot] = idx;
                theta[slot] = 1.0;
            } else if (std::abs(y.norm() - p_.rho) <= on_circle) {
                nd.unknown[slot] = -1;
                nd.known[slot] = p_.g(y * (p_.rho / y.norm()));
                theta[slot] = 1.0;
            } else {
                // Crossing of the segment x -> y with the circle |z| = rho.
                const Vec e = y - nd.x;
                const double a = e.squaredNorm();
                const double b = 2.0 * nd.x.dot(e);
                const double c = nd.x.squaredNorm() - p_.rho * p_.rho;
                const double t = (-b + std::sqrt(b * b - 4.0 * a * c)) / (2.0 * a);
                Vec z = nd.x + t * e;
                z *= p_.rho / z.norm();
                nd.unknown[slot] = -1;
                nd.known[slot] = p_.g(z);
                theta[slot] = t;
            }
        }
        for (std::size_t d = 0; d < kDirs.size(); ++d) {
            const std::size_t slot = d + 9;
            nd.unknown[slot] = index_of(nd.i + 2 * kDirs[d][0], nd.j + 2 * kDirs[d][1]);
        }
        const double s_axis = h;
        const double s_diag = h * std::numbers::sqrt2;
        double wp = 0.0;
        double w0 = 0.0;
        double wm = 0.0;
        // x: E (1), W (2); y: N (3), S (4); d1: NE (5), SW (6); d2: NW (7), SE (8).
        first_weights(theta[1], theta[2], s_axis, wp, w0, wm);
        nd.w[dx][1] = wp;
        nd.w[dx][0] = w0;
        nd.w[dx][2] = wm;
        second_along(nd, theta, 1, 2, s_axis, dxx, 1.0);
        first_weights(theta[3], theta[4], s_axis, wp, w0, wm);
        nd.w[dy][3] = wp;
        nd.w[dy][0] = w0;
        nd.w[dy][4] = wm;
        second_along(nd, theta, 3, 4, s_axis, dyy, 1.0);
        // u_xy = (D^2 along (1,1) - D^2 along (1,-1)) / 2.
        second_along(nd, theta, 5, 6, s_diag, dxy, 0.5);
        second_along(nd, theta, 8, 7, s_diag, dxy, -0.5);
        for (std::size_t slot = 9; slot < kSlots; ++slot) {
            if (nd.w[dxx][slot] == 0.0 && nd.w[dyy][slot] == 0.0 && nd.w[dxy][slot] == 0.0) {
                nd.unknown[slot] = -1;
            }
        }
    }

    // Adds scale * (second difference along the line through slots `ps` and
    // `ms`) to w[k]. When exactly one side is cut by the circle and the node
    // two steps out on the other side is an unknown, the cubic through four
    // points keeps the truncation error second order.
    static void second_along(Node& nd, const std::array<double, kSlots>& theta, int ps, int ms, double s, int k,
                             double scale)
    {
        const auto p = static_cast<std::size_t>(ps);
        const auto m = static_cast<std::size_t>(ms);
        const auto kk = static_cast<std::size_t>(k);
        const bool cut_p = theta[p] < 1.0;
        const bool cut_m = theta[m] < 1.0;
        if (cut_p != cut_m) {
            const std::size_t far = (cut_p ? m : p) + 8;
            if (nd.unknown[far] >= 0) {
                const double tc = cut_p ? theta[p] : theta[m];
                const std::size_t near_cut = cut_p ? p : m;
                const std::size_t near_in = cut_p ? m : p;
                const auto w = cubic_second_weights({tc, 0.0, -1.0, -2.0}, s);
                nd.w[kk][near_cut] += scale * w[0];
                nd.w[kk][0] += scale * w[1];
                nd.w[kk][near_in] += scale * w[2];
                nd.w[kk][far] += scale * w[3];
                return;
            }
        }
        double wp = 0.0;
        double w0 = 0.0;
        double wm = 0.0;
        second_weights(theta[p], theta[m], s, wp, w0, wm);
        nd.w[kk][p] += scale * wp;
        nd.w[kk][0] += scale * w0;
        nd.w[kk][m] += scale * wm;
    }

    const DirichletProblem& p_;
    int extent_ = 0;
    std::vector<int> index_;
    std::vector<Node> nodes_;
};

double max_abs(const Vec& v)
{
    return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

// Residual that also reports z being undefined as +infinity.
double safe_norm(const Discretisation& disc, const Vec& U, Vec* F = nullptr)
{
    try {
        Vec r = disc.residual(U);
        const double n = max_abs(r);
        if (F != nullptr) {
            *F = std::move(r);
        }
        return std::isfinite(n) ? n : std::numeric_limits<double>::infinity();
    } catch (const DomainError&) {
        return std::numeric_limits<double>::infinity();
    }
}

} // namespace

std::function<double(const Vec&)> constant_function(double c)
{
    return [c](const Vec&) { return c; };
}

std::function<double(const Vec&)> field_function(const ScalarField& u)
{
    return [u](const Vec& x) { return u.sample(x); };
}

void to_json(Json& j, const SolveResult& r)
{
    j = Json{{"converged", r.converged},
             {"status", r.status},
             {"iterations", r.iterations},
             {"residual_norm", r.residual_norm},
             {"residual_history", r.residual_history},
             {"step_lengths", r.step_lengths},
             {"min_theta", r.min_theta},
             {"unknowns", r.unknowns},
             {"grid_h", r.h},
             {"rho", r.rho},
             {"independent_residual", r.independent_residual},
             {"residual_agreement", r.residual_agreement},
             {"boundary_gap", r.boundary_gap},
             {"continuation_stages", r.stages},
             {"continuation_reached", r.continuation},
             {"rtol", r.rtol_used}};
    if (r.distance_to_reference) {
        j["distance_to_reference"] = *r.distance_to_reference;
    } else {
        j["distance_to_reference"] = nullptr;
    }
}

double grid_distance(const GridField& u, const ScalarField& v)
{
    double d = 0.0;
    for (int i = -u.extent(); i <= u.extent(); ++i) {
        for (int j = -u.extent(); j <= u.extent(); ++j) {
            if (u.present(i, j)) {
                d = std::max(d, std::abs(u.at(i, j) - v.sample(u.node(i, j))));
            }
        }
    }
    return d;
}

namespace {

constexpr double kMinBlend = 1.0 / 1024;

// Damped Newton on the current boundary data. Appends to the history in
// `res`; returns whether the max-norm residual reached rtol.
bool newton(const Discretisation& disc, const SolverConfig& cfg, Vec& U, SolveResult& res)
{
    Vec F;
    double norm = safe_norm(disc, U, &F);
    if (!std::isfinite(norm)) {
        res.status = "ellipticity_lost";
        return false;
    }
    res.residual_history.push_back(norm);
    int growing = 0;
    res.status = "max_iter";
    for (int it = 0; it < cfg.max_iter && norm > cfg.rtol; ++it) {
        double theta = 0.0;
        const auto J = disc.jacobian(U, theta);
        if (!(theta > 0.0)) {
            res.status = "ellipticity_lost";
            return false;
        }
        res.min_theta = std::min(res.min_theta, theta);
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(J);
        if (lu.info() != Eigen::Success) {
            res.status = "singular_jacobian";
            return false;
        }
        const Vec delta = lu.solve(-F);

        // Armijo backtracking on the max-norm.
        const double merit = norm;
        double alpha = 1.0;
        Vec trialF;
        double trial = std::numeric_limits<double>::infinity();
        while (true) {
            trial = safe_norm(disc, U + alpha * delta, &trialF);
            if ((std::isfinite(trial) && trial <= (1.0 - 1e-4 * alpha) * merit) || alpha <= cfg.min_step) {
                break;
            }
            alpha *= 0.5;
        }
        if (!std::isfinite(trial)) {
            res.status = "ellipticity_lost";
            return false;
        }
        U += alpha * delta;
        const bool grew = trial > merit;
        F = std::move(trialF);
        growing = (alpha < 1.0 && grew) ? growing + 1 : 0;
        norm = trial;
        ++res.iterations;
        res.residual_history.push_back(norm);
        res.step_lengths.push_back(alpha);
        if (growing >= cfg.divergence_window) {
            res.status = "diverged";
            return false;
        }
    }
    res.residual_norm = norm;
    if (norm <= cfg.rtol) {
        res.status = "converged";
        return true;
    }
    return false;
}

// Residual, theta, grid, independent check and reference distance for the
// final iterate under the full boundary data.
SolveResult finish(const Discretisation& disc, const DirichletProblem& p, const Vec& U, SolveResult res,
                   const std::optional<ScalarField>& reference)
{
    const auto& nodes = disc.nodes();
    Vec F;
    res.residual_norm = safe_norm(disc, U, &F);
    res.converged = res.residual_norm <= res.rtol_used;
    if (res.converged) {
        res.status = "converged";
    } else if (res.status == "converged") {
        res.status = "continuation_stalled";
    }

    for (std::size_t k = 0; k < nodes.size(); ++k) {
        try {
            const Jet j = disc.jet(nodes[k], U);
            const double W = std::sqrt(1.0 + j.gradient.squaredNorm());
            res.min_theta = std::min(res.min_theta, p.op.z(j.value) / (W * W * W));
        } catch (const DomainError&) {
            res.min_theta = -std::numeric_limits<double>::infinity();
        }
    }

    // Grid field: unknown nodes plus every boundary node lying on the circle.
    GridField grid(p.h, p.rho, disc.extent());
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        grid.set(nodes[k].i, nodes[k].j, U(static_cast<Eigen::Index>(k)));
    }
    for (int i = -disc.extent(); i <= disc.extent(); ++i) {
        for (int j = -disc.extent(); j <= disc.extent(); ++j) {
            const Vec x = grid.node(i, j);
            if (disc.index_of(i, j) < 0 && std::abs(x.norm() - p.rho) <= 1e-6 * p.h) {
                grid.set(i, j, p.g(x * (p.rho / x.norm())));
            }
        }
    }
    res.u = grid;

    // Independent check through apply_Q on the grid-backed field.
    if (F.size() == static_cast<Eigen::Index>(nodes.size())) {
        const ScalarField gf = ScalarField::grid(grid, "solution");
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            if (!grid.differentiable_at(nodes[k].i, nodes[k].j)) {
                continue;
            }
            try {
                const double q = apply_Q(p.op, gf, nodes[k].x) - nodes[k].f;
                res.independent_residual = std::max(res.independent_residual, std::abs(q));
                res.residual_agreement =
                    std::max(res.residual_agreement, std::abs(q - F(static_cast<Eigen::Index>(k))));
            } catch (const Error&) {
                res.residual_agreement = std::numeric_limits<double>::infinity();
            }
        }
    }

    if (reference) {
        double d = 0.0;
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            d = std::max(d, std::abs(U(static_cast<Eigen::Index>(k)) - reference->sample(nodes[k].x)));
        }
        res.distance_to_reference = d;
    }
    return res;
}

} // namespace

SolveResult solve_dirichlet(const DirichletProblem& p, const ScalarField& initial, const SolverConfig& cfg,
                            const std::optional<ScalarField>& reference)
{
    if (p.op.dimension() != 2 || initial.dimension() != 2) {
        throw ConfigError("solve_dirichlet: the grid solver handles n = 2 only");
    }
    if (!(p.h > 0.0) || p.h > 0.1) {
        throw ConfigError("solve_dirichlet: h must lie in (0, 0.1]");
    }
    if (!(p.rho > 4.0 * p.h) || p.rho > 1.0) {
        throw ConfigError("solve_dirichlet: need 4h < rho <= 1");
    }
    if (!p.f || !p.g) {
        throw ConfigError("solve_dirichlet: right-hand side and boundary data are required");
    }
    if (cfg.max_iter < 1 || !(cfg.rtol > 0.0) || !(cfg.min_step > 0.0 && cfg.min_step <= 1.0)) {
        throw ConfigError("solve_dirichlet: bad solver configuration");
    }

    Discretisation disc(p);
    const auto& nodes = disc.nodes();
    Vec U(static_cast<Eigen::Index>(nodes.size()));
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        U(static_cast<Eigen::Index>(k)) = initial.sample(nodes[k].x);
    }
    auto check_z = [&](const char* what) {
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            const double t = U(static_cast<Eigen::Index>(k));
            if (!p.op.z_defined(t) || !(p.op.z(t) > 0.0)) {
                std::ostringstream os;
                os << "solve_dirichlet: z(" << what << ") is not positive at (" << nodes[k].x(0) << ", "
                   << nodes[k].x(1) << "), value " << t;
                throw EllipticityError(os.str());
            }
        }
    };
    check_z("initial");
    for (const auto& nd : nodes) {
        for (std::size_t s = 1; s <= kDirs.size(); ++s) {
            const double b = nd.known[s];
            if (nd.unknown[s] < 0 && (!p.op.z_defined(b) || !(p.op.z(b) > 0.0))) {
                throw EllipticityError("solve_dirichlet: z(g) is not positive on the boundary");
            }
        }
    }

    // Lift the guess onto the boundary data: add (r / rho)^2 times the
    // mismatch g - initial at the radial projection onto the circle.
    double gap = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        const Vec& x = nodes[k].x;
        const double r = x.norm();
        if (r == 0.0) {
            continue;
        }
        const Vec xb = x * (p.rho / r);
        double m = 0.0;
        try {
            m = p.g(xb) - initial.sample(xb);
        } catch (const Error&) {
            m = 0.0;
        }
        gap = std::max(gap, std::abs(m));
        U(static_cast<Eigen::Index>(k)) += (r / p.rho) * (r / p.rho) * m;
    }
    check_z("lifted initial");

    SolveResult res;
    res.unknowns = static_cast<int>(nodes.size());
    res.h = p.h;
    res.rho = p.rho;
    res.rtol_used = cfg.rtol;
    res.boundary_gap = gap;
    res.min_theta = std::numeric_limits<double>::infinity();

    // Plain Newton first; if that fails, follow the right-hand side from
    // Q_h(U_0) to f in adaptive increments.
    {
        Vec trial = U;
        SolveResult attempt = res;
        attempt.stages = 1;
        if (newton(disc, cfg, trial, attempt)) {
            attempt.continuation = 1.0;
            return finish(disc, p, trial, attempt, reference);
        }
        res.iterations = attempt.iterations;
        res.stages = 1;
    }
    disc.set_start(U);
    double s = 0.0;
    double ds = 0.25;
    while (s < 1.0) {
        const double next = std::min(1.0, s + ds);
        disc.blend(next);
        Vec trial = U;
        SolveResult attempt = res;
        const bool ok = newton(disc, cfg, trial, attempt);
        ++attempt.stages;
        if (ok) {
            U = std::move(trial);
            res = std::move(attempt);
            s = next;
            ds = std::min(2.0 * ds, 1.0);
            continue;
        }
        // Keep the work counters of the failed attempt, not its iterate.
        res.iterations = attempt.iterations;
        res.stages = attempt.stages;
        res.status = attempt.status;
        ds *= 0.5;
        if (ds < kMinBlend) {
            res.residual_history = attempt.residual_history;
            res.step_lengths = attempt.step_lengths;
            break;
        }
    }
    res.continuation = s;
    disc.blend(1.0);
    return finish(disc, p, U, res, reference);
}

void to_json(Json& j, const RigidityReport& r)
{
    Json runs = Json::array();
    for (const auto& run : r.runs) {
        runs.push_back({{"rho", run.rho},
                        {"initial", run.initial},
                        {"converged", run.converged},
                        {"iterations", run.iterations},
                        {"residual_norm", run.residual_norm},
                        {"distance_to_reference", run.distance_to_reference},
                        {"center_value", run.center_value},
                        {"branch", run.branch}});
    }
    Json branches = Json::array();
    for (const auto& per_rho : r.branches) {
        Json list = Json::array();
        for (const auto& b : per_rho) {
            Json e{{"center_value", b.center_value},
                   {"distance_to_reference", b.distance_to_reference},
                   {"is_reference", b.is_reference}};
            e["matching_cap_q"] = std::isnan(b.matching_cap_q) ? Json(nullptr) : Json(b.matching_cap_q);
            list.push_back(e);
        }
        branches.push_back(list);
    }
    j = Json{{"ambient", to_string(r.ambient)},
             {"n", r.n},
             {"grid_h", r.h},
             {"agreement_tolerance", r.agreement_tolerance},
             {"f", r.f},
             {"runs", runs},
             {"branches", branches},
             {"all_agree", r.all_agree},
             {"subcritical",
              {{"checked", r.subcritical_checked},
               {"converged", r.subcritical_converged},
               {"residual_norm", r.subcritical_residual},
               {"distance_to_one", r.subcritical_distance_to_one},
               {"distance_to_reference", r.subcritical_distance_to_reference},
               {"distinct_from_reference", r.subcritical_distinct}}},
             {"claims", r.claims},
             {"pass", r.pass}};
}

RigidityReport rigidity_experiment(Ambient ambient, int n, double h, const SolverConfig& cfg)
{
    if (n != 2) {
        throw ConfigError("rigidity_experiment: grid solves support n = 2 only");
    }
    const bool hyp = ambient == Ambient::hyperbolic;
    RigidityReport rep;
    rep.ambient = ambient;
    rep.n = n;
    rep.h = h;
    rep.agreement_tolerance = 10.0 * h * h;
    rep.f = hyp ? std::numbers::sqrt2 * n : -static_cast<double>(n);

    const ScalarField ref = hyp ? fields::model_sphere(2) : fields::hemisphere(2);
    const double branch_tol = 1e-6;
    rep.all_agree = true;

    for (double rho : {0.7, 0.8, 0.9}) {
        DirichletProblem p;
        p.op = hyp ? QuasilinearOperator::hyperbolic(2) : QuasilinearOperator::euclidean(2);
        p.f = constant_function(rep.f);
        Vec rim(2);
        rim << rho, 0.0;
        const double g = ref.sample(rim);
        p.g = constant_function(g);
        p.rho = rho;
        p.h = h;

        // Constant, a bowl through the boundary data, and the reference with
        // a bump that vanishes on the circle.
        const double rho2 = rho * rho;
        const std::vector<std::pair<std::string, ScalarField>> guesses = {
            {"constant", fields::constant(2, g, rho)},
            {"paraboloid", fields::paraboloid(2, hyp ? 0.5 : -0.5, g - (hyp ? 0.25 : -0.25) * rho2, rho)},
            {"perturbed_reference",
             ScalarField::analytic(
                 2, rho,
                 [ref, rho2](const Vec& x) {
                     Jet j = ref.jet(x);
                     const double s = rho2 - x.squaredNorm();
                     const double amp = 0.05;
                     j.value += amp * s * (1.0 + x(0));
                     Vec ds = -2.0 * x;
                     Vec gx = Vec::Zero(2);
                     gx(0) = 1.0;
                     j.gradient += amp * (ds * (1.0 + x(0)) + s * gx);
                     Mat H = -2.0 * Mat::Identity(2, 2) * (1.0 + x(0));
                     H += ds * gx.transpose() + gx * ds.transpose();
                     j.hessian += amp * H;
                     return j;
                 },
                 "perturbed_reference")},
        };

        std::vector<GridField> found;
        std::vector<RigidityBranch> branches;
        for (const auto& [label, guess] : guesses) {
            RigidityRun run;
            run.rho = rho;
            run.initial = label;
            const auto r = solve_dirichlet(p, guess, cfg, ref);
            run.converged = r.converged;
            run.iterations = r.iterations;
            run.residual_norm = r.residual_norm;
            run.distance_to_reference = r.distance_to_reference.value_or(INFINITY);
            run.center_value = r.u.at(0, 0);
            if (r.converged) {
                int b = -1;
                for (std::size_t k = 0; k < found.size(); ++k) {
                    double d = 0.0;
                    for (int i = -r.u.extent(); i <= r.u.extent(); ++i) {
                        for (int jj = -r.u.extent(); jj <= r.u.extent(); ++jj) {
                            if (r.u.present(i, jj)) {
                                d = std::max(d, std::abs(r.u.at(i, jj) - found[k].at(i, jj)));
                            }
                        }
                    }
                    if (d <= branch_tol) {
                        b = static_cast<int>(k);
                        break;
                    }
                }
                if (b < 0) {
                    b = static_cast<int>(found.size());
                    found.push_back(r.u);
                    RigidityBranch br;
                    br.center_value = run.center_value;
                    br.distance_to_reference = run.distance_to_reference;
                    br.is_reference = run.distance_to_reference <= rep.agreement_tolerance;
                    if (hyp) {
                        // Other caps of the family through the same circle:
                        // q - sqrt(q^2/2 - rho^2) = g, i.e. q = 2g +- sqrt(2g^2 - 2rho^2).
                        const double disc = 2.0 * g * g - 2.0 * rho2;
                        if (disc >= 0.0) {
                            for (double q : {2.0 * g + std::sqrt(disc), 2.0 * g - std::sqrt(disc)}) {
                                if (q > 0.0 && q / std::numbers::sqrt2 >= rho
                                    && grid_distance(r.u, fields::v_q(2, q)) <= rep.agreement_tolerance) {
                                    br.matching_cap_q = q;
                                }
                            }
                        }
                    }
                    branches.push_back(br);
                }
                run.branch = b;
            }
            rep.all_agree = rep.all_agree && run.converged && run.distance_to_reference <= rep.agreement_tolerance;
            rep.runs.push_back(run);
        }
        rep.branches.push_back(branches);
    }

    Claim agree{"every start converges to the reference cap within 10 h^2", 0.0, rep.agreement_tolerance, 0.0, h,
                rep.agreement_tolerance, 0.0, rep.all_agree};
    for (const auto& run : rep.runs) {
        agree.lhs = std::max(agree.lhs, run.distance_to_reference);
    }
    agree.slack = agree.rhs - agree.lhs;
    agree.deviation = agree.lhs;
    rep.claims.push_back(agree);

    if (hyp) {
        // Below the critical constant u = 1 solves H(u) = n with g = 1.
        DirichletProblem p;
        p.op = QuasilinearOperator::hyperbolic(2);
        p.f = constant_function(static_cast<double>(n));
        p.g = constant_function(1.0);
        p.rho = 0.9;
        p.h = h;
        const auto guess = fields::paraboloid(2, 0.2, 1.0 - 0.1 * 0.81, 0.9);
        const auto r = solve_dirichlet(p, guess, cfg, fields::u1(2));
        rep.subcritical_checked = true;
        rep.subcritical_converged = r.converged;
        rep.subcritical_residual = r.residual_norm;
        rep.subcritical_distance_to_one = r.distance_to_reference.value_or(INFINITY);
        rep.subcritical_distance_to_reference = grid_distance(r.u, ref);
        rep.subcritical_distinct = rep.subcritical_distance_to_reference > rep.agreement_tolerance;
        Claim sub{"f = n, g = 1: converges to u = 1, away from the reference cap", r.residual_norm, cfg.rtol,
                  cfg.rtol - r.residual_norm, h, cfg.rtol, rep.subcritical_distance_to_one,
                  r.converged && rep.subcritical_distinct && rep.subcritical_distance_to_one <= rep.agreement_tolerance};
        rep.claims.push_back(sub);
    }
    rep.pass = all_pass(rep.claims);
    return rep;
}

} // namespace hemi

