#pragma once

#include "hemi/field.hpp"
#include "hemi/meanops.hpp"
#include "hemi/report.hpp"

#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace hemi {

/// Q(u) = sum a~^{ij}(u, Du) u_ij + b~(Du) with
///   a~^{ij}(t, p) = z(t) / W (delta_ij - p_i p_j / W^2),  b~(p) = b0 / W,
/// W = sqrt(1 + |p|^2). Euclidean: b0 = 0, z = 1. Hyperbolic: b0 = n, z(t) = t
/// (then Q is the hyperbolic mean curvature operator).
class QuasilinearOperator {
public:
    enum class Kind { euclidean, hyperbolic, custom };

    static QuasilinearOperator euclidean(int n);
    static QuasilinearOperator hyperbolic(int n);
    /// z must be defined for t > z_lower (strictly).
    static QuasilinearOperator custom(int n, double b0, std::function<double(double)> z,
                                      std::function<double(double)> dz,
                                      double z_lower = -std::numeric_limits<double>::infinity());

    [[nodiscard]] int dimension() const noexcept { return n_; }
    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] double b0() const noexcept { return b0_; }
    [[nodiscard]] std::string name() const;

    [[nodiscard]] bool z_defined(double t) const noexcept { return t > z_lower_; }
    /// Throws DomainError when t is outside the domain of z.
    [[nodiscard]] double z(double t) const;
    [[nodiscard]] double dz(double t) const;

    [[nodiscard]] Mat a_tilde(double t, const Vec& p) const;
    [[nodiscard]] double b_tilde(const Vec& p) const;
    /// d a~^{lm} / d p_i for fixed i.
    [[nodiscard]] Mat da_dp(double t, const Vec& p, int i) const;
    /// Gradient of b~ in p.
    [[nodiscard]] Vec db_dp(const Vec& p) const;
    /// d a~^{lm} / d z.
    [[nodiscard]] Mat da_dz(double t, const Vec& p) const;

    /// Q at one point given the jet of u there.
    [[nodiscard]] double apply(const Jet& u) const;

private:
    QuasilinearOperator(int n, Kind kind, double b0, std::function<double(double)> z,
                        std::function<double(double)> dz, double z_lower);

    int n_;
    Kind kind_;
    double b0_;
    std::function<double(double)> z_;
    std::function<double(double)> dz_;
    double z_lower_;
};

/// Q(u)(x); agrees with mean_curvature_euclidean / _hyperbolic for the two
/// tagged operators.
[[nodiscard]] double apply_Q(const QuasilinearOperator& op, const ScalarField& u, const Vec& x);

/// Coefficients of L h = sum a^{ij} h_ij + sum b^i h_i + c h at one point,
/// where h = psi - phi and Q(psi) - Q(phi) = L h.
struct PointCoefficients {
    Mat a;
    Vec b;
    double c = 0.0;
    double theta = 0.0; // z(psi) / W_psi^3, the smallest eigenvalue of a
};

/// Gauss-Legendre orders accepted for the path integrals.
inline constexpr int kDefaultGaussPoints = 16;

/// Throws EllipticityError when z(psi) <= 0 or z is undefined at psi. `gauss_points` is one of
/// 8, 16, 32, 64.
[[nodiscard]] PointCoefficients linearize_at(const QuasilinearOperator& op, const Jet& phi, const Jet& psi,
                                             int gauss_points = kDefaultGaussPoints);

struct LinearizedCoefficients {
    int n = 2;
    std::vector<Vec> points;
    std::vector<Mat> a;
    std::vector<Vec> b;
    std::vector<double> c;
    double theta = 0.0; // min over points of z(psi) / W_psi^3
    double C = 0.0;     // max over points of {sum |a^{ii}|, sum |b^i|, 2 |c|}
    int gauss_points = kDefaultGaussPoints;

    /// L h at point k for the given jet of h.
    [[nodiscard]] double apply(std::size_t k, const Jet& h) const;
};

void to_json(Json& j, const LinearizedCoefficients& lc);

/// Coefficient fields over a point set.
[[nodiscard]] LinearizedCoefficients linearize(const QuasilinearOperator& op, const ScalarField& phi,
                                               const ScalarField& psi, const std::vector<Vec>& points,
                                               int gauss_points = kDefaultGaussPoints);

/// Nodes (i h, j h, 0, ..., 0) of the planar grid lying in the closed disk of
/// radius `radius`.
[[nodiscard]] std::vector<Vec> disk_points(int n, double h, double radius);

/// The bound C used by the barrier construction for one coefficient sample.
[[nodiscard]] double coefficient_bound(const PointCoefficients& pc);

struct BarrierConfig {
    double delta = 0.5;
    double lambda = 1.0;
    double theta = 1.0;
    double C = 0.0;
};

struct BarrierValue {
    double w = 0.0;
    Vec gradient;
    Mat hessian;
};

/// w = exp(-lambda |x|^2) - exp(-lambda delta^2) with derivatives. Throws
/// DomainError when |x| > delta or lambda <= 0.
[[nodiscard]] BarrierValue hopf_barrier(const BarrierConfig& cfg, const Vec& x);

/// -2 lambda delta exp(-lambda delta^2), the outward normal derivative of w on
/// the rim.
[[nodiscard]] double barrier_rim_derivative(const BarrierConfig& cfg);

/// 4 lambda^2 theta r^2 - 2 lambda C (r + 1) - C.
[[nodiscard]] double barrier_bracket(const BarrierConfig& cfg, double r);

/// (L - |c|) w at x for one coefficient sample.
[[nodiscard]] double barrier_operator_value(const BarrierConfig& cfg, const PointCoefficients& pc, const Vec& x);

/// Smallest lambda in 1, 2, 4, ... whose bracket is positive at r = delta / 2
/// (and hence on [delta / 2, delta]). Throws DomainError unless theta > 0,
/// C >= 0 and 0 < delta < 1.
[[nodiscard]] double choose_lambda(double theta, double C, double delta);

/// Outcome of the barrier construction checked at sample points of the
/// closed annulus delta / 2 <= |x| <= delta.
struct BarrierReport {
    BarrierConfig config;
    int samples = 0;
    double min_bracket = 0.0;
    double min_operator_value = 0.0; // only when coefficients were supplied
    bool operator_checked = false;
    double rim_derivative = 0.0;
    double rim_derivative_error = 0.0; // |D w . mu - expected| at sampled rim points
    std::vector<Claim> claims;
    bool pass = false;
};

void to_json(Json& j, const BarrierReport& r);

/// Checks the barrier at `samples` seeded points of the closed annulus (both
/// radii included). When op, phi and psi are all given, the linearization is
/// evaluated at the same points and (L - |c|) w is checked directly.
[[nodiscard]] BarrierReport verify_barrier(const BarrierConfig& cfg, int n, int samples, unsigned seed,
                                           const QuasilinearOperator* op = nullptr, const ScalarField* phi = nullptr,
                                           const ScalarField* psi = nullptr);

/// The comparison principle fails for the hyperbolic operator: u1 >= v >= u2
/// pointwise while H(u1), H(u2) < H(v). No analogous claim is made for the
/// Euclidean operator.
struct ComparisonFailureReport {
    CounterexampleReport hyperbolic;
    bool failure_confirmed = false;
    std::string euclidean = "not_applicable";
};

void to_json(Json& j, const ComparisonFailureReport& r);

[[nodiscard]] ComparisonFailureReport comparison_failure_demo(int n = 2, double epsilon = 0.25,
                                                              double h = 1.0 / 256);

} // namespace hemi
