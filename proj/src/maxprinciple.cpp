#include "hemi/maxprinciple.hpp"

#include "hemi/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace hemi {

namespace {

struct Node {
    double t;
    double w;
};

// Gauss-Legendre rule mapped to [0, 1].
template <unsigned N>
std::vector<Node> gauss_nodes()
{
    using Rule = boost::math::quadrature::gauss<double, N>;
    const auto& x = Rule::abscissa();
    const auto& w = Rule::weights();
    std::vector<Node> nodes;
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (x[k] == 0.0) {
            nodes.push_back({0.5, 0.5 * w[k]});
        } else {
            nodes.push_back({0.5 * (1.0 - x[k]), 0.5 * w[k]});
            nodes.push_back({0.5 * (1.0 + x[k]), 0.5 * w[k]});
        }
    }
    return nodes;
}

const std::vector<Node>& rule(int points)
{
    static const auto g8 = gauss_nodes<8>();
    static const auto g16 = gauss_nodes<16>();
    static const auto g32 = gauss_nodes<32>();
    static const auto g64 = gauss_nodes<64>();
    switch (points) {
    case 8:
        return g8;
    case 16:
        return g16;
    case 32:
        return g32;
    case 64:
        return g64;
    default:
        throw ConfigError("Gauss-Legendre order must be 8, 16, 32 or 64, got " + std::to_string(points));
    }
}

void require_dimension(const QuasilinearOperator& op, int n, const char* what)
{
    if (op.dimension() != n) {
        std::ostringstream os;
        os << what << ": operator dimension " << op.dimension() << " does not match field dimension " << n;
        throw DomainError(os.str());
    }
}

} // namespace

QuasilinearOperator::QuasilinearOperator(int n, Kind kind, double b0, std::function<double(double)> z,
                                         std::function<double(double)> dz, double z_lower)
    : n_(n), kind_(kind), b0_(b0), z_(std::move(z)), dz_(std::move(dz)), z_lower_(z_lower)
{
    if (n < 1) {
        throw DomainError("QuasilinearOperator: dimension must be positive");
    }
}

QuasilinearOperator QuasilinearOperator::euclidean(int n)
{
    return {n, Kind::euclidean, 0.0, [](double) { return 1.0; }, [](double) { return 0.0; },
            -std::numeric_limits<double>::infinity()};
}

QuasilinearOperator QuasilinearOperator::hyperbolic(int n)
{
    // z(t) = t is a polynomial, but the operator only means something in the
    // upper half-space.
    return {n, Kind::hyperbolic, static_cast<double>(n), [](double t) { return t; }, [](double) { return 1.0; },
            0.0};
}

QuasilinearOperator QuasilinearOperator::custom(int n, double b0, std::function<double(double)> z,
                                                std::function<double(double)> dz, double z_lower)
{
    if (!z || !dz) {
        throw ConfigError("QuasilinearOperator::custom needs z and its derivative");
    }
    return {n, Kind::custom, b0, std::move(z), std::move(dz), z_lower};
}

std::string QuasilinearOperator::name() const
{
    switch (kind_) {
    case Kind::euclidean:
        return "euclidean";
    case Kind::hyperbolic:
        return "hyperbolic";
    case Kind::custom:
        break;
    }
    return "custom";
}

double QuasilinearOperator::z(double t) const
{
    if (!(t > z_lower_)) {
        std::ostringstream os;
        os << name() << " operator: z is undefined at t = " << t;
        throw DomainError(os.str());
    }
    return z_(t);
}

double QuasilinearOperator::dz(double t) const
{
    if (!(t > z_lower_)) {
        std::ostringstream os;
        os << name() << " operator: z' is undefined at t = " << t;
        throw DomainError(os.str());
    }
    return dz_(t);
}

Mat QuasilinearOperator::a_tilde(double t, const Vec& p) const
{
    const double W2 = 1.0 + p.squaredNorm();
    const double W = std::sqrt(W2);
    return z(t) / W * (Mat::Identity(n_, n_) - p * p.transpose() / W2);
}

double QuasilinearOperator::b_tilde(const Vec& p) const
{
    return b0_ / std::sqrt(1.0 + p.squaredNorm());
}

Mat QuasilinearOperator::da_dp(double t, const Vec& p, int i) const
{
    const double W = std::sqrt(1.0 + p.squaredNorm());
    const double W3 = W * W * W;
    const double W5 = W3 * W * W;
    Mat d = (-p(i) / W3) * Mat::Identity(n_, n_) + (3.0 * p(i) / W5) * (p * p.transpose());
    for (int m = 0; m < n_; ++m) {
        d(i, m) -= p(m) / W3;
        d(m, i) -= p(m) / W3;
    }
    return z(t) * d;
}

Vec QuasilinearOperator::db_dp(const Vec& p) const
{
    const double W = std::sqrt(1.0 + p.squaredNorm());
    return -b0_ / (W * W * W) * p;
}

Mat QuasilinearOperator::da_dz(double t, const Vec& p) const
{
    const double W2 = 1.0 + p.squaredNorm();
    const double W = std::sqrt(W2);
    return dz(t) / W * (Mat::Identity(n_, n_) - p * p.transpose() / W2);
}

double QuasilinearOperator::apply(const Jet& u) const
{
    return a_tilde(u.value, u.gradient).cwiseProduct(u.hessian).sum() + b_tilde(u.gradient);
}

double apply_Q(const QuasilinearOperator& op, const ScalarField& u, const Vec& x)
{
    require_dimension(op, u.dimension(), "apply_Q");
    return op.apply(u.jet(x));
}

PointCoefficients linearize_at(const QuasilinearOperator& op, const Jet& phi, const Jet& psi, int gauss_points)
{
    const int n = op.dimension();
    const auto& nodes = rule(gauss_points);
    const double zpsi = op.z_defined(psi.value) ? op.z(psi.value) : std::numeric_limits<double>::quiet_NaN();
    if (!(zpsi > 0.0)) {
        std::ostringstream os;
        os << "linearize: z(psi) = " << zpsi << " is not positive";
        throw EllipticityError(os.str());
    }

    PointCoefficients pc;
    pc.a = op.a_tilde(psi.value, psi.gradient);
    const double Wpsi = std::sqrt(1.0 + psi.gradient.squaredNorm());
    pc.theta = zpsi / (Wpsi * Wpsi * Wpsi);

    pc.b = Vec::Zero(n);
    Mat mean_dz = Mat::Zero(n, n);
    for (const auto& nd : nodes) {
        const Vec p = nd.t * psi.gradient + (1.0 - nd.t) * phi.gradient;
        const Vec db = op.db_dp(p);
        for (int i = 0; i < n; ++i) {
            pc.b(i) += nd.w * (phi.hessian.cwiseProduct(op.da_dp(psi.value, p, i)).sum() + db(i));
        }
        mean_dz += nd.w * op.da_dz(nd.t * psi.value + (1.0 - nd.t) * phi.value, phi.gradient);
    }
    pc.c = phi.hessian.cwiseProduct(mean_dz).sum();
    return pc;
}

double LinearizedCoefficients::apply(std::size_t k, const Jet& h) const
{
    return a.at(k).cwiseProduct(h.hessian).sum() + b.at(k).dot(h.gradient) + c.at(k) * h.value;
}

double coefficient_bound(const PointCoefficients& pc)
{
    return std::max({pc.a.diagonal().cwiseAbs().sum(), pc.b.cwiseAbs().sum(), 2.0 * std::abs(pc.c)});
}

LinearizedCoefficients linearize(const QuasilinearOperator& op, const ScalarField& phi, const ScalarField& psi,
                                 const std::vector<Vec>& points, int gauss_points)
{
    require_dimension(op, phi.dimension(), "linearize");
    require_dimension(op, psi.dimension(), "linearize");
    if (points.empty()) {
        throw ConfigError("linearize: empty point set");
    }
    LinearizedCoefficients lc;
    lc.n = op.dimension();
    lc.gauss_points = gauss_points;
    lc.theta = std::numeric_limits<double>::infinity();
    for (const auto& x : points) {
        const auto pc = linearize_at(op, phi.jet(x), psi.jet(x), gauss_points);
        lc.points.push_back(x);
        lc.a.push_back(pc.a);
        lc.b.push_back(pc.b);
        lc.c.push_back(pc.c);
        lc.theta = std::min(lc.theta, pc.theta);
        lc.C = std::max(lc.C, coefficient_bound(pc));
    }
    return lc;
}

void to_json(Json& j, const LinearizedCoefficients& lc)
{
    Json pts = Json::array();
    for (std::size_t k = 0; k < lc.points.size(); ++k) {
        Json a = Json::array();
        for (int r = 0; r < lc.n; ++r) {
            Json row = Json::array();
            for (int s = 0; s < lc.n; ++s) {
                row.push_back(lc.a[k](r, s));
            }
            a.push_back(row);
        }
        pts.push_back({{"x", std::vector<double>(lc.points[k].data(), lc.points[k].data() + lc.points[k].size())},
                       {"a", a},
                       {"b", std::vector<double>(lc.b[k].data(), lc.b[k].data() + lc.b[k].size())},
                       {"c", lc.c[k]}});
    }
    j = Json{{"n", lc.n}, {"theta", lc.theta}, {"C", lc.C}, {"gauss_points", lc.gauss_points}, {"points", pts}};
}

std::vector<Vec> disk_points(int n, double h, double radius)
{
    if (!(h > 0.0) || !(radius > 0.0) || n < 2) {
        throw ConfigError("disk_points: need h > 0, radius > 0 and n >= 2");
    }
    const int m = static_cast<int>(std::floor(radius / h + 1e-9));
    std::vector<Vec> pts;
    for (int i = -m; i <= m; ++i) {
        for (int j = -m; j <= m; ++j) {
            Vec x = Vec::Zero(n);
            x(0) = i * h;
            x(1) = j * h;
            if (x.norm() <= radius * (1.0 + 1e-14)) {
                pts.push_back(x);
            }
        }
    }
    return pts;
}

BarrierValue hopf_barrier(const BarrierConfig& cfg, const Vec& x)
{
    if (!(cfg.lambda > 0.0)) {
        throw DomainError("hopf_barrier: lambda must be positive");
    }
    const double r2 = x.squaredNorm();
    if (std::sqrt(r2) > cfg.delta) {
        std::ostringstream os;
        os << "hopf_barrier: |x| = " << std::sqrt(r2) << " exceeds delta = " << cfg.delta;
        throw DomainError(os.str());
    }
    const int n = static_cast<int>(x.size());
    const double e = std::exp(-cfg.lambda * r2);
    BarrierValue b;
    b.w = e - std::exp(-cfg.lambda * cfg.delta * cfg.delta);
    b.gradient = -2.0 * cfg.lambda * e * x;
    b.hessian = e * (4.0 * cfg.lambda * cfg.lambda * x * x.transpose() - 2.0 * cfg.lambda * Mat::Identity(n, n));
    return b;
}

double barrier_rim_derivative(const BarrierConfig& cfg)
{
    return -2.0 * cfg.lambda * cfg.delta * std::exp(-cfg.lambda * cfg.delta * cfg.delta);
}

double barrier_bracket(const BarrierConfig& cfg, double r)
{
    return 4.0 * cfg.lambda * cfg.lambda * cfg.theta * r * r - 2.0 * cfg.lambda * cfg.C * (r + 1.0) - cfg.C;
}

double barrier_operator_value(const BarrierConfig& cfg, const PointCoefficients& pc, const Vec& x)
{
    const auto w = hopf_barrier(cfg, x);
    return pc.a.cwiseProduct(w.hessian).sum() + pc.b.dot(w.gradient) + (pc.c - std::abs(pc.c)) * w.w;
}

double choose_lambda(double theta, double C, double delta)
{
    if (!(theta > 0.0) || !(C >= 0.0) || !(delta > 0.0 && delta < 1.0)) {
        std::ostringstream os;
        os << "choose_lambda: need theta > 0, C >= 0, 0 < delta < 1 (got " << theta << ", " << C << ", " << delta
           << ")";
        throw DomainError(os.str());
    }
    BarrierConfig cfg{delta, 1.0, theta, C};
    // Once the bracket is positive at r = delta / 2 it is increasing in r there,
    // so that endpoint is the worst case. Doubling terminates because the
    // leading term is quadratic in lambda; the cap only guards against overflow.
    for (int k = 0; k < 1000; ++k) {
        if (barrier_bracket(cfg, 0.5 * delta) > 0.0) {
            return cfg.lambda;
        }
        cfg.lambda *= 2.0;
    }
    throw DomainError("choose_lambda: no admissible lambda below 2^1000");
}

void to_json(Json& j, const BarrierReport& r)
{
    j = Json{{"delta", r.config.delta},
             {"lambda", r.config.lambda},
             {"theta", r.config.theta},
             {"C", r.config.C},
             {"samples", r.samples},
             {"min_bracket", r.min_bracket},
             {"operator_checked", r.operator_checked},
             {"min_operator_value", r.min_operator_value},
             {"rim_derivative", r.rim_derivative},
             {"rim_derivative_error", r.rim_derivative_error},
             {"claims", r.claims},
             {"pass", r.pass}};
}

BarrierReport verify_barrier(const BarrierConfig& cfg, int n, int samples, unsigned seed,
                             const QuasilinearOperator* op, const ScalarField* phi, const ScalarField* psi)
{
    if (samples < 2 || n < 2) {
        throw ConfigError("verify_barrier: need at least two samples and n >= 2");
    }
    const bool with_coeffs = op != nullptr && phi != nullptr && psi != nullptr;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    BarrierReport rep;
    rep.config = cfg;
    rep.samples = samples;
    rep.operator_checked = with_coeffs;
    rep.min_bracket = std::numeric_limits<double>::infinity();
    rep.min_operator_value = std::numeric_limits<double>::infinity();

    for (int k = 0; k < samples; ++k) {
        // The two ends of the annulus are always included.
        double r = 0.5 * cfg.delta * (1.0 + unit(rng));
        if (k == 0) {
            r = 0.5 * cfg.delta;
        } else if (k == 1) {
            r = cfg.delta;
        }
        Vec dir(n);
        for (int i = 0; i < n; ++i) {
            dir(i) = gauss(rng);
        }
        const Vec x = r * dir / dir.norm();
        rep.min_bracket = std::min(rep.min_bracket, barrier_bracket(cfg, x.norm()));
        if (with_coeffs) {
            const auto pc = linearize_at(*op, phi->jet(x), psi->jet(x));
            rep.min_operator_value = std::min(rep.min_operator_value, barrier_operator_value(cfg, pc, x));
        }
    }

    rep.rim_derivative = barrier_rim_derivative(cfg);
    constexpr int kRim = 64;
    for (int k = 0; k < kRim; ++k) {
        const double t = 2.0 * std::numbers::pi * k / kRim;
        Vec mu = Vec::Zero(n);
        mu(0) = std::cos(t);
        mu(1) = std::sin(t);
        const auto w = hopf_barrier(cfg, cfg.delta * mu);
        rep.rim_derivative_error = std::max(rep.rim_derivative_error, std::abs(w.gradient.dot(mu) - rep.rim_derivative));
    }

    Claim bracket{"4 lambda^2 theta r^2 - 2 lambda C (r + 1) - C > 0 on the annulus",
                  rep.min_bracket, 0.0, rep.min_bracket, 0.0, 0.0, 0.0, rep.min_bracket > 0.0};
    Claim rim{"dw/dmu = -2 lambda delta exp(-lambda delta^2) on the rim",
              rep.rim_derivative, rep.rim_derivative, 1e-12 - rep.rim_derivative_error, 0.0, 1e-12,
              rep.rim_derivative_error, rep.rim_derivative_error <= 1e-12};
    rep.claims = {bracket, rim};
    if (with_coeffs) {
        rep.claims.push_back(Claim{"(L - |c|) w > 0 on the annulus", rep.min_operator_value, 0.0,
                                   rep.min_operator_value, 0.0, 0.0, 0.0, rep.min_operator_value > 0.0});
    } else {
        rep.min_operator_value = 0.0;
    }
    rep.pass = all_pass(rep.claims);
    return rep;
}

void to_json(Json& j, const ComparisonFailureReport& r)
{
    j = Json{{"hyperbolic", r.hyperbolic},
             {"comparison_principle_fails", r.failure_confirmed},
             {"euclidean", r.euclidean}};
}

ComparisonFailureReport comparison_failure_demo(int n, double epsilon, double h)
{
    ComparisonFailureReport r;
    r.hyperbolic = counterexample_report(n, epsilon, h);
    r.failure_confirmed = r.hyperbolic.pass;
    return r;
}

} // namespace hemi
