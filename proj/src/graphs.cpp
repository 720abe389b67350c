#include "hemi/graphs.hpp"

#include "hemi/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace hemi {

SymmetricEigen jacobi_eigen(const Mat& symmetric, double tol, int max_sweeps)
{
    const Eigen::Index n = symmetric.rows();
    if (symmetric.cols() != n) {
        throw GeometryError("jacobi_eigen: matrix is not square");
    }
    Mat a = 0.5 * (symmetric + symmetric.transpose());
    Mat v = Mat::Identity(n, n);
    const double scale = std::max(a.norm(), 1e-300);

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                off += a(p, q) * a(p, q);
            }
        }
        if (std::sqrt(2.0 * off) <= tol * scale) {
            break;
        }
        for (Eigen::Index p = 0; p < n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                if (a(p, q) == 0.0) {
                    continue;
                }
                // Symmetric Schur 2x2: rotation (c, s) annihilating a(p, q).
                const double tau = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) { return a(i, i) < a(j, j); });
    SymmetricEigen out{Vec(n), Mat(n, n)};
    for (Eigen::Index i = 0; i < n; ++i) {
        out.values(i) = a(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i)]);
        out.vectors.col(i) = v.col(order[static_cast<std::size_t>(i)]);
    }
    return out;
}

ShapeData ShapeData::from_operator(const Mat& A, Ambient ambient)
{
    const Eigen::Index n = A.rows();
    ShapeData s;
    s.point = Vec::Zero(n);
    s.metric = Mat::Identity(n, n);
    s.second_form = 0.5 * (A + A.transpose());
    s.shape = s.second_form;
    s.ambient = ambient;
    return s;
}

ShapeData shape_operator_euclidean(const ScalarField& u, const Vec& x)
{
    const Jet j = u.jet(x);
    const int n = u.dimension();
    const double W = std::sqrt(1.0 + j.gradient.squaredNorm());
    ShapeData s;
    s.point = x;
    s.metric = Mat::Identity(n, n) + j.gradient * j.gradient.transpose();
    s.second_form = j.hessian / W;
    s.shape = s.metric.ldlt().solve(s.second_form);
    s.ambient = Ambient::euclidean;
    return s;
}

ShapeData shape_operator_hyperbolic(const ScalarField& u, const Vec& x)
{
    const Jet j = u.jet(x);
    if (!(j.value > 0.0)) {
        std::ostringstream os;
        os << "shape_operator_hyperbolic: u(x) = " << j.value << " is not in the upper half-space";
        throw AmbientError(os.str());
    }
    const int n = u.dimension();
    const double W = std::sqrt(1.0 + j.gradient.squaredNorm());
    const double u2 = j.value * j.value;
    const Mat g_euc = Mat::Identity(n, n) + j.gradient * j.gradient.transpose();
    ShapeData s;
    s.point = x;
    s.metric = g_euc / u2;
    s.second_form = (j.value * j.hessian / W + g_euc / W) / u2;
    s.shape = s.metric.ldlt().solve(s.second_form);
    s.ambient = Ambient::hyperbolic;
    return s;
}

CurvatureProfile curvature_profile(const ShapeData& shape)
{
    const int n = shape.dimension();
    const SymmetricEigen ge = jacobi_eigen(shape.metric);
    if (!(ge.values.minCoeff() > 0.0)) {
        throw GeometryError("curvature_profile: metric is not positive definite");
    }
    const Mat g_inv_sqrt = ge.vectors * ge.values.cwiseSqrt().cwiseInverse().asDiagonal() * ge.vectors.transpose();
    Mat sym = g_inv_sqrt * shape.second_form * g_inv_sqrt;
    sym = 0.5 * (sym + sym.transpose());

    const SymmetricEigen se = jacobi_eigen(sym);
    CurvatureProfile p;
    p.ambient = shape.ambient;
    p.kappa = CurvatureVector(std::vector<double>(se.values.data(), se.values.data() + n));
    p.sigma = symmetric_profile(p.kappa);
    p.mean_curvature = sym.trace();
    p.norm_sq = sym.squaredNorm();
    p.traceless_norm_sq = (sym - (p.mean_curvature / n) * Mat::Identity(n, n)).squaredNorm();
    const double sigma2 = n >= 2 ? p.sigma.sigma[1] : 0.0;
    p.scalar_curvature = 2.0 * sigma2;
    if (shape.ambient == Ambient::hyperbolic) {
        p.scalar_curvature -= static_cast<double>(n) * (n - 1);
    }
    p.gamma_flags.resize(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) {
        p.gamma_flags[static_cast<std::size_t>(k - 1)] = gamma_k_membership(p.kappa, k);
    }
    return p;
}

bool is_umbilic(const CurvatureProfile& p, double tol)
{
    return p.kappa[p.dimension() - 1] - p.kappa[0] <= tol;
}

namespace {

void require_pair_dimension(int n, const char* who)
{
    if (n < 2) {
        throw DomainError(std::string(who) + ": needs n >= 2");
    }
}

} // namespace

double check_identity_euclidean(const ShapeData& shape)
{
    if (shape.ambient != Ambient::euclidean) {
        throw DomainError("check_identity_euclidean: shape is not Euclidean");
    }
    const int n = shape.dimension();
    require_pair_dimension(n, "check_identity_euclidean");
    const CurvatureProfile p = curvature_profile(shape);
    const double h = p.mean_curvature / n;
    return h * h - p.sigma.sigma[1] / binomial(n, 2) - p.traceless_norm_sq / (n * (n - 1.0));
}

double check_identity_hyperbolic(const ShapeData& shape)
{
    if (shape.ambient != Ambient::hyperbolic) {
        throw DomainError("check_identity_hyperbolic: shape is not hyperbolic");
    }
    const int n = shape.dimension();
    require_pair_dimension(n, "check_identity_hyperbolic");
    const CurvatureProfile p = curvature_profile(shape);
    const double h = p.mean_curvature / n;
    const double nn = n * (n - 1.0);
    return h * h - (p.traceless_norm_sq / nn + p.scalar_curvature / nn + 1.0);
}

double check_gauss_equation(const ShapeData& shape)
{
    if (shape.ambient != Ambient::hyperbolic) {
        throw DomainError("check_gauss_equation: shape is not hyperbolic");
    }
    const int n = shape.dimension();
    const CurvatureProfile p = curvature_profile(shape);
    return p.scalar_curvature - p.mean_curvature * p.mean_curvature + p.norm_sq + n * (n - 1.0);
}

void to_json(Json& j, const IdentitySweep& s)
{
    j = Json{{"trials", s.trials},
             {"seed", s.seed},
             {"n_min", s.n_min},
             {"n_max", s.n_max},
             {"tolerance", s.tolerance},
             {"max_scaled_residual_euclidean", s.max_euclidean},
             {"max_scaled_residual_hyperbolic", s.max_hyperbolic},
             {"max_scaled_residual_gauss", s.max_gauss},
             {"failures", s.failures},
             {"claims", s.claims},
             {"pass", s.pass}};
}

IdentitySweep identity_sweep(int trials, std::uint64_t seed, int n_min, int n_max)
{
    if (trials < 1 || n_min < 2 || n_max < n_min) {
        throw DomainError("identity_sweep: need trials >= 1 and 2 <= n_min <= n_max");
    }
    IdentitySweep s;
    s.trials = trials;
    s.seed = seed;
    s.n_min = n_min;
    s.n_max = n_max;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> entry(-2.0, 2.0);
    for (int t = 0; t < trials; ++t) {
        const int n = n_min + t % (n_max - n_min + 1);
        Mat B(n, n);
        for (int i = 0; i < n; ++i) {
            for (int k = 0; k < n; ++k) {
                B(i, k) = entry(rng);
            }
        }
        const Mat A = 0.5 * (B + B.transpose());
        const double H = A.trace();
        const double scale = 1.0 + H * H;
        const auto hyp = ShapeData::from_operator(A, Ambient::hyperbolic);
        const double e = std::abs(check_identity_euclidean(ShapeData::from_operator(A, Ambient::euclidean))) / scale;
        const double y = std::abs(check_identity_hyperbolic(hyp)) / scale;
        const double g = std::abs(check_gauss_equation(hyp)) / scale;
        s.max_euclidean = std::max(s.max_euclidean, e);
        s.max_hyperbolic = std::max(s.max_hyperbolic, y);
        s.max_gauss = std::max(s.max_gauss, g);
        if (!(e <= s.tolerance && y <= s.tolerance && g <= s.tolerance)) {
            ++s.failures;
        }
    }
    auto claim = [&](const char* what, double worst) {
        return Claim{what, worst, s.tolerance, s.tolerance - worst, 0.0, s.tolerance, worst, worst <= s.tolerance};
    };
    s.claims.push_back(claim("euclidean identity residual / (1 + H^2)", s.max_euclidean));
    s.claims.push_back(claim("hyperbolic identity residual / (1 + H^2)", s.max_hyperbolic));
    s.claims.push_back(claim("traced Gauss equation residual / (1 + H^2)", s.max_gauss));
    s.pass = s.failures == 0 && all_pass(s.claims);
    return s;
}

} // namespace hemi
