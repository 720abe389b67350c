#pragma once

#include "hemi/field.hpp"
#include "hemi/report.hpp"
#include "hemi/symfuncs.hpp"

#include <cstdint>
#include <vector>

namespace hemi {

/// Eigen-decomposition of a small symmetric matrix by cyclic Jacobi
/// rotations. Eigenvalues come back ascending; column i of `vectors` belongs
/// to `values(i)`.
struct SymmetricEigen {
    Vec values;
    Mat vectors;
};
[[nodiscard]] SymmetricEigen jacobi_eigen(const Mat& symmetric, double tol = 1e-15, int max_sweeps = 100);

/// Local geometry of a hypersurface at one point. The normal is always the
/// upward one (positive last component).
///
/// For Euclidean graphs `metric` is g = I + Du Du^T and `second_form` is
/// D^2u / W with W = sqrt(1 + |Du|^2). For graphs in the upper half-space
/// model both are the hyperbolic ones, g / u^2 and (u D^2u / W + g / W) / u^2,
/// so that `shape` = metric^{-1} second_form = u A_euc + I / W either way.
struct ShapeData {
    Vec point;
    Mat metric;
    Mat second_form;
    Mat shape;
    Ambient ambient = Ambient::euclidean;

    [[nodiscard]] int dimension() const noexcept { return static_cast<int>(shape.rows()); }

    /// Shape data for a bare symmetric operator in an orthonormal frame
    /// (metric = I, second_form = A).
    static ShapeData from_operator(const Mat& A, Ambient ambient);
};

/// Principal curvatures and everything derived from them at one point.
struct CurvatureProfile {
    Ambient ambient = Ambient::euclidean;
    CurvatureVector kappa{0.0}; // ascending
    SymmetricProfile sigma;
    double mean_curvature = 0.0;    // H = trace A
    double norm_sq = 0.0;           // |A|^2
    double traceless_norm_sq = 0.0; // |A - (H/n) I|^2
    double scalar_curvature = 0.0;  // 2 sigma_2 (- n(n-1) if hyperbolic)
    std::vector<bool> gamma_flags;  // gamma_flags[k-1]: kappa in Gamma_k

    [[nodiscard]] int dimension() const noexcept { return kappa.size(); }
};

/// Max kappa - min kappa at or below this counts as umbilic.
inline constexpr double kUmbilicTolerance = 1e-8;

[[nodiscard]] ShapeData shape_operator_euclidean(const ScalarField& u, const Vec& x);

/// Throws AmbientError when u(x) <= 0.
[[nodiscard]] ShapeData shape_operator_hyperbolic(const ScalarField& u, const Vec& x);

/// Eigenvalues from the symmetric similarity g^{-1/2} h g^{-1/2}; |A|^2 and
/// |A°|^2 are Frobenius norms in that g-orthonormal frame. Throws
/// GeometryError if g is not positive definite.
[[nodiscard]] CurvatureProfile curvature_profile(const ShapeData& shape);

[[nodiscard]] bool is_umbilic(const CurvatureProfile& p, double tol = kUmbilicTolerance);

/// (H/n)^2 - sigma_2/C(n,2) - |A°|^2/(n(n-1)). Needs n >= 2 and a Euclidean
/// shape.
[[nodiscard]] double check_identity_euclidean(const ShapeData& shape);

/// (H/n)^2 - (|A°|^2/(n(n-1)) + R/(n(n-1)) + 1) for a hyperbolic shape.
[[nodiscard]] double check_identity_hyperbolic(const ShapeData& shape);

/// Traced Gauss equation residual R - H^2 + |A|^2 + n(n-1), hyperbolic.
[[nodiscard]] double check_gauss_equation(const ShapeData& shape);

/// The three identities over random symmetric operators: n cycles through
/// [n_min, n_max], entries uniform in [-2, 2]. A trial fails when a residual
/// exceeds tolerance * (1 + H^2).
struct IdentitySweep {
    int trials = 0;
    std::uint64_t seed = 0;
    int n_min = 2;
    int n_max = 8;
    double tolerance = 1e-12;
    double max_euclidean = 0.0; // largest |residual| / (1 + H^2)
    double max_hyperbolic = 0.0;
    double max_gauss = 0.0;
    int failures = 0;
    std::vector<Claim> claims;
    bool pass = false;
};

void to_json(Json& j, const IdentitySweep& s);

/// Throws DomainError unless trials >= 1 and 2 <= n_min <= n_max.
[[nodiscard]] IdentitySweep identity_sweep(int trials, std::uint64_t seed, int n_min = 2, int n_max = 8);

} // namespace hemi
