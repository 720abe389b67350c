#pragma once

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace hemi {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class Ambient { euclidean, hyperbolic };

class ScalarField;

[[nodiscard]] const char* to_string(Ambient a) noexcept;
[[nodiscard]] Ambient ambient_from_string(const std::string& s);

/// Value, gradient and Hessian of a scalar field at one point.
struct Jet {
    double value = 0.0;
    Vec gradient;
    Mat hessian;
};

/// Closed-form field. `jet` may throw EvaluationError where the formula is
/// undefined; `value` (optional) stays usable where only the derivatives blow
/// up, e.g. on the rim of a hemisphere.
struct AnalyticProvider {
    std::function<Jet(const Vec&)> jet;
    std::function<double(const Vec&)> value;
};

/// Uniform Cartesian samples of a planar (n = 2) field. Node (i, j) sits at
/// (i h, j h) for i, j in [-extent, extent]; absent nodes hold NaN.
///
/// Derivatives use second-order central stencils. Without boundary closure a
/// node must lie at least 2h inside the disk of radius `radius`; with closure
/// any node whose eight neighbours are present may be differentiated.
class GridField {
public:
    GridField(double h, double radius, int extent);

    /// Samples `f` at every node with |x| <= radius.
    static GridField sample(const ScalarField& f, double h, double radius);

    [[nodiscard]] double h() const noexcept { return h_; }
    [[nodiscard]] double radius() const noexcept { return radius_; }
    [[nodiscard]] int extent() const noexcept { return extent_; }
    [[nodiscard]] int side() const noexcept { return 2 * extent_ + 1; }

    [[nodiscard]] double at(int i, int j) const;
    void set(int i, int j, double v);
    [[nodiscard]] bool present(int i, int j) const;
    [[nodiscard]] Vec node(int i, int j) const;

    void set_boundary_closure(bool on) noexcept { boundary_closure_ = on; }
    [[nodiscard]] bool boundary_closure() const noexcept { return boundary_closure_; }

    /// Whether the central stencils are available at node (i, j).
    [[nodiscard]] bool differentiable_at(int i, int j) const;

    /// Maps x to the node it coincides with; throws EvaluationError when x is
    /// not a node.
    [[nodiscard]] std::pair<int, int> locate(const Vec& x) const;

    [[nodiscard]] Jet jet_at(int i, int j) const;

private:
    [[nodiscard]] std::size_t index(int i, int j) const;

    double h_;
    double radius_;
    int extent_;
    bool boundary_closure_ = false;
    std::vector<double> values_;
};

/// A function u on the closed disk of radius `domain_radius` in R^n, backed
/// either by closed-form derivatives or by grid samples.
class ScalarField {
public:
    static ScalarField analytic(int n, double domain_radius, std::function<Jet(const Vec&)> jet,
                                std::string name = "analytic",
                                std::function<double(const Vec&)> value = {});
    static ScalarField grid(GridField g, std::string name = "grid");

    [[nodiscard]] int dimension() const noexcept { return n_; }
    [[nodiscard]] double domain_radius() const noexcept { return radius_; }
    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] bool is_grid() const noexcept { return std::holds_alternative<GridField>(provider_); }
    [[nodiscard]] const GridField* grid_data() const noexcept { return std::get_if<GridField>(&provider_); }

    /// Full jet at x. Throws EvaluationError outside the domain or where the
    /// provider has no derivatives. The returned Hessian is symmetric.
    [[nodiscard]] Jet jet(const Vec& x) const;
    [[nodiscard]] double value(const Vec& x) const { return jet(x).value; }
    [[nodiscard]] Vec gradient(const Vec& x) const { return jet(x).gradient; }
    [[nodiscard]] Mat hessian(const Vec& x) const { return jet(x).hessian; }

    /// Value only; for grid fields this works at every present node,
    /// including those too close to the rim to differentiate.
    [[nodiscard]] double sample(const Vec& x) const;

private:
    ScalarField(int n, double radius, std::variant<AnalyticProvider, GridField> p, std::string name);

    int n_;
    double radius_;
    std::variant<AnalyticProvider, GridField> provider_;
    std::string name_;
};

} // namespace hemi
