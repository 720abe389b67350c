#include "hemi/field.hpp"

#include "hemi/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace hemi {

const char* to_string(Ambient a) noexcept
{
    return a == Ambient::euclidean ? "euclidean" : "hyperbolic";
}

Ambient ambient_from_string(const std::string& s)
{
    if (s == "euclidean") {
        return Ambient::euclidean;
    }
    if (s == "hyperbolic") {
        return Ambient::hyperbolic;
    }
    throw DomainError("unknown ambient '" + s + "' (expected euclidean or hyperbolic)");
}

// ---------------------------------------------------------------------------
// GridField

GridField::GridField(double h, double radius, int extent)
    : h_(h), radius_(radius), extent_(extent),
      values_(static_cast<std::size_t>(2 * extent + 1) * static_cast<std::size_t>(2 * extent + 1),
              std::numeric_limits<double>::quiet_NaN())
{
    if (!(h > 0.0) || !(radius > 0.0) || extent < 1) {
        throw ConfigError("GridField: need h > 0, radius > 0, extent >= 1");
    }
}

GridField GridField::sample(const ScalarField& f, double h, double radius)
{
    if (f.dimension() != 2) {
        throw ConfigError("GridField::sample: grid fields are planar (n = 2)");
    }
    const int extent = static_cast<int>(std::ceil(radius / h)) + 2;
    GridField g(h, radius, extent);
    for (int i = -extent; i <= extent; ++i) {
        for (int j = -extent; j <= extent; ++j) {
            const Vec x = g.node(i, j);
            if (x.norm() <= radius + 1e-12) {
                g.set(i, j, f.sample(x));
            }
        }
    }
    return g;
}

std::size_t GridField::index(int i, int j) const
{
    return static_cast<std::size_t>(i + extent_) * static_cast<std::size_t>(side())
           + static_cast<std::size_t>(j + extent_);
}

double GridField::at(int i, int j) const
{
    if (std::abs(i) > extent_ || std::abs(j) > extent_) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return values_[index(i, j)];
}

void GridField::set(int i, int j, double v)
{
    if (std::abs(i) > extent_ || std::abs(j) > extent_) {
        throw EvaluationError("GridField::set: node outside grid");
    }
    values_[index(i, j)] = v;
}

bool GridField::present(int i, int j) const
{
    return std::isfinite(at(i, j));
}

Vec GridField::node(int i, int j) const
{
    Vec x(2);
    x << i * h_, j * h_;
    return x;
}

bool GridField::differentiable_at(int i, int j) const
{
    if (!boundary_closure_ && node(i, j).norm() > radius_ - 2.0 * h_ + 1e-12) {
        return false;
    }
    for (int di = -1; di <= 1; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
            if (!present(i + di, j + dj)) {
                return false;
            }
        }
    }
    return true;
}

std::pair<int, int> GridField::locate(const Vec& x) const
{
    if (x.size() != 2) {
        throw EvaluationError("GridField: point must be two-dimensional");
    }
    const int i = static_cast<int>(std::lround(x(0) / h_));
    const int j = static_cast<int>(std::lround(x(1) / h_));
    if ((node(i, j) - x).norm() > 1e-9 * h_) {
        std::ostringstream os;
        os << "GridField: (" << x(0) << ", " << x(1) << ") is not a grid node";
        throw EvaluationError(os.str());
    }
    return {i, j};
}

Jet GridField::jet_at(int i, int j) const
{
    if (!differentiable_at(i, j)) {
        std::ostringstream os;
        os << "GridField: derivatives unavailable at node (" << i << ", " << j << ")";
        throw EvaluationError(os.str());
    }
    const double c = at(i, j);
    const double e = at(i + 1, j);
    const double w = at(i - 1, j);
    const double n = at(i, j + 1);
    const double s = at(i, j - 1);
    const double h2 = h_ * h_;
    Jet jet;
    jet.value = c;
    jet.gradient = Vec(2);
    jet.gradient << (e - w) / (2.0 * h_), (n - s) / (2.0 * h_);
    jet.hessian = Mat(2, 2);
    const double uxy = (at(i + 1, j + 1) - at(i + 1, j - 1) - at(i - 1, j + 1) + at(i - 1, j - 1)) / (4.0 * h2);
    jet.hessian << (e - 2.0 * c + w) / h2, uxy, uxy, (n - 2.0 * c + s) / h2;
    return jet;
}

// ---------------------------------------------------------------------------
// ScalarField

ScalarField::ScalarField(int n, double radius, std::variant<AnalyticProvider, GridField> p, std::string name)
    : n_(n), radius_(radius), provider_(std::move(p)), name_(std::move(name))
{
    if (n_ < 1) {
        throw ConfigError("ScalarField: dimension must be >= 1");
    }
    if (!(radius_ > 0.0)) {
        throw ConfigError("ScalarField: domain radius must be positive");
    }
}

ScalarField ScalarField::analytic(int n, double domain_radius, std::function<Jet(const Vec&)> jet, std::string name,
                                  std::function<double(const Vec&)> value)
{
    return ScalarField(n, domain_radius, AnalyticProvider{std::move(jet), std::move(value)}, std::move(name));
}

ScalarField ScalarField::grid(GridField g, std::string name)
{
    const double r = g.radius();
    return ScalarField(2, r, std::move(g), std::move(name));
}

Jet ScalarField::jet(const Vec& x) const
{
    if (x.size() != n_) {
        throw EvaluationError("ScalarField '" + name_ + "': point has wrong dimension");
    }
    if (x.norm() > radius_ + 1e-12) {
        throw EvaluationError("ScalarField '" + name_ + "': point outside the closed disk");
    }
    if (const auto* g = std::get_if<GridField>(&provider_)) {
        const auto [i, j] = g->locate(x);
        return g->jet_at(i, j);
    }
    Jet j = std::get<AnalyticProvider>(provider_).jet(x);
    j.hessian = 0.5 * (j.hessian + j.hessian.transpose());
    if (!std::isfinite(j.value) || !j.gradient.allFinite() || !j.hessian.allFinite()) {
        throw EvaluationError("ScalarField '" + name_ + "': non-finite jet");
    }
    return j;
}

double ScalarField::sample(const Vec& x) const
{
    if (const auto* g = std::get_if<GridField>(&provider_)) {
        const auto [i, j] = g->locate(x);
        if (!g->present(i, j)) {
            throw EvaluationError("ScalarField '" + name_ + "': node has no sample");
        }
        return g->at(i, j);
    }
    const auto& a = std::get<AnalyticProvider>(provider_);
    if (!a.value) {
        return jet(x).value;
    }
    if (x.size() != n_ || x.norm() > radius_ + 1e-12) {
        throw EvaluationError("ScalarField '" + name_ + "': point outside the closed disk");
    }
    const double v = a.value(x);
    if (!std::isfinite(v)) {
        throw EvaluationError("ScalarField '" + name_ + "': non-finite value");
    }
    return v;
}

} // namespace hemi
