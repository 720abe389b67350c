#include "hemi/fields.hpp"

#include "hemi/errors.hpp"

#include <cmath>
#include <sstream>

namespace hemi::fields {

namespace {

// Radial u(r) described by f(r), g(r) = f'(r)/r and k(r) = g'(r)/r, so that
// Du = g x and D^2u = g I + k x x^T hold smoothly through r = 0.
template <class F, class G, class K>
ScalarField radial(int n, double domain_radius, std::string name, F f, G g, K k)
{
    auto jet = [n, f, g, k](const Vec& x) {
        const double r = x.norm();
        Jet j;
        j.value = f(r);
        const double gr = g(r);
        j.gradient = gr * x;
        j.hessian = gr * Mat::Identity(n, n) + k(r) * x * x.transpose();
        return j;
    };
    auto value = [f](const Vec& x) { return f(x.norm()); };
    return ScalarField::analytic(n, domain_radius, jet, std::move(name), value);
}

} // namespace

ScalarField constant(int n, double c, double domain_radius)
{
    auto jet = [n, c](const Vec&) { return Jet{c, Vec::Zero(n), Mat::Zero(n, n)}; };
    std::ostringstream os;
    os << "plane(" << c << ")";
    return ScalarField::analytic(n, domain_radius, jet, os.str());
}

ScalarField affine(int n, double c, const Vec& slope, double domain_radius)
{
    if (slope.size() != n) {
        throw ConfigError("affine: slope has wrong dimension");
    }
    auto jet = [n, c, slope](const Vec& x) {
        return Jet{c + slope.dot(x), slope, Mat::Zero(n, n)};
    };
    std::ostringstream os;
    os << "affine(" << c << ")";
    return ScalarField::analytic(n, domain_radius, jet, os.str());
}

ScalarField paraboloid(int n, double scale, double c, double domain_radius)
{
    return radial(
        n, domain_radius, "paraboloid", [=](double r) { return c + 0.5 * scale * r * r; },
        [=](double) { return scale; }, [](double) { return 0.0; });
}

ScalarField spherical_cap(int n, double c, double a, int sign, double domain_radius, std::string name)
{
    if (!(a > 0.0) || (sign != 1 && sign != -1)) {
        throw ConfigError("spherical_cap: need a > 0 and sign = +-1");
    }
    const double s = sign;
    const double a2 = a * a;
    return radial(
        n, std::min(domain_radius, a), std::move(name),
        [=](double r) { return c + s * std::sqrt(std::max(a2 - r * r, 0.0)); },
        [=](double r) { return -s / std::sqrt(a2 - r * r); },
        [=](double r) { return -s / std::pow(a2 - r * r, 1.5); });
}

ScalarField hemisphere(int n)
{
    return spherical_cap(n, 0.0, 1.0, +1, 1.0, "hemisphere");
}

ScalarField lower_hemisphere(int n, double R)
{
    return spherical_cap(n, 0.0, R, -1, R, "lower_hemisphere");
}

ScalarField model_sphere(int n)
{
    return spherical_cap(n, 2.0, std::sqrt(2.0), -1, 1.0, "model_sphere");
}

ScalarField v_q(int n, double q)
{
    if (!(q > 0.0)) {
        throw DomainError("v_q: q must be positive");
    }
    std::ostringstream os;
    os << "v_q(" << q << ")";
    return spherical_cap(n, q, q / std::sqrt(2.0), -1, 1.0, os.str());
}

double v_q_value(double q, double r)
{
    const double d = q * q / 2.0 - r * r;
    if (d < 0.0) {
        throw DomainError("v_q_value: r exceeds q / sqrt(2)");
    }
    return q - std::sqrt(d);
}

ScalarField u1(int n)
{
    auto jet = [n](const Vec&) { return Jet{1.0, Vec::Zero(n), Mat::Zero(n, n)}; };
    return ScalarField::analytic(n, 1.0, jet, "u1");
}

ScalarField u2(int n, double eps)
{
    std::ostringstream os;
    os << "u2(" << eps << ")";
    return spherical_cap(n, 1.0 + eps, std::sqrt(1.0 + eps * eps), -1, 1.0, os.str());
}

ScalarField saddle(double s, double c, double domain_radius)
{
    auto jet = [s, c](const Vec& x) {
        Jet j;
        j.value = c + s * (x(0) * x(0) - x(1) * x(1));
        j.gradient = Vec(2);
        j.gradient << 2.0 * s * x(0), -2.0 * s * x(1);
        j.hessian = Mat(2, 2);
        j.hessian << 2.0 * s, 0.0, 0.0, -2.0 * s;
        return j;
    };
    return ScalarField::analytic(2, domain_radius, jet, "saddle");
}

ScalarField random_bumps(int n, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> amp(-3.0, 3.0);
    std::uniform_real_distribution<double> width(0.2, 0.6);
    std::uniform_real_distribution<double> pos(-0.7, 0.7);
    std::uniform_real_distribution<double> tilt(-2.0, 2.0);

    struct Bump {
        double amplitude;
        double width;
        Vec center;
    };
    std::vector<Bump> bumps;
    for (int b = 0; b < 3; ++b) {
        Vec c(n);
        for (int i = 0; i < n; ++i) {
            c(i) = pos(rng);
        }
        const double a = amp(rng);
        const double w = width(rng);
        bumps.push_back({a, w, c});
    }
    Vec slope(n);
    for (int i = 0; i < n; ++i) {
        slope(i) = tilt(rng);
    }

    auto jet = [n, bumps, slope](const Vec& x) {
        Jet j{slope.dot(x), slope, Mat::Zero(n, n)};
        for (const auto& b : bumps) {
            const Vec d = x - b.center;
            const double s2 = b.width * b.width;
            const double e = b.amplitude * std::exp(-d.squaredNorm() / s2);
            j.value += e;
            j.gradient += e * (-2.0 / s2) * d;
            j.hessian += e * (4.0 / (s2 * s2) * d * d.transpose() - 2.0 / s2 * Mat::Identity(n, n));
        }
        return j;
    };
    return ScalarField::analytic(n, 1.0, jet, "random_bumps");
}

ScalarField by_name(const std::string& name, int n, double epsilon, double q, double c)
{
    if (name == "hemisphere") {
        return hemisphere(n);
    }
    if (name == "lower_hemisphere") {
        return lower_hemisphere(n, 1.0);
    }
    if (name == "model_sphere" || name == "v") {
        return model_sphere(n);
    }
    if (name == "u1") {
        return u1(n);
    }
    if (name == "u2") {
        return u2(n, epsilon);
    }
    if (name == "v_q") {
        return v_q(n, q);
    }
    if (name == "plane") {
        return constant(n, c);
    }
    if (name == "paraboloid") {
        return paraboloid(n);
    }
    throw DomainError("unknown field '" + name + "'");
}

} // namespace hemi::fields
