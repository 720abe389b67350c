#include "hemi/cli.hpp"

#include "hemi/errors.hpp"
#include "hemi/fields.hpp"
#include "hemi/graphs.hpp"
#include "hemi/gridio.hpp"
#include "hemi/maxprinciple.hpp"
#include "hemi/meanops.hpp"
#include "hemi/mesh.hpp"
#include "hemi/report.hpp"
#include "hemi/sliding.hpp"
#include "hemi/solver.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iomanip>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <regex>
#include <set>
#include <sstream>

namespace hemi {

namespace {

/// Bad flags or config values; maps to exit code 2.
class UsageError : public Error {
public:
    using Error::Error;
};

struct Options {
    std::string ambient;
    int n = 2;
    double h = NAN;
    double rho = 0.9;
    double epsilon = 0.25;
    std::string field;
    std::string mesh;
    std::string output;
    std::string csv;
    std::string config;
    std::string grid;
    std::uint64_t seed = 1;
    int trials = -1;
    int samples = 10000;
    double delta = 0.5;
    int random_fields = 50;
    double random_h = 1.0 / 64;
    int rings = 50;
    int segments = 100;
    std::string spacing = "spherical";
};

double or_default(double v, double d)
{
    return std::isnan(v) ? d : v;
}

void require(bool ok, const std::string& what)
{
    if (!ok) {
        throw UsageError(what);
    }
}

void check_h(double h)
{
    require(h > 0.0 && h <= 0.1, "h must lie in (0, 0.1]");
}

void check_n(int n)
{
    require(n >= 2, "n must be at least 2");
}

void check_epsilon(double e)
{
    require(e > 0.0 && e < 0.5, "epsilon must lie in (0, 1/2)");
}

Ambient ambient_or(const std::string& s, Ambient d)
{
    if (s.empty()) {
        return d;
    }
    try {
        return ambient_from_string(s);
    } catch (const Error&) {
        throw UsageError("ambient must be euclidean or hyperbolic");
    }
}

// Result document of one command: the payload plus the grid spacing and
// tolerance it was computed with.
struct Outcome {
    Json result;
    std::optional<double> grid_h;
    double tolerance = 0.0;
    bool pass = false;
};

Json grid_h_json(const std::optional<double>& h)
{
    return h ? Json(*h) : Json(nullptr);
}

Json wrap(const std::string& command, const Json& config, const Outcome& o)
{
    return Json{{"schema", kSchemaVersion},
                {"command", command},
                {"config", config},
                {"grid_h", grid_h_json(o.grid_h)},
                {"tolerance", o.tolerance},
                {"result", o.result},
                {"pass", o.pass}};
}

// ---------------------------------------------------------------- commands

Outcome cmd_curvature(const Options& o, Json& cfg)
{
    check_n(o.n);
    const Ambient amb = ambient_or(o.ambient, Ambient::hyperbolic);
    const std::string spec = o.field.empty() ? "model_sphere" : o.field;
    const double h = or_default(o.h, 1.0 / 16);
    check_h(h);
    require(o.rho > 0.0 && o.rho <= 1.0, "rho must lie in (0, 1]");
    const auto u = parse_field_spec(spec, o.n, o.epsilon);
    cfg = {{"field", spec}, {"ambient", to_string(amb)}, {"n", o.n}, {"h", h}, {"rho", o.rho}};

    std::vector<Vec> pts;
    double used_h = h;
    if (const auto* g = u.grid_data()) {
        used_h = g->h();
        for (int i = -g->extent(); i <= g->extent(); ++i) {
            for (int j = -g->extent(); j <= g->extent(); ++j) {
                if (g->differentiable_at(i, j) && g->node(i, j).norm() <= o.rho + 1e-12) {
                    pts.push_back(g->node(i, j));
                }
            }
        }
    } else {
        const double R = std::min(o.rho, u.domain_radius());
        const int m = static_cast<int>(std::floor(R / h + 1e-9));
        for (int i = -m; i <= m; ++i) {
            for (int j = -m; j <= m; ++j) {
                Vec x = Vec::Zero(o.n);
                x(0) = i * h;
                x(1) = j * h;
                if (x.norm() <= R + 1e-12) {
                    pts.push_back(x);
                }
            }
        }
    }

    Json points = Json::array();
    int skipped = 0;
    double hmin = INFINITY;
    double hmax = -INFINITY;
    double worst_umbilic = 0.0;
    std::ofstream csv;
    if (!o.csv.empty()) {
        csv.open(o.csv);
        require(static_cast<bool>(csv), "cannot write " + o.csv);
        csv << "x,y,value\n" << std::setprecision(17);
    }
    for (const auto& x : pts) {
        try {
            const auto shape = amb == Ambient::euclidean ? shape_operator_euclidean(u, x) : shape_operator_hyperbolic(u, x);
            const auto p = curvature_profile(shape);
            const auto& k = p.kappa.entries();
            hmin = std::min(hmin, p.mean_curvature);
            hmax = std::max(hmax, p.mean_curvature);
            worst_umbilic = std::max(worst_umbilic, k.back() - k.front());
            points.push_back({{"x", std::vector<double>(x.data(), x.data() + x.size())},
                              {"H", p.mean_curvature},
                              {"kappa", k},
                              {"traceless_norm_sq", p.traceless_norm_sq},
                              {"umbilic", is_umbilic(p)}});
            if (csv.is_open()) {
                csv << x(0) << ',' << x(1) << ',' << p.mean_curvature << '\n';
            }
        } catch (const EvaluationError&) {
            ++skipped;
        } catch (const AmbientError&) {
            ++skipped;
        }
    }
    Outcome out;
    out.grid_h = used_h;
    out.tolerance = kUmbilicTolerance;
    out.result = {{"field", u.name()},
                  {"evaluated", points.size()},
                  {"skipped", skipped},
                  {"mean_curvature_min", points.empty() ? Json(nullptr) : Json(hmin)},
                  {"mean_curvature_max", points.empty() ? Json(nullptr) : Json(hmax)},
                  {"max_kappa_spread", worst_umbilic},
                  {"points", points}};
    out.pass = !points.empty();
    return out;
}

Outcome cmd_identities(const Options& o, Json& cfg)
{
    const int trials = o.trials < 0 ? 10000 : o.trials;
    require(trials >= 1, "trials must be positive");
    cfg = {{"trials", trials}, {"seed", o.seed}, {"n_min", 2}, {"n_max", 8}};
    const auto s = identity_sweep(trials, o.seed);
    Outcome out;
    out.tolerance = s.tolerance;
    out.result = s;
    out.pass = s.pass;
    return out;
}

Outcome cmd_total_curv(const Options& o, Json& cfg)
{
    require(o.n == 2, "total-curv supports n = 2 only");
    const std::string spec = o.field.empty() ? "hemisphere" : o.field;
    const double h = or_default(o.h, 1.0 / 256);
    require(h > 0.0 && 4.0 * h <= 0.1, "total-curv needs 0 < h <= 0.025 (it also runs 2h and 4h)");
    check_h(o.random_h);
    require(o.random_fields >= 0, "random count must be non-negative");
    cfg = {{"field", spec}, {"h", h}, {"random_fields", o.random_fields}, {"random_h", o.random_h}, {"seed", o.seed}};
    const auto u = parse_field_spec(spec, 2, o.epsilon);
    const auto trend = total_mean_curvature_trend(u, {4.0 * h, 2.0 * h, h});

    std::vector<Claim> claims;
    for (const auto& s : trend.steps) {
        claims.push_back({"|total mean curvature| <= n Vol(B_1) + 10 h^2", std::abs(s.integral_value), s.bound,
                          s.slack, s.grid_h, s.tolerance, std::abs(s.integral_value - s.flux_value), s.pass});
    }
    // The hemisphere is the extremal case: the bound is approached.
    const bool sharp = spec == "hemisphere" || spec.rfind("lower_hemisphere", 0) == 0;
    constexpr double kGapTolerance = 1e-2;
    const double gap = trend.bound - std::abs(trend.extrapolated);
    if (sharp) {
        claims.push_back({"|integral| increases as h shrinks", trend.monotone ? 1.0 : 0.0, 1.0, 0.0, h, 0.0, 0.0,
                          trend.monotone});
        claims.push_back({"|gap| of the extrapolated integral <= 1e-2", std::abs(gap), kGapTolerance,
                          kGapTolerance - std::abs(gap), h, kGapTolerance, gap, std::abs(gap) <= kGapTolerance});
    }

    std::mt19937_64 rng(o.seed);
    double worst = INFINITY;
    int violations = 0;
    for (int k = 0; k < o.random_fields; ++k) {
        const auto r = total_mean_curvature(fields::random_bumps(2, rng), o.random_h);
        worst = std::min(worst, r.slack);
        violations += r.pass ? 0 : 1;
    }
    if (o.random_fields > 0) {
        const double tol = 10.0 * o.random_h * o.random_h;
        claims.push_back({"random fields: min slack >= -10 h^2", worst, -tol, worst + tol, o.random_h, tol, 0.0,
                          violations == 0});
    }

    Json steps = Json::array();
    for (const auto& s : trend.steps) {
        steps.push_back(s);
    }
    Outcome out;
    out.grid_h = h;
    out.tolerance = kGapTolerance;
    out.result = {{"field", u.name()},
                  {"bound", trend.bound},
                  {"steps", steps},
                  {"extrapolated", trend.extrapolated},
                  {"gap", gap},
                  {"monotone", trend.monotone},
                  {"random_fields", o.random_fields},
                  {"random_min_slack", o.random_fields > 0 ? Json(worst) : Json(nullptr)},
                  {"claims", claims}};
    out.pass = all_pass(claims);
    return out;
}

Outcome cmd_counterexample(const Options& o, Json& cfg)
{
    check_n(o.n);
    check_epsilon(o.epsilon);
    const double h = or_default(o.h, 1.0 / 128);
    check_h(h);
    cfg = {{"n", o.n}, {"epsilon", o.epsilon}, {"h", h}};
    const auto r = comparison_failure_demo(o.n, o.epsilon, h);
    Outcome out;
    out.grid_h = h;
    out.tolerance = r.hyperbolic.claims.empty() ? 0.0 : r.hyperbolic.claims.front().tolerance;
    out.result = r;
    out.pass = r.failure_confirmed;
    return out;
}

Outcome cmd_barrier(const Options& o, Json& cfg)
{
    check_n(o.n);
    check_epsilon(o.epsilon);
    const double h = or_default(o.h, 1.0 / 32);
    check_h(h);
    require(o.delta > 0.0 && o.delta < 1.0, "delta must lie in (0, 1)");
    require(o.samples >= 2, "samples must be at least 2");
    cfg = {{"n", o.n}, {"epsilon", o.epsilon}, {"h", h}, {"delta", o.delta}, {"samples", o.samples}, {"seed", o.seed}};

    // Coefficients of the linearization between phi = u2 and psi = v.
    const auto op = QuasilinearOperator::hyperbolic(o.n);
    const auto phi = fields::u2(o.n, o.epsilon);
    const auto psi = fields::model_sphere(o.n);
    const auto lc = linearize(op, phi, psi, disk_points(o.n, h, 1.0));
    BarrierConfig bc;
    bc.delta = o.delta;
    bc.theta = lc.theta;
    bc.C = lc.C;
    bc.lambda = choose_lambda(bc.theta, bc.C, bc.delta);
    const auto rep = verify_barrier(bc, o.n, o.samples, static_cast<unsigned>(o.seed), &op, &phi, &psi);
    Outcome out;
    out.grid_h = h;
    out.tolerance = 1e-12;
    out.result = {{"theta", lc.theta},
                  {"theta_closed_form", std::pow(2.0, -1.5)},
                  {"C", lc.C},
                  {"coefficient_points", lc.points.size()},
                  {"lambda", bc.lambda},
                  {"report", rep}};
    out.pass = rep.pass;
    return out;
}

RingSpacing spacing_from(const std::string& s)
{
    if (s == "uniform") {
        return RingSpacing::uniform;
    }
    if (s == "spherical") {
        return RingSpacing::spherical;
    }
    throw UsageError("spacing must be uniform or spherical");
}

HypersurfaceMesh mesh_from_options(const Options& o, Ambient amb)
{
    if (!o.mesh.empty()) {
        return read_mesh_file(o.mesh, amb);
    }
    require(!o.field.empty(), "slide needs --mesh or --field");
    require(o.rings >= 1 && o.segments >= 3, "need rings >= 1 and segments >= 3");
    return graph_mesh(parse_field_spec(o.field, 2, o.epsilon), o.rings, o.segments, amb, spacing_from(o.spacing));
}

Outcome slide_mesh(const HypersurfaceMesh& mesh)
{
    const Ambient amb = mesh.ambient();
    const auto inc = amb == Ambient::euclidean ? incorporation_check(mesh) : hyperbolic_incorporation_check(mesh);
    Outcome out;
    out.grid_h = mesh.max_edge_length();
    out.tolerance = kIncorporationTolerance;
    out.result = {{"vertices", mesh.vertices().size()}, {"faces", mesh.faces().size()}, {"incorporation", inc}};
    if (!inc.satisfied) {
        out.result["verdict"] = "precondition_failed";
        out.pass = false;
        return out;
    }
    const auto rep = first_contact(mesh, SphereFamily{amb});
    out.tolerance = rep.containment_tolerance;
    out.result["contact"] = rep;
    out.result["verdict"] = to_string(rep.verdict);
    try {
        out.result["plane_contact"] = plane_contact_point(mesh);
    } catch (const DegenerateContactError& e) {
        out.result["plane_contact"] = Json{{"error", e.what()}};
    }
    out.pass = rep.verdict == Verdict::rigid;
    return out;
}

Outcome cmd_slide(const Options& o, Json& cfg)
{
    const Ambient amb = ambient_or(o.ambient, Ambient::euclidean);
    cfg = {{"ambient", to_string(amb)}};
    if (!o.mesh.empty()) {
        cfg["mesh"] = o.mesh;
    } else {
        cfg["field"] = o.field;
        cfg["rings"] = o.rings;
        cfg["segments"] = o.segments;
        cfg["spacing"] = o.spacing;
    }
    return slide_mesh(mesh_from_options(o, amb));
}

Outcome cmd_make_mesh(const Options& o, Json& cfg)
{
    const Ambient amb = ambient_or(o.ambient, Ambient::euclidean);
    require(!o.mesh.empty(), "make-mesh needs --mesh PATH for the output");
    require(!o.field.empty(), "make-mesh needs --field");
    require(o.rings >= 1 && o.segments >= 3, "need rings >= 1 and segments >= 3");
    cfg = {{"field", o.field},
           {"ambient", to_string(amb)},
           {"rings", o.rings},
           {"segments", o.segments},
           {"spacing", o.spacing},
           {"mesh", o.mesh}};
    const auto mesh =
        graph_mesh(parse_field_spec(o.field, 2, o.epsilon), o.rings, o.segments, amb, spacing_from(o.spacing));
    write_mesh_file(o.mesh, mesh);
    Outcome out;
    out.grid_h = mesh.max_edge_length();
    out.result = {{"vertices", mesh.vertices().size()},
                  {"faces", mesh.faces().size()},
                  {"max_edge", mesh.max_edge_length()},
                  {"boundary_loops", mesh.boundary_loops().size()}};
    out.pass = true;
    return out;
}

// Number or field spec, as found in a solve config.
std::function<double(const Vec&)> data_function(const Json& j, const char* key)
{
    if (j.is_number()) {
        return constant_function(j.get<double>());
    }
    if (j.is_string()) {
        return field_function(parse_field_spec(j.get<std::string>(), 2));
    }
    throw UsageError(std::string("solve config: '") + key + "' must be a number or a field name");
}

ScalarField initial_field(const Json& j, double rho)
{
    if (j.is_number()) {
        return fields::constant(2, j.get<double>(), rho);
    }
    if (j.is_string()) {
        return parse_field_spec(j.get<std::string>(), 2);
    }
    throw UsageError("solve config: 'initial' must be a number or a field name");
}

Outcome cmd_solve(const Options& o, Json& cfg)
{
    require(!o.config.empty(), "solve needs --config FILE");
    std::ifstream in(o.config);
    require(static_cast<bool>(in), "cannot open config " + o.config);
    Json c;
    try {
        c = Json::parse(in);
    } catch (const Json::exception& e) {
        throw UsageError(std::string("config is not valid JSON: ") + e.what());
    }
    require(c.is_object(), "config must be a JSON object");
    for (const auto& [key, value] : c.items()) {
        static const std::set<std::string> known = {"ambient", "n",       "rho",      "h",         "f",
                                                    "boundary", "initial", "rtol",     "max_iter",  "reference"};
        require(known.count(key) == 1, "unknown config key '" + key + "'");
    }
    require(c.contains("f") && c.contains("boundary"), "config needs f and boundary");
    try {
        const Ambient amb = ambient_or(c.value("ambient", std::string("euclidean")), Ambient::euclidean);
        const int n = c.value("n", 2);
        require(n == 2, "the grid solver supports n = 2 only");
        DirichletProblem p;
        p.op = amb == Ambient::euclidean ? QuasilinearOperator::euclidean(2) : QuasilinearOperator::hyperbolic(2);
        p.rho = c.value("rho", 0.9);
        p.h = c.value("h", 1.0 / 64);
        check_h(p.h);
        require(p.rho > 4.0 * p.h && p.rho <= 1.0, "need 4h < rho <= 1");
        require(c["f"].is_number(), "f must be a number");
        p.f = constant_function(c["f"].get<double>());
        p.g = data_function(c["boundary"], "boundary");
        SolverConfig sc;
        sc.rtol = c.value("rtol", 1e-9);
        sc.max_iter = c.value("max_iter", 50);
        require(sc.rtol > 0.0 && sc.max_iter >= 1, "need rtol > 0 and max_iter >= 1");
        const Json init = c.contains("initial") ? c["initial"] : c["boundary"];
        const auto guess = initial_field(init, p.rho);
        std::optional<ScalarField> ref;
        if (c.contains("reference")) {
            require(c["reference"].is_string(), "reference must be a field name");
            ref = parse_field_spec(c["reference"].get<std::string>(), 2);
        }
        cfg = c;
        cfg["ambient"] = to_string(amb);
        cfg["n"] = 2;
        cfg["rho"] = p.rho;
        cfg["h"] = p.h;
        cfg["rtol"] = sc.rtol;
        cfg["max_iter"] = sc.max_iter;
        cfg["initial"] = init;

        const auto r = solve_dirichlet(p, guess, sc, ref);
        if (!o.grid.empty()) {
            write_grid_file(o.grid, r.u);
        }
        Outcome out;
        out.grid_h = p.h;
        out.tolerance = sc.rtol;
        out.result = r;
        if (!o.grid.empty()) {
            out.result["grid_file"] = o.grid;
        }
        out.pass = r.converged;
        return out;
    } catch (const Json::exception& e) {
        throw UsageError(std::string("config value has the wrong type: ") + e.what());
    }
}

Outcome cmd_rigidity(const Options& o, Json& cfg)
{
    const Ambient amb = ambient_or(o.ambient, Ambient::hyperbolic);
    require(o.n == 2, "rigidity supports n = 2 only");
    const double h = or_default(o.h, 1.0 / 64);
    check_h(h);
    cfg = {{"ambient", to_string(amb)}, {"n", o.n}, {"h", h}};
    const auto r = rigidity_experiment(amb, o.n, h);
    Outcome out;
    out.grid_h = h;
    out.tolerance = r.agreement_tolerance;
    out.result = r;
    out.pass = r.pass;
    return out;
}

Outcome cmd_report(const Options& o, Json& cfg)
{
    const double h = or_default(o.h, 1.0 / 64);
    check_h(h);
    require(4.0 * h <= 0.1, "report needs h <= 0.025");
    cfg = {{"h", h}, {"seed", o.seed}, {"epsilon", o.epsilon}};
    check_epsilon(o.epsilon);

    Json sections = Json::object();
    bool pass = true;
    auto add = [&](const std::string& name, const Outcome& s, const Json& scfg) {
        sections[name] = wrap(name, scfg, s);
        sections[name].erase("schema");
        pass = pass && s.pass;
    };
    Options so = o;
    Json scfg;
    so.trials = o.trials < 0 ? 1000 : o.trials;
    add("identities", cmd_identities(so, scfg), scfg);
    so = o;
    so.field = "hemisphere";
    so.h = h / 4.0;
    so.random_fields = 10;
    add("total-curv", cmd_total_curv(so, scfg), scfg);
    so = o;
    so.h = h;
    add("counterexample", cmd_counterexample(so, scfg), scfg);
    so = o;
    so.h = 1.0 / 32;
    add("barrier", cmd_barrier(so, scfg), scfg);
    {
        const auto m = graph_mesh(fields::lower_hemisphere(2), 30, 60, Ambient::euclidean, RingSpacing::spherical);
        add("slide-euclidean", slide_mesh(m), Json{{"field", "lower_hemisphere"}, {"rings", 30}, {"segments", 60}});
        const auto v = graph_mesh(fields::model_sphere(2), 30, 60, Ambient::hyperbolic, RingSpacing::uniform);
        add("slide-hyperbolic", slide_mesh(v), Json{{"field", "model_sphere"}, {"rings", 30}, {"segments", 60}});
    }
    so = o;
    so.n = 2;
    so.h = std::max(h, 1.0 / 32);
    so.ambient = "hyperbolic";
    add("rigidity-hyperbolic", cmd_rigidity(so, scfg), scfg);
    so.ambient = "euclidean";
    add("rigidity-euclidean", cmd_rigidity(so, scfg), scfg);

    Outcome out;
    out.grid_h = h;
    out.result = sections;
    out.pass = pass;
    return out;
}

} // namespace

ScalarField parse_field_spec(const std::string& spec, int n, double epsilon)
{
    if (spec.rfind("file:", 0) == 0) {
        if (n != 2) {
            throw ConfigError("file-defined fields are planar (n = 2)");
        }
        const std::string path = spec.substr(5);
        return ScalarField::grid(read_grid_file(path), path);
    }
    static const std::regex form(R"(^([a-z_0-9]+)(?:\(\s*([-+0-9.eE]+)\s*\))?$)");
    std::smatch m;
    if (!std::regex_match(spec, m, form)) {
        throw ConfigError("malformed field spec '" + spec + "'");
    }
    const std::string name = m[1];
    const bool has_arg = m[2].matched;
    double arg = NAN;
    if (has_arg) {
        std::size_t used = 0;
        try {
            arg = std::stod(m[2].str(), &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != m[2].str().size()) {
            throw ConfigError("bad numeric argument in field spec '" + spec + "'");
        }
    }
    auto no_arg = [&] {
        if (has_arg) {
            throw ConfigError("field '" + name + "' takes no argument");
        }
    };
    if (name == "hemisphere") {
        no_arg();
        return fields::hemisphere(n);
    }
    if (name == "lower_hemisphere") {
        return fields::lower_hemisphere(n, has_arg ? arg : 1.0);
    }
    if (name == "model_sphere" || name == "v") {
        no_arg();
        return fields::model_sphere(n);
    }
    if (name == "u1") {
        no_arg();
        return fields::u1(n);
    }
    if (name == "u2") {
        return fields::u2(n, has_arg ? arg : epsilon);
    }
    if (name == "v_q") {
        if (!has_arg) {
            throw ConfigError("v_q needs its parameter, e.g. v_q(2)");
        }
        return fields::v_q(n, arg);
    }
    if (name == "plane") {
        return fields::constant(n, has_arg ? arg : 0.0);
    }
    if (name == "paraboloid") {
        return fields::paraboloid(n, has_arg ? arg : 1.0);
    }
    throw ConfigError("unknown field '" + name + "'");
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Curvature, comparison and rigidity experiments for graph hypersurfaces"};
    app.name("hemi");
    app.require_subcommand(1, 1);
    // "--h" is the grid spacing, so help is long-form only.
    app.set_help_flag("--help", "print this help and exit");
    Options o;

    auto opt_ambient = [&](CLI::App* s) { s->add_option("--ambient", o.ambient, "euclidean or hyperbolic"); };
    auto opt_n = [&](CLI::App* s) { s->add_option("--n", o.n, "dimension of the domain")->capture_default_str(); };
    auto opt_h = [&](CLI::App* s) { s->add_option("--h", o.h, "grid spacing"); };
    auto opt_eps = [&](CLI::App* s) {
        s->add_option("--epsilon", o.epsilon, "parameter of u2")->capture_default_str();
    };
    auto opt_seed = [&](CLI::App* s) { s->add_option("--seed", o.seed, "random seed")->capture_default_str(); };
    auto opt_field = [&](CLI::App* s) {
        s->add_option("--field", o.field,
                      "hemisphere, lower_hemisphere(R), model_sphere, u1, u2(eps), v_q(q), plane(c), paraboloid(s) "
                      "or file:PATH");
    };
    auto opt_mesh_build = [&](CLI::App* s) {
        s->add_option("--rings", o.rings, "rings of a generated mesh")->capture_default_str();
        s->add_option("--segments", o.segments, "segments of a generated mesh")->capture_default_str();
        s->add_option("--spacing", o.spacing, "uniform or spherical ring spacing")->capture_default_str();
    };

    std::vector<std::pair<CLI::App*, std::function<Outcome(const Options&, Json&)>>> commands;
    auto add = [&](const char* name, const char* help, std::function<Outcome(const Options&, Json&)> fn) {
        CLI::App* s = app.add_subcommand(name, help);
        s->add_option("--output", o.output, "write the JSON report here instead of standard output");
        commands.emplace_back(s, std::move(fn));
        return s;
    };

    auto* s = add("curvature", "principal curvatures of a named or file-defined field", cmd_curvature);
    opt_field(s);
    opt_ambient(s);
    opt_n(s);
    opt_h(s);
    opt_eps(s);
    s->add_option("--rho", o.rho, "radius of the sampled disk")->capture_default_str();
    s->add_option("--csv", o.csv, "also write x,y,value (value = H) here");

    s = add("identities", "curvature identities over random shape operators", cmd_identities);
    s->add_option("--trials", o.trials, "number of random operators (default 10000)");
    opt_seed(s);

    s = add("total-curv", "total mean curvature against n Vol(B_1)", cmd_total_curv);
    opt_field(s);
    opt_n(s);
    opt_h(s);
    opt_eps(s);
    opt_seed(s);
    s->add_option("--random", o.random_fields, "random smooth fields to check")->capture_default_str();
    s->add_option("--random-h", o.random_h, "grid spacing for the random fields")->capture_default_str();

    s = add("counterexample", "comparison-principle failure for the hyperbolic operator", cmd_counterexample);
    opt_n(s);
    opt_eps(s);
    opt_h(s);

    s = add("barrier", "lambda search and verification of the boundary barrier", cmd_barrier);
    opt_n(s);
    opt_eps(s);
    opt_h(s);
    opt_seed(s);
    s->add_option("--delta", o.delta, "barrier radius")->capture_default_str();
    s->add_option("--samples", o.samples, "annulus sample points")->capture_default_str();

    s = add("slide", "sliding-sphere first contact for a mesh", cmd_slide);
    s->add_option("--mesh", o.mesh, "mesh file");
    opt_field(s);
    opt_ambient(s);
    opt_eps(s);
    opt_mesh_build(s);

    s = add("make-mesh", "write the mesh of a named graph", cmd_make_mesh);
    s->add_option("--mesh", o.mesh, "output mesh file")->required();
    opt_field(s);
    opt_ambient(s);
    opt_eps(s);
    opt_mesh_build(s);

    s = add("solve", "Dirichlet problem Q(u) = f from a JSON config", cmd_solve);
    s->add_option("--config", o.config, "JSON {ambient, n, rho, h, f, boundary, initial, rtol, max_iter}")
        ->required();
    s->add_option("--grid", o.grid, "write the solution grid as CSV (+ .json metadata)");

    s = add("rigidity", "multi-start solves of the critical problem", cmd_rigidity);
    opt_ambient(s);
    opt_n(s);
    opt_h(s);

    s = add("report", "every experiment bundled into one JSON document", cmd_report);
    opt_h(s);
    opt_seed(s);
    opt_eps(s);
    s->add_option("--trials", o.trials, "identity trials (default 1000)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 2;
    }

    for (const auto& [sub, fn] : commands) {
        if (!sub->parsed()) {
            continue;
        }
        const std::string name = sub->get_name();
        try {
            Json cfg;
            const Outcome res = fn(o, cfg);
            const Json doc = wrap(name, cfg, res);
            if (o.output.empty()) {
                out << doc.dump(2) << '\n';
            } else {
                std::ofstream f(o.output);
                if (!f) {
                    err << "hemi " << name << ": cannot write " << o.output << '\n';
                    return 2;
                }
                f << doc.dump(2) << '\n';
            }
            return res.pass ? 0 : 1;
        } catch (const UsageError& e) {
            err << "hemi " << name << ": " << e.what() << '\n';
            return 2;
        } catch (const ConfigError& e) {
            err << "hemi " << name << ": " << e.what() << '\n';
            return 2;
        } catch (const DomainError& e) {
            err << "hemi " << name << ": " << e.what() << '\n';
            return 2;
        } catch (const MeshError& e) {
            err << "hemi " << name << ": " << e.what() << '\n';
            return 2;
        } catch (const Error& e) {
            err << "hemi " << name << ": " << e.what() << '\n';
            return 1;
        }
    }
    return 2;
}

} // namespace hemi
