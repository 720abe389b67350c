#include "hemi/gridio.hpp"

#include "hemi/errors.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace hemi {

void write_grid_csv(std::ostream& out, const GridField& u)
{
    out << "x,y,value\n" << std::setprecision(17);
    for (int i = -u.extent(); i <= u.extent(); ++i) {
        for (int j = -u.extent(); j <= u.extent(); ++j) {
            if (u.present(i, j)) {
                const Vec x = u.node(i, j);
                out << x(0) << ',' << x(1) << ',' << u.at(i, j) << '\n';
            }
        }
    }
}

Json grid_metadata(const GridField& u)
{
    int count = 0;
    for (int i = -u.extent(); i <= u.extent(); ++i) {
        for (int j = -u.extent(); j <= u.extent(); ++j) {
            count += u.present(i, j) ? 1 : 0;
        }
    }
    return Json{{"schema", kSchemaVersion},
                {"n", 2},
                {"h", u.h()},
                {"radius", u.radius()},
                {"extent", u.extent()},
                {"nodes", count}};
}

namespace {

double parse_number(const std::string& s, int line)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) {
        std::ostringstream os;
        os << "grid CSV line " << line << ": not a number: '" << s << "'";
        throw ConfigError(os.str());
    }
    return v;
}

int node_index(double c, double h, int line)
{
    const double k = c / h;
    const double r = std::round(k);
    if (std::abs(k - r) > 1e-6) {
        std::ostringstream os;
        os << "grid CSV line " << line << ": coordinate " << c << " is not a multiple of h = " << h;
        throw ConfigError(os.str());
    }
    return static_cast<int>(r);
}

} // namespace

GridField read_grid(std::istream& csv, const Json& meta)
{
    if (!meta.is_object() || meta.value("schema", 0) != kSchemaVersion || meta.value("n", 0) != 2
        || !meta.contains("h") || !meta.contains("radius") || !meta.contains("extent")) {
        throw ConfigError("grid metadata needs schema 1, n = 2, h, radius and extent");
    }
    const double h = meta.at("h").get<double>();
    const double radius = meta.at("radius").get<double>();
    const int extent = meta.at("extent").get<int>();
    if (!(h > 0.0) || !(radius > 0.0) || extent < 1) {
        throw ConfigError("grid metadata: h, radius and extent must be positive");
    }
    GridField u(h, radius, extent);

    std::string line;
    if (!std::getline(csv, line) || line != "x,y,value") {
        throw ConfigError("grid CSV must start with the header x,y,value");
    }
    int lineno = 1;
    int rows = 0;
    while (std::getline(csv, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        std::stringstream ss(line);
        std::string a;
        std::string b;
        std::string c;
        std::string extra;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c, ',')
            || std::getline(ss, extra, ',')) {
            std::ostringstream os;
            os << "grid CSV line " << lineno << ": expected three fields";
            throw ConfigError(os.str());
        }
        const int i = node_index(parse_number(a, lineno), h, lineno);
        const int j = node_index(parse_number(b, lineno), h, lineno);
        if (std::abs(i) > extent || std::abs(j) > extent) {
            std::ostringstream os;
            os << "grid CSV line " << lineno << ": node outside the grid extent";
            throw ConfigError(os.str());
        }
        if (u.present(i, j)) {
            std::ostringstream os;
            os << "grid CSV line " << lineno << ": duplicate node";
            throw ConfigError(os.str());
        }
        u.set(i, j, parse_number(c, lineno));
        ++rows;
    }
    if (meta.contains("nodes") && meta.at("nodes").get<int>() != rows) {
        throw ConfigError("grid CSV row count does not match the metadata");
    }
    return u;
}

GridField read_grid_file(const std::string& path)
{
    std::ifstream csv(path);
    if (!csv) {
        throw ConfigError("cannot open grid file " + path);
    }
    std::ifstream m(path + ".json");
    if (!m) {
        throw ConfigError("cannot open grid metadata " + path + ".json");
    }
    Json meta;
    try {
        meta = Json::parse(m);
    } catch (const Json::exception& e) {
        throw ConfigError("grid metadata " + path + ".json: " + e.what());
    }
    return read_grid(csv, meta);
}

void write_grid_file(const std::string& path, const GridField& u)
{
    std::ofstream csv(path);
    std::ofstream m(path + ".json");
    if (!csv || !m) {
        throw ConfigError("cannot write grid file " + path);
    }
    write_grid_csv(csv, u);
    m << grid_metadata(u).dump(2) << '\n';
}

} // namespace hemi
