#pragma once

#include "hemi/field.hpp"
#include "hemi/report.hpp"

#include <iosfwd>
#include <string>

namespace hemi {

/// CSV dump of the present nodes: header "x,y,value", rows in (i, j)
/// lexicographic order, 17 significant digits.
void write_grid_csv(std::ostream& out, const GridField& u);

/// {"schema", "n", "h", "radius", "extent", "nodes"} for the CSV above.
[[nodiscard]] Json grid_metadata(const GridField& u);

/// Reads a CSV written by write_grid_csv together with its metadata. Rows
/// must sit on nodes of the metadata's grid. Throws ConfigError on
/// malformed input.
[[nodiscard]] GridField read_grid(std::istream& csv, const Json& meta);

/// `path` is the CSV; the metadata is read from `path` + ".json".
[[nodiscard]] GridField read_grid_file(const std::string& path);
void write_grid_file(const std::string& path, const GridField& u);

} // namespace hemi
