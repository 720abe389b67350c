#pragma once

#include "hemi/field.hpp"

#include <iosfwd>
#include <string>

namespace hemi {

/// Field by name: hemisphere, lower_hemisphere(R), model_sphere (or v), u1,
/// u2(eps), v_q(q), plane(c), paraboloid(s), or file:PATH for a grid CSV
/// with its .json metadata. `epsilon` is used for a bare "u2". Throws
/// ConfigError for an unknown or malformed spec.
[[nodiscard]] ScalarField parse_field_spec(const std::string& spec, int n, double epsilon = 0.25);

/// Command-line entry point. Exit codes: 0 all checks passed, 1 some check
/// failed or a computation raised, 2 usage or configuration error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace hemi
