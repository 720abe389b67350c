#pragma once

#include <nlohmann/json.hpp>

#include <span>
#include <string>
#include <vector>

namespace hemi {

using Json = nlohmann::json;

/// Version tag written at the top level of every emitted document.
inline constexpr int kSchemaVersion = 1;

/// One numerical claim: `lhs` compared against `rhs` with the margin `slack`
/// (positive means satisfied). `deviation` carries the worst equality error
/// for claims that also assert an identity.
struct Claim {
    std::string claim;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    double grid_h = 0.0;
    double tolerance = 0.0;
    double deviation = 0.0;
    bool pass = false;
};

void to_json(Json& j, const Claim& c);

[[nodiscard]] bool all_pass(std::span<const Claim> claims);

/// Pairwise (cascade) summation; fixed association order makes grid
/// reductions reproducible bit for bit.
[[nodiscard]] double pairwise_sum(std::span<const double> values);

} // namespace hemi
