#include "hemi/report.hpp"

#include <algorithm>

namespace hemi {

void to_json(Json& j, const Claim& c)
{
    j = Json{{"claim", c.claim},         {"lhs", c.lhs},
             {"rhs", c.rhs},             {"slack", c.slack},
             {"grid_h", c.grid_h},       {"tolerance", c.tolerance},
             {"deviation", c.deviation}, {"pass", c.pass}};
}

bool all_pass(std::span<const Claim> claims)
{
    return std::all_of(claims.begin(), claims.end(), [](const Claim& c) { return c.pass; });
}

double pairwise_sum(std::span<const double> values)
{
    constexpr std::size_t kLeaf = 32;
    if (values.size() <= kLeaf) {
        double s = 0.0;
        for (double v : values) {
            s += v;
        }
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

} // namespace hemi
