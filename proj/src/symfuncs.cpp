#include "hemi/symfuncs.hpp"

#include "hemi/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hemi {

CurvatureVector::CurvatureVector(std::vector<double> entries) : entries_(std::move(entries))
{
    if (entries_.empty()) {
        throw DomainError("CurvatureVector needs at least one entry");
    }
    for (double v : entries_) {
        if (!std::isfinite(v)) {
            throw DomainError("CurvatureVector entries must be finite");
        }
    }
}

CurvatureVector::CurvatureVector(std::initializer_list<double> entries)
    : CurvatureVector(std::vector<double>(entries))
{
}

double binomial(int n, int k)
{
    if (k < 0 || k > n) {
        return 0.0;
    }
    k = std::min(k, n - k);
    double result = 1.0;
    for (int i = 1; i <= k; ++i) {
        result = result * static_cast<double>(n - k + i) / static_cast<double>(i);
    }
    return std::round(result);
}

std::vector<double> elementary_symmetric_all(const CurvatureVector& lambda)
{
    const int n = lambda.size();
    std::vector<double> e(static_cast<std::size_t>(n) + 1, 0.0);
    e[0] = 1.0;
    for (int i = 0; i < n; ++i) {
        // Descending j keeps e[j-1] at its value before factor i was applied.
        for (int j = i + 1; j >= 1; --j) {
            e[static_cast<std::size_t>(j)] += lambda[i] * e[static_cast<std::size_t>(j - 1)];
        }
    }
    return e;
}

double elem_sym(int k, const CurvatureVector& lambda)
{
    if (k < 1 || k > lambda.size()) {
        throw DomainError("elem_sym: k = " + std::to_string(k) + " outside [1, "
                          + std::to_string(lambda.size()) + "]");
    }
    return elementary_symmetric_all(lambda)[static_cast<std::size_t>(k)];
}

SymmetricProfile symmetric_profile(const CurvatureVector& lambda)
{
    const int n = lambda.size();
    const auto e = elementary_symmetric_all(lambda);
    SymmetricProfile p;
    p.sigma.assign(e.begin() + 1, e.end());
    p.normalized.resize(static_cast<std::size_t>(n));
    for (int j = 1; j <= n; ++j) {
        p.normalized[static_cast<std::size_t>(j - 1)] = p.sigma[static_cast<std::size_t>(j - 1)] / binomial(n, j);
    }
    for (int j = 1; j <= n; ++j) {
        const double s = p.normalized[static_cast<std::size_t>(j - 1)];
        if (!(p.sigma[static_cast<std::size_t>(j - 1)] > kConeTieTolerance)) {
            break;
        }
        p.maclaurin_chain.push_back(std::pow(s, 1.0 / j));
    }
    return p;
}

SymmetricProfile maclaurin_chain(const CurvatureVector& lambda, int k)
{
    if (k < 1 || k > lambda.size()) {
        throw DomainError("maclaurin_chain: k = " + std::to_string(k) + " outside [1, "
                          + std::to_string(lambda.size()) + "]");
    }
    SymmetricProfile p = symmetric_profile(lambda);
    const int defined = static_cast<int>(p.maclaurin_chain.size());
    if (defined < k) {
        const int j = defined + 1;
        throw PreconditionError("maclaurin_chain: sigma_" + std::to_string(j) + " = "
                                    + std::to_string(p.sigma[static_cast<std::size_t>(j - 1)])
                                    + " is not positive",
                                j);
    }
    p.maclaurin_chain.resize(static_cast<std::size_t>(k));
    return p;
}

bool gamma_k_membership(const CurvatureVector& lambda, int k)
{
    if (k < 1 || k > lambda.size()) {
        throw DomainError("gamma_k_membership: k = " + std::to_string(k) + " outside [1, "
                          + std::to_string(lambda.size()) + "]");
    }
    const auto e = elementary_symmetric_all(lambda);
    for (int j = 1; j <= k; ++j) {
        if (!(e[static_cast<std::size_t>(j)] > kConeTieTolerance)) {
            return false;
        }
    }
    return true;
}

} // namespace hemi
