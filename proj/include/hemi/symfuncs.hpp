#pragma once

#include <initializer_list>
#include <span>
#include <vector>

namespace hemi {

/// Values of sigma_j this close to zero count as non-positive. The cones
/// Gamma_k are open, so a tie is a failure rather than a fuzzy accept.
inline constexpr double kConeTieTolerance = 1e-14;

/// Principal curvatures kappa_1..kappa_n (n >= 1, all finite).
class CurvatureVector {
public:
    explicit CurvatureVector(std::vector<double> entries);
    CurvatureVector(std::initializer_list<double> entries);

    [[nodiscard]] int size() const noexcept { return static_cast<int>(entries_.size()); }
    [[nodiscard]] double operator[](int i) const { return entries_[static_cast<std::size_t>(i)]; }
    [[nodiscard]] std::span<const double> entries() const noexcept { return entries_; }

private:
    std::vector<double> entries_;
};

/// sigma_1..sigma_n together with the binomially normalized values and the
/// Maclaurin chain [sigma_j / C(n,j)]^{1/j}. The chain is only defined on the
/// longest prefix with every sigma_j > 0, so it may be shorter than n.
struct SymmetricProfile {
    std::vector<double> sigma;           // sigma[j-1] = sigma_j
    std::vector<double> normalized;      // sigma_j / C(n,j)
    std::vector<double> maclaurin_chain; // [sigma_j / C(n,j)]^{1/j}
};

/// Binomial coefficient C(n, k) as a double; zero outside 0 <= k <= n.
[[nodiscard]] double binomial(int n, int k);

/// All elementary symmetric polynomials e_0..e_n of the entries, obtained by
/// expanding prod_i (t + kappa_i) one factor at a time (O(n^2)).
[[nodiscard]] std::vector<double> elementary_symmetric_all(const CurvatureVector& lambda);

/// sigma_k(lambda) for 1 <= k <= n. Throws DomainError otherwise.
[[nodiscard]] double elem_sym(int k, const CurvatureVector& lambda);

/// Full profile without any positivity requirement; the chain covers the
/// positive prefix only.
[[nodiscard]] SymmetricProfile symmetric_profile(const CurvatureVector& lambda);

/// Maclaurin chain for j = 1..k. Throws PreconditionError carrying the first
/// j with sigma_j <= kConeTieTolerance, DomainError if k is out of range.
[[nodiscard]] SymmetricProfile maclaurin_chain(const CurvatureVector& lambda, int k);

/// True iff sigma_j(lambda) > 0 for all j = 1..k (membership in Gamma_k).
[[nodiscard]] bool gamma_k_membership(const CurvatureVector& lambda, int k);

} // namespace hemi
