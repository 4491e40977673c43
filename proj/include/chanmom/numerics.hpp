#ifndef CHANMOM_NUMERICS_HPP
#define CHANMOM_NUMERICS_HPP

#include <cstddef>
#include <span>

namespace chanmom {

/// Pairwise (tree) summation with a fixed reduction order. Bounds rounding
/// error growth to O(log N) and makes repeated runs bit-identical.
double pairwise_sum(std::span<const double> values);

/// x^n for small non-negative integer n by repeated squaring. Fixed
/// multiplication order, so results are reproducible across runs.
double ipow(double x, int n);

/// Binomial coefficient as a double; exact for the small orders used here.
double binomial(int n, int k);

} // namespace chanmom

#endif // CHANMOM_NUMERICS_HPP
