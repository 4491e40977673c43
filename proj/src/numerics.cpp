#include "chanmom/numerics.hpp"

namespace chanmom {

namespace {

constexpr std::size_t kPairwiseBase = 32;

double pairwise_sum_impl(const double* data, std::size_t n) {
    if (n <= kPairwiseBase) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += data[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum_impl(data, half) +
           pairwise_sum_impl(data + half, n - half);
}

} // namespace

double pairwise_sum(std::span<const double> values) {
    return pairwise_sum_impl(values.data(), values.size());
}

double ipow(double x, int n) {
    double result = 1.0;
    double base = x;
    int e = n;
    while (e > 0) {
        if (e & 1) result *= base;
        base *= base;
        e >>= 1;
    }
    return result;
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    if (k > n - k) k = n - k;
    double c = 1.0;
    for (int i = 1; i <= k; ++i) {
        c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
    }
    return c;
}

} // namespace chanmom
