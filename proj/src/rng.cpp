#include "chanmom/rng.hpp"

#include <cmath>
#include <numbers>

namespace chanmom {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t CounterRng::mix(std::uint64_t z) {
    z += kGolden;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : root_(mix(mix(seed) ^ mix(stream))) {}

std::uint64_t CounterRng::raw(std::uint64_t counter) const {
    return mix(root_ + counter * kGolden);
}

double CounterRng::uniform01(std::uint64_t counter) const {
    return static_cast<double>(raw(counter) >> 11) * 0x1.0p-53;
}

double CounterRng::uniform_sym(std::uint64_t counter) const {
    return 2.0 * uniform01(counter) - 1.0;
}

double CounterRng::normal(std::uint64_t counter) const {
    const double u1 = static_cast<double>(raw(2 * counter) >> 11) * 0x1.0p-53;
    const double u2 =
        static_cast<double>(raw(2 * counter + 1) >> 11) * 0x1.0p-53;
    // 1 - u1 keeps the log argument in (0, 1]
    return std::sqrt(-2.0 * std::log(1.0 - u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace chanmom
