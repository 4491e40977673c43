#ifndef CHANMOM_RNG_HPP
#define CHANMOM_RNG_HPP

#include <cstdint>

namespace chanmom {

/// Counter-based deterministic generator. Every draw is a pure function of
/// (seed, stream, counter), so plane generation is order-independent and a
/// reimplementation in another language reproduces fixtures bit-exactly.
///
/// Algorithm (all arithmetic mod 2^64):
///   mix(z): z += 0x9E3779B97F4A7C15
///           z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///           z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///           return z ^ (z >> 31)               (the splitmix64 finalizer)
///   root        = mix(mix(seed) ^ mix(stream))
///   raw(k)      = mix(root + k * 0x9E3779B97F4A7C15)
///   uniform01(k) = (raw(k) >> 11) * 2^-53       in [0, 1)
///   normal(k) uses raw(2k), raw(2k+1) via Box-Muller.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream);

    /// Uniform draw in [0, 1).
    double uniform01(std::uint64_t counter) const;

    /// Uniform draw in [-1, 1].
    double uniform_sym(std::uint64_t counter) const;

    /// Standard normal draw; consumes raw values 2*counter and 2*counter+1.
    double normal(std::uint64_t counter) const;

    static std::uint64_t mix(std::uint64_t z);

private:
    std::uint64_t raw(std::uint64_t counter) const;

    std::uint64_t root_;
};

} // namespace chanmom

#endif // CHANMOM_RNG_HPP
