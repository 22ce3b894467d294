#ifndef DPRONY_RANDOM_HPP
#define DPRONY_RANDOM_HPP

#include <cstdint>
#include <random>

namespace dprony {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based child seed keyed on (master, cell, trial). Independent of
/// the order in which children are requested.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t cell,
                                    std::uint64_t trial) noexcept
{
    return mix64(mix64(mix64(master) ^ cell) ^ (trial + 0x632be59bd9b4e019ULL));
}

/// Uniform doubles with a bit-exact mapping from the engine output, so
/// sequences are identical across standard library implementations.
class Rng
{
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01() noexcept
    {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }

    /// Log-uniform in [lo, hi], lo > 0.
    double log_uniform(double lo, double hi) noexcept;

    std::uint64_t next() noexcept { return engine_(); }

private:
    std::mt19937_64 engine_;
};

} // namespace dprony

#endif // DPRONY_RANDOM_HPP
