#ifndef SWARMOPT_RNG_HPP
#define SWARMOPT_RNG_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace swarmopt {

/// Name of the generator recorded in run metadata.
inline constexpr std::string_view rng_algorithm = "mt19937_64+splitmix64-seed-mixing";

/// SplitMix64 finalizer. Used to derive independent seeds; never as the
/// stream generator itself.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Seed for run `run_index` of a battery started from `master_seed`.
constexpr std::uint64_t derive_run_seed(std::uint64_t master_seed, std::uint64_t run_index) noexcept
{
    return splitmix64(master_seed ^ splitmix64(run_index + 0x632BE59BD9B4E019ull));
}

/// Deterministic random stream for a single run.
///
/// The underlying engine is std::mt19937_64, whose output sequence is fixed
/// by the standard. Conversions to real and integer ranges are done here
/// rather than through <random> distributions, whose algorithms are
/// implementation-defined, so a seed replays bit-exactly on every platform.
/// Every call to next() counts as one draw.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed), seed_(seed) {}

    std::uint64_t next()
    {
        ++draws_;
        return engine_();
    }

    /// Uniform in [0, 1), 53 bits of resolution.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). Rejection sampling, so it may consume more
    /// than one draw.
    std::size_t below(std::size_t n)
    {
        const std::uint64_t bound = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return static_cast<std::size_t>(x % bound);
    }

    /// Uniform index in [0, n) excluding `skip`. Requires n >= 2.
    std::size_t below_excluding(std::size_t n, std::size_t skip)
    {
        const std::size_t j = below(n - 1);
        return j >= skip ? j + 1 : j;
    }

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t draws() const noexcept { return draws_; }

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
    std::uint64_t draws_ = 0;
};

} // namespace swarmopt

#endif // SWARMOPT_RNG_HPP
