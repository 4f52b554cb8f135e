#pragma once

#include <cstdint>

namespace cg {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Counter-based random stream: the value at position i is a pure function of
/// (seed, stream, i). Consumers index draws by a structural counter (cell
/// number, sample number), so evaluation order never changes results.
class CounterStream {
public:
    constexpr CounterStream(std::uint64_t seed, std::uint64_t stream) noexcept
        : key_(splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL))) {}

    constexpr std::uint64_t bits(std::uint64_t counter) const noexcept {
        return splitmix64(key_ ^ splitmix64(counter * 0xd1b54a32d192ed03ULL + 1));
    }

    /// Uniform double in [0, 1) with 53 random bits.
    constexpr double uniform(std::uint64_t counter) const noexcept {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

    constexpr bool bernoulli(std::uint64_t counter, double p) const noexcept {
        return uniform(counter) < p;
    }

    /// Uniform integer in [lo, hi] (inclusive); slight modulo bias is irrelevant at
    /// the ranges used here.
    constexpr std::uint64_t uniform_int(std::uint64_t counter, std::uint64_t lo,
                                        std::uint64_t hi) const noexcept {
        return lo + bits(counter) % (hi - lo + 1);
    }

private:
    std::uint64_t key_;
};

/// Stream domains. Keeping them distinct stops e.g. noise draws from
/// correlating with the generator draws of the same seed.
enum class StreamDomain : std::uint64_t {
    kGenerate = 1,
    kNoise = 2,
    kMonteCarlo = 3,
    kStudy = 4,
};

constexpr std::uint64_t stream_id(StreamDomain d, std::uint64_t sub = 0) noexcept {
    return splitmix64(static_cast<std::uint64_t>(d)) ^ sub;
}

}  // namespace cg
