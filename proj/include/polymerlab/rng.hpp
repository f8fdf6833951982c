#pragma once

#include <cstdint>
#include <random>

namespace polymerlab {

/// splitmix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t splitmix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seed of replica stream `stream` under `master`:
///   splitmix64(master + 0x9E3779B97F4A7C15 * (stream + 1))  (mod 2^64),
/// i.e. the (stream + 1)-th output of a splitmix64 generator started at master.
constexpr std::uint64_t stream_seed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64(master + 0x9E3779B97F4A7C15ULL * (stream + 1));
}

/// mt19937_64 seeded from stream_seed(); uniform() takes the top 53 bits so the
/// sequence of doubles is identical on every platform.
class Rng {
public:
    Rng(std::uint64_t master, std::uint64_t stream) : engine_(stream_seed(master, stream)) {}
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    std::uint64_t bits() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace polymerlab
