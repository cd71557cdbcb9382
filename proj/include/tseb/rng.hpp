#pragma once

#include <cstdint>
#include <random>

namespace tseb {

/// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed of child stream `stream` derived from `seed`. Distinct streams of the
/// same seed (and the same stream of distinct seeds) are decorrelated.
constexpr std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x5851f42d4c957f2dULL));
}

/// Deterministic generator. Everything random in the library draws from one of
/// these; copying an Rng forks an identical stream.
class Rng {
public:
    using result_type = std::mt19937_64::result_type;

    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

    /// Child generator for an independent purpose (environment, sampling, ...).
    Rng split(std::uint64_t stream) const { return Rng(split_seed(seed_, stream)); }

    std::uint64_t seed() const noexcept { return seed_; }

    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }
    result_type operator()() { return engine_(); }

    /// Uniform on [0, 1).
    double uniform() { return std::generate_canonical<double, 53>(engine_); }

    double normal(double mean, double stddev) {
        return std::normal_distribution<double>(mean, stddev)(engine_);
    }

    double gamma(double shape) {
        return std::gamma_distribution<double>(shape, 1.0)(engine_);
    }

    bool operator==(const Rng& other) const { return seed_ == other.seed_ && engine_ == other.engine_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

} // namespace tseb
