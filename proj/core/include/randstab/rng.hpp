#pragma once

#include <cstdint>
#include <initializer_list>
#include <map>
#include <random>

namespace randstab {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
[[nodiscard]] std::uint64_t mix64(std::uint64_t x) noexcept;

/// Order-sensitive hash of a word sequence; stable across platforms.
[[nodiscard]] std::uint64_t hash_words(std::initializer_list<std::uint64_t> words) noexcept;

/// Standard normal draw.
[[nodiscard]] double standard_normal(Rng& rng);

/// Independent random streams for one algorithm run.
///
/// Every episode gets its own stream for drawing its randomized controller,
/// and the process noise comes from a separate stream, so re-seeding one
/// episode's stream changes nothing else in the run.
class RunStreams {
public:
    explicit RunStreams(std::uint64_t seed) : seed_(seed) {}

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] Rng draw_stream(std::size_t episode) const;
    [[nodiscard]] Rng noise_stream() const;

    void override_draw_seed(std::size_t episode, std::uint64_t seed) { overrides_[episode] = seed; }

private:
    std::uint64_t seed_;
    std::map<std::size_t, std::uint64_t> overrides_;
};

}  // namespace randstab
