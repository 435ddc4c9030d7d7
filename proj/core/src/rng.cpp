#include "randstab/rng.hpp"

namespace randstab {

namespace {
constexpr std::uint64_t kDrawTag = 0x6472617773747265ULL;   // "drawstre"
constexpr std::uint64_t kNoiseTag = 0x6e6f697365737472ULL;  // "noisestr"
}  // namespace

std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t hash_words(std::initializer_list<std::uint64_t> words) noexcept {
    std::uint64_t h = 0x243f6a8885a308d3ULL;
    for (std::uint64_t w : words) h = mix64(h ^ mix64(w));
    return h;
}

double standard_normal(Rng& rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    return dist(rng);
}

Rng RunStreams::draw_stream(std::size_t episode) const {
    if (auto it = overrides_.find(episode); it != overrides_.end()) return Rng(it->second);
    return Rng(hash_words({seed_, kDrawTag, static_cast<std::uint64_t>(episode)}));
}

Rng RunStreams::noise_stream() const {
    return Rng(hash_words({seed_, kNoiseTag}));
}

}  // namespace randstab
