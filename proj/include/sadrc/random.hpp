#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace sadrc {

using Rng = std::mt19937_64;

// splitmix64 finalizer
constexpr std::uint64_t mix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Order-sensitive combination of seed components, e.g. (master, cell, trial).
constexpr std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) noexcept
{
    std::uint64_t h = 0x243f6a8885a308d3ULL;
    for (auto p : parts) {
        h = mix64(h ^ mix64(p));
    }
    return h;
}

// Stream tags so that the mask, frequencies, weights and task data never share
// a generator.
namespace stream {
inline constexpr std::uint64_t structure = 1;
inline constexpr std::uint64_t weights = 2;
inline constexpr std::uint64_t task_data = 3;
inline constexpr std::uint64_t mc_input = 4;
} // namespace stream

} // namespace sadrc
