#pragma once

#include <cstdint>
#include <random>

namespace posboot {

using rng_engine = std::mt19937_64;

/// splitmix64 finaliser; mixes a base seed with a stream index so that
/// per-trial and per-seed engines are independent of one another.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline rng_engine make_engine(std::uint64_t base, std::uint64_t stream) {
    return rng_engine(derive_seed(base, stream));
}

/// Uniform double in [0, 1) built from the top 53 bits. Independent of the
/// standard library's distribution implementation.
inline double uniform01(rng_engine& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace posboot
