#pragma once

#include <cstdint>
#include <random>

namespace treelocal {

using rng_t = std::mt19937_64;

// splitmix64 finalizer; bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derived stream for (seed, stream, replica). Replica streams depend on the
// triple only, never on scheduling or worker count.
inline rng_t make_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t replica) {
    std::uint64_t a = mix64(seed ^ 0x243f6a8885a308d3ULL);
    std::uint64_t b = mix64(a ^ mix64(stream));
    std::uint64_t c = mix64(b ^ mix64(replica));
    std::seed_seq seq{
        static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
        static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
        static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
    return rng_t(seq);
}

}  // namespace treelocal
