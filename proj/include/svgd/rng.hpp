#pragma once

#include <cstdint>

namespace svgd {

// Counter-based Gaussian stream. Every draw is a pure function of
// (seed, stream, step, chain, coord), so particle initialisation and LMC
// noise are reproducible under any parallel schedule.

enum class RngStream : std::uint64_t {
    particle_init = 1,
    lmc_noise = 2,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Uniform in (0, 1]; the +1 keeps log() finite in Box-Muller.
inline double uniform_from_bits(std::uint64_t h) {
    return static_cast<double>((h >> 11) + 1ULL) * 0x1.0p-53;
}

double normal_draw(std::uint64_t seed, RngStream stream, std::uint64_t step,
                   std::uint64_t chain, std::uint64_t coord);

}  // namespace svgd
