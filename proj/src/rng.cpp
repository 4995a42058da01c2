#include "svgd/rng.hpp"

#include <cmath>
#include <numbers>

namespace svgd {

namespace {

std::uint64_t mix_key(std::uint64_t seed, std::uint64_t stream,
                      std::uint64_t step, std::uint64_t chain,
                      std::uint64_t coord) {
    std::uint64_t k = splitmix64(seed);
    k = splitmix64(k ^ (stream * 0x9e3779b97f4a7c15ULL));
    k = splitmix64(k ^ (step * 0xd1b54a32d192ed03ULL));
    k = splitmix64(k ^ (chain * 0x8cb92ba72f3d8dd7ULL));
    k = splitmix64(k ^ (coord * 0xff51afd7ed558ccdULL));
    return k;
}

}  // namespace

double normal_draw(std::uint64_t seed, RngStream stream, std::uint64_t step,
                   std::uint64_t chain, std::uint64_t coord) {
    const std::uint64_t key =
        mix_key(seed, static_cast<std::uint64_t>(stream), step, chain, coord);
    const double u1 = uniform_from_bits(splitmix64(key ^ 0x2545f4914f6cdd1dULL));
    const double u2 = uniform_from_bits(splitmix64(key ^ 0x6a09e667f3bcc909ULL));
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace svgd
