#pragma once

#include <cstdint>

#include "svgd/ensemble.hpp"
#include "svgd/targets.hpp"

namespace svgd {

// Unadjusted Langevin chains: theta <- theta - gamma grad V(theta)
// + sqrt(2 gamma) xi, independent per chain.
struct LmcState {
    Mat positions;  // one chain per row
    std::uint64_t seed = 0;
    std::uint64_t rng_counter = 0;  // iterations consumed from the noise stream

    int n() const { return static_cast<int>(positions.rows()); }
    int dim() const { return static_cast<int>(positions.cols()); }
};

LmcState init_lmc(int n, int dim, std::uint64_t seed);

// One Euler-Maruyama step. Noise is drawn from the counter stream keyed by
// (seed, rng_counter, chain, coord), so trajectories are reproducible under
// any parallel schedule. `noise_scale` != 1 is a test hook (0 disables the
// diffusion term). Returns false if any coordinate becomes non-finite.
bool lmc_step(const LmcState& state, const Target& target, double gamma,
              LmcState& out, int threads = 0, double noise_scale = 1.0);

}  // namespace svgd
