#include "svgd/lmc.hpp"

#include <cmath>
#include <stdexcept>

#include "svgd/parallel.hpp"
#include "svgd/rng.hpp"

namespace svgd {

LmcState init_lmc(int n, int dim, std::uint64_t seed) {
    if (n < 1 || dim < 1) {
        throw std::invalid_argument("lmc: need n >= 1 and dim >= 1");
    }
    LmcState state;
    state.seed = seed;
    state.rng_counter = 0;
    state.positions.resize(n, dim);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < dim; ++k) {
            state.positions(i, k) =
                normal_draw(seed, RngStream::particle_init, 0,
                            static_cast<std::uint64_t>(i),
                            static_cast<std::uint64_t>(k));
        }
    }
    return state;
}

bool lmc_step(const LmcState& state, const Target& target, double gamma,
              LmcState& out, int threads, double noise_scale) {
    if (!(gamma > 0.0)) throw std::invalid_argument("lmc_step: gamma must be > 0");
    const int n = state.n();
    const int d = state.dim();
    const double diffusion = noise_scale * std::sqrt(2.0 * gamma);
    out.seed = state.seed;
    out.rng_counter = state.rng_counter + 1;
    out.positions.resize(n, d);
    const std::uint64_t step_id = state.rng_counter;
    parallel_for(n, resolve_threads(threads), [&](int begin, int end) {
        for (int i = begin; i < end; ++i) {
            const Vec g = grad_potential(target, state.positions.row(i));
            for (int k = 0; k < d; ++k) {
                const double xi =
                    normal_draw(state.seed, RngStream::lmc_noise, step_id,
                                static_cast<std::uint64_t>(i),
                                static_cast<std::uint64_t>(k));
                out.positions(i, k) =
                    state.positions(i, k) - gamma * g[k] + diffusion * xi;
            }
        }
    });
    return out.positions.allFinite();
}

}  // namespace svgd
