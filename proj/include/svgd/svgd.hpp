#pragma once

#include "svgd/ensemble.hpp"
#include "svgd/kernels.hpp"
#include "svgd/targets.hpp"

namespace svgd {

// Empirical optimal direction at y:
//   g_hat(y) = (1/N) sum_i [ grad V(x_i) k(x_i, y) - grad1(x_i, y) ].
// The update x <- x - gamma g_hat(x) descends KL(. | pi).
Vec direction(const Ensemble& ens, const Target& target, const KernelSpec& spec,
              const Vec& y);

// Stein kernel u(x,y); its double average over the ensemble equals
// ||g_hat||_H^2. Symmetric in (x, y).
double stein_kernel(const Target& target, const KernelSpec& spec, const Vec& x,
                    const Vec& y);

// V-statistic (1/N^2) sum_ij u(x_i, x_j). Nonnegative up to round-off.
double ksd_squared(const Ensemble& ens, const Target& target,
                   const KernelSpec& spec, int threads = 0);

// ||g_hat||_H^2 by the four pairwise double sums of the RKHS expansion,
// using eval/grad1/trace_mixed_second directly. Agrees with ksd_squared in
// exact arithmetic; kept as an independent route for cross-checking.
double direction_norm_squared(const Ensemble& ens, const Target& target,
                              const KernelSpec& spec);

// One synchronous update with g_hat frozen at the pre-step positions.
// Returns false (and leaves `out` unspecified) if any updated coordinate is
// non-finite, which signals an oversized step.
bool svgd_step(const Ensemble& ens, const Target& target, const KernelSpec& spec,
               double gamma, Ensemble& out, int threads = 0);

// Fused per-iteration pass shared by ksd_squared, svgd_step and the run
// loop: particle gradients, KSD row sums and (optionally) g_hat at every
// particle, parallel over the outer index with a fixed-order reduction.
struct IterationStats {
    double ksd2 = 0.0;
    double mean_grad_norm = 0.0;
    Mat direction;  // N x d, empty unless requested
};

IterationStats iteration_stats(const Ensemble& ens, const Target& target,
                               const KernelSpec& spec, bool want_direction,
                               int threads = 0);

}  // namespace svgd
