#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "svgd/kernels.hpp"

namespace svgd {

// N particles in d dimensions, one per row; the empirical approximation of
// the iterate mu_n. The seed records how the positions were initialised.
struct Ensemble {
    Mat positions;  // N x d
    std::uint64_t seed = 0;

    int n() const { return static_cast<int>(positions.rows()); }
    int dim() const { return static_cast<int>(positions.cols()); }
};

// Standard-normal initialisation via the counter-based stream: independent
// of thread count and platform.
Ensemble init_standard_normal(int n, int dim, std::uint64_t seed);

// Per-iteration diagnostics row.
struct TraceRecord {
    int iter = 0;
    double gamma = 0.0;
    double ksd2 = 0.0;            // V-statistic estimate of I_Stein
    double mean_grad_norm = 0.0;  // (1/N) sum_i ||grad V(x_i)||
    double elapsed_ms = 0.0;
};

}  // namespace svgd
