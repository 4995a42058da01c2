#include "svgd/svgd.hpp"

#include <cmath>
#include <stdexcept>

#include "svgd/errors.hpp"
#include "svgd/parallel.hpp"
#include "svgd/rng.hpp"

namespace svgd {

namespace {

void check_shapes(const Ensemble& ens, const KernelSpec& spec) {
    if (ens.n() < 1) throw std::invalid_argument("ensemble: N must be >= 1");
    if (ens.dim() != spec.dim) {
        throw std::invalid_argument("ensemble dimension must match spec.dim");
    }
}

}  // namespace

Ensemble init_standard_normal(int n, int dim, std::uint64_t seed) {
    if (n < 1 || dim < 1) {
        throw std::invalid_argument("ensemble: need n >= 1 and dim >= 1");
    }
    Ensemble ens;
    ens.seed = seed;
    ens.positions.resize(n, dim);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < dim; ++k) {
            ens.positions(i, k) = normal_draw(seed, RngStream::particle_init, 0,
                                              static_cast<std::uint64_t>(i),
                                              static_cast<std::uint64_t>(k));
        }
    }
    return ens;
}

Vec direction(const Ensemble& ens, const Target& target, const KernelSpec& spec,
              const Vec& y) {
    check_shapes(ens, spec);
    if (y.size() != spec.dim) {
        throw std::invalid_argument("direction: y dimension mismatch");
    }
    const int n = ens.n();
    Vec acc = Vec::Zero(spec.dim);
    for (int j = 0; j < n; ++j) {
        const Vec xj = ens.positions.row(j);
        const Vec diff = xj - y;
        const RadialDerivs rd = radial_derivs(spec, diff.squaredNorm());
        // grad1(x_j, y) = 2 phi'(s) (x_j - y)
        acc += grad_potential(target, xj) * rd.phi - 2.0 * rd.dphi * diff;
    }
    return acc / static_cast<double>(n);
}

double stein_kernel(const Target& target, const KernelSpec& spec, const Vec& x,
                    const Vec& y) {
    const Vec gx = grad_potential(target, x);
    const Vec gy = grad_potential(target, y);
    const Vec diff = x - y;
    const double s = diff.squaredNorm();
    if (x.size() != spec.dim || y.size() != spec.dim) {
        throw std::invalid_argument("stein_kernel: dimension mismatch");
    }
    const RadialDerivs rd = radial_derivs(spec, s);
    return gx.dot(gy) * rd.phi + 2.0 * rd.dphi * (gx - gy).dot(diff) -
           4.0 * rd.ddphi * s - 2.0 * spec.dim * rd.dphi;
}

IterationStats iteration_stats(const Ensemble& ens, const Target& target,
                               const KernelSpec& spec, bool want_direction,
                               int threads) {
    check_shapes(ens, spec);
    const int n = ens.n();
    const int d = ens.dim();
    const int workers = resolve_threads(threads);

    Mat grads(n, d);
    Vec grad_norms(n);
    const Mat& pos = ens.positions;
    parallel_for(n, workers, [&](int begin, int end) {
        for (int j = begin; j < end; ++j) {
            const Vec g = grad_potential(target, pos.row(j));
            grads.row(j) = g;
            grad_norms[j] = g.norm();
        }
    });

    Vec row_u(n);
    IterationStats stats;
    if (want_direction) stats.direction.resize(n, d);

    parallel_for(n, workers, [&](int begin, int end) {
        Vec acc(d);
        for (int i = begin; i < end; ++i) {
            double usum = 0.0;
            if (want_direction) acc.setZero();
            for (int j = 0; j < n; ++j) {
                double s = 0.0, cross = 0.0, gg = 0.0;
                for (int k = 0; k < d; ++k) {
                    const double r = pos(i, k) - pos(j, k);
                    s += r * r;
                    cross += (grads(i, k) - grads(j, k)) * r;
                    gg += grads(i, k) * grads(j, k);
                }
                const RadialDerivs rd = radial_derivs(spec, s);
                usum += gg * rd.phi + 2.0 * rd.dphi * cross -
                        4.0 * rd.ddphi * s - 2.0 * d * rd.dphi;
                if (want_direction) {
                    for (int k = 0; k < d; ++k) {
                        acc[k] += grads(j, k) * rd.phi -
                                  2.0 * rd.dphi * (pos(j, k) - pos(i, k));
                    }
                }
            }
            row_u[i] = usum;
            if (want_direction) {
                stats.direction.row(i) = acc / static_cast<double>(n);
            }
        }
    });

    // Fixed-order reductions keep results independent of the worker count.
    double total_u = 0.0, total_g = 0.0;
    for (int i = 0; i < n; ++i) total_u += row_u[i];
    for (int i = 0; i < n; ++i) total_g += grad_norms[i];
    stats.ksd2 = total_u / (static_cast<double>(n) * static_cast<double>(n));
    stats.mean_grad_norm = total_g / static_cast<double>(n);
    return stats;
}

double ksd_squared(const Ensemble& ens, const Target& target,
                   const KernelSpec& spec, int threads) {
    return iteration_stats(ens, target, spec, false, threads).ksd2;
}

double direction_norm_squared(const Ensemble& ens, const Target& target,
                              const KernelSpec& spec) {
    check_shapes(ens, spec);
    const int n = ens.n();
    std::vector<Vec> grads(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        grads[static_cast<size_t>(j)] = grad_potential(target, ens.positions.row(j));
    }
    double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
    for (int i = 0; i < n; ++i) {
        const Vec xi = ens.positions.row(i);
        const Vec& gi = grads[static_cast<size_t>(i)];
        for (int j = 0; j < n; ++j) {
            const Vec xj = ens.positions.row(j);
            const Vec& gj = grads[static_cast<size_t>(j)];
            s1 += gi.dot(gj) * eval(spec, xi, xj);
            s2 += gi.dot(grad1(spec, xj, xi));
            s3 += gj.dot(grad1(spec, xi, xj));
            s4 += trace_mixed_second(spec, xi, xj);
        }
    }
    return (s1 - s2 - s3 + s4) / (static_cast<double>(n) * static_cast<double>(n));
}

bool svgd_step(const Ensemble& ens, const Target& target, const KernelSpec& spec,
               double gamma, Ensemble& out, int threads) {
    if (!(gamma > 0.0)) throw std::invalid_argument("svgd_step: gamma must be > 0");
    const IterationStats stats = iteration_stats(ens, target, spec, true, threads);
    out.seed = ens.seed;
    out.positions = ens.positions - gamma * stats.direction;
    return out.positions.allFinite();
}

}  // namespace svgd
