#include "svgd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "svgd/errors.hpp"

namespace svgd {

namespace {

void check_dims(const KernelSpec& spec, const Vec& x, const Vec& y) {
    if (x.size() != spec.dim || y.size() != spec.dim) {
        throw std::invalid_argument(
            "kernel arguments must match spec.dim = " + std::to_string(spec.dim));
    }
}

}  // namespace

KernelSpec KernelSpec::imq(double c, double beta, int dim) {
    KernelSpec spec;
    spec.family = KernelFamily::inverse_multiquadric;
    spec.c = c;
    spec.beta = beta;
    spec.dim = dim;
    validate(spec);
    return spec;
}

KernelSpec KernelSpec::rbf(double bandwidth, int dim) {
    KernelSpec spec;
    spec.family = KernelFamily::gaussian_rbf;
    spec.bandwidth = bandwidth;
    spec.dim = dim;
    validate(spec);
    return spec;
}

void validate(const KernelSpec& spec) {
    if (spec.dim < 1) throw ConfigError("kernel: dim must be >= 1");
    if (spec.family == KernelFamily::inverse_multiquadric) {
        if (!(spec.c > 0.0)) throw ConfigError("kernel.c: must be > 0");
        if (!(spec.beta > -1.0 && spec.beta < 0.0)) {
            throw ConfigError("kernel.beta: must lie in (-1, 0)");
        }
    } else {
        if (!(spec.bandwidth > 0.0)) {
            throw ConfigError("kernel.bandwidth: must be > 0");
        }
    }
}

RadialDerivs radial_derivs(const KernelSpec& spec, double s) {
    RadialDerivs out;
    if (spec.family == KernelFamily::gaussian_rbf) {
        const double h = spec.bandwidth;
        out.phi = std::exp(-s / (2.0 * h));
        out.dphi = -out.phi / (2.0 * h);
        out.ddphi = out.phi / (4.0 * h * h);
    } else {
        const double t = spec.c * spec.c + s;
        out.phi = std::pow(t, spec.beta);
        out.dphi = spec.beta * out.phi / t;
        out.ddphi = spec.beta * (spec.beta - 1.0) * out.phi / (t * t);
    }
    return out;
}

double eval(const KernelSpec& spec, const Vec& x, const Vec& y) {
    check_dims(spec, x, y);
    return radial_derivs(spec, (x - y).squaredNorm()).phi;
}

Vec grad1(const KernelSpec& spec, const Vec& x, const Vec& y) {
    check_dims(spec, x, y);
    const Vec diff = x - y;
    return 2.0 * radial_derivs(spec, diff.squaredNorm()).dphi * diff;
}

double trace_mixed_second(const KernelSpec& spec, const Vec& x, const Vec& y) {
    check_dims(spec, x, y);
    const double s = (x - y).squaredNorm();
    const RadialDerivs rd = radial_derivs(spec, s);
    return -4.0 * rd.ddphi * s - 2.0 * spec.dim * rd.dphi;
}

double kernel_bound(const KernelSpec& spec) {
    // Both suprema sit at x = y for these radial kernels.
    const double d = spec.dim;
    if (spec.family == KernelFamily::gaussian_rbf) {
        return std::max(1.0, std::sqrt(d / spec.bandwidth));
    }
    const double k0 = std::pow(spec.c, spec.beta);
    const double trace0 =
        -2.0 * spec.beta * d * std::pow(spec.c, 2.0 * spec.beta - 2.0);
    return std::max(k0, std::sqrt(trace0));
}

double median_heuristic_bandwidth(const Mat& positions) {
    const int n = static_cast<int>(positions.rows());
    if (n < 2) return 1.0;
    std::vector<double> sq;
    sq.reserve(static_cast<size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            sq.push_back((positions.row(i) - positions.row(j)).squaredNorm());
        }
    }
    const size_t mid = sq.size() / 2;
    std::nth_element(sq.begin(), sq.begin() + mid, sq.end());
    const double med = sq[mid];
    if (!(med > 0.0)) return 1.0;
    return med / (2.0 * std::log(static_cast<double>(n) + 1.0));
}

}  // namespace svgd
