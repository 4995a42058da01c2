#pragma once

#include <Eigen/Dense>

namespace svgd {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class KernelFamily { inverse_multiquadric, gaussian_rbf };

// Translation-invariant RKHS kernel with its certified sup bound B, where
// B >= sup_x k(x,x)^{1/2} and B >= sup_x (sum_i d^2k/dx_i dy_i (x,x))^{1/2}.
//
// Conventions: IMQ k(x,y) = (c^2 + ||x-y||^2)^beta with c > 0, beta in (-1,0);
// RBF k(x,y) = exp(-||x-y||^2 / (2h)) with bandwidth h > 0.
struct KernelSpec {
    KernelFamily family = KernelFamily::gaussian_rbf;
    double c = 1.0;          // IMQ offset
    double beta = -0.5;      // IMQ exponent
    double bandwidth = 1.0;  // RBF h
    int dim = 1;

    static KernelSpec imq(double c, double beta, int dim);
    static KernelSpec rbf(double bandwidth, int dim);
};

// Throws ConfigError on parameter-range violations.
void validate(const KernelSpec& spec);

// phi(s), phi'(s), phi''(s) for k(x,y) = phi(||x-y||^2). All kernel
// derivatives reduce to these:
//   grad1(x,y)            = 2 phi'(s) (x - y)
//   sum_i d2k/dx_i dy_i   = -4 phi''(s) s - 2 d phi'(s)
struct RadialDerivs {
    double phi;
    double dphi;
    double ddphi;
};

RadialDerivs radial_derivs(const KernelSpec& spec, double squared_dist);

double eval(const KernelSpec& spec, const Vec& x, const Vec& y);
Vec grad1(const KernelSpec& spec, const Vec& x, const Vec& y);
double trace_mixed_second(const KernelSpec& spec, const Vec& x, const Vec& y);
double kernel_bound(const KernelSpec& spec);

// Bandwidth h such that exp(-s/(2h)) = exp(-s log(n+1) / med), med = median
// of pairwise squared distances. Positions are one particle per row.
double median_heuristic_bandwidth(const Mat& positions);

}  // namespace svgd
