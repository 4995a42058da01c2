#pragma once

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "svgd/kernels.hpp"  // Vec/Mat aliases

namespace svgd {

enum class TargetFamily { gaussian, generalized_gaussian, bayesian_lasso };

// One monomial of the gradient-growth polynomial Q(r) = sum_i a_i r^{p_i}.
struct QTerm {
    double coeff;
    double exponent;
};

// Potential V = -log pi with the assumption metadata the step-size theory
// consumes: (L0, L1) smoothness constants, the growth polynomial Q with
// ||grad V(x)|| <= Q(||x||), the shared transport/growth order p, and V(0)
// under the Z = 1 normalisation.
//
// Families:
//   gaussian              V(x) = ||x-a||^2/(2 sigma^2) + (d/2) log(2 pi sigma^2)
//   generalized_gaussian  V(x) = ||x-a||^p/(2 sigma^p)
//   bayesian_lasso        V(x) = ||Ax-b||^2 + tau sum_i |x_i|^q
struct Target {
    TargetFamily family = TargetFamily::gaussian;
    int dim = 1;
    double p_order = 2.0;  // order shared by the T_p profile and Q

    // gaussian / generalized_gaussian
    double exponent = 2.0;  // generalized-Gaussian p (>= 2)
    double sigma = 1.0;
    Vec mean;

    // bayesian_lasso
    Mat design;   // A, m x d
    Vec labels;   // b, m
    double tau = 0.0;
    double lasso_q = 2.0;  // penalty exponent (>= 2)

    double l0 = 0.0;
    double l1 = 0.0;
    std::vector<QTerm> q_coeffs;
    double v_at_zero = 0.0;
    std::optional<double> wp_override;

    static Target gaussian(int dim, double sigma = 1.0, Vec mean = Vec());
    static Target generalized_gaussian(int dim, double p, double sigma = 1.0,
                                       Vec mean = Vec());
    static Target bayesian_lasso(Mat a, Vec b, double tau, double q);
};

double potential(const Target& target, const Vec& x);
Vec grad_potential(const Target& target, const Vec& x);

// The certified (L0, L1) pair:
//   gaussian              (1/sigma^2, 0)
//   generalized_gaussian  (p(p-1)/(2 sigma^p), p-1)       split at ||x-a|| = 1
//   bayesian_lasso        (2||A^T A||_op + tau q(q-1), q-1)  split at |x_i| = 1
std::pair<double, double> smoothness_constants(const Target& target);

double growth_poly(const Target& target, double r);
double growth_poly_at_one(const Target& target);  // Q(1)
double growth_top_exponent(const Target& target);

// W_p(pi, delta_0) = (E_pi ||X||^p)^{1/p} with p = p_order. Closed forms for
// the radial families; anything else needs wp_override.
double pth_moment_root(const Target& target);

}  // namespace svgd
