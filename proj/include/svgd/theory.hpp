#pragma once

#include <cstdint>
#include <string>

#include "svgd/targets.hpp"

namespace svgd {

enum class StepMode { fixed, theory, adaptive };

struct StepPolicy {
    StepMode mode = StepMode::fixed;
    double gamma = 0.0;  // fixed step, or adaptive fallback at ||g|| = 0
    double alpha = 2.0;  // must be > 1
    double computed_gamma = 0.0;  // theory-mode output
};

enum class TpForm { talagrand, bolley_villani };

// Transport-inequality profile: W_p(mu, pi) <= J(KL(mu|pi)) with
//   talagrand        J(r) = sqrt(2 r / lambda)
//   bolley_villani   J(r) = lambda (r^{1/p} + (r/2)^{1/(2p)})
// plus the W_p(pi, delta_0) ingredient of the C0 constant.
struct TpProfile {
    TpForm form = TpForm::talagrand;
    double lambda = 1.0;
    double p_order = 2.0;
    double wp_to_origin = 0.0;
};

double j_eval(const TpProfile& profile, double r);

// Upper bound on KL(mu_0 | pi) for mu_0 = N(0, I_d):
//   (d/2) log(1/(2 pi e)) + V(0) + Q(1) d sqrt(2/pi)
//     + Q(1) (2d)^{(p+1)/2} Gamma((p+2)/2) / (sqrt(pi) (p+1)),
// with p the top exponent of Q.
double kl0_upper_bound(const Target& target, int dim);

// (2d)^{m/2} Gamma((m+1)/2) / sqrt(pi) >= E ||X||^m under N(0, I_d), m >= 2.
double gaussian_moment_bound(int dim, int m);

// 2 inf_{s in (0,1)} (3/(2s) - (d/p) log(1-s)/s)^{1/p} by golden-section
// search; valid for the radial family pi(x) = exp(-||x||^p) (generalized
// Gaussian, zero mean, 2 sigma^p normalised into the exponent).
double lambda_bv(const Target& target);

// C0 = Q(J(kl0) + W_p(pi, delta_0)).
double c0(const Target& target, const TpProfile& profile, double kl0);

// 0.99 (alpha-1) / (alpha B^2 (alpha^2 + (e-1)(max(L0,L1,1) + max(L1,1) C0))),
// strictly inside the admissible open interval.
double theory_step_size(double b, double l0, double l1, double c0_val,
                        double alpha);

// The two-case step-size system the single closed form must imply:
//   gamma <= (alpha-1) min(1, 1/L1) / (alpha B^2 (C0 + 1))
//   gamma <= 1 / (B^2 (alpha^2 + (e-1)(L0 + L1 C0)))
bool step_size_system_holds(double gamma, double b, double l0, double l1,
                            double c0_val, double alpha);

// (alpha-1) min(1, 1/L1) / (alpha B ||g||_H); `fallback` when ||g||_H = 0.
double adaptive_step_size(double g_norm_h, double b, double l1, double alpha,
                          double fallback);

// Bound on ||grad V(x+)|| over ||x+ - x|| <= delta:
//   (L0/L1)(exp(delta L1) - 1) + ||grad V(x)|| exp(delta L1),
// with the L1 -> 0 limit ||grad V(x)|| + L0 delta.
double grad_growth_bound(double l0, double l1, double grad_norm_at_x,
                         double delta);

// ceil(2 kl0 / (gamma epsilon)): iterations making the average Stein-Fisher
// error at most epsilon.
std::int64_t iteration_budget(double kl0, double gamma, double epsilon);

// Everything the `constants` subcommand prints.
struct TheoryReport {
    double b = 0.0;
    double l0 = 0.0;
    double l1 = 0.0;
    double q1 = 0.0;
    double kl0_bound = 0.0;
    double wp_to_origin = 0.0;
    double c0 = 0.0;
    double gamma_max = 0.0;
    std::int64_t iteration_budget = 0;
    double epsilon = 0.0;
    double alpha = 0.0;
    bool step_system_ok = false;
};

std::string format_report(const TheoryReport& report);

}  // namespace svgd
