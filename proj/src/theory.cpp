#include "svgd/theory.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "svgd/errors.hpp"

namespace svgd {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;

}  // namespace

double j_eval(const TpProfile& profile, double r) {
    if (r < 0.0) throw std::invalid_argument("j_eval: r must be >= 0");
    if (profile.form == TpForm::talagrand) {
        return std::sqrt(2.0 * r / profile.lambda);
    }
    const double p = profile.p_order;
    return profile.lambda *
           (std::pow(r, 1.0 / p) + std::pow(r / 2.0, 1.0 / (2.0 * p)));
}

double kl0_upper_bound(const Target& target, int dim) {
    const double d = dim;
    const double q1 = growth_poly_at_one(target);
    const double p = growth_top_exponent(target);
    const double v0 = target.v_at_zero;
    return 0.5 * d * std::log(1.0 / (2.0 * kPi * kE)) + v0 +
           q1 * d * std::sqrt(2.0 / kPi) +
           q1 * std::pow(2.0 * d, (p + 1.0) / 2.0) * std::tgamma((p + 2.0) / 2.0) /
               (std::sqrt(kPi) * (p + 1.0));
}

double gaussian_moment_bound(int dim, int m) {
    if (m < 2) throw std::invalid_argument("gaussian_moment_bound: m must be >= 2");
    return std::pow(2.0 * dim, m / 2.0) * std::tgamma((m + 1.0) / 2.0) /
           std::sqrt(kPi);
}

double lambda_bv(const Target& target) {
    const bool radial = (target.family == TargetFamily::generalized_gaussian ||
                         target.family == TargetFamily::gaussian) &&
                        target.mean.norm() == 0.0;
    if (!radial) {
        throw ConfigError(
            "lambda_bv: closed-form moment integral needs a zero-mean radial "
            "target");
    }
    const double p = target.exponent;
    const double d = target.dim;
    const auto objective = [&](double s) {
        return 2.0 * std::pow(1.5 / s - (d / p) * std::log1p(-s) / s, 1.0 / p);
    };
    // The inner function is convex on (0, 1); golden-section to 1e-8.
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 1e-9, b = 1.0 - 1e-9;
    double c = b - gr * (b - a);
    double e = a + gr * (b - a);
    while (b - a > 1e-8) {
        if (objective(c) < objective(e)) {
            b = e;
        } else {
            a = c;
        }
        c = b - gr * (b - a);
        e = a + gr * (b - a);
    }
    return objective(0.5 * (a + b));
}

double c0(const Target& target, const TpProfile& profile, double kl0) {
    if (kl0 < 0.0) throw std::invalid_argument("c0: kl0 must be >= 0");
    return growth_poly(target, j_eval(profile, kl0) + profile.wp_to_origin);
}

double theory_step_size(double b, double l0, double l1, double c0_val,
                        double alpha) {
    const double denom =
        alpha * b * b *
        (alpha * alpha +
         (kE - 1.0) * (std::max({l0, l1, 1.0}) + std::max(l1, 1.0) * c0_val));
    return 0.99 * (alpha - 1.0) / denom;
}

bool step_size_system_holds(double gamma, double b, double l0, double l1,
                            double c0_val, double alpha) {
    const double min_factor = std::min(1.0, l1 > 0.0 ? 1.0 / l1 : 1.0);
    const double first =
        (alpha - 1.0) * min_factor / (alpha * b * b * (c0_val + 1.0));
    const double second =
        1.0 / (b * b * (alpha * alpha + (kE - 1.0) * (l0 + l1 * c0_val)));
    return gamma <= first && gamma <= second;
}

double adaptive_step_size(double g_norm_h, double b, double l1, double alpha,
                          double fallback) {
    if (!(g_norm_h > 0.0)) return fallback;
    const double min_factor = std::min(1.0, l1 > 0.0 ? 1.0 / l1 : 1.0);
    return (alpha - 1.0) * min_factor / (alpha * b * g_norm_h);
}

double grad_growth_bound(double l0, double l1, double grad_norm_at_x,
                         double delta) {
    if (delta < 0.0) throw std::invalid_argument("grad_growth_bound: delta >= 0");
    if (l1 == 0.0) return grad_norm_at_x + l0 * delta;
    const double growth = std::exp(delta * l1);
    return (l0 / l1) * (growth - 1.0) + grad_norm_at_x * growth;
}

std::int64_t iteration_budget(double kl0, double gamma, double epsilon) {
    if (kl0 < 0.0 || !(gamma > 0.0) || !(epsilon > 0.0)) {
        throw std::invalid_argument("iteration_budget: invalid arguments");
    }
    if (kl0 == 0.0) return 0;
    return static_cast<std::int64_t>(std::ceil(2.0 * kl0 / (gamma * epsilon)));
}

std::string format_report(const TheoryReport& report) {
    std::ostringstream out;
    out.precision(12);
    out << "B                = " << report.b << "\n"
        << "L0               = " << report.l0 << "\n"
        << "L1               = " << report.l1 << "\n"
        << "Q1               = " << report.q1 << "\n"
        << "kl0_bound        = " << report.kl0_bound << "\n"
        << "wp_to_origin     = " << report.wp_to_origin << "\n"
        << "c0               = " << report.c0 << "\n"
        << "gamma_max        = " << report.gamma_max << "\n"
        << "iteration_budget = " << report.iteration_budget << "\n"
        << "epsilon          = " << report.epsilon << "\n"
        << "alpha            = " << report.alpha << "\n"
        << "step_system_ok   = " << (report.step_system_ok ? "true" : "false")
        << "\n";
    return out.str();
}

}  // namespace svgd
