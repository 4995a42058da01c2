#include "svgd/targets.hpp"

#include <cmath>
#include <numbers>

#include "svgd/errors.hpp"

namespace svgd {

namespace {

constexpr double kPi = std::numbers::pi;

void check_input(const Target& target, const Vec& x) {
    if (x.size() != target.dim) {
        throw std::invalid_argument("target: input dimension mismatch");
    }
    if (!x.allFinite()) {
        throw std::invalid_argument("target: non-finite input");
    }
}

double opnorm_sym(const Mat& m) {
    Eigen::SelfAdjointEigenSolver<Mat> solver(m);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

Target Target::gaussian(int dim, double sigma, Vec mean) {
    if (dim < 1) throw ConfigError("target: dim must be >= 1");
    if (!(sigma > 0.0)) throw ConfigError("target.sigma: must be > 0");
    Target t;
    t.family = TargetFamily::gaussian;
    t.dim = dim;
    t.sigma = sigma;
    t.exponent = 2.0;
    t.p_order = 2.0;
    t.mean = mean.size() == 0 ? Vec::Zero(dim) : std::move(mean);
    if (t.mean.size() != dim) throw ConfigError("target.mean: wrong length");
    const double s2 = sigma * sigma;
    t.l0 = 1.0 / s2;
    t.l1 = 0.0;
    t.q_coeffs = {{1.0 / s2, 1.0}};
    const double a_norm = t.mean.norm();
    if (a_norm > 0.0) t.q_coeffs.push_back({a_norm / s2, 0.0});
    t.v_at_zero = t.mean.squaredNorm() / (2.0 * s2) +
                  0.5 * dim * std::log(2.0 * kPi * s2);
    return t;
}

Target Target::generalized_gaussian(int dim, double p, double sigma, Vec mean) {
    if (dim < 1) throw ConfigError("target: dim must be >= 1");
    if (!(p >= 2.0)) throw ConfigError("target.p: must be >= 2");
    if (!(sigma > 0.0)) throw ConfigError("target.sigma: must be > 0");
    Target t;
    t.family = TargetFamily::generalized_gaussian;
    t.dim = dim;
    t.exponent = p;
    t.sigma = sigma;
    t.p_order = p;
    t.mean = mean.size() == 0 ? Vec::Zero(dim) : std::move(mean);
    if (t.mean.size() != dim) throw ConfigError("target.mean: wrong length");
    const double scale = 2.0 * std::pow(sigma, p);
    // ||Hess||_op = (p(p-1)/(2 sigma^p)) r^{p-2} with r = ||x-a||; split at
    // r = 1 certifies (L0, L1) = (p(p-1)/(2 sigma^p), p-1).
    t.l0 = p * (p - 1.0) / scale;
    t.l1 = p - 1.0;
    const double a_norm = t.mean.norm();
    if (a_norm > 0.0) {
        // ||grad V|| = (p/(2 sigma^p)) ||x-a||^{p-1} and
        // (u+v)^{p-1} <= 2^{p-2} (u^{p-1} + v^{p-1}) for p >= 2.
        const double c1 = p * std::pow(2.0, p - 2.0) / scale;
        t.q_coeffs = {{c1, p - 1.0}, {c1 * std::pow(a_norm, p - 1.0), 0.0}};
    } else {
        t.q_coeffs = {{p / scale, p - 1.0}};
    }
    t.v_at_zero = std::pow(a_norm, p) / scale;
    return t;
}

Target Target::bayesian_lasso(Mat a, Vec b, double tau, double q) {
    if (a.rows() < 1 || a.cols() < 1) throw ConfigError("target.A_csv: empty matrix");
    if (b.size() != a.rows()) {
        throw ConfigError("target.b_csv: length must equal the row count of A");
    }
    if (!(tau > 0.0)) throw ConfigError("target.tau: must be > 0");
    if (!(q >= 2.0)) throw ConfigError("target.q: must be >= 2");
    Target t;
    t.family = TargetFamily::bayesian_lasso;
    t.dim = static_cast<int>(a.cols());
    t.design = std::move(a);
    t.labels = std::move(b);
    t.tau = tau;
    t.lasso_q = q;
    t.p_order = q;
    const double ata_op = opnorm_sym(t.design.transpose() * t.design);
    t.l0 = 2.0 * ata_op + tau * q * (q - 1.0);
    t.l1 = q - 1.0;
    t.q_coeffs = {{tau * q, q - 1.0}};
    if (ata_op > 0.0) t.q_coeffs.push_back({2.0 * ata_op, 1.0});
    const double atb_norm = (t.design.transpose() * t.labels).norm();
    if (atb_norm > 0.0) t.q_coeffs.push_back({2.0 * atb_norm, 0.0});
    t.v_at_zero = t.labels.squaredNorm();
    return t;
}

double potential(const Target& target, const Vec& x) {
    check_input(target, x);
    switch (target.family) {
        case TargetFamily::gaussian: {
            const double s2 = target.sigma * target.sigma;
            return (x - target.mean).squaredNorm() / (2.0 * s2) +
                   0.5 * target.dim * std::log(2.0 * kPi * s2);
        }
        case TargetFamily::generalized_gaussian: {
            const double r2 = (x - target.mean).squaredNorm();
            return std::pow(r2, target.exponent / 2.0) /
                   (2.0 * std::pow(target.sigma, target.exponent));
        }
        case TargetFamily::bayesian_lasso: {
            const double fit = (target.design * x - target.labels).squaredNorm();
            double penalty = 0.0;
            for (int i = 0; i < x.size(); ++i) {
                penalty += std::pow(std::abs(x[i]), target.lasso_q);
            }
            return fit + target.tau * penalty;
        }
    }
    return 0.0;
}

Vec grad_potential(const Target& target, const Vec& x) {
    check_input(target, x);
    switch (target.family) {
        case TargetFamily::gaussian:
            return (x - target.mean) / (target.sigma * target.sigma);
        case TargetFamily::generalized_gaussian: {
            const Vec diff = x - target.mean;
            const double r2 = diff.squaredNorm();
            const double p = target.exponent;
            // p >= 2, so pow(0, (p-2)/2) is the correct limit (1 at p = 2).
            const double radial = std::pow(r2, (p - 2.0) / 2.0);
            return (p / (2.0 * std::pow(target.sigma, p))) * radial * diff;
        }
        case TargetFamily::bayesian_lasso: {
            Vec g = 2.0 * target.design.transpose() *
                    (target.design * x - target.labels);
            const double q = target.lasso_q;
            for (int i = 0; i < x.size(); ++i) {
                const double m = std::abs(x[i]);
                g[i] += target.tau * q * std::pow(m, q - 1.0) *
                        (x[i] > 0.0 ? 1.0 : (x[i] < 0.0 ? -1.0 : 0.0));
            }
            return g;
        }
    }
    return Vec::Zero(target.dim);
}

std::pair<double, double> smoothness_constants(const Target& target) {
    return {target.l0, target.l1};
}

double growth_poly(const Target& target, double r) {
    if (r < 0.0) throw std::invalid_argument("growth_poly: r must be >= 0");
    double q = 0.0;
    for (const QTerm& term : target.q_coeffs) {
        q += term.coeff * std::pow(r, term.exponent);
    }
    return q;
}

double growth_poly_at_one(const Target& target) {
    double q = 0.0;
    for (const QTerm& term : target.q_coeffs) q += term.coeff;
    return q;
}

double growth_top_exponent(const Target& target) {
    double top = 0.0;
    for (const QTerm& term : target.q_coeffs) top = std::max(top, term.exponent);
    return top;
}

double pth_moment_root(const Target& target) {
    if (target.wp_override) return *target.wp_override;
    switch (target.family) {
        case TargetFamily::gaussian:
            // E ||X||^2 = d sigma^2 + ||a||^2 for N(a, sigma^2 I).
            return std::sqrt(target.dim * target.sigma * target.sigma +
                             target.mean.squaredNorm());
        case TargetFamily::generalized_gaussian: {
            if (target.mean.norm() > 0.0) break;
            // E ||X||^p = 2 sigma^p d / p via the Gamma-function identity.
            const double p = target.exponent;
            const double moment =
                2.0 * std::pow(target.sigma, p) * target.dim / p;
            return std::pow(moment, 1.0 / p);
        }
        case TargetFamily::bayesian_lasso:
            break;
    }
    throw ConfigError(
        "target.wp_override: required, no closed-form p-th moment for this "
        "target");
}

}  // namespace svgd
