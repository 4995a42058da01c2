// Acceptance suite: one check per criterion, one PASS/FAIL line each,
// nonzero exit if anything fails. Run via ctest or directly.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "svgd/config.hpp"
#include "svgd/csv_io.hpp"
#include "svgd/lmc.hpp"
#include "svgd/run.hpp"
#include "svgd/svgd.hpp"
#include "svgd/theory.hpp"

using namespace svgd;

namespace {

struct Criterion {
    std::string name;
    double limit_seconds;  // 0 = no runtime budget
    std::function<bool(std::string&)> body;
};

Ensemble random_ensemble(std::mt19937_64& rng, int n, int d, double scale) {
    std::normal_distribution<double> normal(0.0, scale);
    Ensemble ens;
    ens.positions.resize(n, d);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < d; ++k) ens.positions(i, k) = normal(rng);
    }
    return ens;
}

Vec random_vec(std::mt19937_64& rng, int d, double scale) {
    std::normal_distribution<double> normal(0.0, scale);
    Vec v(d);
    for (int k = 0; k < d; ++k) v[k] = normal(rng);
    return v;
}

Target random_lasso(std::mt19937_64& rng, int d) {
    std::normal_distribution<double> normal(0.0, 1.0);
    const int m = d + 2;
    Mat a(m, d);
    Vec b(m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < d; ++j) a(i, j) = normal(rng);
        b[i] = normal(rng);
    }
    return Target::bayesian_lasso(std::move(a), std::move(b),
                                  0.5 + 1.5 * (rng() % 1000) / 1000.0,
                                  rng() % 2 == 0 ? 2.0 : 3.0);
}

RunConfig gg4_adaptive_config() {
    // Bandwidth 0.1 keeps the adaptive run in its descent phase for the whole
    // 500 iterations instead of bouncing on the equilibrium plateau.
    return parse_config(R"({
      "target": {"family": "generalized_gaussian", "p": 4},
      "kernel": {"family": "gaussian_rbf", "bandwidth": 0.1},
      "particles": {"n": 200, "d": 2, "seed": 314159},
      "steps": 500,
      "step_policy": {"mode": "adaptive"},
      "output_dir": "unused"
    })");
}

// 1. ksd_squared vs direction_norm_squared on random instances.
bool check_oracle_equivalence(std::string& detail) {
    std::mt19937_64 rng(1001);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int d = 1 + static_cast<int>(rng() % 5);
        const int n = 1 + static_cast<int>(rng() % 20);
        Target target;
        switch (trial % 3) {
            case 0: target = Target::gaussian(d, 0.5 + (rng() % 100) / 50.0); break;
            case 1:
                target = Target::generalized_gaussian(d, 2.0 + (rng() % 3));
                break;
            default: target = random_lasso(rng, d); break;
        }
        const KernelSpec spec = trial % 2 == 0 ? KernelSpec::rbf(0.9, d)
                                               : KernelSpec::imq(1.0, -0.5, d);
        const Ensemble ens = random_ensemble(rng, n, d, 1.5);
        const double a = ksd_squared(ens, target, spec);
        const double b = direction_norm_squared(ens, target, spec);
        const double rel =
            std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
        worst = std::max(worst, rel);
    }
    std::ostringstream out;
    out << "worst relative gap " << worst;
    detail = out.str();
    return worst <= 1e-10;
}

// 2. sqrt(ksd2) <= B ((1/N) sum ||grad V|| + 1) along a full run.
bool check_norm_bound_along_run(std::string& detail) {
    const RunConfig config = gg4_adaptive_config();
    RunOptions options;
    options.write_outputs = false;
    const RunResult result = run_svgd(config, options);
    if (result.status != RunStatus::completed) {
        detail = "run did not complete";
        return false;
    }
    const double b = kernel_bound(result.kernel);
    double worst = -1e300;
    for (const TraceRecord& rec : result.trace) {
        const double lhs = std::sqrt(std::max(rec.ksd2, 0.0));
        worst = std::max(worst, lhs - b * (rec.mean_grad_norm + 1.0));
    }
    std::ostringstream out;
    out << "worst slack " << worst << " over " << result.trace.size()
        << " iterations";
    detail = out.str();
    return worst <= 1e-8;
}

// 3. ||J g_hat||_HS <= B ||g_hat||_H and ||g_hat(x)|| <= B ||g_hat||_H.
bool check_jacobian_and_pointwise(std::string& detail) {
    std::mt19937_64 rng(1003);
    const int d = 3;
    const Target gg4 = Target::generalized_gaussian(d, 4.0);
    const KernelSpec spec = KernelSpec::rbf(1.0, d);
    const Ensemble ens = random_ensemble(rng, 40, d, 1.5);
    const double b = kernel_bound(spec);
    const double g_norm = std::sqrt(std::max(ksd_squared(ens, gg4, spec), 0.0));

    double worst_jac = -1e300, worst_point = -1e300;
    for (int trial = 0; trial < 1000; ++trial) {
        const Vec y = random_vec(rng, d, 2.0);
        worst_point =
            std::max(worst_point, direction(ens, gg4, spec, y).norm() - b * g_norm);
        Mat jac(d, d);
        for (int l = 0; l < d; ++l) {
            Vec hi = y, lo = y;
            hi[l] += 1e-5;
            lo[l] -= 1e-5;
            jac.col(l) = (direction(ens, gg4, spec, hi) -
                          direction(ens, gg4, spec, lo)) /
                         2e-5;
        }
        worst_jac = std::max(worst_jac, jac.norm() - b * g_norm);
    }
    std::ostringstream out;
    out << "worst slack: jacobian " << worst_jac << ", pointwise " << worst_point;
    detail = out.str();
    return worst_jac <= 1e-4 && worst_point <= 1e-8;
}

// 4. Gradient-growth bound on random segments, zero violations.
bool check_grad_growth(std::string& detail) {
    std::mt19937_64 rng(1004);
    std::normal_distribution<double> normal(0.0, 1.5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int violations = 0;
    double worst = -1e300;
    for (const double p : {2.0, 4.0}) {
        const Target target = Target::generalized_gaussian(2, p);
        const auto [l0, l1] = smoothness_constants(target);
        for (int trial = 0; trial < 10000; ++trial) {
            Vec x(2), dir(2);
            x << normal(rng), normal(rng);
            dir << normal(rng), normal(rng);
            if (dir.norm() == 0.0) continue;
            const double delta = 0.01 + 2.5 * unit(rng);
            const Vec xp = x + delta * dir / dir.norm();
            const double bound =
                grad_growth_bound(l0, l1, grad_potential(target, x).norm(), delta);
            const double slack = grad_potential(target, xp).norm() - bound;
            worst = std::max(worst, slack);
            if (slack > 0.0) ++violations;
        }
    }
    std::ostringstream out;
    out << violations << " violations, worst slack " << worst;
    detail = out.str();
    return violations == 0;
}

// 5. Gaussian moment bound vs Monte Carlo, with the tight closed-form cases.
bool check_gaussian_moment(std::string& detail) {
    std::mt19937_64 rng(1005);
    std::normal_distribution<double> normal(0.0, 1.0);
    bool ok = true;
    std::ostringstream out;
    for (const int d : {1, 2, 5}) {
        for (const int m : {2, 3, 4}) {
            const int samples = 1000000;
            double sum = 0.0, sum_sq = 0.0;
            for (int s = 0; s < samples; ++s) {
                double r2 = 0.0;
                for (int k = 0; k < d; ++k) {
                    const double v = normal(rng);
                    r2 += v * v;
                }
                const double value = std::pow(r2, m / 2.0);
                sum += value;
                sum_sq += value * value;
            }
            const double mc = sum / samples;
            const double se =
                std::sqrt(std::max(sum_sq / samples - mc * mc, 0.0) / samples);
            if (gaussian_moment_bound(d, m) < mc - 3.0 * se) {
                ok = false;
                out << "bound below MC at d=" << d << " m=" << m << "; ";
            }
        }
    }
    const struct {
        int d, m;
        double moment;
    } tight[] = {{1, 2, 1.0}, {1, 4, 3.0}, {2, 2, 2.0}};
    for (const auto& c : tight) {
        const double bound = gaussian_moment_bound(c.d, c.m);
        if (std::abs(bound - c.moment) > 1e-6 * c.moment) {
            ok = false;
            out << "not tight at d=" << c.d << " m=" << c.m << "; ";
        }
    }
    if (ok) out << "bound >= MC - 3SE on all 9 cells, tight cases exact";
    detail = out.str();
    return ok;
}

// 6. KL(mu_0 | pi) upper bound: exact for the standard normal, dominates a
// Monte-Carlo estimate for the generalized Gaussian p = 4.
bool check_kl0_bound(std::string& detail) {
    const int d = 2;
    const Target normal_target = Target::gaussian(d);
    const double bound_normal = kl0_upper_bound(normal_target, d);
    const double expected = d * std::sqrt(2.0 / std::numbers::pi);
    bool ok = std::abs(bound_normal - expected) <= 1e-9 && bound_normal >= 0.0;

    const Target gg4 = Target::generalized_gaussian(d, 4.0);
    std::mt19937_64 rng(1006);
    std::normal_distribution<double> normal(0.0, 1.0);
    const int samples = 1000000;
    double sum = 0.0, sum_sq = 0.0;
    for (int s = 0; s < samples; ++s) {
        Vec x(d);
        for (int k = 0; k < d; ++k) x[k] = normal(rng);
        const double log_mu0 =
            -0.5 * d * std::log(2.0 * std::numbers::pi) - 0.5 * x.squaredNorm();
        const double value = log_mu0 + potential(gg4, x);
        sum += value;
        sum_sq += value * value;
    }
    const double mc = sum / samples;
    const double se =
        std::sqrt(std::max(sum_sq / samples - mc * mc, 0.0) / samples);
    const double bound_gg4 = kl0_upper_bound(gg4, d);
    ok = ok && bound_gg4 >= mc - 3.0 * se;
    std::ostringstream out;
    out << "normal bound " << bound_normal << " (exact " << expected
        << "), gg4 bound " << bound_gg4 << " vs MC " << mc << " +/- " << se;
    detail = out.str();
    return ok;
}

// 7. Descent trend under the adaptive policy.
bool check_descent_trend(std::string& detail) {
    const RunConfig config = gg4_adaptive_config();
    RunOptions options;
    options.write_outputs = false;
    const RunResult result = run_svgd(config, options);
    if (result.status != RunStatus::completed) {
        detail = "run did not complete";
        return false;
    }
    const double initial = result.trace.front().ksd2;
    const double final_ksd2 = result.trace.back().ksd2;

    const int window = 50;
    const int records = static_cast<int>(result.trace.size());
    int checkpoints = 0, nonincreasing = 0;
    double prev_ma = 0.0;
    for (int t = window - 1; t < records; ++t) {
        double ma = 0.0;
        for (int i = t - window + 1; i <= t; ++i) {
            ma += result.trace[static_cast<size_t>(i)].ksd2;
        }
        ma /= window;
        if (t >= window) {
            ++checkpoints;
            if (ma <= prev_ma) ++nonincreasing;
        }
        prev_ma = ma;
    }
    const double fraction =
        checkpoints > 0 ? static_cast<double>(nonincreasing) / checkpoints : 0.0;
    std::ostringstream out;
    out << "ksd2 " << initial << " -> " << final_ksd2 << ", moving average "
        << "non-increasing at " << 100.0 * fraction << "% of checkpoints";
    detail = out.str();
    return final_ksd2 < 0.5 * initial && fraction >= 0.9;
}

// 8. Average-rate certificate with the theory step on the standard normal.
bool check_average_rate(std::string& detail) {
    const RunConfig config = parse_config(R"({
      "target": {"family": "gaussian"},
      "kernel": {"family": "gaussian_rbf", "bandwidth": 1.0},
      "particles": {"n": 500, "d": 2, "seed": 2718},
      "steps": 2000,
      "step_policy": {"mode": "theory", "epsilon": 0.05},
      "tp_profile": {"form": "talagrand", "lambda_t": 1.0},
      "output_dir": "unused"
    })");
    RunOptions options;
    options.write_outputs = false;
    const RunResult result = run_svgd(config, options);
    if (result.status != RunStatus::completed || !result.theory) {
        detail = "run did not complete";
        return false;
    }
    const int n = config.steps;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += result.trace[static_cast<size_t>(i)].ksd2;
    const double average = sum / n;
    const double gamma = result.theory->gamma_max;
    const double kl0 = result.theory->kl0_bound;
    const double limit = 2.0 * kl0 / (n * gamma) + 1e-6;
    std::ostringstream out;
    out << "average ksd2 " << average << " vs 2 kl0/(n gamma) = " << limit
        << " (gamma " << gamma << ")";
    detail = out.str();
    return average <= limit;
}

// 9. lambda_BV between the analytic lower bound and the s = 0.5 bracket.
bool check_lambda_bv(std::string& detail) {
    bool ok = true;
    std::ostringstream out;
    for (const auto& [d, p] : std::vector<std::pair<int, double>>{
             {1, 2.0}, {4, 2.0}, {2, 4.0}}) {
        const Target target = Target::generalized_gaussian(d, p);
        const double value = lambda_bv(target);
        const double lower = 2.0 * std::pow(1.5 + double(d) / p, 1.0 / p);
        const double at_half =
            2.0 * std::pow(3.0 + 2.0 * (double(d) / p) * std::log(2.0), 1.0 / p);
        out << "(d=" << d << ",p=" << p << ") " << value << " in [" << lower
            << ", " << at_half << "]; ";
        ok = ok && value >= lower - 1e-6 && value <= at_half;
    }
    detail = out.str();
    return ok;
}

// 10. LMC stationary variance at scale.
bool check_lmc_stationary(std::string& detail) {
    const double gamma = 0.1;
    const int chains = 10000, steps = 1000, d = 2;
    const Target normal_target = Target::gaussian(d);
    LmcState state = init_lmc(chains, d, 20240817);
    for (int step = 0; step < steps; ++step) {
        LmcState next;
        if (!lmc_step(state, normal_target, gamma, next)) {
            detail = "chain blew up";
            return false;
        }
        state = std::move(next);
    }
    const double target_var = 1.0 / (1.0 - gamma / 2.0);
    const double se_var = target_var * std::sqrt(2.0 / (chains - 1.0));
    bool ok = true;
    std::ostringstream out;
    for (int k = 0; k < d; ++k) {
        const double mean = state.positions.col(k).mean();
        const double var =
            (state.positions.col(k).array() - mean).square().sum() /
            (chains - 1);
        out << "coord " << k << " var " << var << "; ";
        ok = ok && std::abs(var - target_var) <= 3.0 * se_var;
    }
    out << "target " << target_var << " +/- " << 3.0 * se_var;
    detail = out.str();
    return ok;
}

// 11. Byte-identical traces across repeats and THREADS in {1, 4}.
bool check_determinism(std::string& detail) {
    RunConfig config = parse_config(R"({
      "target": {"family": "generalized_gaussian", "p": 4},
      "kernel": {"family": "gaussian_rbf", "bandwidth": 1.0},
      "particles": {"n": 40, "d": 2, "seed": 1234},
      "steps": 30,
      "step_policy": {"mode": "adaptive"},
      "output_dir": "unused"
    })");

    auto read_file = [](const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream buffer;
        buffer << in.rdbuf();
        return buffer.str();
    };

    // Pinned clock: the full file must be byte-identical across repeats and
    // worker counts, resolved through the THREADS environment variable.
    std::string reference;
    for (const char* threads : {"1", "4", "1"}) {
        setenv("THREADS", threads, 1);
        const auto dir = std::filesystem::temp_directory_path() /
                         (std::string("svgd_accept_det_") + threads);
        std::filesystem::remove_all(dir);
        config.output_dir = dir.string();
        RunOptions options;
        options.now_ms = [] { return 0.0; };
        run_svgd(config, options);
        const std::string bytes = read_file(dir / "trace.csv");
        if (reference.empty()) {
            reference = bytes;
        } else if (bytes != reference) {
            unsetenv("THREADS");
            detail = "pinned-clock traces differ across runs";
            return false;
        }
    }
    unsetenv("THREADS");

    // Real clock: every column except the timing one must still match.
    auto numeric_columns = [&](const std::filesystem::path& dir) {
        std::ostringstream out;
        for (const TraceRecord& rec : read_trace_csv((dir / "trace.csv").string())) {
            out << rec.iter << ',' << format_double(rec.gamma) << ','
                << format_double(rec.ksd2) << ','
                << format_double(rec.mean_grad_norm) << '\n';
        }
        return out.str();
    };
    std::string first;
    for (int repeat = 0; repeat < 2; ++repeat) {
        const auto dir = std::filesystem::temp_directory_path() /
                         ("svgd_accept_det_clock_" + std::to_string(repeat));
        std::filesystem::remove_all(dir);
        config.output_dir = dir.string();
        run_svgd(config, RunOptions{});
        const std::string columns = numeric_columns(dir);
        if (repeat == 0) {
            first = columns;
        } else if (columns != first) {
            detail = "numeric columns differ across wall-clock runs";
            return false;
        }
    }
    detail = "traces byte-identical across repeats and THREADS in {1,4}";
    return true;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"1. KSD oracle equivalence (1e-10 relative, 100 instances)", 5.0,
         check_oracle_equivalence},
        {"2. Direction-norm bound along a 500-step run", 30.0,
         check_norm_bound_along_run},
        {"3. Jacobian and pointwise RKHS bounds (1000 points)", 0.0,
         check_jacobian_and_pointwise},
        {"4. Gradient-growth bound on 10^4 segments, p in {2,4}", 0.0,
         check_grad_growth},
        {"5. Gaussian moment bound vs 10^6-sample MC", 0.0,
         check_gaussian_moment},
        {"6. KL(mu_0|pi) upper bound (exact + MC domination)", 0.0,
         check_kl0_bound},
        {"7. Descent trend under the adaptive policy", 60.0,
         check_descent_trend},
        {"8. Average-rate certificate with the theory step", 120.0,
         check_average_rate},
        {"9. lambda_BV bracket", 0.0, check_lambda_bv},
        {"10. LMC stationary variance (10^4 chains x 10^3 steps)", 60.0,
         check_lmc_stationary},
        {"11. Determinism across seeds, repeats and THREADS", 0.0,
         check_determinism},
    };

    int failures = 0;
    for (const Criterion& criterion : criteria) {
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool passed = false;
        try {
            passed = criterion.body(detail);
        } catch (const std::exception& err) {
            detail = std::string("exception: ") + err.what();
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          start)
                .count();
        if (criterion.limit_seconds > 0.0 && seconds > criterion.limit_seconds) {
            passed = false;
            detail += " [over runtime budget]";
        }
        std::printf("[%s] %s (%.2fs) %s\n", passed ? "PASS" : "FAIL",
                    criterion.name.c_str(), seconds, detail.c_str());
        if (!passed) ++failures;
    }
    if (failures > 0) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all %zu criteria passed\n", criteria.size());
    return 0;
}
