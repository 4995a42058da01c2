#include "svgd/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "svgd/csv_io.hpp"
#include "svgd/errors.hpp"
#include "svgd/parallel.hpp"
#include "svgd/svgd.hpp"

namespace svgd {

namespace {

std::function<double()> make_clock(const RunOptions& options) {
    if (options.now_ms) return options.now_ms;
    return [] {
        const auto now = std::chrono::steady_clock::now().time_since_epoch();
        return std::chrono::duration<double, std::milli>(now).count();
    };
}

std::string snapshot_name(int iter) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "particles_%06d.csv", iter);
    return buf;
}

void write_report_json(const std::string& path, const char* algorithm,
                       const RunConfig& config, const RunResult& result) {
    nlohmann::json doc;
    double total_ms = 0.0;
    for (const TraceRecord& rec : result.trace) total_ms += rec.elapsed_ms;
    doc["run"] = {
        {"algorithm", algorithm},
        {"status", result.status == RunStatus::completed ? "completed"
                                                         : "rejected_step"},
        {"steps_requested", config.steps},
        {"steps_completed", result.steps_completed},
        {"n", config.particles.n},
        {"d", config.particles.d},
        {"seed", config.particles.seed},
        {"initial_ksd2", result.trace.front().ksd2},
        {"final_ksd2", result.trace.back().ksd2},
        {"total_elapsed_ms", total_ms},
    };
    if (result.theory) {
        const TheoryReport& t = *result.theory;
        doc["theory"] = {
            {"B", t.b},
            {"L0", t.l0},
            {"L1", t.l1},
            {"Q1", t.q1},
            {"kl0_bound", t.kl0_bound},
            {"wp_to_origin", t.wp_to_origin},
            {"c0", t.c0},
            {"gamma_max", t.gamma_max},
            {"iteration_budget", t.iteration_budget},
            {"epsilon", t.epsilon},
            {"alpha", t.alpha},
            {"step_system_ok", t.step_system_ok},
        };
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << doc.dump(2) << "\n";
}

}  // namespace

TheoryReport build_theory_report(const RunConfig& config, const Target& target,
                                 const KernelSpec& kernel) {
    if (!config.tp_profile) {
        throw ConfigError("tp_profile: section required for theory constants");
    }
    TheoryReport report;
    report.b = kernel_bound(kernel);
    const auto [l0, l1] = smoothness_constants(target);
    report.l0 = l0;
    report.l1 = l1;
    report.q1 = growth_poly_at_one(target);
    report.kl0_bound = kl0_upper_bound(target, config.particles.d);
    report.wp_to_origin = pth_moment_root(target);
    report.epsilon = config.step_policy.epsilon;
    report.alpha = config.step_policy.alpha;

    TpProfile profile;
    profile.form = config.tp_profile->form;
    profile.p_order = target.p_order;
    profile.wp_to_origin = report.wp_to_origin;
    if (profile.form == TpForm::talagrand) {
        profile.lambda = *config.tp_profile->lambda_t;
    } else if (config.tp_profile->lambda_bv) {
        profile.lambda = *config.tp_profile->lambda_bv;
    } else {
        profile.lambda = lambda_bv(target);
    }

    report.c0 = c0(target, profile, report.kl0_bound);
    report.gamma_max =
        theory_step_size(report.b, l0, l1, report.c0, report.alpha);
    report.step_system_ok = step_size_system_holds(report.gamma_max, report.b,
                                                   l0, l1, report.c0,
                                                   report.alpha);
    report.iteration_budget =
        iteration_budget(report.kl0_bound, report.gamma_max, report.epsilon);
    return report;
}

RunResult run_svgd(const RunConfig& config, const RunOptions& options) {
    const Target target = build_target(config);
    KernelSpec spec = build_kernel(config);
    const int threads = resolve_threads(options.threads);
    const auto clock = make_clock(options);

    RunResult result;
    result.ensemble = init_standard_normal(config.particles.n, config.particles.d,
                                           config.particles.seed);
    if (config.kernel.median_heuristic) {
        spec.bandwidth = median_heuristic_bandwidth(result.ensemble.positions);
    }
    result.kernel = spec;

    if (config.step_policy.mode == StepMode::theory || config.tp_profile) {
        result.theory = build_theory_report(config, target, spec);
    }

    const double b = kernel_bound(spec);
    const double l1 = smoothness_constants(target).second;
    StepPolicy policy;
    policy.mode = config.step_policy.mode;
    policy.gamma = config.step_policy.gamma;
    policy.alpha = config.step_policy.alpha;
    if (policy.mode == StepMode::theory) {
        policy.computed_gamma = result.theory->gamma_max;
    }

    const std::filesystem::path out_dir(config.output_dir);
    if (options.write_outputs) std::filesystem::create_directories(out_dir);

    result.status = RunStatus::completed;
    result.steps_completed = 0;
    for (int iter = 0; iter <= config.steps; ++iter) {
        const double t0 = clock();
        const bool stepping = iter < config.steps;
        const IterationStats stats =
            iteration_stats(result.ensemble, target, spec, stepping, threads);

        double gamma = policy.mode == StepMode::theory ? policy.computed_gamma
                                                       : policy.gamma;
        if (policy.mode == StepMode::adaptive) {
            const double g_norm = std::sqrt(std::max(stats.ksd2, 0.0));
            gamma = adaptive_step_size(g_norm, b, l1, policy.alpha, policy.gamma);
        }

        Mat updated;
        bool finite = true;
        if (stepping) {
            updated = result.ensemble.positions - gamma * stats.direction;
            finite = updated.allFinite();
        }
        const double t1 = clock();
        result.trace.push_back(
            {iter, gamma, stats.ksd2, stats.mean_grad_norm, t1 - t0});

        if (!stepping) break;
        if (!finite) {
            result.status = RunStatus::rejected_step;
            break;
        }
        result.ensemble.positions = std::move(updated);
        result.steps_completed = iter + 1;
        if (options.write_outputs && config.snapshot_every > 0 &&
            (iter + 1) % config.snapshot_every == 0) {
            write_matrix_csv((out_dir / snapshot_name(iter + 1)).string(),
                             result.ensemble.positions);
        }
    }

    if (options.write_outputs) {
        write_trace_csv((out_dir / "trace.csv").string(), result.trace);
        write_matrix_csv(
            (out_dir / snapshot_name(result.steps_completed)).string(),
            result.ensemble.positions);
        write_report_json((out_dir / "report.json").string(), "svgd", config,
                          result);
    }
    return result;
}

RunResult run_lmc(const RunConfig& config, const RunOptions& options) {
    if (config.step_policy.mode != StepMode::fixed) {
        throw ConfigError("step_policy.mode: baseline-lmc requires fixed");
    }
    const Target target = build_target(config);
    KernelSpec spec = build_kernel(config);
    const int threads = resolve_threads(options.threads);
    const auto clock = make_clock(options);
    const double gamma = config.step_policy.gamma;

    LmcState state = init_lmc(config.particles.n, config.particles.d,
                              config.particles.seed);
    if (config.kernel.median_heuristic) {
        spec.bandwidth = median_heuristic_bandwidth(state.positions);
    }

    RunResult result;
    result.kernel = spec;
    result.ensemble.seed = state.seed;

    const std::filesystem::path out_dir(config.output_dir);
    if (options.write_outputs) std::filesystem::create_directories(out_dir);

    result.status = RunStatus::completed;
    result.steps_completed = 0;
    Ensemble view;
    view.seed = state.seed;
    for (int iter = 0; iter <= config.steps; ++iter) {
        const double t0 = clock();
        view.positions = state.positions;
        const IterationStats stats =
            iteration_stats(view, target, spec, false, threads);

        bool finite = true;
        LmcState next;
        const bool stepping = iter < config.steps;
        if (stepping) {
            finite = lmc_step(state, target, gamma, next, threads);
        }
        const double t1 = clock();
        result.trace.push_back(
            {iter, gamma, stats.ksd2, stats.mean_grad_norm, t1 - t0});

        if (!stepping) break;
        if (!finite) {
            result.status = RunStatus::rejected_step;
            break;
        }
        state = std::move(next);
        result.steps_completed = iter + 1;
        if (options.write_outputs && config.snapshot_every > 0 &&
            (iter + 1) % config.snapshot_every == 0) {
            write_matrix_csv((out_dir / snapshot_name(iter + 1)).string(),
                             state.positions);
        }
    }

    result.ensemble.positions = state.positions;
    if (options.write_outputs) {
        write_trace_csv((out_dir / "trace.csv").string(), result.trace);
        write_matrix_csv(
            (out_dir / snapshot_name(result.steps_completed)).string(),
            result.ensemble.positions);
        write_report_json((out_dir / "report.json").string(), "lmc", config,
                          result);
    }
    return result;
}

}  // namespace svgd
