#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "svgd/config.hpp"
#include "svgd/errors.hpp"
#include "svgd/run.hpp"
#include "svgd/theory.hpp"
#include "svgd/verify.hpp"

namespace {

int do_run(const std::string& config_path, bool lmc) {
    const svgd::RunConfig config = svgd::load_config(config_path);
    const svgd::RunResult result =
        lmc ? svgd::run_lmc(config) : svgd::run_svgd(config);
    std::cout << (lmc ? "lmc" : "svgd") << ": "
              << result.steps_completed << "/" << config.steps
              << " steps, initial ksd2 " << result.trace.front().ksd2
              << ", final ksd2 " << result.trace.back().ksd2 << "\n";
    if (result.status == svgd::RunStatus::rejected_step) {
        std::cerr << "error: non-finite update at step "
                  << result.steps_completed
                  << " (step size too large); partial trace written to "
                  << config.output_dir << "\n";
        return svgd::kExitBlowup;
    }
    return svgd::kExitOk;
}

int do_constants(const std::string& config_path, bool as_json) {
    const svgd::RunConfig config = svgd::load_config(config_path);
    const svgd::Target target = svgd::build_target(config);
    svgd::KernelSpec kernel = svgd::build_kernel(config);
    if (config.kernel.median_heuristic) {
        const svgd::Ensemble ens = svgd::init_standard_normal(
            config.particles.n, config.particles.d, config.particles.seed);
        kernel.bandwidth = svgd::median_heuristic_bandwidth(ens.positions);
    }
    const svgd::TheoryReport report =
        svgd::build_theory_report(config, target, kernel);
    if (as_json) {
        nlohmann::json doc = {
            {"B", report.b},
            {"L0", report.l0},
            {"L1", report.l1},
            {"Q1", report.q1},
            {"kl0_bound", report.kl0_bound},
            {"wp_to_origin", report.wp_to_origin},
            {"c0", report.c0},
            {"gamma_max", report.gamma_max},
            {"iteration_budget", report.iteration_budget},
            {"epsilon", report.epsilon},
            {"alpha", report.alpha},
            {"step_system_ok", report.step_system_ok},
        };
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << svgd::format_report(report);
    }
    if (!report.step_system_ok) {
        std::cerr << "warning: gamma_max violates the two-case step-size "
                     "system\n";
    }
    return svgd::kExitOk;
}

int do_verify(const std::string& filter) {
    svgd::VerifyOptions options;
    options.filter = filter;
    const auto checks = svgd::run_verify(options);
    bool all_ok = true;
    for (const auto& check : checks) {
        std::cout << (check.passed ? "PASS" : "FAIL") << "  " << check.name
                  << "  (" << check.detail << ")\n";
        all_ok = all_ok && check.passed;
    }
    if (checks.empty()) {
        std::cerr << "error: no checks match filter '" << filter << "'\n";
        return svgd::kExitVerify;
    }
    return all_ok ? svgd::kExitOk : svgd::kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stein variational gradient descent for (L0,L1)-smooth targets"};
    app.require_subcommand(1);

    std::string config_path;
    std::string filter;
    bool as_json = false;

    CLI::App* run_cmd = app.add_subcommand("run", "run SVGD from a JSON config");
    run_cmd->add_option("--config", config_path, "config file")->required();

    CLI::App* constants_cmd = app.add_subcommand(
        "constants", "print the derived step-size and budget constants");
    constants_cmd->add_option("--config", config_path, "config file")->required();
    constants_cmd->add_flag("--json", as_json, "emit JSON");

    CLI::App* verify_cmd =
        app.add_subcommand("verify", "run the numerical bound checks");
    verify_cmd->add_option("--filter", filter, "substring filter on check names");

    CLI::App* lmc_cmd = app.add_subcommand(
        "baseline-lmc", "run the Langevin Monte Carlo baseline");
    lmc_cmd->add_option("--config", config_path, "config file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return do_run(config_path, false);
        if (constants_cmd->parsed()) return do_constants(config_path, as_json);
        if (verify_cmd->parsed()) return do_verify(filter);
        if (lmc_cmd->parsed()) return do_run(config_path, true);
    } catch (const svgd::ConfigError& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return svgd::kExitConfig;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return svgd::kExitOk;
}
