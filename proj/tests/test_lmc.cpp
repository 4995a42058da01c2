#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "svgd/config.hpp"
#include "svgd/errors.hpp"
#include "svgd/lmc.hpp"
#include "svgd/run.hpp"

using namespace svgd;

TEST_CASE("lmc_step with zeroed noise is a gradient step") {
    const Target normal = Target::gaussian(2);
    LmcState state;
    state.positions.resize(1, 2);
    state.positions << 1.0, 0.0;
    LmcState next;
    REQUIRE(lmc_step(state, normal, 0.1, next, 1, /*noise_scale=*/0.0));
    CHECK(next.positions(0, 0) == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(next.positions(0, 1) == 0.0);
    CHECK(next.rng_counter == 1);
}

TEST_CASE("lmc trajectories are reproducible and thread-independent") {
    const Target normal = Target::gaussian(3);
    LmcState a = init_lmc(37, 3, 99);
    LmcState b = init_lmc(37, 3, 99);
    CHECK(a.positions == b.positions);
    for (int step = 0; step < 25; ++step) {
        LmcState next_a, next_b;
        REQUIRE(lmc_step(a, normal, 0.05, next_a, 1));
        REQUIRE(lmc_step(b, normal, 0.05, next_b, 4));
        a = std::move(next_a);
        b = std::move(next_b);
        CHECK(a.positions == b.positions);
    }
    LmcState c = init_lmc(37, 3, 100);
    CHECK(c.positions != a.positions);
}

TEST_CASE("stationary moments of the AR(1) chain") {
    // For V(x) = ||x||^2/2 the chain is theta <- (1-gamma) theta + sqrt(2
    // gamma) xi with stationary variance 1/(1 - gamma/2) per coordinate.
    const Target normal = Target::gaussian(1);
    const double gamma = 0.1;
    const int chains = 4000;
    LmcState state = init_lmc(chains, 1, 2024);
    for (int step = 0; step < 400; ++step) {
        LmcState next;
        REQUIRE(lmc_step(state, normal, gamma, next, 1));
        state = std::move(next);
    }
    const double mean = state.positions.col(0).mean();
    const double var =
        (state.positions.col(0).array() - mean).square().sum() / (chains - 1);
    const double target_var = 1.0 / (1.0 - gamma / 2.0);
    const double se_mean = std::sqrt(target_var / chains);
    const double se_var = target_var * std::sqrt(2.0 / (chains - 1.0));
    CHECK(std::abs(mean) <= 3.0 * se_mean);
    CHECK(std::abs(var - target_var) <= 3.0 * se_var);
}

TEST_CASE("run_lmc writes the common trace schema") {
    const RunConfig config = parse_config(R"({
      "target": {"family": "gaussian"},
      "kernel": {"family": "gaussian_rbf", "bandwidth": 1.0},
      "particles": {"n": 16, "d": 2, "seed": 5},
      "steps": 10,
      "step_policy": {"mode": "fixed", "gamma": 0.1},
      "output_dir": "unused"
    })");
    RunOptions options;
    options.threads = 1;
    options.write_outputs = false;
    const RunResult result = run_lmc(config, options);
    CHECK(result.status == RunStatus::completed);
    CHECK(result.trace.size() == 11);
    for (const TraceRecord& rec : result.trace) {
        CHECK(rec.gamma == 0.1);
        CHECK(rec.ksd2 >= -1e-12);
        CHECK(rec.mean_grad_norm >= 0.0);
    }
}

TEST_CASE("run_lmc rejects non-fixed policies") {
    const RunConfig config = parse_config(R"({
      "target": {"family": "gaussian"},
      "kernel": {"family": "gaussian_rbf", "bandwidth": 1.0},
      "particles": {"n": 16, "d": 2, "seed": 5},
      "steps": 10,
      "step_policy": {"mode": "adaptive"},
      "output_dir": "unused"
    })");
    RunOptions options;
    options.write_outputs = false;
    CHECK_THROWS_AS(run_lmc(config, options), ConfigError);
}
