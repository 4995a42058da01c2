#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "svgd/kernels.hpp"
#include "svgd/targets.hpp"
#include "svgd/theory.hpp"

namespace svgd {

struct TargetConfig {
    TargetFamily family = TargetFamily::gaussian;
    double p = 2.0;
    double sigma = 1.0;
    std::vector<double> mean;  // empty = origin
    std::string a_csv;
    std::string b_csv;
    double tau = 1.0;
    double q = 2.0;
    std::optional<double> wp_override;
};

struct KernelConfig {
    KernelFamily family = KernelFamily::gaussian_rbf;
    double c = 1.0;
    double beta = -0.5;
    double bandwidth = 1.0;
    bool median_heuristic = false;
};

struct ParticlesConfig {
    int n = 0;
    int d = 0;
    std::uint64_t seed = 0;
    std::string init = "standard_normal";
};

struct StepPolicyConfig {
    StepMode mode = StepMode::fixed;
    double gamma = 0.01;
    double alpha = 2.0;
    double epsilon = 0.1;
};

struct TpProfileConfig {
    TpForm form = TpForm::talagrand;
    std::optional<double> lambda_t;
    std::optional<double> lambda_bv;  // absent = derive when possible
};

struct RunConfig {
    TargetConfig target;
    KernelConfig kernel;
    ParticlesConfig particles;
    int steps = 0;
    StepPolicyConfig step_policy;
    std::optional<TpProfileConfig> tp_profile;
    std::string output_dir = "out";
    int snapshot_every = 0;  // 0 = final snapshot only
};

// Parses and fully validates a JSON document. Unknown keys are rejected;
// every error message is path-qualified. Throws ConfigError.
RunConfig parse_config(const std::string& text);

// parse_config on the file contents; relative CSV paths in the target
// section are kept relative to the config file's directory.
RunConfig load_config(const std::string& path);

// Instantiates the target (loading LASSO matrices if needed) and checks it
// against the particle dimension.
Target build_target(const RunConfig& config);

// Kernel spec before any median-heuristic adjustment.
KernelSpec build_kernel(const RunConfig& config);

}  // namespace svgd
