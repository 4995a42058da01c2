#include "svgd/config.hpp"

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "svgd/csv_io.hpp"
#include "svgd/errors.hpp"

namespace svgd {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ConfigError(path + ": " + msg);
}

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed) {
            if (it.key() == k) {
                known = true;
                break;
            }
        }
        if (!known) fail(join(path, it.key()), "unknown key");
    }
}

const json& require_object(const json& parent, const std::string& path,
                           const char* key) {
    if (!parent.contains(key)) fail(join(path, key), "missing required section");
    const json& section = parent.at(key);
    if (!section.is_object()) fail(join(path, key), "must be an object");
    return section;
}

double require_number(const json& obj, const std::string& path, const char* key) {
    if (!obj.contains(key)) fail(join(path, key), "missing required key");
    if (!obj.at(key).is_number()) fail(join(path, key), "must be a number");
    return obj.at(key).get<double>();
}

double number_or(const json& obj, const std::string& path, const char* key,
                 double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_number()) fail(join(path, key), "must be a number");
    return obj.at(key).get<double>();
}

std::string require_string(const json& obj, const std::string& path,
                           const char* key) {
    if (!obj.contains(key)) fail(join(path, key), "missing required key");
    if (!obj.at(key).is_string()) fail(join(path, key), "must be a string");
    return obj.at(key).get<std::string>();
}

int require_int(const json& obj, const std::string& path, const char* key) {
    if (!obj.contains(key)) fail(join(path, key), "missing required key");
    if (!obj.at(key).is_number_integer()) fail(join(path, key), "must be an integer");
    return obj.at(key).get<int>();
}

TargetConfig parse_target(const json& obj, int particles_d) {
    const std::string path = "target";
    TargetConfig cfg;
    const std::string family = require_string(obj, path, "family");
    if (family == "gaussian") {
        cfg.family = TargetFamily::gaussian;
        check_keys(obj, path, {"family", "sigma", "mean", "wp_override"});
    } else if (family == "generalized_gaussian") {
        cfg.family = TargetFamily::generalized_gaussian;
        check_keys(obj, path, {"family", "p", "sigma", "mean", "wp_override"});
        cfg.p = require_number(obj, path, "p");
        if (!(cfg.p >= 2.0)) fail("target.p", "must be >= 2");
    } else if (family == "bayesian_lasso") {
        cfg.family = TargetFamily::bayesian_lasso;
        check_keys(obj, path, {"family", "A_csv", "b_csv", "tau", "q", "wp_override"});
        cfg.a_csv = require_string(obj, path, "A_csv");
        cfg.b_csv = require_string(obj, path, "b_csv");
        cfg.tau = require_number(obj, path, "tau");
        if (!(cfg.tau > 0.0)) fail("target.tau", "must be > 0");
        cfg.q = require_number(obj, path, "q");
        if (!(cfg.q >= 2.0)) fail("target.q", "must be >= 2");
    } else {
        fail("target.family",
             "must be one of gaussian, generalized_gaussian, bayesian_lasso");
    }
    if (cfg.family != TargetFamily::bayesian_lasso) {
        cfg.sigma = number_or(obj, path, "sigma", 1.0);
        if (!(cfg.sigma > 0.0)) fail("target.sigma", "must be > 0");
        if (obj.contains("mean")) {
            const json& mean = obj.at("mean");
            if (!mean.is_array()) fail("target.mean", "must be an array of numbers");
            for (const json& v : mean) {
                if (!v.is_number()) fail("target.mean", "must be an array of numbers");
                cfg.mean.push_back(v.get<double>());
            }
            if (static_cast<int>(cfg.mean.size()) != particles_d) {
                fail("target.mean", "length must equal particles.d");
            }
        }
    }
    if (obj.contains("wp_override")) {
        const double wp = require_number(obj, path, "wp_override");
        if (!(wp >= 0.0)) fail("target.wp_override", "must be >= 0");
        cfg.wp_override = wp;
    }
    return cfg;
}

KernelConfig parse_kernel(const json& obj) {
    const std::string path = "kernel";
    KernelConfig cfg;
    const std::string family = require_string(obj, path, "family");
    if (family == "gaussian_rbf") {
        cfg.family = KernelFamily::gaussian_rbf;
        check_keys(obj, path, {"family", "bandwidth", "median_heuristic"});
        cfg.bandwidth = number_or(obj, path, "bandwidth", 1.0);
        if (!(cfg.bandwidth > 0.0)) fail("kernel.bandwidth", "must be > 0");
        if (obj.contains("median_heuristic")) {
            if (!obj.at("median_heuristic").is_boolean()) {
                fail("kernel.median_heuristic", "must be a boolean");
            }
            cfg.median_heuristic = obj.at("median_heuristic").get<bool>();
        }
    } else if (family == "inverse_multiquadric") {
        cfg.family = KernelFamily::inverse_multiquadric;
        check_keys(obj, path, {"family", "c", "beta"});
        cfg.c = number_or(obj, path, "c", 1.0);
        if (!(cfg.c > 0.0)) fail("kernel.c", "must be > 0");
        cfg.beta = number_or(obj, path, "beta", -0.5);
        if (!(cfg.beta > -1.0 && cfg.beta < 0.0)) {
            fail("kernel.beta", "must lie in (-1, 0)");
        }
    } else {
        fail("kernel.family", "must be gaussian_rbf or inverse_multiquadric");
    }
    return cfg;
}

ParticlesConfig parse_particles(const json& obj) {
    const std::string path = "particles";
    check_keys(obj, path, {"n", "d", "seed", "init"});
    ParticlesConfig cfg;
    cfg.n = require_int(obj, path, "n");
    if (cfg.n < 1) fail("particles.n", "must be >= 1");
    cfg.d = require_int(obj, path, "d");
    if (cfg.d < 1) fail("particles.d", "must be >= 1");
    if (!obj.contains("seed")) fail("particles.seed", "missing required key");
    if (!obj.at("seed").is_number_integer()) fail("particles.seed", "must be an integer");
    cfg.seed = obj.at("seed").get<std::uint64_t>();
    if (obj.contains("init")) {
        cfg.init = require_string(obj, path, "init");
        if (cfg.init != "standard_normal") {
            fail("particles.init", "only standard_normal is supported");
        }
    }
    return cfg;
}

StepPolicyConfig parse_step_policy(const json& obj, bool have_tp_profile) {
    const std::string path = "step_policy";
    check_keys(obj, path, {"mode", "gamma", "alpha", "epsilon"});
    StepPolicyConfig cfg;
    const std::string mode = require_string(obj, path, "mode");
    if (mode == "fixed") {
        cfg.mode = StepMode::fixed;
        cfg.gamma = require_number(obj, path, "gamma");
        if (!(cfg.gamma > 0.0)) fail("step_policy.gamma", "must be > 0");
    } else if (mode == "theory") {
        cfg.mode = StepMode::theory;
        if (!have_tp_profile) {
            fail("tp_profile", "section required when step_policy.mode is theory");
        }
    } else if (mode == "adaptive") {
        cfg.mode = StepMode::adaptive;
        cfg.gamma = number_or(obj, path, "gamma", 0.01);  // fallback at ||g|| = 0
        if (!(cfg.gamma > 0.0)) fail("step_policy.gamma", "must be > 0");
    } else {
        fail("step_policy.mode", "must be fixed, theory or adaptive");
    }
    cfg.alpha = number_or(obj, path, "alpha", 2.0);
    if (!(cfg.alpha > 1.0)) fail("step_policy.alpha", "must be > 1");
    cfg.epsilon = number_or(obj, path, "epsilon", 0.1);
    if (!(cfg.epsilon > 0.0)) fail("step_policy.epsilon", "must be > 0");
    return cfg;
}

TpProfileConfig parse_tp_profile(const json& obj) {
    const std::string path = "tp_profile";
    TpProfileConfig cfg;
    const std::string form = require_string(obj, path, "form");
    if (form == "talagrand") {
        cfg.form = TpForm::talagrand;
        check_keys(obj, path, {"form", "lambda_t"});
        cfg.lambda_t = require_number(obj, path, "lambda_t");
        if (!(*cfg.lambda_t > 0.0)) fail("tp_profile.lambda_t", "must be > 0");
    } else if (form == "bolley_villani") {
        cfg.form = TpForm::bolley_villani;
        check_keys(obj, path, {"form", "lambda_bv"});
        if (obj.contains("lambda_bv")) {
            cfg.lambda_bv = require_number(obj, path, "lambda_bv");
            if (!(*cfg.lambda_bv > 0.0)) fail("tp_profile.lambda_bv", "must be > 0");
        }
    } else {
        fail("tp_profile.form", "must be talagrand or bolley_villani");
    }
    return cfg;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& err) {
        throw ConfigError(std::string("config: malformed JSON: ") + err.what());
    }
    if (!doc.is_object()) throw ConfigError("config: top level must be an object");
    check_keys(doc, "",
               {"target", "kernel", "particles", "steps", "step_policy",
                "tp_profile", "output_dir", "snapshot_every"});

    RunConfig cfg;
    cfg.particles = parse_particles(require_object(doc, "", "particles"));
    cfg.target = parse_target(require_object(doc, "", "target"), cfg.particles.d);
    cfg.kernel = parse_kernel(require_object(doc, "", "kernel"));
    if (doc.contains("tp_profile")) {
        cfg.tp_profile = parse_tp_profile(require_object(doc, "", "tp_profile"));
    }
    cfg.step_policy = parse_step_policy(require_object(doc, "", "step_policy"),
                                        cfg.tp_profile.has_value());
    cfg.steps = require_int(doc, "", "steps");
    if (cfg.steps < 0) fail("steps", "must be >= 0");
    if (doc.contains("output_dir")) {
        cfg.output_dir = require_string(doc, "", "output_dir");
    }
    if (doc.contains("snapshot_every")) {
        cfg.snapshot_every = require_int(doc, "", "snapshot_every");
        if (cfg.snapshot_every < 0) fail("snapshot_every", "must be >= 0");
    }
    if (cfg.kernel.median_heuristic &&
        cfg.kernel.family != KernelFamily::gaussian_rbf) {
        fail("kernel.median_heuristic", "only valid for gaussian_rbf");
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    RunConfig cfg = parse_config(buffer.str());
    // CSV paths resolve relative to the config file.
    const std::filesystem::path base = std::filesystem::path(path).parent_path();
    auto resolve = [&](std::string& p) {
        if (!p.empty() && std::filesystem::path(p).is_relative()) {
            p = (base / p).string();
        }
    };
    resolve(cfg.target.a_csv);
    resolve(cfg.target.b_csv);
    return cfg;
}

Target build_target(const RunConfig& config) {
    const TargetConfig& tc = config.target;
    Vec mean;
    if (!tc.mean.empty()) {
        mean = Eigen::Map<const Vec>(tc.mean.data(),
                                     static_cast<Eigen::Index>(tc.mean.size()));
    }
    Target target;
    switch (tc.family) {
        case TargetFamily::gaussian:
            target = Target::gaussian(config.particles.d, tc.sigma, mean);
            break;
        case TargetFamily::generalized_gaussian:
            target = Target::generalized_gaussian(config.particles.d, tc.p,
                                                  tc.sigma, mean);
            break;
        case TargetFamily::bayesian_lasso: {
            Mat a;
            Vec b;
            try {
                a = read_matrix_csv(tc.a_csv);
                b = read_vector_csv(tc.b_csv);
            } catch (const std::exception& err) {
                throw ConfigError(std::string("target: ") + err.what());
            }
            if (static_cast<int>(a.cols()) != config.particles.d) {
                throw ConfigError(
                    "target.A_csv: column count must equal particles.d");
            }
            target = Target::bayesian_lasso(std::move(a), std::move(b), tc.tau,
                                            tc.q);
            break;
        }
    }
    target.wp_override = tc.wp_override;
    return target;
}

KernelSpec build_kernel(const RunConfig& config) {
    KernelSpec spec;
    spec.family = config.kernel.family;
    spec.c = config.kernel.c;
    spec.beta = config.kernel.beta;
    spec.bandwidth = config.kernel.bandwidth;
    spec.dim = config.particles.d;
    validate(spec);
    return spec;
}

}  // namespace svgd
