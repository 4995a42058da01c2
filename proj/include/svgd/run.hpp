#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "svgd/config.hpp"
#include "svgd/ensemble.hpp"
#include "svgd/lmc.hpp"
#include "svgd/theory.hpp"

namespace svgd {

enum class RunStatus { completed, rejected_step };

struct RunOptions {
    int threads = 0;  // 0 = resolve from THREADS env / hardware
    // Millisecond clock for the elapsed_ms column; tests inject a constant
    // clock to make traces fully reproducible. Null = steady_clock.
    std::function<double()> now_ms;
    bool write_outputs = true;  // trace.csv, snapshots, report.json
};

struct RunResult {
    std::vector<TraceRecord> trace;
    Ensemble ensemble;
    RunStatus status = RunStatus::completed;
    int steps_completed = 0;
    std::optional<TheoryReport> theory;
    KernelSpec kernel;  // after any median-heuristic adjustment
};

// Full SVGD run: init mu_0, resolve the step policy, iterate, record one
// TraceRecord per visited state (steps+1 records for a completed run) and
// persist trace.csv / particles_<iter>.csv / report.json under output_dir.
RunResult run_svgd(const RunConfig& config, const RunOptions& options = {});

// Langevin baseline with the same trace schema; requires a fixed step policy.
RunResult run_lmc(const RunConfig& config, const RunOptions& options = {});

// The TheoryReport for a config (requires a tp_profile section).
TheoryReport build_theory_report(const RunConfig& config,
                                 const Target& target,
                                 const KernelSpec& kernel);

}  // namespace svgd
