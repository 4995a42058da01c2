#pragma once

#include <functional>
#include <string>
#include <vector>

#include "svgd/kernels.hpp"
#include "svgd/targets.hpp"

namespace svgd {

struct VerifyCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

// Hooks exist so the checks themselves can be tested by mutation: scaling
// the kernel bound must break the RKHS norm checks, corrupting the Stein
// kernel must break the oracle-equivalence check.
struct VerifyOptions {
    std::string filter;  // substring match on check names; empty = all
    double kernel_bound_scale = 1.0;
    std::function<double(const Target&, const KernelSpec&, const Vec&,
                         const Vec&)>
        stein_kernel_fn;  // null = library stein_kernel
};

// Runs every bound check at fixed seeds. Failures are results, not
// errors; the CLI exits 4 when any check fails.
std::vector<VerifyCheck> run_verify(const VerifyOptions& options = {});

}  // namespace svgd
