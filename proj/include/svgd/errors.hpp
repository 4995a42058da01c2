#pragma once

#include <stdexcept>
#include <string>

namespace svgd {

// Invalid or inconsistent configuration (bad JSON, constraint violation,
// unsupported target/kernel combination). CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Process exit codes shared by the CLI and the tests.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitBlowup = 3;
inline constexpr int kExitVerify = 4;

}  // namespace svgd
