#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ulsched::cli {

// Process exit codes.
inline constexpr int kOk = 0;
inline constexpr int kConfigError = 1;
inline constexpr int kUsageError = 2;
inline constexpr int kGoldenMismatch = 3;

// Environment variables with this prefix stand in for the matching flags,
// e.g. ULSCHED_SEED for --seed. Flags win over the environment.
inline constexpr const char* kEnvPrefix = "ULSCHED_";

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace ulsched::cli
