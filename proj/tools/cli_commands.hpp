#pragma once

#include <json.hpp>
#include <stdexcept>
#include <string>

namespace polyens::cli {

/// Configuration document failed schema validation.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

enum ExitCode {
  kOk = 0,
  kConfigError = 2,
  kPreconditionError = 3,
  kNonConvergence = 4,
};

/// Runs one subcommand against a validated config and writes the report.
/// Returns the process exit code.
int run_command(const std::string& command, const nlohmann::json& config,
                const std::string& out_path, const std::string& format,
                bool verbose);

}  // namespace polyens::cli
