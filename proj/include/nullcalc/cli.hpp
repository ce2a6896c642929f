#pragma once

// Command implementations behind tools/nullcalc.  Each returns the exit code and the text
// (or JSON) that the binary prints; nothing here touches the process environment.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nullcalc::cli {

inline constexpr const char* kSchema = "nullcalc/1";

struct CliConfig {
  std::uint64_t seed = 42;
  int trials = 200;
  double tol = 1e-10;
  bool json = false;
  std::vector<std::string> campaigns;
  std::vector<std::string> equations;
};

struct CommandResult {
  int exit_code = 0;
  std::string out;
  std::string err;
};

// Throws std::invalid_argument unless trials >= 1 and tol > 0.
void validate(const CliConfig& cfg);

struct IdentityResult {
  std::string name;
  double max_residual = 0.0;
  bool pass = false;
};
// The 14 identity families, ordered by name.  `extra` receives the informational checks.
std::vector<IdentityResult> run_identity_families(const CliConfig& cfg, std::vector<IdentityResult>* extra = nullptr);

CommandResult cmd_check_identities(const CliConfig& cfg);
CommandResult cmd_classify(const std::string& expr, const std::optional<std::string>& norm, const CliConfig& cfg);
CommandResult cmd_list_equations(const CliConfig& cfg);
CommandResult cmd_check_equations(const CliConfig& cfg);
CommandResult cmd_replay(const CliConfig& cfg, bool scripted);
CommandResult cmd_verify_cancellation(const CliConfig& cfg);

}  // namespace nullcalc::cli
