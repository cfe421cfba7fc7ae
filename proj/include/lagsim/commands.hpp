#ifndef LAGSIM_COMMANDS_HPP
#define LAGSIM_COMMANDS_HPP

#include <string>
#include <vector>

#include "lagsim/config.hpp"

namespace lagsim {

/// Exit-code contract shared by all subcommands:
///   0 success, 1 configuration or I/O error, 2 undetermined boundary
///   verdict, 3 partial failure (some seeds hit the event budget).
enum ExitCode : int {
  exit_ok = 0,
  exit_config_error = 1,
  exit_undetermined = 2,
  exit_partial = 3,
};

struct CommandOverrides {
  std::string out_dir;     // overrides config/environment when nonempty
  std::uint64_t seeds = 0; // overrides run.seeds when nonzero
};

/// Resolution order for the output directory: explicit override,
/// config value, LAGSIM_OUT_DIR environment variable, "./out".
std::string resolve_out_dir(const RunConfig& c, const CommandOverrides& ov);

int cmd_simulate(const std::string& config_path, const CommandOverrides& ov);
int cmd_classify(const std::string& config_path, const CommandOverrides& ov);
int cmd_ensemble(const std::string& config_path, const CommandOverrides& ov);
int cmd_sweep(const std::string& config_path, const std::string& param,
              const std::vector<std::string>& values,
              const CommandOverrides& ov);

}  // namespace lagsim

#endif  // LAGSIM_COMMANDS_HPP
