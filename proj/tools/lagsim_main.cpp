// Batch front end: simulate | classify | ensemble | sweep over scenario
// config files.

#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lagsim/commands.hpp"
#include "lagsim/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"event-driven simulator and regime analysis for adaptation "
               "lag under a moving optimum"};
  app.require_subcommand(1);

  std::string config_path;
  lagsim::CommandOverrides ov;
  std::string sweep_param;
  std::string sweep_values;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "scenario config file")->required();
    cmd->add_option("--seeds", ov.seeds, "override run.seeds");
    cmd->add_option("--out", ov.out_dir, "override output directory");
  };

  CLI::App* simulate = app.add_subcommand("simulate", "emit trajectories");
  add_common(simulate);
  CLI::App* classify = app.add_subcommand("classify", "analytic regime verdict");
  add_common(classify);
  CLI::App* ensemble = app.add_subcommand("ensemble", "multi-seed summary");
  add_common(ensemble);
  CLI::App* sweep = app.add_subcommand("sweep", "classify across one parameter");
  add_common(sweep);
  sweep->add_option("--param", sweep_param, "dotted config key, e.g. speed.v")
      ->required();
  sweep->add_option("--values", sweep_values, "comma-separated values")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return lagsim::cmd_simulate(config_path, ov);
    if (classify->parsed()) return lagsim::cmd_classify(config_path, ov);
    if (ensemble->parsed()) return lagsim::cmd_ensemble(config_path, ov);
    if (sweep->parsed()) {
      std::vector<std::string> values;
      std::string cur;
      for (char ch : sweep_values) {
        if (ch == ',') {
          if (!cur.empty()) values.push_back(cur);
          cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(ch))) {
          cur += ch;
        }
      }
      if (!cur.empty()) values.push_back(cur);
      return lagsim::cmd_sweep(config_path, sweep_param, values, ov);
    }
  } catch (const lagsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return lagsim::exit_config_error;
  } catch (const lagsim::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return lagsim::exit_config_error;
  } catch (const lagsim::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return lagsim::exit_config_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return lagsim::exit_config_error;
  }
  return lagsim::exit_config_error;
}
