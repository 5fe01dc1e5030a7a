#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "chunksim/config.hpp"
#include "chunksim/runner.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw chunksim::ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "chunksim — exact simulation and stability analysis of chunk-based "
      "file-sharing network models"};
  app.require_subcommand(1);

  std::string config_path;
  chunksim::ConfigOverrides overrides;
  std::uint64_t seed_val = 0;
  long long reps_val = 0;
  double horizon_val = 0.0;
  std::string out_val, format_val;

  const std::vector<std::string> commands = {
      "simulate", "classify", "lambda-star", "survival", "series",
      "h0-scaling", "vchain", "lambda-s", "drift", "validate"};
  std::vector<CLI::App*> subs;
  for (const auto& name : commands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON experiment config")
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", seed_val, "override the base seed");
    sub->add_option("--reps", reps_val, "override the replication count");
    sub->add_option("--horizon", horizon_val, "override the time horizon");
    sub->add_option("--out", out_val, "override the output file path");
    sub->add_option("--format", format_val, "override csv|json-lines");
    subs.push_back(sub);
  }

  CLI11_PARSE(app, argc, argv);

  CLI::App* chosen = nullptr;
  for (std::size_t k = 0; k < subs.size(); ++k)
    if (subs[k]->parsed()) chosen = subs[k];
  const std::string command = chosen->get_name();

  try {
    chunksim::ExperimentConfig config;
    if (!config_path.empty()) {
      config = chunksim::parse_config(read_file(config_path));
      if (config.command != command)
        throw chunksim::ConfigError("config command '" + config.command +
                                    "' does not match CLI command '" +
                                    command + "'");
    } else if (command == "validate") {
      config.command = "validate";
    } else {
      throw chunksim::ConfigError("--config is required for '" + command +
                                  "'");
    }
    if (chosen->count("--seed")) overrides.seed = seed_val;
    if (chosen->count("--reps")) overrides.reps = reps_val;
    if (chosen->count("--horizon")) overrides.horizon = horizon_val;
    if (chosen->count("--out")) overrides.output = out_val;
    if (chosen->count("--format")) overrides.format = format_val;
    chunksim::apply_overrides(config, overrides);
    return chunksim::execute(config, std::cout, std::cerr);
  } catch (const chunksim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return chunksim::kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return chunksim::kExitSimulationError;
  }
}
