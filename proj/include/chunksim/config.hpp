#ifndef CHUNKSIM_CONFIG_HPP
#define CHUNKSIM_CONFIG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chunksim/errors.hpp"

namespace chunksim {

enum class OutputFormat { Csv, JsonLines };

// One experiment: a command, a model, numeric parameters, and run controls.
// Parsed strictly: unknown keys are rejected by name.
struct ExperimentConfig {
  std::string command;  // simulate | classify | lambda-star | survival |
                        // series | h0-scaling | vchain | lambda-s | drift |
                        // validate
  std::string model;
  std::map<std::string, double> params;
  std::uint64_t seed = 1;
  long long reps = 1;
  double horizon = 100.0;
  std::vector<double> grid;  // used by h0-scaling / vchain
  std::string output;
  OutputFormat format = OutputFormat::Csv;

  bool has(const std::string& key) const { return params.count(key) > 0; }
  double at(const std::string& key) const;
  double value_or(const std::string& key, double fallback) const;
  // Fails when the key is present but not a nonnegative integer.
  long long int_at(const std::string& key) const;
  long long int_or(const std::string& key, long long fallback) const;

  // Canonical JSON of the resolved config (sorted keys); embedded as the
  // comment header of every output file.
  std::string canonical_json() const;
};

// Parses and validates a JSON config document.
ExperimentConfig parse_config(const std::string& json_text);

// Applies command-line overrides after parsing.
struct ConfigOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<long long> reps;
  std::optional<double> horizon;
  std::optional<std::string> output;
  std::optional<std::string> format;
};

void apply_overrides(ExperimentConfig& config, const ConfigOverrides& o);

}  // namespace chunksim

#endif  // CHUNKSIM_CONFIG_HPP
