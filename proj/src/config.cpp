#include "chunksim/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

namespace chunksim {

namespace {

using nlohmann::json;

const std::set<std::string> kCommands = {
    "simulate", "classify", "lambda-star", "survival", "series",
    "h0-scaling", "vchain",  "lambda-s",    "drift",    "validate"};

const std::set<std::string> kModels = {
    "yule",      "killed_yule", "rbh",       "rbh_timechange",
    "single_chunk", "free",     "two_chunk", "saturated",
    "coupled",   "wz",          "v_chain",   "branching"};

const std::set<std::string> kTopKeys = {"command", "model",  "params",
                                        "seed",    "reps",   "horizon",
                                        "grid",    "output", "format"};

// Keys that describe rates and must be strictly positive when present.
const std::set<std::string> kRateKeys = {"mu",   "nu",  "lambda", "mu1",
                                         "mu2",  "mu_z", "mu_w",  "rate",
                                         "gamma"};

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

}  // namespace

double ExperimentConfig::at(const std::string& key) const {
  auto it = params.find(key);
  if (it == params.end()) fail("missing required parameter '" + key + "'");
  return it->second;
}

double ExperimentConfig::value_or(const std::string& key,
                                  double fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

long long ExperimentConfig::int_at(const std::string& key) const {
  const double v = at(key);
  if (!(v >= 0.0) || v != std::floor(v) || v > 9.0e18)
    fail("parameter '" + key + "' must be a nonnegative integer");
  return static_cast<long long>(v);
}

long long ExperimentConfig::int_or(const std::string& key,
                                   long long fallback) const {
  return has(key) ? int_at(key) : fallback;
}

std::string ExperimentConfig::canonical_json() const {
  json j;
  j["command"] = command;
  if (!model.empty()) j["model"] = model;
  json p = json::object();
  for (const auto& [k, v] : params) p[k] = v;
  j["params"] = p;
  j["seed"] = seed;
  j["reps"] = reps;
  j["horizon"] = horizon;
  if (!grid.empty()) j["grid"] = grid;
  if (!output.empty()) j["output"] = output;
  j["format"] = format == OutputFormat::Csv ? "csv" : "json-lines";
  return j.dump();  // nlohmann sorts object keys
}

ExperimentConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("config must be a JSON object");

  for (const auto& [key, value] : doc.items()) {
    if (!kTopKeys.count(key)) fail("unknown config key '" + key + "'");
    (void)value;
  }

  ExperimentConfig c;
  if (!doc.contains("command") || !doc["command"].is_string())
    fail("missing required key 'command'");
  c.command = doc["command"].get<std::string>();
  if (!kCommands.count(c.command))
    fail("unknown command '" + c.command + "'");

  if (doc.contains("model")) {
    if (!doc["model"].is_string()) fail("'model' must be a string");
    c.model = doc["model"].get<std::string>();
    if (!kModels.count(c.model)) fail("unknown model '" + c.model + "'");
  }

  if (doc.contains("params")) {
    if (!doc["params"].is_object()) fail("'params' must be an object");
    for (const auto& [key, value] : doc["params"].items()) {
      if (!value.is_number())
        fail("parameter '" + key + "' must be a number");
      const double v = value.get<double>();
      if (!std::isfinite(v)) fail("parameter '" + key + "' must be finite");
      if (kRateKeys.count(key) && !(v > 0.0))
        fail("parameter '" + key + "' must be strictly positive");
      c.params[key] = v;
    }
  }

  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_integer() && !doc["seed"].is_number_unsigned())
      fail("'seed' must be an integer");
    c.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("reps")) {
    if (!doc["reps"].is_number_integer() || doc["reps"].get<long long>() < 1)
      fail("'reps' must be a positive integer");
    c.reps = doc["reps"].get<long long>();
  }
  if (doc.contains("horizon")) {
    if (!doc["horizon"].is_number() || !(doc["horizon"].get<double>() > 0.0))
      fail("'horizon' must be a positive number");
    c.horizon = doc["horizon"].get<double>();
  }
  if (doc.contains("grid")) {
    if (!doc["grid"].is_array()) fail("'grid' must be an array of numbers");
    for (const auto& v : doc["grid"]) {
      if (!v.is_number() || !(v.get<double>() >= 0.0))
        fail("'grid' entries must be nonnegative numbers");
      c.grid.push_back(v.get<double>());
    }
  }
  if (doc.contains("output")) {
    if (!doc["output"].is_string()) fail("'output' must be a string");
    c.output = doc["output"].get<std::string>();
  }
  if (doc.contains("format")) {
    const std::string f = doc["format"].is_string()
                              ? doc["format"].get<std::string>()
                              : std::string();
    if (f == "csv")
      c.format = OutputFormat::Csv;
    else if (f == "json-lines")
      c.format = OutputFormat::JsonLines;
    else
      fail("'format' must be 'csv' or 'json-lines'");
  }
  return c;
}

void apply_overrides(ExperimentConfig& config, const ConfigOverrides& o) {
  if (o.seed) config.seed = *o.seed;
  if (o.reps) {
    if (*o.reps < 1) fail("--reps must be positive");
    config.reps = *o.reps;
  }
  if (o.horizon) {
    if (!(*o.horizon > 0.0)) fail("--horizon must be positive");
    config.horizon = *o.horizon;
  }
  if (o.output) config.output = *o.output;
  if (o.format) {
    if (*o.format == "csv")
      config.format = OutputFormat::Csv;
    else if (*o.format == "json-lines")
      config.format = OutputFormat::JsonLines;
    else
      fail("--format must be 'csv' or 'json-lines'");
  }
}

}  // namespace chunksim
