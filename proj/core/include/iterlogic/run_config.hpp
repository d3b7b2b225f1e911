#pragma once

#include <string>
#include <vector>

#include "iterlogic/config.hpp"
#include "iterlogic/mining.hpp"

namespace iterlogic {

// Everything one run needs: dataset paths, mining setup, training setup
// and output location. Populated from a key=value config file, then
// environment variables, then command-line flags (flags win).
struct RunConfig {
  std::string train_path;
  std::string valid_path;
  std::string test_path;
  std::string rules_path;    // empty: the pipeline mines its own rules
  std::string output_dir = "out";

  MiningConfig mining;
  TrainingConfig training;

  bool eval_raw = false;     // raw ranking instead of the filtered protocol

  void validate_paths(bool need_valid_test) const;
};

// Parses the documented key=value format ('#' starts a comment). Unknown
// keys are an error with the offending line number.
RunConfig parse_run_config(const std::string& path);

// Applies a single "key=value" assignment (shared by the file parser and
// the CLI --set flag). Throws std::invalid_argument on unknown keys or bad
// values.
void apply_config_line(RunConfig& config, const std::string& key, const std::string& value);

// ITERLOGIC_OUT_DIR and ITERLOGIC_WORKERS, when set, override the config
// file values.
void apply_env_overrides(RunConfig& config);

}  // namespace iterlogic
