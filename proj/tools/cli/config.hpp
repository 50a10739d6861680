#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sdpp/engine.hpp"
#include "sdpp/ensemble.hpp"
#include "sdpp/model.hpp"

namespace sdpp::cli {

/// Malformed or invalid configuration; names the key and line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::size_t line, std::string key, const std::string& what);

  std::size_t line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  std::size_t line_;
  std::string key_;
};

/// Flattened run configuration: every model, noise, delay, history and
/// step field plus subcommand options.
struct RunConfig {
  ModelParams params;
  NoiseSpec noise;
  DelaySpec delays;
  State initial;
  StepConfig step;

  std::size_t n_reps = 100;
  std::size_t threads = 0;
  std::vector<double> dt_list{1e-2, 5e-3, 2.5e-3};
  double reference_dt = 0.0;  // convergence reference step; 0 = auto
  std::string sweep_var;
  std::vector<double> sweep_values;
  std::string sweep_kind = "simulate";  // or "ensemble"
  ToleranceSpec tol;
  std::string output;
  std::string preset;

  /// Keys assigned in the document, in first-assignment order.
  std::vector<std::string> overrides;
  /// Non-fatal findings, e.g. unmet regime hypotheses.
  std::vector<std::string> warnings;
  /// True when the base column carries no transformation rates and at
  /// least one of a1, a2 still holds the assumed default.
  bool assumed_transformation_rates = false;

  HistorySpec history() const { return HistorySpec::constant(initial); }
};

/// Names of every accepted key, in canonical order.
const std::vector<std::string>& config_keys();

/// Names of the shipped presets.
std::vector<std::string> preset_names();

/// Parses a `key = value` document.
///
/// `#` starts a comment. A `preset` line expands its column first, then
/// the remaining assignments apply in file order. Unknown keys, malformed
/// numbers, q <= -1, and positive delays that dt does not divide are
/// ConfigErrors.
RunConfig parse_config(std::string_view text);

/// Canonical form: preset first, then each explicitly assigned key with
/// its final value at 17 significant digits. parse_config(serialize_config(c))
/// serializes back to the same text.
std::string serialize_config(const RunConfig& config);

/// Value of a sweepable key ("tau" sets all three delays).
void set_sweep_value(RunConfig& config, const std::string& key, double value);

/// True for keys accepted as a sweep variable.
bool is_sweepable(const std::string& key);

}  // namespace sdpp::cli
