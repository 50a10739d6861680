#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "sdpp/format.hpp"

namespace sdpp::cli {

ConfigError::ConfigError(std::size_t line, std::string key, const std::string& what)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) + "key '" +
                         key + "': " + what),
      line_(line),
      key_(std::move(key)) {}

namespace {

// Jump marks shared by every tabulated column.
constexpr double kQ1 = -0.04;
constexpr double kQ2 = -0.006;
constexpr double kQ3 = -0.008;
// The figure columns carry no transformation rates; this value stands in.
constexpr double kAssumedTransformationRate = 0.05;

void common_defaults(RunConfig& c) {
  c.initial = State{50.0, 50.0, 10.0};
  c.step.dt = 1e-2;
  c.step.t_end = 200.0;
  c.n_reps = 100;
}

void table_column(RunConfig& c, double r1, double r2, double alpha1, double alpha2, double alpha3,
                  double beta, double delta, double sigma1, double sigma2, double sigma3) {
  common_defaults(c);
  c.params = ModelParams{r1,   r2,    100.0, 100.0, alpha1, alpha2, alpha3, beta, delta,
                         kAssumedTransformationRate, kAssumedTransformationRate};
  c.noise = NoiseSpec{sigma1, sigma2, sigma3, kQ1, kQ2, kQ3, 1.0, JumpClock::Shared};
  c.delays = DelaySpec{0.5, 1.0, 1.5};
}

void fig1(RunConfig& c) { table_column(c, 0.7, 0.65, 0.3, 0.35, 0.5, 1e-4, 0.1, 1e-4, 2e-4, 2e-4); }
void fig2(RunConfig& c) { table_column(c, 1.7, 1.8, 0.2, 0.28, 0.5, 1e-4, 0.4, 1e-5, 2e-4, 2e-3); }
void fig3(RunConfig& c) { table_column(c, 2.0, 2.3, 0.13, 0.17, 0.2, 1e-3, 0.02, 1e-5, 2e-4, 2e-3); }

// Constructed scenarios whose parameters provably satisfy one regime
// hypothesis each.
void extinction(RunConfig& c) {
  common_defaults(c);
  c.params = ModelParams{0.1, 0.1, 100.0, 100.0, 0.3, 0.35, 0.5, 1e-4, 0.1, 0.05, 0.05};
  c.noise = NoiseSpec{1.0, 1.0, 0.5, kQ1, kQ2, kQ3, 1.0, JumpClock::Shared};
  c.delays = DelaySpec{0.5, 1.0, 1.5};
  c.initial = State{10.0, 10.0, 1.0};
  c.step.t_end = 500.0;
  c.n_reps = 200;
}

void persistence(RunConfig& c) {
  common_defaults(c);
  c.params = ModelParams{0.5, 0.5, 100.0, 100.0, 0.05, 0.05, 0.2, 1e-4, 0.02, 0.1, 0.1};
  c.noise = NoiseSpec{1e-4, 2e-4, 2e-4, kQ1, kQ2, kQ3, 1.0, JumpClock::Shared};
  c.delays = DelaySpec{0.5, 1.0, 1.5};
  c.step.t_end = 500.0;
  c.n_reps = 200;
}

void predator_extinction(RunConfig& c) {
  persistence(c);
  c.params.a1 = 1e-4;
  c.params.a2 = 1e-4;
  c.params.delta = 0.1;
}

auto sweep_of(std::string var, std::vector<double> values) {
  return [var = std::move(var), values = std::move(values)](RunConfig& c) {
    persistence(c);
    c.step.t_end = 200.0;
    c.sweep_var = var;
    c.sweep_values = values;
  };
}

struct Preset {
  std::string name;
  bool assumes_transformation_rates;
  std::function<void(RunConfig&)> apply;
};

const std::vector<Preset>& presets() {
  static const std::vector<Preset> table = {
      {"fig1", true, fig1},
      {"fig2", true, fig2},
      {"fig3", true, fig3},
      {"extinction", false, extinction},
      {"persistence", false, persistence},
      {"predator_extinction", false, predator_extinction},
      {"fig4a", false, sweep_of("a1", {0.05, 0.1, 0.2})},
      {"fig4b", false, sweep_of("a2", {0.05, 0.1, 0.2})},
      {"fig5a", false, sweep_of("K1", {50.0, 100.0, 150.0})},
      {"fig5b", false, sweep_of("K2", {50.0, 100.0, 150.0})},
      {"fig6", false, sweep_of("tau1", {0.5, 2.0})},
      {"fig7", false, sweep_of("tau2", {0.5, 2.0})},
      {"fig8", false, sweep_of("tau3", {0.5, 2.0})},
      {"fig9", false, sweep_of("tau", {0.5, 1.0})},
  };
  return table;
}

const Preset* find_preset(std::string_view name) {
  for (const auto& p : presets()) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

using Setter = std::function<void(RunConfig&, std::string_view)>;
using Getter = std::function<std::string(const RunConfig&)>;

struct KeySpec {
  std::string name;
  Setter set;
  Getter get;
};

double parse_number(std::string_view text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw std::invalid_argument("malformed number '" + std::string(text) + "'");
  }
  return v;
}

std::uint64_t parse_unsigned(std::string_view text) {
  std::uint64_t v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw std::invalid_argument("malformed non-negative integer '" + std::string(text) + "'");
  }
  return v;
}

std::vector<double> parse_list(std::string_view text) {
  std::vector<double> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    out.push_back(parse_number(trim(text.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

std::string format_list(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ", ";
    out += format_double(values[i]);
  }
  return out;
}

enum class Bound { NonNegative, Positive, AboveMinusOne, Any };

template <typename Access>
KeySpec number(std::string name, Access access, Bound bound) {
  return KeySpec{
      name,
      [access, bound, name](RunConfig& c, std::string_view text) {
        const double v = parse_number(text);
        switch (bound) {
          case Bound::NonNegative:
            if (v < 0.0) throw std::invalid_argument(name + " must be >= 0 (got " + format_short(v) + ")");
            break;
          case Bound::Positive:
            if (!(v > 0.0)) throw std::invalid_argument(name + " must be > 0 (got " + format_short(v) + ")");
            break;
          case Bound::AboveMinusOne:
            if (!(v > -1.0)) {
              throw std::invalid_argument(name + " must be > -1 so jumps keep populations positive (got " +
                                          format_short(v) + ")");
            }
            break;
          case Bound::Any:
            break;
        }
        access(c) = v;
      },
      [access](const RunConfig& c) { return format_double(access(const_cast<RunConfig&>(c))); },
  };
}

#define SDPP_FIELD(expr) [](RunConfig& c) -> double& { return c.expr; }

const std::vector<KeySpec>& key_specs() {
  static const std::vector<KeySpec> specs = [] {
    std::vector<KeySpec> k;
    k.push_back({"preset", [](RunConfig&, std::string_view) {}, [](const RunConfig& c) { return c.preset; }});
    k.push_back(number("r1", SDPP_FIELD(params.r1), Bound::NonNegative));
    k.push_back(number("r2", SDPP_FIELD(params.r2), Bound::NonNegative));
    k.push_back(number("K1", SDPP_FIELD(params.K1), Bound::Positive));
    k.push_back(number("K2", SDPP_FIELD(params.K2), Bound::Positive));
    k.push_back(number("alpha1", SDPP_FIELD(params.alpha1), Bound::NonNegative));
    k.push_back(number("alpha2", SDPP_FIELD(params.alpha2), Bound::NonNegative));
    k.push_back(number("alpha3", SDPP_FIELD(params.alpha3), Bound::NonNegative));
    k.push_back(number("beta", SDPP_FIELD(params.beta), Bound::NonNegative));
    k.push_back(number("delta", SDPP_FIELD(params.delta), Bound::NonNegative));
    k.push_back(number("a1", SDPP_FIELD(params.a1), Bound::NonNegative));
    k.push_back(number("a2", SDPP_FIELD(params.a2), Bound::NonNegative));
    k.push_back(number("sigma1", SDPP_FIELD(noise.sigma1), Bound::NonNegative));
    k.push_back(number("sigma2", SDPP_FIELD(noise.sigma2), Bound::NonNegative));
    k.push_back(number("sigma3", SDPP_FIELD(noise.sigma3), Bound::NonNegative));
    k.push_back(number("q1", SDPP_FIELD(noise.q1), Bound::AboveMinusOne));
    k.push_back(number("q2", SDPP_FIELD(noise.q2), Bound::AboveMinusOne));
    k.push_back(number("q3", SDPP_FIELD(noise.q3), Bound::AboveMinusOne));
    k.push_back(number("lambda", SDPP_FIELD(noise.lambda), Bound::NonNegative));
    k.push_back({"jump_clock",
                 [](RunConfig& c, std::string_view v) {
                   if (v == "shared") {
                     c.noise.clock = JumpClock::Shared;
                   } else if (v == "independent") {
                     c.noise.clock = JumpClock::Independent;
                   } else {
                     throw std::invalid_argument("expected 'shared' or 'independent'");
                   }
                 },
                 [](const RunConfig& c) {
                   return std::string(c.noise.clock == JumpClock::Shared ? "shared" : "independent");
                 }});
    k.push_back(number("tau1", SDPP_FIELD(delays.tau1), Bound::NonNegative));
    k.push_back(number("tau2", SDPP_FIELD(delays.tau2), Bound::NonNegative));
    k.push_back(number("tau3", SDPP_FIELD(delays.tau3), Bound::NonNegative));
    k.push_back(number("x0", SDPP_FIELD(initial.x), Bound::NonNegative));
    k.push_back(number("y0", SDPP_FIELD(initial.y), Bound::NonNegative));
    k.push_back(number("z0", SDPP_FIELD(initial.z), Bound::NonNegative));
    k.push_back(number("dt", SDPP_FIELD(step.dt), Bound::Positive));
    k.push_back(number("t_end", SDPP_FIELD(step.t_end), Bound::Positive));
    k.push_back({"seed", [](RunConfig& c, std::string_view v) { c.step.seed = parse_unsigned(v); },
                 [](const RunConfig& c) { return std::to_string(c.step.seed); }});
    k.push_back(number("positivity_floor", SDPP_FIELD(step.positivity_floor), Bound::Positive));
    k.push_back({"n_reps",
                 [](RunConfig& c, std::string_view v) {
                   const auto n = parse_unsigned(v);
                   if (n == 0) throw std::invalid_argument("n_reps must be >= 1");
                   c.n_reps = static_cast<std::size_t>(n);
                 },
                 [](const RunConfig& c) { return std::to_string(c.n_reps); }});
    k.push_back({"threads",
                 [](RunConfig& c, std::string_view v) { c.threads = static_cast<std::size_t>(parse_unsigned(v)); },
                 [](const RunConfig& c) { return std::to_string(c.threads); }});
    k.push_back({"dt_list",
                 [](RunConfig& c, std::string_view v) {
                   auto list = parse_list(v);
                   for (std::size_t i = 0; i < list.size(); ++i) {
                     if (!(list[i] > 0.0)) throw std::invalid_argument("dt_list entries must be > 0");
                     if (i > 0 && !(list[i] < list[i - 1])) {
                       throw std::invalid_argument("dt_list must be strictly descending");
                     }
                   }
                   c.dt_list = std::move(list);
                 },
                 [](const RunConfig& c) { return format_list(c.dt_list); }});
    k.push_back(number("reference_dt", SDPP_FIELD(reference_dt), Bound::NonNegative));
    k.push_back({"sweep",
                 [](RunConfig& c, std::string_view v) {
                   if (!is_sweepable(std::string(v))) {
                     throw std::invalid_argument("'" + std::string(v) + "' is not a sweepable key");
                   }
                   c.sweep_var = std::string(v);
                 },
                 [](const RunConfig& c) { return c.sweep_var; }});
    k.push_back({"sweep_values", [](RunConfig& c, std::string_view v) { c.sweep_values = parse_list(v); },
                 [](const RunConfig& c) { return format_list(c.sweep_values); }});
    k.push_back({"sweep_kind",
                 [](RunConfig& c, std::string_view v) {
                   if (v != "simulate" && v != "ensemble") {
                     throw std::invalid_argument("expected 'simulate' or 'ensemble'");
                   }
                   c.sweep_kind = std::string(v);
                 },
                 [](const RunConfig& c) { return c.sweep_kind; }});
    k.push_back(number("tol_extinction", SDPP_FIELD(tol.extinction), Bound::Positive));
    k.push_back({"tol_slack",
                 [](RunConfig& c, std::string_view v) {
                   const double s = parse_number(v);
                   if (!(s >= 0.0 && s < 1.0)) throw std::invalid_argument("tol_slack must lie in [0, 1)");
                   c.tol.slack = s;
                 },
                 [](const RunConfig& c) { return format_double(c.tol.slack); }});
    k.push_back({"output", [](RunConfig& c, std::string_view v) { c.output = std::string(v); },
                 [](const RunConfig& c) { return c.output; }});
    return k;
  }();
  return specs;
}

#undef SDPP_FIELD

const KeySpec* find_key(std::string_view name) {
  for (const auto& k : key_specs()) {
    if (k.name == name) return &k;
  }
  return nullptr;
}

bool divides(double tau, double dt) {
  const double ratio = tau / dt;
  return std::abs(ratio - std::round(ratio)) <= 1e-9 * std::max(1.0, ratio);
}

struct Assignment {
  std::size_t line;
  std::string key;
  std::string value;
};

std::vector<Assignment> tokenize(std::string_view text) {
  std::vector<Assignment> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(line_no, std::string(line), "expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(line_no, "", "missing key before '='");
    out.push_back({line_no, std::string(key), std::string(value)});
  }
  return out;
}

std::size_t line_of(const std::vector<Assignment>& assignments, const std::string& key) {
  std::size_t line = 0;
  for (const auto& a : assignments) {
    if (a.key == key) line = a.line;
  }
  return line;
}

void check_grid(const RunConfig& c, const std::vector<Assignment>& assignments) {
  const char* names[] = {"tau1", "tau2", "tau3"};
  const double taus[] = {c.delays.tau1, c.delays.tau2, c.delays.tau3};
  auto blame = [&](const std::string& key) {
    const std::size_t line = line_of(assignments, key);
    return line > 0 ? std::pair{line, key} : std::pair{line_of(assignments, "dt"), std::string("dt")};
  };
  for (int i = 0; i < 3; ++i) {
    if (!(taus[i] > 0.0)) continue;
    if (c.step.dt > taus[i] * (1.0 + 1e-12) || !divides(taus[i], c.step.dt)) {
      auto [line, key] = blame(names[i]);
      throw ConfigError(line, key,
                        std::string(names[i]) + " = " + format_short(taus[i]) +
                            " is not a positive multiple of dt = " + format_short(c.step.dt));
    }
    for (double dt : c.dt_list) {
      if (dt > taus[i] * (1.0 + 1e-12) || !divides(taus[i], dt)) {
        throw ConfigError(line_of(assignments, "dt_list"), "dt_list",
                          "entry " + format_short(dt) + " does not divide " + names[i] + " = " +
                              format_short(taus[i]));
      }
    }
  }
  if (c.sweep_var.rfind("tau", 0) == 0) {
    for (double v : c.sweep_values) {
      if (v > 0.0 && (c.step.dt > v * (1.0 + 1e-12) || !divides(v, c.step.dt))) {
        throw ConfigError(line_of(assignments, "sweep_values"), "sweep_values",
                          "delay " + format_short(v) + " is not a positive multiple of dt = " +
                              format_short(c.step.dt));
      }
    }
  }
  if (!c.sweep_values.empty() && c.sweep_var.empty()) {
    throw ConfigError(line_of(assignments, "sweep_values"), "sweep_values", "set 'sweep' to name the swept key");
  }
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& k : key_specs()) out.push_back(k.name);
    return out;
  }();
  return names;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& p : presets()) out.push_back(p.name);
  return out;
}

bool is_sweepable(const std::string& key) {
  static const char* allowed[] = {"r1",     "r2",     "K1",    "K2",     "alpha1", "alpha2", "alpha3",
                                  "beta",   "delta",  "a1",    "a2",     "sigma1", "sigma2", "sigma3",
                                  "q1",     "q2",     "q3",    "lambda", "tau1",   "tau2",   "tau3",
                                  "tau",    "x0",     "y0",    "z0"};
  return std::find(std::begin(allowed), std::end(allowed), key) != std::end(allowed);
}

void set_sweep_value(RunConfig& config, const std::string& key, double value) {
  if (!is_sweepable(key)) throw InvalidArgument("'" + key + "' is not a sweepable key");
  const std::vector<std::string> targets =
      key == "tau" ? std::vector<std::string>{"tau1", "tau2", "tau3"} : std::vector<std::string>{key};
  for (const auto& target : targets) {
    try {
      find_key(target)->set(config, format_double(value));
    } catch (const std::invalid_argument& e) {
      throw InvalidArgument(e.what());
    }
    if (std::find(config.overrides.begin(), config.overrides.end(), target) == config.overrides.end()) {
      config.overrides.push_back(target);
    }
  }
}

RunConfig parse_config(std::string_view text) {
  const std::vector<Assignment> assignments = tokenize(text);

  RunConfig config;
  const Assignment* preset_line = nullptr;
  for (const auto& a : assignments) {
    if (a.key != "preset") continue;
    if (preset_line) throw ConfigError(a.line, a.key, "preset given more than once");
    preset_line = &a;
  }

  bool assumes_rates = true;
  if (preset_line) {
    const Preset* preset = find_preset(preset_line->value);
    if (!preset) {
      std::string known;
      for (const auto& name : preset_names()) known += (known.empty() ? "" : ", ") + name;
      throw ConfigError(preset_line->line, "preset", "unknown preset '" + preset_line->value + "' (known: " + known + ")");
    }
    preset->apply(config);
    config.preset = preset->name;
    assumes_rates = preset->assumes_transformation_rates;
  } else {
    fig1(config);
  }

  for (const auto& a : assignments) {
    const KeySpec* spec = find_key(a.key);
    if (!spec) throw ConfigError(a.line, a.key, "unknown key");
    if (a.key == "preset") continue;
    try {
      spec->set(config, a.value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(a.line, a.key, e.what());
    }
    if (std::find(config.overrides.begin(), config.overrides.end(), a.key) == config.overrides.end()) {
      config.overrides.push_back(a.key);
    }
  }

  const auto overridden = [&](const char* key) {
    return std::find(config.overrides.begin(), config.overrides.end(), key) != config.overrides.end();
  };
  config.assumed_transformation_rates = assumes_rates && !(overridden("a1") && overridden("a2"));

  check_grid(config, assignments);

  for (const auto& failure : validate(config.params, config.noise, config.delays).failures()) {
    config.warnings.push_back("hypothesis not met: " + failure);
  }
  if (config.assumed_transformation_rates) {
    config.warnings.push_back("a1/a2 not tabulated for this column; assumed " +
                              format_short(kAssumedTransformationRate) + " unless overridden");
  }
  return config;
}

std::string serialize_config(const RunConfig& config) {
  std::ostringstream out;
  if (!config.preset.empty()) out << "preset = " << config.preset << "\n";
  for (const auto& spec : key_specs()) {
    if (spec.name == "preset") continue;
    if (std::find(config.overrides.begin(), config.overrides.end(), spec.name) == config.overrides.end()) {
      continue;
    }
    out << spec.name << " = " << spec.get(config) << "\n";
  }
  return out.str();
}

}  // namespace sdpp::cli
