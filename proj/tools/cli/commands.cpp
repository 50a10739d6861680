#include "commands.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "sdpp/analysis.hpp"
#include "sdpp/engine.hpp"
#include "sdpp/ensemble.hpp"
#include "sdpp/format.hpp"
#include "sdpp/oracle.hpp"

namespace sdpp::cli {

namespace {

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool to_stdout(const std::string& path) { return path.empty() || path == "-"; }

void write_file(const std::string& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw OutputError("cannot open '" + path + "' for writing");
  file << content;
  file.flush();
  if (!file) throw OutputError("failed writing '" + path + "'");
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (to_stdout(path)) {
    out << content;
  } else {
    write_file(path, content);
  }
}

std::string join_row(std::initializer_list<double> values) {
  std::string row;
  bool first = true;
  for (double v : values) {
    if (!first) row += ',';
    row += format_double(v);
    first = false;
  }
  row += '\n';
  return row;
}

std::string trajectory_csv(Command command, const RunConfig& config, const Trajectory& traj) {
  std::ostringstream csv;
  csv << metadata_header(command, config);
  csv << "# floor_hits: " << traj.floor_hits << "\n";
  csv << "# jump_steps: " << traj.jumps.size() << "\n";
  for (const auto& w : traj.warnings) csv << "# warning: " << w << "\n";
  csv << "t,x,y,z\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    csv << join_row({traj.t[k], traj.states[k].x, traj.states[k].y, traj.states[k].z});
  }
  return csv.str();
}

std::string ensemble_csv(Command command, const RunConfig& config, const EnsembleStats& stats) {
  std::ostringstream csv;
  csv << metadata_header(command, config);
  csv << "# n_reps: " << stats.n_replicates << "\n";
  csv << "t";
  for (char s : {'x', 'y', 'z'}) {
    for (const char* col : {"mean", "sd", "q025", "q500", "q975"}) csv << ',' << col << '_' << s;
  }
  csv << "\n";
  for (std::size_t k = 0; k < stats.t.size(); ++k) {
    csv << format_double(stats.t[k]);
    for (const auto& band : stats.bands) {
      for (const auto* series : {&band.mean, &band.sd, &band.q025, &band.q500, &band.q975}) {
        csv << ',' << format_double((*series)[k]);
      }
    }
    csv << "\n";
  }
  return csv.str();
}

std::string ensemble_summary(const RunConfig& config, const EnsembleStats& stats, const RegimeReport& report) {
  const VerificationOutcome outcome = verify_regime(stats, report, config.tol);
  std::ostringstream s;
  s << "predicted: " << to_string(report.predicted) << "\n";
  s << "verdict: " << to_string(outcome.verdict) << "\n";
  for (const auto& line : outcome.lines) s << "  " << line << "\n";
  s << "median terminal averages: " << format_double(outcome.medians.x) << ' ' << format_double(outcome.medians.y)
    << ' ' << format_double(outcome.medians.z) << "\n";
  s << "replicates: " << stats.n_replicates << "\n";
  s << "replicates with floor hits: " << stats.replicates_with_floor_hits() << " (total " << stats.floor_hits
    << ")\n";
  s << "smallest state component: " << format_double(stats.min_component) << "\n";
  return s.str();
}

EnsembleStats ensemble_of(const RunConfig& config) {
  EnsembleOptions options;
  options.threads = config.threads;
  return run_ensemble(config.params, config.noise, config.delays, config.history(), config.step, config.n_reps,
                      config.step.seed, options);
}

int run_simulate(const RunConfig& config, std::ostream& out) {
  const Trajectory traj =
      simulate(config.params, config.noise, config.delays, config.history(), config.step);
  emit(config.output, trajectory_csv(Command::Simulate, config, traj), out);
  return kExitOk;
}

int run_ensemble_command(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const EnsembleStats stats = ensemble_of(config);
  const RegimeReport report = classify(config.params, config.noise, config.delays);
  const std::string summary = ensemble_summary(config, stats, report);
  const std::string csv = ensemble_csv(Command::Ensemble, config, stats);
  if (to_stdout(config.output)) {
    out << csv;
    err << summary;
  } else {
    write_file(config.output, csv);
    write_file(config.output + ".summary.txt", metadata_header(Command::Ensemble, config) + summary);
    out << summary;
  }
  return kExitOk;
}

int run_classify(const RunConfig& config, std::ostream& out) {
  const RegimeReport report = classify(config.params, config.noise, config.delays);
  emit(config.output, metadata_header(Command::Classify, config) + format_report(report), out);
  return kExitOk;
}

int run_convergence(const RunConfig& config, std::ostream& out) {
  const ConvergenceTable table = convergence_study(config.params, config.delays, config.history(), config.dt_list,
                                                   config.step.t_end, config.reference_dt);
  std::ostringstream csv;
  csv << metadata_header(Command::Convergence, config);
  csv << "# reference_dt: " << format_double(table.reference_dt) << "\n";
  if (table.observed_order) csv << "# observed_order: " << format_double(*table.observed_order) << "\n";
  csv << "dt,max_error,order\n";
  for (const auto& row : table.rows) {
    csv << format_double(row.dt) << ',' << format_double(row.max_error) << ',';
    if (row.order) csv << format_double(*row.order);
    csv << "\n";
  }
  emit(config.output, csv.str(), out);
  return kExitOk;
}

std::string sweep_prefix(const RunConfig& config) {
  std::string prefix = to_stdout(config.output) ? std::string("sweep") : config.output;
  if (prefix.size() > 4 && prefix.compare(prefix.size() - 4, 4, ".csv") == 0) prefix.resize(prefix.size() - 4);
  return prefix;
}

int run_sweep(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.sweep_var.empty() || config.sweep_values.empty()) {
    err << "sweep: set 'sweep' and 'sweep_values' (or use a sweep preset)\n";
    return kExitUsage;
  }
  const std::string prefix = sweep_prefix(config);
  std::ostringstream index;
  index << metadata_header(Command::Sweep, config);
  index << "# sweep: " << config.sweep_var << " (" << config.sweep_kind << ")\n";
  index << "value,file,status\n";

  int status = kExitOk;
  for (double value : config.sweep_values) {
    RunConfig point = config;
    set_sweep_value(point, config.sweep_var, value);
    const std::string file = prefix + "_" + config.sweep_var + "_" + format_short(value) + ".csv";
    std::string outcome = "ok";
    try {
      require_structurally_valid(point.params, point.noise, point.delays);
      if (config.sweep_kind == "ensemble") {
        const EnsembleStats stats = ensemble_of(point);
        const RegimeReport report = classify(point.params, point.noise, point.delays);
        write_file(file, ensemble_csv(Command::Sweep, point, stats));
        write_file(file + ".summary.txt", metadata_header(Command::Sweep, point) +
                                              ensemble_summary(point, stats, report));
      } else {
        const Trajectory traj = simulate(point.params, point.noise, point.delays, point.history(), point.step);
        write_file(file, trajectory_csv(Command::Sweep, point, traj));
      }
    } catch (const OutputError&) {
      throw;
    } catch (const std::exception& e) {
      outcome = std::string("fault: ") + e.what();
      for (char& ch : outcome) {
        if (ch == ',' || ch == '\n') ch = ';';
      }
      err << "sweep " << config.sweep_var << " = " << format_short(value) << ": " << e.what() << "\n";
      status = kExitFault;
    }
    index << format_double(value) << ',' << file << ',' << outcome << "\n";
    out << config.sweep_var << " = " << format_short(value) << " -> " << file << " (" << outcome << ")\n";
  }
  write_file(prefix + "_index.csv", index.str());
  out << "index: " << prefix << "_index.csv\n";
  return status;
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
  if (name == "simulate") return Command::Simulate;
  if (name == "ensemble") return Command::Ensemble;
  if (name == "classify") return Command::Classify;
  if (name == "convergence") return Command::Convergence;
  if (name == "sweep") return Command::Sweep;
  return std::nullopt;
}

std::string to_string(Command c) {
  switch (c) {
    case Command::Simulate:
      return "simulate";
    case Command::Ensemble:
      return "ensemble";
    case Command::Classify:
      return "classify";
    case Command::Convergence:
      return "convergence";
    case Command::Sweep:
      return "sweep";
  }
  return "unknown";
}

std::string metadata_header(Command command, const RunConfig& config) {
  std::ostringstream h;
  h << "# sdpp " << to_string(command) << "\n";
  h << "# preset: " << (config.preset.empty() ? "none" : config.preset) << "\n";
  std::istringstream canonical(serialize_config(config));
  std::string line;
  while (std::getline(canonical, line)) {
    if (line.rfind("preset =", 0) == 0 || line.rfind("output =", 0) == 0) continue;
    h << "# override: " << line << "\n";
  }
  h << "# seed: " << config.step.seed << "\n";
  h << "# dt: " << format_double(config.step.dt) << "\n";
  h << "# t_end: " << format_double(config.step.t_end) << "\n";
  h << "# time unit: day\n";
  if (config.assumed_transformation_rates) {
    h << "# assumed a1/a2: a1 = " << format_double(config.params.a1) << ", a2 = " << format_double(config.params.a2)
      << " (not tabulated for this column)\n";
  }
  for (const auto& w : config.warnings) h << "# warning: " << w << "\n";
  return h.str();
}

int run_subcommand(Command command, const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    switch (command) {
      case Command::Simulate:
        return run_simulate(config, out);
      case Command::Ensemble:
        return run_ensemble_command(config, out, err);
      case Command::Classify:
        return run_classify(config, out);
      case Command::Convergence:
        return run_convergence(config, out);
      case Command::Sweep:
        return run_sweep(config, out, err);
    }
  } catch (const StepFault& e) {
    err << "simulation fault: " << e.what() << "\n";
    return kExitFault;
  } catch (const std::exception& e) {
    err << to_string(command) << " failed: " << e.what() << "\n";
    return kExitFault;
  }
  return kExitFault;
}

}  // namespace sdpp::cli
