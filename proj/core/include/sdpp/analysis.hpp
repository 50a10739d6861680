#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sdpp/engine.hpp"
#include "sdpp/model.hpp"

namespace sdpp {

/// Running means <x(t)> = (1/t) * integral_0^t x(s) ds by the trapezoid
/// rule; the t = 0 entry is the initial state.
struct TimeAverageSeries {
  std::vector<double> t;
  std::vector<State> mean;
};

TimeAverageSeries time_average(const Trajectory& traj);
TimeAverageSeries time_average(std::span<const double> t, std::span<const State> states);

/// Time average at the final grid point only, without materializing the series.
State terminal_time_average(std::span<const double> t, std::span<const State> states);

struct ExtinctionCoefficients {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;

  double max() const;
};

/// c1 = r1 - sigma1^2/2, c2 = r2 - sigma2^2/2,
/// c3 = a1 (K1/r1) c1 + a2 (K2/r2) c2 - delta - sigma3^2/2.
/// Throws InvalidArgument when r1 or r2 is zero (c3 undefined).
ExtinctionCoefficients extinction_coefficients(const ModelParams& p, const NoiseSpec& n);

struct PredatorExtinctionReport {
  double c4 = 0.0;
  double prey_margin1 = 0.0;  // 1 - r1 + 2 r1 / K1
  double prey_margin2 = 0.0;  // 1 - r2 + 2 r2 / K2
  double min_condition = 0.0;  // min{c1, c2, prey_margin1, prey_margin2}
  bool hypothesis_holds = false;  // min_condition > 0 and c4 <= 0
  // Prey lower bounds c_i / prey_margin_i; NaN when a margin is zero.
  double Lx = 0.0;
  double Ly = 0.0;
};

PredatorExtinctionReport predator_extinction_report(const ModelParams& p, const NoiseSpec& n);

struct PersistenceReport {
  double Lx = 0.0;
  double Ly = 0.0;
  double Lz = 0.0;
  double predator_numerator = 0.0;  // a1 Lx + a2 Ly - delta - sigma3^2/2
  bool hypothesis_ok = false;
};

/// Asymptotic lower bounds on the prey and predator time averages.
/// Throws InvalidArgument naming the singular quantity when a prey margin
/// 1 - r_i + 2 r_i / K_i is zero or alpha3 is zero.
PersistenceReport persistence_report(const ModelParams& p, const NoiseSpec& n);

struct BoundednessReport {
  double B1 = 0.0;
  double B2 = 0.0;
  double B3 = 0.0;
  bool all_negative = false;
};

/// Ultimate-boundedness inequalities with the jump second moment taken as
/// q_i^2 * lambda.
BoundednessReport boundedness_check(const ModelParams& p, const NoiseSpec& n);

enum class Regime { ExtinctionAll, PredatorExtinctPreyPersist, AllPersist, Indeterminate };

std::string to_string(Regime r);

struct TraceEntry {
  std::string label;
  std::string expression;  // e.g. "max{c1,c2,c3} < 0"
  std::optional<double> value;
  bool holds = false;
};

/// Stable 64-bit digest of (p, n, d); ties ensemble results to reports.
std::uint64_t parameter_fingerprint(const ModelParams& p, const NoiseSpec& n, const DelaySpec& d);

struct RegimeReport {
  std::optional<ExtinctionCoefficients> extinction;
  PredatorExtinctionReport predator_extinction;
  std::optional<PersistenceReport> persistence;
  BoundednessReport boundedness;
  bool global_solution_ok = false;  // delta > alpha3

  bool extinction_hypothesis = false;
  bool predator_extinction_hypothesis = false;
  bool persistence_hypothesis = false;
  bool overlap = false;

  Regime predicted = Regime::Indeterminate;
  std::vector<TraceEntry> trace;
  std::uint64_t fingerprint = 0;
};

/// Evaluates every hypothesis and picks the predicted regime with
/// precedence ExtinctionAll > AllPersist > PredatorExtinctPreyPersist.
/// Sub-computation failures become trace entries.
RegimeReport classify(const ModelParams& p, const NoiseSpec& n, const DelaySpec& d);

/// Multi-line, human-readable rendering of the report.
std::string format_report(const RegimeReport& report);

}  // namespace sdpp
