#pragma once

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "sdpp/model.hpp"

namespace sdpp {

/// Noise-free delayed system solved by classical RK4 on a uniform grid.
struct ReferenceSolution {
  double dt = 0.0;
  int order = 4;
  std::vector<double> t;
  std::vector<State> states;
};

class OracleFault : public std::runtime_error {
 public:
  OracleFault(double time, const std::string& what);
  double time() const { return time_; }

 private:
  double time_;
};

/// Integrates the deterministic core over [0, t_end] with step dt.
///
/// Delayed arguments at RK stage times come from the history function
/// when they fall at or before t = 0, otherwise from cubic Lagrange
/// interpolation through four stored grid points. Stencils never straddle
/// a derivative breakpoint (t = 0 and sums of up to three delays), which
/// keeps fourth-order accuracy with a constant initial history.
/// Throws InvalidArgument unless each positive delay is a whole number of
/// steps, and OracleFault on a non-finite state.
ReferenceSolution solve_deterministic(const ModelParams& p, const DelaySpec& d, const HistorySpec& h,
                                      double dt, double t_end);

struct ConvergenceRow {
  double dt = 0.0;
  double max_error = 0.0;
  std::optional<double> order;  // log ratio against the previous row
};

struct ConvergenceTable {
  double reference_dt = 0.0;
  std::vector<ConvergenceRow> rows;
  /// Least-squares slope of log(error) against log(dt); absent for a
  /// single row or any zero error.
  std::optional<double> observed_order;
};

/// Produces states on the grid k * dt, k = 0..ceil(t_end/dt).
using GridSolver = std::function<std::vector<State>(double dt)>;

/// Max-norm error of `candidate` at each dt against a reference sampled
/// at reference_dt (each dt must be a whole multiple of it).
ConvergenceTable convergence_table(const GridSolver& candidate, std::span<const State> reference,
                                   double reference_dt, std::span<const double> dt_list);

/// Noise-off engine at each dt against the oracle at reference_dt
/// (0 picks the smallest dt divided by 10).
ConvergenceTable convergence_study(const ModelParams& p, const DelaySpec& d, const HistorySpec& h,
                                   std::span<const double> dt_list, double t_end,
                                   double reference_dt = 0.0);

/// Oracle at each dt against the oracle at reference_dt.
ConvergenceTable self_convergence(const ModelParams& p, const DelaySpec& d, const HistorySpec& h,
                                  std::span<const double> dt_list, double t_end, double reference_dt);

}  // namespace sdpp
