#include "sdpp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>

#include "sdpp/engine.hpp"
#include "sdpp/format.hpp"

namespace sdpp {

namespace {

std::int64_t whole_steps(double tau, double dt, const char* name) {
  if (!(tau >= 0.0)) throw InvalidArgument(std::string(name) + " must be nonnegative");
  const double ratio = tau / dt;
  const double steps = std::round(ratio);
  if (std::abs(ratio - steps) > 1e-9 * std::max(1.0, ratio)) {
    throw InvalidArgument(std::string(name) + " = " + format_short(tau) +
                          " is not a whole number of steps of dt = " + format_short(dt));
  }
  return static_cast<std::int64_t>(steps);
}

std::size_t grid_steps(double t_end, double dt) {
  return static_cast<std::size_t>(std::max(1.0, std::ceil(t_end / dt - 1e-9)));
}

/// Grid indices where the solution (or one of its first three
/// derivatives) may jump: 0 and sums of up to three positive lags.
std::vector<std::int64_t> breakpoints(const std::int64_t lags[3], std::int64_t last) {
  std::set<std::int64_t> points{0};
  std::set<std::int64_t> frontier{0};
  for (int depth = 0; depth < 3; ++depth) {
    std::set<std::int64_t> next;
    for (std::int64_t b : frontier) {
      for (int i = 0; i < 3; ++i) {
        if (lags[i] > 0 && b + lags[i] <= last) next.insert(b + lags[i]);
      }
    }
    points.insert(next.begin(), next.end());
    frontier = std::move(next);
  }
  return {points.begin(), points.end()};
}

class DelayedSolver {
 public:
  DelayedSolver(const ModelParams& p, const DelaySpec& d, const HistorySpec& h, double dt, double t_end)
      : p_(p), h_(h), dt_(dt), steps_(grid_steps(t_end, dt)) {
    lags_[0] = whole_steps(d.tau1, dt, "tau1");
    lags_[1] = whole_steps(d.tau2, dt, "tau2");
    lags_[2] = whole_steps(d.tau3, dt, "tau3");
    breaks_ = breakpoints(lags_, static_cast<std::int64_t>(steps_));
  }

  ReferenceSolution run() {
    states_.clear();
    states_.reserve(steps_ + 1);
    states_.push_back(h_.at(0.0));
    for (std::size_t k = 0; k < steps_; ++k) {
      const State& y = states_.back();
      const double kk = static_cast<double>(k);
      Rates k1, k2, k3, k4;
      try {
        k1 = rhs(kk, y);
        k2 = rhs(kk + 0.5, axpy(y, 0.5 * dt_, k1));
        k3 = rhs(kk + 0.5, axpy(y, 0.5 * dt_, k2));
        k4 = rhs(kk + 1.0, axpy(y, dt_, k3));
      } catch (const InvalidArgument& e) {
        throw OracleFault(kk * dt_, e.what());
      }
      State next;
      for (int s = 0; s < 3; ++s) {
        next[s] = y[s] + dt_ / 6.0 * (k1[s] + 2.0 * k2[s] + 2.0 * k3[s] + k4[s]);
        if (!std::isfinite(next[s])) {
          throw OracleFault(static_cast<double>(k + 1) * dt_,
                            std::string("non-finite ") + "xyz"[s] + " in reference solution");
        }
      }
      states_.push_back(next);
    }
    ReferenceSolution out;
    out.dt = dt_;
    out.t.reserve(states_.size());
    for (std::size_t k = 0; k < states_.size(); ++k) out.t.push_back(static_cast<double>(k) * dt_);
    out.states = std::move(states_);
    return out;
  }

 private:
  static State axpy(const State& y, double a, const Rates& f) {
    return State{y.x + a * f.x, y.y + a * f.y, y.z + a * f.z};
  }

  Rates rhs(double u, const State& y) const {
    const DelayedState taps{
        tap(u, 0, y, 0),
        tap(u, 1, y, 1),
        tap(u, 2, y, 0),
        tap(u, 2, y, 1),
    };
    return drift(y, taps, p_);
  }

  /// Species `s` at grid position u - lag_i, where u is in units of dt.
  double tap(double u, int delay, const State& stage, int s) const {
    if (lags_[delay] == 0) return stage[s];
    const double v = u - static_cast<double>(lags_[delay]);
    if (v <= 0.0) return h_.at(v * dt_)[s];
    const double j_floor = std::floor(v);
    const auto j = static_cast<std::int64_t>(j_floor);
    if (v == j_floor) return states_[static_cast<std::size_t>(j)][s];
    return interpolate(v, j, s);
  }

  double interpolate(double v, std::int64_t j, int s) const {
    const auto newest = static_cast<std::int64_t>(states_.size()) - 1;
    auto above = std::lower_bound(breaks_.begin(), breaks_.end(), j + 1);
    const std::int64_t hi = std::min(above == breaks_.end() ? newest : *above, newest);
    const std::int64_t lo = *(std::upper_bound(breaks_.begin(), breaks_.end(), j) - 1);

    std::int64_t first = j - 1;
    std::int64_t count = 4;
    if (hi - lo < 3) {
      first = lo;
      count = hi - lo + 1;
    } else {
      first = std::clamp(first, lo, hi - 3);
    }
    double result = 0.0;
    for (std::int64_t a = first; a < first + count; ++a) {
      double weight = 1.0;
      for (std::int64_t b = first; b < first + count; ++b) {
        if (b != a) weight *= (v - static_cast<double>(b)) / static_cast<double>(a - b);
      }
      result += weight * states_[static_cast<std::size_t>(a)][s];
    }
    return result;
  }

  const ModelParams& p_;
  const HistorySpec& h_;
  double dt_;
  std::size_t steps_;
  std::int64_t lags_[3]{};
  std::vector<std::int64_t> breaks_;
  std::vector<State> states_;
};

double max_error(std::span<const State> candidate, std::span<const State> reference, std::size_t ratio) {
  double worst = 0.0;
  for (std::size_t k = 0; k < candidate.size(); ++k) {
    const std::size_t r = k * ratio;
    if (r >= reference.size()) throw InvalidArgument("reference solution shorter than candidate");
    for (int s = 0; s < 3; ++s) worst = std::max(worst, std::abs(candidate[k][s] - reference[r][s]));
  }
  return worst;
}

}  // namespace

OracleFault::OracleFault(double time, const std::string& what)
    : std::runtime_error(what + " at t=" + format_short(time)), time_(time) {}

ReferenceSolution solve_deterministic(const ModelParams& p, const DelaySpec& d, const HistorySpec& h,
                                      double dt, double t_end) {
  if (!(dt > 0.0) || !(t_end > 0.0)) throw InvalidArgument("dt and t_end must be positive");
  if (!h.covers(d.tau_max())) throw InvalidArgument("initial history does not span the delay window");
  return DelayedSolver(p, d, h, dt, t_end).run();
}

ConvergenceTable convergence_table(const GridSolver& candidate, std::span<const State> reference,
                                   double reference_dt, std::span<const double> dt_list) {
  ConvergenceTable table;
  table.reference_dt = reference_dt;
  for (std::size_t i = 0; i < dt_list.size(); ++i) {
    const double dt = dt_list[i];
    if (i > 0 && !(dt < dt_list[i - 1])) throw InvalidArgument("dt_list must be strictly descending");
    const double ratio = dt / reference_dt;
    const double whole = std::round(ratio);
    if (whole < 1.0 || std::abs(ratio - whole) > 1e-9 * ratio) {
      throw InvalidArgument("dt = " + format_short(dt) + " is not a multiple of the reference step " +
                            format_short(reference_dt));
    }
    const std::vector<State> states = candidate(dt);
    ConvergenceRow row{dt, max_error(states, reference, static_cast<std::size_t>(whole)), std::nullopt};
    if (i > 0) {
      const auto& prev = table.rows.back();
      if (prev.max_error > 0.0 && row.max_error > 0.0) {
        row.order = std::log(prev.max_error / row.max_error) / std::log(prev.dt / row.dt);
      }
    }
    table.rows.push_back(row);
  }

  const bool fit = table.rows.size() >= 2 &&
                   std::all_of(table.rows.begin(), table.rows.end(), [](const auto& r) { return r.max_error > 0.0; });
  if (fit) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double m = static_cast<double>(table.rows.size());
    for (const auto& r : table.rows) {
      const double x = std::log(r.dt);
      const double y = std::log(r.max_error);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    table.observed_order = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  }
  return table;
}

ConvergenceTable convergence_study(const ModelParams& p, const DelaySpec& d, const HistorySpec& h,
                                   std::span<const double> dt_list, double t_end, double reference_dt) {
  if (dt_list.empty()) throw InvalidArgument("dt_list is empty");
  if (reference_dt <= 0.0) reference_dt = *std::min_element(dt_list.begin(), dt_list.end()) / 10.0;
  const ReferenceSolution reference = solve_deterministic(p, d, h, reference_dt, t_end);

  NoiseSpec quiet;
  quiet.lambda = 0.0;
  auto engine = [&](double dt) {
    StepConfig c;
    c.dt = dt;
    c.t_end = t_end;
    return simulate(p, quiet, d, h, c).states;
  };
  return convergence_table(engine, reference.states, reference_dt, dt_list);
}

ConvergenceTable self_convergence(const ModelParams& p, const DelaySpec& d, const HistorySpec& h,
                                  std::span<const double> dt_list, double t_end, double reference_dt) {
  const ReferenceSolution reference = solve_deterministic(p, d, h, reference_dt, t_end);
  auto oracle = [&](double dt) { return solve_deterministic(p, d, h, dt, t_end).states; };
  return convergence_table(oracle, reference.states, reference_dt, dt_list);
}

}  // namespace sdpp
