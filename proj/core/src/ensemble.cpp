#include "sdpp/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <thread>

#include "sdpp/format.hpp"

namespace sdpp {

namespace {

constexpr std::size_t kMaxStoredStates = 20'000'000;

struct ReplicateResult {
  std::vector<State> sampled;  // states on the statistics grid
  State terminal_average;
  std::size_t floor_hits = 0;
  double min_component = 0.0;
};

std::vector<std::size_t> statistics_grid(std::size_t steps, std::size_t max_points) {
  const std::size_t budget = std::max<std::size_t>(max_points, 2);
  const std::size_t stride = std::max<std::size_t>(1, (steps + budget - 2) / (budget - 1));
  std::vector<std::size_t> grid;
  for (std::size_t k = 0; k < steps; k += stride) grid.push_back(k);
  grid.push_back(steps);
  return grid;
}

void check_permutation(const std::vector<std::size_t>& order, std::size_t n) {
  std::vector<bool> seen(n, false);
  if (order.size() != n) throw InvalidArgument("execution_order must list every replicate once");
  for (std::size_t k : order) {
    if (k >= n || seen[k]) throw InvalidArgument("execution_order must be a permutation");
    seen[k] = true;
  }
}

}  // namespace

EnsembleFault::EnsembleFault(std::size_t replicate, const std::string& what)
    : std::runtime_error("replicate " + std::to_string(replicate) + ": " + what), replicate_(replicate) {}

State EnsembleStats::median_terminal_average() const {
  State out;
  std::vector<double> values(terminal_averages.size());
  for (int s = 0; s < 3; ++s) {
    for (std::size_t k = 0; k < values.size(); ++k) values[k] = terminal_averages[k][s];
    std::sort(values.begin(), values.end());
    out[s] = sorted_quantile(values, 0.5);
  }
  return out;
}

std::size_t EnsembleStats::replicates_with_floor_hits() const {
  return static_cast<std::size_t>(std::count_if(floor_hits_per_replicate.begin(),
                                                floor_hits_per_replicate.end(),
                                                [](std::size_t h) { return h > 0; }));
}

double sorted_quantile(std::span<const double> sorted, double prob) {
  if (sorted.empty()) throw InvalidArgument("quantile of an empty sample");
  const double pos = prob * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double w = pos - static_cast<double>(lo);
  if (w == 0.0) return sorted[lo];
  return sorted[lo] + w * (sorted[hi] - sorted[lo]);
}

EnsembleStats run_ensemble(const ModelParams& p, const NoiseSpec& n, const DelaySpec& d,
                           const HistorySpec& h, const StepConfig& c, std::size_t n_reps,
                           std::uint64_t base_seed, const EnsembleOptions& options) {
  if (n_reps == 0) throw InvalidArgument("n_reps must be at least 1");
  require_structurally_valid(p, n, d);
  check_step_config(c, d);

  std::vector<std::size_t> order = options.execution_order;
  if (order.empty()) {
    order.resize(n_reps);
    std::iota(order.begin(), order.end(), std::size_t{0});
  }
  check_permutation(order, n_reps);

  StepConfig config = c;
  config.seed = base_seed;
  const std::size_t points = std::min(options.max_grid_points, std::max<std::size_t>(2, kMaxStoredStates / n_reps));
  const std::vector<std::size_t> grid = statistics_grid(step_count(config), points);

  std::vector<ReplicateResult> results(n_reps);
  std::vector<std::exception_ptr> errors(n_reps);

  auto run_one = [&](std::size_t rep) {
    try {
      Trajectory traj = simulate(p, n, d, h, config, rep);
      ReplicateResult& r = results[rep];
      r.sampled.reserve(grid.size());
      for (std::size_t k : grid) r.sampled.push_back(traj.states[k]);
      r.terminal_average = terminal_time_average(traj.t, traj.states);
      r.floor_hits = traj.floor_hits;
      double lo = std::numeric_limits<double>::infinity();
      for (const State& s : traj.states) lo = std::min({lo, s.x, s.y, s.z});
      r.min_component = lo;
    } catch (...) {
      errors[rep] = std::current_exception();
    }
  };

  std::size_t threads = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
  threads = std::clamp<std::size_t>(threads, 1, n_reps);
  if (threads == 1) {
    for (std::size_t rep : order) run_one(rep);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < n_reps; i = next.fetch_add(1)) run_one(order[i]);
      });
    }
  }

  // Report the lowest failing replicate so faults are deterministic too.
  for (std::size_t rep = 0; rep < n_reps; ++rep) {
    if (!errors[rep]) continue;
    try {
      std::rethrow_exception(errors[rep]);
    } catch (const std::exception& e) {
      throw EnsembleFault(rep, e.what());
    }
  }

  EnsembleStats stats;
  stats.n_replicates = n_reps;
  stats.fingerprint = parameter_fingerprint(p, n, d);
  stats.t.reserve(grid.size());
  for (std::size_t k : grid) stats.t.push_back(static_cast<double>(k) * config.dt);
  stats.min_component = std::numeric_limits<double>::infinity();
  for (const auto& r : results) {
    stats.terminal_averages.push_back(r.terminal_average);
    stats.floor_hits_per_replicate.push_back(r.floor_hits);
    stats.floor_hits += r.floor_hits;
    stats.min_component = std::min(stats.min_component, r.min_component);
  }

  std::vector<double> values(n_reps);
  for (int s = 0; s < 3; ++s) {
    SpeciesBand& band = stats.bands[s];
    for (auto* column : {&band.mean, &band.sd, &band.q025, &band.q500, &band.q975}) {
      column->resize(grid.size());
    }
    for (std::size_t g = 0; g < grid.size(); ++g) {
      double mean = 0.0;
      double m2 = 0.0;
      for (std::size_t rep = 0; rep < n_reps; ++rep) {
        const double v = results[rep].sampled[g][s];
        values[rep] = v;
        const double delta = v - mean;
        mean += delta / static_cast<double>(rep + 1);
        m2 += delta * (v - mean);
      }
      std::sort(values.begin(), values.end());
      band.mean[g] = std::clamp(mean, values.front(), values.back());
      band.sd[g] = n_reps > 1 ? std::sqrt(m2 / static_cast<double>(n_reps - 1)) : 0.0;
      band.q025[g] = sorted_quantile(values, 0.025);
      band.q500[g] = sorted_quantile(values, 0.5);
      band.q975[g] = sorted_quantile(values, 0.975);
    }
  }
  return stats;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::NotCheckable: return "NOT CHECKABLE";
  }
  return "NOT CHECKABLE";
}

VerificationOutcome verify_regime(const EnsembleStats& stats, const RegimeReport& report,
                                  const ToleranceSpec& tol) {
  if (stats.fingerprint != report.fingerprint) {
    throw InvalidArgument("ensemble statistics and regime report were computed from different parameters");
  }
  VerificationOutcome out;
  out.regime = report.predicted;
  out.medians = stats.median_terminal_average();
  if (report.predicted == Regime::Indeterminate) {
    out.lines.push_back("no regime hypothesis holds; nothing to compare");
    return out;
  }

  bool pass = true;
  const char* names[] = {"<x(T)>", "<y(T)>", "<z(T)>"};
  auto below = [&](int s) {
    const bool ok = out.medians[s] < tol.extinction;
    out.lines.push_back(std::string("median ") + names[s] + " = " + format_short(out.medians[s]) + " < " +
                        format_short(tol.extinction) + (ok ? " ok" : " violated"));
    pass = pass && ok;
  };
  auto above = [&](int s, double bound) {
    const double threshold = (1.0 - tol.slack) * bound;
    const bool ok = out.medians[s] >= threshold;
    out.lines.push_back(std::string("median ") + names[s] + " = " + format_short(out.medians[s]) +
                        " >= " + format_short(threshold) + " (bound " + format_short(bound) + ")" +
                        (ok ? " ok" : " violated"));
    pass = pass && ok;
  };

  switch (report.predicted) {
    case Regime::ExtinctionAll:
      for (int s = 0; s < 3; ++s) below(s);
      break;
    case Regime::PredatorExtinctPreyPersist:
      below(2);
      above(0, report.predator_extinction.Lx);
      above(1, report.predator_extinction.Ly);
      break;
    case Regime::AllPersist:
      above(0, report.persistence->Lx);
      above(1, report.persistence->Ly);
      above(2, report.persistence->Lz);
      break;
    case Regime::Indeterminate:
      break;
  }
  out.verdict = pass ? Verdict::Pass : Verdict::Fail;
  return out;
}

}  // namespace sdpp
