#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdpp/analysis.hpp"
#include "sdpp/engine.hpp"
#include "sdpp/model.hpp"

namespace sdpp {

/// Finite-horizon surrogate thresholds for the asymptotic regime claims.
struct ToleranceSpec {
  double extinction = 0.05;  // population units
  double slack = 0.2;        // fraction of a lower bound that may be missed
};

/// Per-gridpoint summary of one species across replicates.
struct SpeciesBand {
  std::vector<double> mean;
  std::vector<double> sd;
  std::vector<double> q025;
  std::vector<double> q500;
  std::vector<double> q975;
};

struct EnsembleStats {
  std::size_t n_replicates = 0;
  std::vector<double> t;  // statistics grid, a subsample of the step grid
  std::array<SpeciesBand, 3> bands;
  std::vector<State> terminal_averages;  // <x(T)>, <y(T)>, <z(T)> per replicate
  std::vector<std::size_t> floor_hits_per_replicate;
  std::size_t floor_hits = 0;
  double min_component = 0.0;  // smallest state component seen at any step of any replicate
  std::uint64_t fingerprint = 0;

  State median_terminal_average() const;
  std::size_t replicates_with_floor_hits() const;
};

struct EnsembleOptions {
  /// Worker threads; 0 picks std::thread::hardware_concurrency().
  std::size_t threads = 0;
  /// Upper bound on statistics grid points (the final time is always kept).
  /// Very large ensembles are thinned further so that at most 2e7 states
  /// are held across all replicates.
  std::size_t max_grid_points = 2001;
  /// Replicate execution order; empty means 0, 1, ..., n_reps - 1. Must be
  /// a permutation. Results do not depend on it.
  std::vector<std::size_t> execution_order;
};

/// A replicate failed; carries the replicate index.
class EnsembleFault : public std::runtime_error {
 public:
  EnsembleFault(std::size_t replicate, const std::string& what);
  std::size_t replicate() const { return replicate_; }

 private:
  std::size_t replicate_;
};

/// Linear-interpolation (type 7) quantile of an ascending-sorted sample.
double sorted_quantile(std::span<const double> sorted, double prob);

/// Runs `n_reps` replicates; replicate k draws from the stream
/// (base_seed, k). Aggregation walks replicates in index order, so the
/// output is bit-identical for any execution order or thread count.
EnsembleStats run_ensemble(const ModelParams& p, const NoiseSpec& n, const DelaySpec& d,
                           const HistorySpec& h, const StepConfig& c, std::size_t n_reps,
                           std::uint64_t base_seed, const EnsembleOptions& options = {});

enum class Verdict { Pass, Fail, NotCheckable };

std::string to_string(Verdict v);

struct VerificationOutcome {
  Verdict verdict = Verdict::NotCheckable;
  Regime regime = Regime::Indeterminate;
  State medians;
  std::vector<std::string> lines;  // one per compared quantity
};

/// Compares median terminal time averages against the predicted regime.
/// Throws InvalidArgument when stats and report come from different parameters.
VerificationOutcome verify_regime(const EnsembleStats& stats, const RegimeReport& report,
                                  const ToleranceSpec& tol = {});

}  // namespace sdpp
