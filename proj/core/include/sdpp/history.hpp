#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "sdpp/model.hpp"

namespace sdpp {

/// Raised when a delayed value is requested before the buffered window.
class HistoryLookupError : public std::out_of_range {
 public:
  HistoryLookupError(double requested, double earliest);

  double requested_time() const { return requested_; }
  double earliest_time() const { return earliest_; }

 private:
  double requested_;
  double earliest_;
};

/// Fixed-capacity ring of grid-aligned states.
///
/// Sample i sits at time index * dt for an integer grid index, so
/// grid-aligned lookups return stored values bit-for-bit. Once full, each
/// push evicts the oldest sample; the window always spans
/// `lag_capacity` steps.
class HistoryBuffer {
 public:
  /// Holds lag_capacity + 1 samples; the first push lands on grid index
  /// `first_index`.
  HistoryBuffer(double dt, std::size_t lag_capacity, std::int64_t first_index);

  void push(const State& s);

  double dt() const { return dt_; }
  std::size_t size() const { return count_; }
  std::size_t capacity() const { return ring_.size(); }
  bool empty() const { return count_ == 0; }

  std::int64_t front_index() const { return back_index_ - static_cast<std::int64_t>(count_) + 1; }
  std::int64_t back_index() const { return back_index_; }
  double front_time() const { return static_cast<double>(front_index()) * dt_; }
  double back_time() const { return static_cast<double>(back_index_) * dt_; }

  const State& back() const { return lagged(0); }
  /// Sample `steps` grid points before the newest; throws HistoryLookupError.
  const State& lagged(std::size_t steps) const;
  /// Sample at an absolute grid index; throws HistoryLookupError.
  const State& at_index(std::int64_t index) const;

  /// Value at time t: stored sample when grid-aligned, else linear
  /// interpolation between the neighbouring samples.
  State at(double t) const;

 private:
  double dt_;
  std::vector<State> ring_;
  std::size_t head_ = 0;  // slot of the newest sample
  std::size_t count_ = 0;
  std::int64_t back_index_;
};

struct StepConfig;

/// Buffer filled at every grid point of [-tau_max, 0] from the initial
/// history. Table histories are linearly interpolated; a table that does
/// not span the window is rejected with InvalidArgument.
HistoryBuffer init_history(const HistorySpec& h, const DelaySpec& d, const StepConfig& c);

/// State at t - tau from the buffer.
State delayed_lookup(const HistoryBuffer& b, double t, double tau);

}  // namespace sdpp
