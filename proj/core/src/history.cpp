#include "sdpp/history.hpp"

#include <cmath>

#include "sdpp/engine.hpp"
#include "sdpp/format.hpp"

namespace sdpp {

HistoryLookupError::HistoryLookupError(double requested, double earliest)
    : std::out_of_range("delayed lookup at t=" + format_short(requested) +
                        " outside buffered window starting at t=" + format_short(earliest)),
      requested_(requested),
      earliest_(earliest) {}

HistoryBuffer::HistoryBuffer(double dt, std::size_t lag_capacity, std::int64_t first_index)
    : dt_(dt), ring_(lag_capacity + 1), head_(ring_.size() - 1), back_index_(first_index - 1) {
  if (!(dt > 0.0)) throw InvalidArgument("history buffer needs dt > 0");
}

void HistoryBuffer::push(const State& s) {
  head_ = (head_ + 1) % ring_.size();
  ring_[head_] = s;
  if (count_ < ring_.size()) ++count_;
  ++back_index_;
}

const State& HistoryBuffer::lagged(std::size_t steps) const {
  if (steps >= count_) {
    throw HistoryLookupError(static_cast<double>(back_index_ - static_cast<std::int64_t>(steps)) * dt_,
                             empty() ? back_time() : front_time());
  }
  return ring_[(head_ + ring_.size() - steps) % ring_.size()];
}

const State& HistoryBuffer::at_index(std::int64_t index) const {
  if (index > back_index_ || index < front_index()) {
    throw HistoryLookupError(static_cast<double>(index) * dt_, empty() ? back_time() : front_time());
  }
  return lagged(static_cast<std::size_t>(back_index_ - index));
}

State HistoryBuffer::at(double t) const {
  const double u = t / dt_;
  const double nearest = std::round(u);
  if (std::abs(u - nearest) <= 1e-9 * std::max(1.0, std::abs(u))) {
    return at_index(static_cast<std::int64_t>(nearest));
  }
  const auto lo = static_cast<std::int64_t>(std::floor(u));
  if (lo < front_index() || lo + 1 > back_index_) {
    throw HistoryLookupError(t, empty() ? back_time() : front_time());
  }
  const State& a = at_index(lo);
  const State& b = at_index(lo + 1);
  const double w = u - static_cast<double>(lo);
  State out;
  for (int k = 0; k < 3; ++k) out[k] = a[k] + w * (b[k] - a[k]);
  return out;
}

HistoryBuffer init_history(const HistorySpec& h, const DelaySpec& d, const StepConfig& c) {
  if (!(c.dt > 0.0)) throw InvalidArgument("dt must be positive");
  const double tau_max = d.tau_max();
  if (!h.covers(tau_max)) {
    throw InvalidArgument("initial history does not span [-" + format_short(tau_max) + ", 0]");
  }
  const auto lags = static_cast<std::size_t>(std::ceil(tau_max / c.dt - 1e-9));
  HistoryBuffer buffer(c.dt, lags, -static_cast<std::int64_t>(lags));
  for (std::size_t i = 0; i <= lags; ++i) {
    const auto index = static_cast<std::int64_t>(i) - static_cast<std::int64_t>(lags);
    // Clamp the oldest node into the table span when tau_max is not a
    // whole number of steps.
    const double t = std::max(static_cast<double>(index) * c.dt, -tau_max);
    buffer.push(h.at(index == 0 ? 0.0 : t));
  }
  return buffer;
}

State delayed_lookup(const HistoryBuffer& b, double t, double tau) {
  if (tau == 0.0 && t == b.back_time()) return b.back();
  return b.at(t - tau);
}

}  // namespace sdpp
