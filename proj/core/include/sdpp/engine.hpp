#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdpp/history.hpp"
#include "sdpp/model.hpp"
#include "sdpp/random.hpp"

namespace sdpp {

struct StepConfig {
  double dt = 1e-2;     // day
  double t_end = 200.0;  // day
  std::uint64_t seed = 0;
  double positivity_floor = 1e-12;
};

/// Random inputs consumed by one Euler-Maruyama increment.
struct StepDraws {
  std::array<double, 3> normals{};
  /// Poisson arrivals seen by each species this step; equal entries under
  /// a shared clock.
  std::array<std::uint32_t, 3> arrivals{};
};

/// Raised when an increment produces a non-finite value.
class StepFault : public std::runtime_error {
 public:
  StepFault(double time, const State& state, const StepDraws& draws, const std::string& what);

  double time() const { return time_; }
  const State& state() const { return state_; }
  const StepDraws& draws() const { return draws_; }

 private:
  double time_;
  State state_;
  StepDraws draws_;
};

struct StepOutcome {
  State state;
  SpeciesSet jumped;
  std::uint32_t arrivals = 0;  // largest per-species arrival count this step
  std::uint32_t floor_hits = 0;
};

/// Poisson(lambda * dt) arrival count.
std::uint32_t sample_jumps(double lambda, double dt, RandomStream& rng);

/// Draws the three normals, then the arrivals for the configured clock.
StepDraws draw_step(const NoiseSpec& n, double dt, RandomStream& rng);

/// Delay taps x(t-tau1), y(t-tau2), x(t-tau3), y(t-tau3) at the buffer's
/// newest time.
DelayedState delayed_taps(const HistoryBuffer& b, const DelaySpec& d);

/// One increment with given draws:
///   S'_i = S_i + f_i dt + g_i sqrt(dt) Z_i + q_i S_i (dN_i - lambda dt)
/// Components that fall below `positivity_floor` are clamped to it and
/// counted, except that a component already at exactly zero stays zero.
/// `time` only labels faults.
StepOutcome euler_maruyama_update(const State& s, const DelayedState& delayed, const ModelParams& p,
                                  const NoiseSpec& n, double dt, double positivity_floor,
                                  const StepDraws& draws, double time = 0.0);

/// Draws randomness and advances the newest buffered state by c.dt.
StepOutcome step(const HistoryBuffer& b, const ModelParams& p, const NoiseSpec& n,
                 const DelaySpec& d, const StepConfig& c, RandomStream& rng);

/// Delays rounded to whole multiples of dt, with one warning per change.
struct SnappedDelays {
  DelaySpec delays;
  std::vector<std::string> warnings;
};
SnappedDelays snap_delays(const DelaySpec& d, double dt);

/// True when every positive tau is a whole number of dt steps.
bool delays_on_grid(const DelaySpec& d, double dt);

/// Throws InvalidArgument unless dt > 0, t_end > 0, the floor is positive,
/// and dt does not exceed the smallest positive delay.
void check_step_config(const StepConfig& c, const DelaySpec& d);

struct JumpEvent {
  double t = 0.0;  // end of the step containing the arrival(s)
  SpeciesSet species;
  std::uint32_t arrivals = 0;

  friend bool operator==(const JumpEvent&, const JumpEvent&) = default;
};

struct Trajectory {
  double dt = 0.0;
  DelaySpec delays;  // after snapping to the grid
  std::uint64_t seed = 0;
  std::uint64_t replicate = 0;
  std::vector<double> t;
  std::vector<State> states;
  std::vector<JumpEvent> jumps;
  std::size_t floor_hits = 0;
  std::vector<std::string> warnings;

  std::size_t size() const { return states.size(); }
};

/// Integrates one sample path over [0, c.t_end] on the grid k * c.dt.
///
/// The random stream is derived from (c.seed, replicate); identical inputs
/// give bit-identical trajectories. Delays that are not multiples of dt
/// are snapped (see Trajectory::warnings). StepFault propagates with the
/// failing time.
Trajectory simulate(const ModelParams& p, const NoiseSpec& n, const DelaySpec& d,
                    const HistorySpec& h, const StepConfig& c, std::uint64_t replicate = 0);

/// Number of steps needed to reach t_end.
std::size_t step_count(const StepConfig& c);

}  // namespace sdpp
