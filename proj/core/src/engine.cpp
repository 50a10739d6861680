#include "sdpp/engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sdpp/format.hpp"

namespace sdpp {

namespace {

std::string describe_fault(double time, const State& s, const StepDraws& draws, const std::string& what) {
  std::ostringstream msg;
  msg << what << " at t=" << format_short(time) << " (state x=" << format_short(s.x)
      << " y=" << format_short(s.y) << " z=" << format_short(s.z) << "; normals "
      << format_short(draws.normals[0]) << ", " << format_short(draws.normals[1]) << ", "
      << format_short(draws.normals[2]) << "; arrivals " << draws.arrivals[0] << ", "
      << draws.arrivals[1] << ", " << draws.arrivals[2] << ")";
  return msg.str();
}

bool is_multiple(double tau, double dt) {
  const double ratio = tau / dt;
  return std::abs(ratio - std::round(ratio)) <= 1e-9 * std::max(1.0, ratio);
}

}  // namespace

StepFault::StepFault(double time, const State& state, const StepDraws& draws, const std::string& what)
    : std::runtime_error(describe_fault(time, state, draws, what)),
      time_(time),
      state_(state),
      draws_(draws) {}

std::uint32_t sample_jumps(double lambda, double dt, RandomStream& rng) {
  return rng.poisson(lambda * dt);
}

StepDraws draw_step(const NoiseSpec& n, double dt, RandomStream& rng) {
  StepDraws draws;
  for (auto& z : draws.normals) z = rng.gaussian();
  if (n.lambda > 0.0) {
    if (n.clock == JumpClock::Shared) {
      draws.arrivals.fill(sample_jumps(n.lambda, dt, rng));
    } else {
      for (auto& a : draws.arrivals) a = sample_jumps(n.lambda, dt, rng);
    }
  }
  return draws;
}

DelayedState delayed_taps(const HistoryBuffer& b, const DelaySpec& d) {
  const double t = b.back_time();
  const State s1 = delayed_lookup(b, t, d.tau1);
  const State s2 = delayed_lookup(b, t, d.tau2);
  const State s3 = delayed_lookup(b, t, d.tau3);
  return DelayedState{s1.x, s2.y, s3.x, s3.y};
}

StepOutcome euler_maruyama_update(const State& s, const DelayedState& delayed, const ModelParams& p,
                                  const NoiseSpec& n, double dt, double positivity_floor,
                                  const StepDraws& draws, double time) {
  Rates f;
  try {
    f = drift(s, delayed, p);
  } catch (const InvalidArgument& e) {
    throw StepFault(time, s, draws, e.what());
  }
  const Rates g = diffusion(s, n);
  const double sqrt_dt = std::sqrt(dt);
  const double expected_arrivals = n.lambda * dt;

  StepOutcome out;
  for (int k = 0; k < 3; ++k) {
    const double compensated = static_cast<double>(draws.arrivals[k]) - expected_arrivals;
    double next = s[k] + f[k] * dt + g[k] * sqrt_dt * draws.normals[k] + n.mark(k) * s[k] * compensated;
    if (!std::isfinite(next)) {
      throw StepFault(time, s, draws, std::string("non-finite ") + "xyz"[k] + " increment");
    }
    if (next < positivity_floor && s[k] != 0.0) {
      next = positivity_floor;
      ++out.floor_hits;
    } else if (s[k] == 0.0) {
      next = 0.0;
    }
    out.state[k] = next;
    if (draws.arrivals[k] > 0) {
      out.jumped.insert(k);
      out.arrivals = std::max(out.arrivals, draws.arrivals[k]);
    }
  }
  return out;
}

StepOutcome step(const HistoryBuffer& b, const ModelParams& p, const NoiseSpec& n,
                 const DelaySpec& d, const StepConfig& c, RandomStream& rng) {
  const DelayedState taps = delayed_taps(b, d);
  const StepDraws draws = draw_step(n, c.dt, rng);
  return euler_maruyama_update(b.back(), taps, p, n, c.dt, c.positivity_floor, draws, b.back_time());
}

bool delays_on_grid(const DelaySpec& d, double dt) {
  for (double tau : {d.tau1, d.tau2, d.tau3}) {
    if (tau > 0.0 && !is_multiple(tau, dt)) return false;
  }
  return true;
}

SnappedDelays snap_delays(const DelaySpec& d, double dt) {
  SnappedDelays out{d, {}};
  const char* names[] = {"tau1", "tau2", "tau3"};
  double* taus[] = {&out.delays.tau1, &out.delays.tau2, &out.delays.tau3};
  for (int i = 0; i < 3; ++i) {
    double& tau = *taus[i];
    if (!(tau > 0.0)) continue;
    const double steps = std::round(tau / dt);
    const double snapped = std::max(1.0, steps) * dt;
    if (is_multiple(tau, dt)) {
      tau = steps * dt;
      continue;
    }
    out.warnings.push_back(std::string(names[i]) + " = " + format_short(tau) +
                           " is not a multiple of dt = " + format_short(dt) + "; snapped to " +
                           format_short(snapped));
    tau = snapped;
  }
  return out;
}

void check_step_config(const StepConfig& c, const DelaySpec& d) {
  if (!(c.dt > 0.0) || !std::isfinite(c.dt)) throw InvalidArgument("dt must be positive and finite");
  if (!(c.t_end > 0.0) || !std::isfinite(c.t_end)) throw InvalidArgument("t_end must be positive and finite");
  if (!(c.positivity_floor > 0.0)) throw InvalidArgument("positivity_floor must be positive");
  for (double tau : {d.tau1, d.tau2, d.tau3}) {
    if (tau > 0.0 && c.dt > tau * (1.0 + 1e-12)) {
      throw InvalidArgument("dt = " + format_short(c.dt) + " exceeds delay " + format_short(tau) +
                            "; delays must be resolvable on the grid");
    }
  }
}

std::size_t step_count(const StepConfig& c) {
  return static_cast<std::size_t>(std::max(1.0, std::ceil(c.t_end / c.dt - 1e-9)));
}

Trajectory simulate(const ModelParams& p, const NoiseSpec& n, const DelaySpec& d,
                    const HistorySpec& h, const StepConfig& c, std::uint64_t replicate) {
  require_structurally_valid(p, n, d);
  check_step_config(c, d);

  SnappedDelays snapped = snap_delays(d, c.dt);
  HistoryBuffer buffer = init_history(h, snapped.delays, c);
  RandomStream rng(c.seed, replicate);

  const std::size_t steps = step_count(c);
  Trajectory traj;
  traj.dt = c.dt;
  traj.delays = snapped.delays;
  traj.seed = c.seed;
  traj.replicate = replicate;
  traj.warnings = std::move(snapped.warnings);
  traj.t.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  traj.t.push_back(0.0);
  traj.states.push_back(buffer.back());

  for (std::size_t k = 0; k < steps; ++k) {
    const StepOutcome out = step(buffer, p, n, snapped.delays, c, rng);
    const double t_next = static_cast<double>(k + 1) * c.dt;
    buffer.push(out.state);
    traj.t.push_back(t_next);
    traj.states.push_back(out.state);
    traj.floor_hits += out.floor_hits;
    if (!out.jumped.empty()) traj.jumps.push_back(JumpEvent{t_next, out.jumped, out.arrivals});
  }
  return traj;
}

}  // namespace sdpp
