#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sdpp {

/// Raised when an input violates a documented precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Biological rates of the two-prey/one-predator system.
///
/// Units: growth and death rates in 1/day, carrying capacities in
/// population units, interaction rates per population per day, and
/// `beta` per population squared per day.
struct ModelParams {
  double r1 = 0.0;      // intrinsic growth rate of prey x
  double r2 = 0.0;      // intrinsic growth rate of prey y
  double K1 = 1.0;      // carrying capacity of x
  double K2 = 1.0;      // carrying capacity of y
  double alpha1 = 0.0;  // predation rate on x
  double alpha2 = 0.0;  // predation rate on y
  double alpha3 = 0.0;  // intra-species competition among predators
  double beta = 0.0;    // cooperation of x and y against z
  double delta = 0.0;   // predator death rate
  double a1 = 0.0;      // conversion of consumed x into predators
  double a2 = 0.0;      // conversion of consumed y into predators

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Whether the three species share one Poisson clock or draw independently.
enum class JumpClock : std::uint8_t { Shared, Independent };

/// Brownian intensities and compound-Poisson jump marks.
///
/// A jump multiplies species i by (1 + q_i); arrivals happen at rate
/// `lambda` events/day. The compensated jump increment over a step is
/// q_i * S_i * (dN - lambda * dt).
struct NoiseSpec {
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  double sigma3 = 0.0;
  double q1 = 0.0;
  double q2 = 0.0;
  double q3 = 0.0;
  double lambda = 1.0;
  JumpClock clock = JumpClock::Shared;

  double sigma(int species) const;
  double mark(int species) const;

  friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;
};

struct DelaySpec {
  double tau1 = 0.0;  // self-limitation delay of x
  double tau2 = 0.0;  // self-limitation delay of y
  double tau3 = 0.0;  // predator recruitment delay

  double tau_max() const;

  friend bool operator==(const DelaySpec&, const DelaySpec&) = default;
};

struct State {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double& operator[](int species);
  double operator[](int species) const;

  friend bool operator==(const State&, const State&) = default;
};

/// Per-species rates or scales; unlike State these may be negative.
struct Rates {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double operator[](int species) const;

  friend bool operator==(const Rates&, const Rates&) = default;
};

/// The delayed taps entering the drift: x(t-tau1), y(t-tau2), x(t-tau3), y(t-tau3).
struct DelayedState {
  double x_tau1 = 0.0;
  double y_tau2 = 0.0;
  double x_tau3 = 0.0;
  double y_tau3 = 0.0;
};

/// Bit set over the species {x, y, z}.
class SpeciesSet {
 public:
  constexpr SpeciesSet() = default;

  static constexpr SpeciesSet none() { return SpeciesSet{}; }
  static constexpr SpeciesSet all() { return SpeciesSet{0b111}; }
  static constexpr SpeciesSet only(int species) {
    return SpeciesSet{static_cast<std::uint8_t>(1u << species)};
  }

  constexpr bool contains(int species) const { return (bits_ >> species) & 1u; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr void insert(int species) { bits_ |= static_cast<std::uint8_t>(1u << species); }
  constexpr std::uint8_t bits() const { return bits_; }

  /// "xyz", "x", "" and so on.
  std::string to_string() const;

  friend constexpr bool operator==(SpeciesSet, SpeciesSet) = default;

 private:
  constexpr explicit SpeciesSet(std::uint8_t bits) : bits_(bits) {}
  std::uint8_t bits_ = 0;
};

/// One (t, x, y, z) sample of a tabulated initial history.
struct HistorySample {
  double t = 0.0;
  State state;
};

/// Initial history on [-tau_max, 0]: either constant or a linearly
/// interpolated table.
class HistorySpec {
 public:
  enum class Kind : std::uint8_t { Constant, Table };

  HistorySpec() = default;

  static HistorySpec constant(State initial);
  /// Throws InvalidArgument on negative values or non-increasing times.
  static HistorySpec table(std::vector<HistorySample> samples);

  Kind kind() const { return kind_; }
  const std::vector<HistorySample>& samples() const { return samples_; }

  /// Value at t; table histories interpolate linearly and throw
  /// InvalidArgument outside the tabulated span.
  State at(double t) const;

  /// True when the table covers [-tau_max, 0] (always true for constants).
  bool covers(double tau_max) const;

 private:
  Kind kind_ = Kind::Constant;
  std::vector<HistorySample> samples_{HistorySample{}};
};

/// Drift coefficients of the delayed system at one instant.
///
/// fx = r1 x (1 - x(t-tau1)/K1) - alpha1 x z + beta x y z, fy likewise with
/// (r2, K2, alpha2, tau2), and fz = -delta z - alpha3 z^2 + a1 x(t-tau3) z
/// + a2 y(t-tau3) z. Throws InvalidArgument naming the first non-finite input.
Rates drift(const State& state, const DelayedState& delayed, const ModelParams& p);

/// Brownian scales (sigma1 x, sigma2 y, sigma3 z).
Rates diffusion(const State& state, const NoiseSpec& n);

/// Multiplies every species in `which` by (1 + q_i).
State apply_jump(const State& state, SpeciesSet which, const NoiseSpec& n);

struct ValidationCheck {
  std::string name;
  bool passed = false;
  std::string detail;
  /// Structural checks make a configuration unusable; the others are
  /// regime hypotheses reported for information.
  bool structural = true;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  bool passed() const;
  bool structural_ok() const;
  const ValidationCheck* find(const std::string& name) const;
  std::vector<std::string> failures() const;
};

/// Evaluates every parameter predicate; failures are entries, never throws.
ValidationReport validate(const ModelParams& p, const NoiseSpec& n, const DelaySpec& d);

/// Throws InvalidArgument listing the failed structural checks, if any.
void require_structurally_valid(const ModelParams& p, const NoiseSpec& n, const DelaySpec& d);

}  // namespace sdpp
