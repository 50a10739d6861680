#include "sdpp/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "sdpp/format.hpp"

namespace sdpp {

namespace {

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) {
    throw InvalidArgument(std::string("non-finite input: ") + name + " = " + format_short(v));
  }
}

}  // namespace

double NoiseSpec::sigma(int species) const {
  switch (species) {
    case 0: return sigma1;
    case 1: return sigma2;
    case 2: return sigma3;
  }
  throw InvalidArgument("species index out of range");
}

double NoiseSpec::mark(int species) const {
  switch (species) {
    case 0: return q1;
    case 1: return q2;
    case 2: return q3;
  }
  throw InvalidArgument("species index out of range");
}

double DelaySpec::tau_max() const { return std::max({tau1, tau2, tau3}); }

double& State::operator[](int species) {
  switch (species) {
    case 0: return x;
    case 1: return y;
    case 2: return z;
  }
  throw InvalidArgument("species index out of range");
}

double State::operator[](int species) const { return const_cast<State&>(*this)[species]; }

double Rates::operator[](int species) const {
  switch (species) {
    case 0: return x;
    case 1: return y;
    case 2: return z;
  }
  throw InvalidArgument("species index out of range");
}

std::string SpeciesSet::to_string() const {
  std::string out;
  if (contains(0)) out += 'x';
  if (contains(1)) out += 'y';
  if (contains(2)) out += 'z';
  return out;
}

HistorySpec HistorySpec::constant(State initial) {
  if (!(initial.x >= 0.0 && initial.y >= 0.0 && initial.z >= 0.0) || !std::isfinite(initial.x) ||
      !std::isfinite(initial.y) || !std::isfinite(initial.z)) {
    throw InvalidArgument("constant history must be finite and nonnegative");
  }
  HistorySpec h;
  h.kind_ = Kind::Constant;
  h.samples_ = {HistorySample{0.0, initial}};
  return h;
}

HistorySpec HistorySpec::table(std::vector<HistorySample> samples) {
  if (samples.empty()) throw InvalidArgument("history table is empty");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    for (int k = 0; k < 3; ++k) {
      if (!(s.state[k] >= 0.0) || !std::isfinite(s.state[k])) {
        throw InvalidArgument("history table value at t=" + format_short(s.t) +
                              " must be finite and nonnegative");
      }
    }
    if (i > 0 && !(s.t > samples[i - 1].t)) {
      throw InvalidArgument("history table times must be strictly increasing (at t=" +
                            format_short(s.t) + ")");
    }
  }
  HistorySpec h;
  h.kind_ = Kind::Table;
  h.samples_ = std::move(samples);
  return h;
}

State HistorySpec::at(double t) const {
  if (kind_ == Kind::Constant) return samples_.front().state;

  constexpr double kSlack = 1e-12;
  const double lo = samples_.front().t;
  const double hi = samples_.back().t;
  if (t < lo - kSlack * std::max(1.0, std::abs(lo)) || t > hi + kSlack * std::max(1.0, std::abs(hi))) {
    throw InvalidArgument("history requested at t=" + format_short(t) + " outside table span [" +
                          format_short(lo) + ", " + format_short(hi) + "]");
  }
  if (t <= lo) return samples_.front().state;
  if (t >= hi) return samples_.back().state;

  auto upper = std::upper_bound(samples_.begin(), samples_.end(), t,
                                [](double v, const HistorySample& s) { return v < s.t; });
  const auto& b = *upper;
  const auto& a = *(upper - 1);
  const double w = (t - a.t) / (b.t - a.t);
  State out;
  for (int k = 0; k < 3; ++k) out[k] = a.state[k] + w * (b.state[k] - a.state[k]);
  return out;
}

bool HistorySpec::covers(double tau_max) const {
  if (kind_ == Kind::Constant) return true;
  constexpr double kSlack = 1e-12;
  return samples_.front().t <= -tau_max + kSlack * std::max(1.0, tau_max) &&
         samples_.back().t >= -kSlack;
}

Rates drift(const State& s, const DelayedState& d, const ModelParams& p) {
  require_finite(s.x, "x");
  require_finite(s.y, "y");
  require_finite(s.z, "z");
  require_finite(d.x_tau1, "x(t-tau1)");
  require_finite(d.y_tau2, "y(t-tau2)");
  require_finite(d.x_tau3, "x(t-tau3)");
  require_finite(d.y_tau3, "y(t-tau3)");

  const double cooperation = p.beta * s.x * s.y * s.z;
  return Rates{
      p.r1 * s.x * (1.0 - d.x_tau1 / p.K1) - p.alpha1 * s.x * s.z + cooperation,
      p.r2 * s.y * (1.0 - d.y_tau2 / p.K2) - p.alpha2 * s.y * s.z + cooperation,
      -p.delta * s.z - p.alpha3 * s.z * s.z + p.a1 * d.x_tau3 * s.z + p.a2 * d.y_tau3 * s.z,
  };
}

Rates diffusion(const State& s, const NoiseSpec& n) {
  require_finite(s.x, "x");
  require_finite(s.y, "y");
  require_finite(s.z, "z");
  return Rates{n.sigma1 * s.x, n.sigma2 * s.y, n.sigma3 * s.z};
}

State apply_jump(const State& s, SpeciesSet which, const NoiseSpec& n) {
  State out = s;
  for (int k = 0; k < 3; ++k) {
    if (which.contains(k)) out[k] = s[k] * (1.0 + n.mark(k));
  }
  return out;
}

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

bool ValidationReport::structural_ok() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const auto& c) { return c.passed || !c.structural; });
}

const ValidationCheck* ValidationReport::find(const std::string& name) const {
  auto it = std::find_if(checks.begin(), checks.end(), [&](const auto& c) { return c.name == name; });
  return it == checks.end() ? nullptr : &*it;
}

std::vector<std::string> ValidationReport::failures() const {
  std::vector<std::string> out;
  for (const auto& c : checks) {
    if (!c.passed) out.push_back(c.name + ": " + c.detail);
  }
  return out;
}

ValidationReport validate(const ModelParams& p, const NoiseSpec& n, const DelaySpec& d) {
  ValidationReport report;
  auto add = [&](std::string name, bool ok, std::string detail, bool structural = true) {
    report.checks.push_back({std::move(name), ok, std::move(detail), structural});
  };

  const std::pair<const char*, double> rates[] = {
      {"r1", p.r1},         {"r2", p.r2},         {"K1", p.K1},         {"K2", p.K2},
      {"alpha1", p.alpha1}, {"alpha2", p.alpha2}, {"alpha3", p.alpha3}, {"beta", p.beta},
      {"delta", p.delta},   {"a1", p.a1},         {"a2", p.a2},
  };
  for (const auto& [name, v] : rates) {
    add(std::string(name) + " >= 0", std::isfinite(v) && v >= 0.0,
        std::string(name) + " = " + format_short(v));
  }
  add("K1 > 0", p.K1 > 0.0, "K1 = " + format_short(p.K1));
  add("K2 > 0", p.K2 > 0.0, "K2 = " + format_short(p.K2));

  const std::pair<const char*, double> sigmas[] = {
      {"sigma1", n.sigma1}, {"sigma2", n.sigma2}, {"sigma3", n.sigma3}, {"lambda", n.lambda}};
  for (const auto& [name, v] : sigmas) {
    add(std::string(name) + " >= 0", std::isfinite(v) && v >= 0.0,
        std::string(name) + " = " + format_short(v));
  }
  const std::pair<const char*, double> marks[] = {{"q1", n.q1}, {"q2", n.q2}, {"q3", n.q3}};
  for (const auto& [name, v] : marks) {
    add(std::string(name) + " > -1", std::isfinite(v) && v > -1.0,
        std::string(name) + " = " + format_short(v) +
            (v > -1.0 ? "" : " (a jump would make the population nonpositive)"));
  }

  const std::pair<const char*, double> taus[] = {{"tau1", d.tau1}, {"tau2", d.tau2}, {"tau3", d.tau3}};
  for (const auto& [name, v] : taus) {
    add(std::string(name) + " >= 0", std::isfinite(v) && v >= 0.0,
        std::string(name) + " = " + format_short(v));
  }

  const bool unique_global = p.delta > p.alpha3;
  add("delta > alpha3", unique_global,
      "delta = " + format_short(p.delta) + ", alpha3 = " + format_short(p.alpha3) +
          (unique_global ? "" : " (global positive solution hypothesis unmet)"),
      false);
  return report;
}

void require_structurally_valid(const ModelParams& p, const NoiseSpec& n, const DelaySpec& d) {
  const auto report = validate(p, n, d);
  if (report.structural_ok()) return;
  std::ostringstream msg;
  msg << "invalid parameters:";
  for (const auto& c : report.checks) {
    if (!c.passed && c.structural) msg << " [" << c.name << ": " << c.detail << "]";
  }
  throw InvalidArgument(msg.str());
}

}  // namespace sdpp
