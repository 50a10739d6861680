#include "sdpp/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "sdpp/format.hpp"
#include "sdpp/random.hpp"

namespace sdpp {

namespace {

void require_matching(std::span<const double> t, std::span<const State> states) {
  if (t.empty() || t.size() != states.size()) {
    throw InvalidArgument("time average needs a nonempty trajectory with one time per state");
  }
}

double prey_margin(double r, double K) { return 1.0 - r + 2.0 * r / K; }

}  // namespace

TimeAverageSeries time_average(std::span<const double> t, std::span<const State> states) {
  require_matching(t, states);
  TimeAverageSeries out;
  out.t.assign(t.begin(), t.end());
  out.mean.reserve(states.size());
  out.mean.push_back(states.front());

  State integral;
  State lo = states.front();
  State hi = states.front();
  double elapsed = 0.0;
  for (std::size_t k = 1; k < states.size(); ++k) {
    const double h = t[k] - t[k - 1];
    elapsed += h;
    State avg;
    for (int s = 0; s < 3; ++s) {
      integral[s] += 0.5 * h * (states[k - 1][s] + states[k][s]);
      lo[s] = std::min(lo[s], states[k][s]);
      hi[s] = std::max(hi[s], states[k][s]);
      // The exact average is a convex combination of the samples; clamp
      // away rounding excursions.
      avg[s] = std::clamp(integral[s] / elapsed, lo[s], hi[s]);
    }
    out.mean.push_back(avg);
  }
  return out;
}

TimeAverageSeries time_average(const Trajectory& traj) { return time_average(traj.t, traj.states); }

State terminal_time_average(std::span<const double> t, std::span<const State> states) {
  require_matching(t, states);
  if (states.size() == 1) return states.front();
  State integral;
  State lo = states.front();
  State hi = states.front();
  double elapsed = 0.0;
  for (std::size_t k = 1; k < states.size(); ++k) {
    const double h = t[k] - t[k - 1];
    elapsed += h;
    for (int s = 0; s < 3; ++s) {
      integral[s] += 0.5 * h * (states[k - 1][s] + states[k][s]);
      lo[s] = std::min(lo[s], states[k][s]);
      hi[s] = std::max(hi[s], states[k][s]);
    }
  }
  State avg;
  for (int s = 0; s < 3; ++s) avg[s] = std::clamp(integral[s] / elapsed, lo[s], hi[s]);
  return avg;
}

double ExtinctionCoefficients::max() const { return std::max({c1, c2, c3}); }

ExtinctionCoefficients extinction_coefficients(const ModelParams& p, const NoiseSpec& n) {
  if (p.r1 == 0.0 || p.r2 == 0.0) {
    throw InvalidArgument("c3 is undefined: it divides by r1 and r2 (r1 = " + format_short(p.r1) +
                          ", r2 = " + format_short(p.r2) + ")");
  }
  ExtinctionCoefficients c;
  c.c1 = p.r1 - n.sigma1 * n.sigma1 / 2.0;
  c.c2 = p.r2 - n.sigma2 * n.sigma2 / 2.0;
  c.c3 = p.a1 * (p.K1 / p.r1) * c.c1 + p.a2 * (p.K2 / p.r2) * c.c2 - p.delta - n.sigma3 * n.sigma3 / 2.0;
  return c;
}

PredatorExtinctionReport predator_extinction_report(const ModelParams& p, const NoiseSpec& n) {
  PredatorExtinctionReport r;
  const double c1 = p.r1 - n.sigma1 * n.sigma1 / 2.0;
  const double c2 = p.r2 - n.sigma2 * n.sigma2 / 2.0;
  r.c4 = p.a1 * p.K1 + p.a2 * p.K2 - p.delta - n.sigma3 * n.sigma3 / 2.0;
  r.prey_margin1 = prey_margin(p.r1, p.K1);
  r.prey_margin2 = prey_margin(p.r2, p.K2);
  r.min_condition = std::min({c1, c2, r.prey_margin1, r.prey_margin2});
  r.hypothesis_holds = r.min_condition > 0.0 && r.c4 <= 0.0;
  r.Lx = r.prey_margin1 != 0.0 ? c1 / r.prey_margin1 : std::nan("");
  r.Ly = r.prey_margin2 != 0.0 ? c2 / r.prey_margin2 : std::nan("");
  return r;
}

PersistenceReport persistence_report(const ModelParams& p, const NoiseSpec& n) {
  const double m1 = prey_margin(p.r1, p.K1);
  const double m2 = prey_margin(p.r2, p.K2);
  if (m1 == 0.0) throw InvalidArgument("persistence bound singular: 1 - r1 + 2 r1/K1 = 0");
  if (m2 == 0.0) throw InvalidArgument("persistence bound singular: 1 - r2 + 2 r2/K2 = 0");
  if (p.alpha3 == 0.0) throw InvalidArgument("persistence bound singular: alpha3 = 0");

  PersistenceReport r;
  r.Lx = (p.r1 - n.sigma1 * n.sigma1 / 2.0) / m1;
  r.Ly = (p.r2 - n.sigma2 * n.sigma2 / 2.0) / m2;
  r.predator_numerator = p.a1 * r.Lx + p.a2 * r.Ly - p.delta - n.sigma3 * n.sigma3 / 2.0;
  r.Lz = r.predator_numerator / p.alpha3;
  r.hypothesis_ok = r.Lx > 0.0 && r.Ly > 0.0 && p.alpha3 * r.Lz > 0.0 && std::min(m1, m2) > 0.0;
  return r;
}

BoundednessReport boundedness_check(const ModelParams& p, const NoiseSpec& n) {
  BoundednessReport b;
  b.B1 = n.sigma1 * n.sigma1 + n.q1 * n.q1 * n.lambda + 2.0 * p.r1 + p.beta * p.K2 - p.alpha1 * p.K1;
  b.B2 = n.sigma2 * n.sigma2 + n.q2 * n.q2 * n.lambda + 2.0 * p.r2 + p.beta * p.K1 - p.alpha2 * p.K2;
  b.B3 = n.sigma3 * n.sigma3 + n.q3 * n.q3 * n.lambda + 2.0 * p.a1 * p.K1 + 2.0 * p.a2 * p.K2 - p.delta -
         p.alpha1 * p.K1 - p.alpha2 * p.K2;
  b.all_negative = b.B1 < 0.0 && b.B2 < 0.0 && b.B3 < 0.0;
  return b;
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::ExtinctionAll: return "ExtinctionAll";
    case Regime::PredatorExtinctPreyPersist: return "PredatorExtinctPreyPersist";
    case Regime::AllPersist: return "AllPersist";
    case Regime::Indeterminate: return "Indeterminate";
  }
  return "Indeterminate";
}

std::uint64_t parameter_fingerprint(const ModelParams& p, const NoiseSpec& n, const DelaySpec& d) {
  const double fields[] = {p.r1,     p.r2,     p.K1,     p.K2,     p.alpha1, p.alpha2, p.alpha3,
                           p.beta,   p.delta,  p.a1,     p.a2,     n.sigma1, n.sigma2, n.sigma3,
                           n.q1,     n.q2,     n.q3,     n.lambda, d.tau1,   d.tau2,   d.tau3};
  std::uint64_t h = 0x5344505050ULL;
  for (double v : fields) h = mix64(h ^ std::bit_cast<std::uint64_t>(v));
  return mix64(h ^ static_cast<std::uint64_t>(n.clock));
}

RegimeReport classify(const ModelParams& p, const NoiseSpec& n, const DelaySpec& d) {
  RegimeReport r;
  r.fingerprint = parameter_fingerprint(p, n, d);
  auto trace = [&](std::string label, std::string expr, std::optional<double> value, bool holds) {
    r.trace.push_back({std::move(label), std::move(expr), value, holds});
  };

  r.global_solution_ok = p.delta > p.alpha3;
  trace("global positive solution", "delta - alpha3 > 0", p.delta - p.alpha3, r.global_solution_ok);

  r.boundedness = boundedness_check(p, n);
  trace("boundedness", "B1 < 0", r.boundedness.B1, r.boundedness.B1 < 0.0);
  trace("boundedness", "B2 < 0", r.boundedness.B2, r.boundedness.B2 < 0.0);
  trace("boundedness", "B3 < 0", r.boundedness.B3, r.boundedness.B3 < 0.0);

  try {
    r.extinction = extinction_coefficients(p, n);
    const auto& c = *r.extinction;
    trace("extinction", "c1", c.c1, c.c1 < 0.0);
    trace("extinction", "c2", c.c2, c.c2 < 0.0);
    trace("extinction", "c3", c.c3, c.c3 < 0.0);
    r.extinction_hypothesis = c.max() < 0.0;
    trace("extinction", "max{c1,c2,c3} < 0", c.max(), r.extinction_hypothesis);
  } catch (const InvalidArgument& e) {
    trace("extinction", e.what(), std::nullopt, false);
  }

  r.predator_extinction = predator_extinction_report(p, n);
  {
    const auto& pe = r.predator_extinction;
    trace("predator extinction", "c4 <= 0", pe.c4, pe.c4 <= 0.0);
    trace("predator extinction", "1 - r1 + 2 r1/K1 > 0", pe.prey_margin1, pe.prey_margin1 > 0.0);
    trace("predator extinction", "1 - r2 + 2 r2/K2 > 0", pe.prey_margin2, pe.prey_margin2 > 0.0);
    trace("predator extinction", "min{c1,c2,1-r1+2r1/K1,1-r2+2r2/K2} > 0", pe.min_condition,
          pe.min_condition > 0.0);
    r.predator_extinction_hypothesis = pe.hypothesis_holds;
  }

  try {
    r.persistence = persistence_report(p, n);
    const auto& ps = *r.persistence;
    trace("persistence", "Lx > 0", ps.Lx, ps.Lx > 0.0);
    trace("persistence", "Ly > 0", ps.Ly, ps.Ly > 0.0);
    trace("persistence", "a1 Lx + a2 Ly - delta - sigma3^2/2 > 0", ps.predator_numerator,
          ps.predator_numerator > 0.0);
    trace("persistence", "alpha3 > 0", p.alpha3, p.alpha3 > 0.0);
    trace("persistence", "Lz", ps.Lz, ps.Lz > 0.0);
    r.persistence_hypothesis = ps.hypothesis_ok;
  } catch (const InvalidArgument& e) {
    trace("persistence", e.what(), std::nullopt, false);
  }

  const int holding = static_cast<int>(r.extinction_hypothesis) +
                      static_cast<int>(r.persistence_hypothesis) +
                      static_cast<int>(r.predator_extinction_hypothesis);
  r.overlap = holding > 1;
  if (r.extinction_hypothesis) {
    r.predicted = Regime::ExtinctionAll;
  } else if (r.persistence_hypothesis) {
    r.predicted = Regime::AllPersist;
  } else if (r.predator_extinction_hypothesis) {
    r.predicted = Regime::PredatorExtinctPreyPersist;
  }
  if (r.overlap) {
    trace("regime", "several regime hypotheses hold; precedence applied", std::nullopt, true);
  }
  return r;
}

std::string format_report(const RegimeReport& report) {
  std::ostringstream out;
  out << "predicted: " << to_string(report.predicted) << "\n";
  if (report.extinction) {
    out << "c1 = " << format_double(report.extinction->c1) << "\n"
        << "c2 = " << format_double(report.extinction->c2) << "\n"
        << "c3 = " << format_double(report.extinction->c3) << "\n";
  }
  out << "c4 = " << format_double(report.predator_extinction.c4) << "\n";
  if (report.persistence) {
    out << "Lx = " << format_double(report.persistence->Lx) << "\n"
        << "Ly = " << format_double(report.persistence->Ly) << "\n"
        << "Lz = " << format_double(report.persistence->Lz) << "\n";
  }
  out << "B1 = " << format_double(report.boundedness.B1) << "\n"
      << "B2 = " << format_double(report.boundedness.B2) << "\n"
      << "B3 = " << format_double(report.boundedness.B3) << "\n";
  out << "trace:\n";
  for (const auto& e : report.trace) {
    out << "  [" << (e.holds ? "holds" : "fails") << "] " << e.label << ": " << e.expression;
    if (e.value) out << " (value " << format_double(*e.value) << ")";
    out << "\n";
  }
  if (report.overlap) out << "note: overlapping hypotheses\n";
  return out.str();
}

}  // namespace sdpp
