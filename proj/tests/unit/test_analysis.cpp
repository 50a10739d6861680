#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sdpp/analysis.hpp"
#include "test_support.hpp"

namespace sdpp {
namespace {

TEST(TimeAverage, ConstantTrajectory) {
  const std::vector<double> t{0, 0.5, 1.0, 1.5};
  const std::vector<State> s(4, State{7, 7, 7});
  const TimeAverageSeries avg = time_average(t, s);
  for (const State& m : avg.mean) EXPECT_DOUBLE_EQ(m.x, 7.0);
}

TEST(TimeAverage, LinearIsExact) {
  std::vector<double> t;
  std::vector<State> s;
  for (int k = 0; k <= 100; ++k) {
    t.push_back(0.1 * k);
    s.push_back(State{0.1 * k, 0, 0});
  }
  EXPECT_NEAR(terminal_time_average(t, s).x, 5.0, 1e-12);
}

TEST(TimeAverage, AlternatingSamples) {
  const std::vector<double> t{0, 1, 2, 3, 4};
  const std::vector<State> s{{0, 0, 0}, {1, 0, 0}, {0, 0, 0}, {1, 0, 0}, {0, 0, 0}};
  const TimeAverageSeries avg = time_average(t, s);
  EXPECT_DOUBLE_EQ(avg.mean.back().x, 0.5);
  EXPECT_EQ(avg.mean.front(), s.front());
}

TEST(TimeAverage, StaysWithinSampleRange) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::vector<double> t;
  std::vector<State> s;
  for (int k = 0; k < 500; ++k) {
    t.push_back(0.01 * k);
    s.push_back(State{u(gen), u(gen), u(gen)});
  }
  const TimeAverageSeries avg = time_average(t, s);
  for (int sp = 0; sp < 3; ++sp) {
    double lo = s[0][sp], hi = s[0][sp];
    for (std::size_t k = 0; k < s.size(); ++k) {
      lo = std::min(lo, s[k][sp]);
      hi = std::max(hi, s[k][sp]);
      EXPECT_GE(avg.mean[k][sp], lo);
      EXPECT_LE(avg.mean[k][sp], hi);
    }
  }
}

TEST(ExtinctionCoefficientsTest, NoiseOffReduction) {
  ModelParams p = test::persistence_params();
  const ExtinctionCoefficients c = extinction_coefficients(p, NoiseSpec{});
  EXPECT_DOUBLE_EQ(c.c1, p.r1);
  EXPECT_DOUBLE_EQ(c.c2, p.r2);
  EXPECT_NEAR(c.c3, p.a1 * p.K1 + p.a2 * p.K2 - p.delta, 1e-12);
}

TEST(ExtinctionCoefficientsTest, ConstructedScenario) {
  const ExtinctionCoefficients c = extinction_coefficients(test::extinction_params(), test::extinction_noise());
  EXPECT_NEAR(c.c1, -0.4, 1e-15);
  EXPECT_NEAR(c.c2, -0.4, 1e-15);
  EXPECT_NEAR(c.c3, -40.225, 1e-12);
  EXPECT_NEAR(c.max(), -0.4, 1e-15);
}

TEST(ExtinctionCoefficientsTest, FigureOneColumn) {
  const ExtinctionCoefficients c = extinction_coefficients(test::figure1_params(), test::figure1_noise());
  EXPECT_DOUBLE_EQ(c.c1, 0.7 - 5e-9);
  EXPECT_GT(c.max(), 0.0);
}

TEST(ExtinctionCoefficientsTest, ZeroGrowthRejected) {
  ModelParams p = test::persistence_params();
  p.r2 = 0.0;
  EXPECT_THROW(extinction_coefficients(p, NoiseSpec{}), InvalidArgument);
}

TEST(ExtinctionCoefficientsTest, ExactOverRandomDraws) {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> u(0.01, 2.0);
  for (int i = 0; i < 10000; ++i) {
    ModelParams p{u(gen), u(gen), 100 * u(gen), 100 * u(gen), u(gen), u(gen), u(gen), u(gen), u(gen), u(gen), u(gen)};
    NoiseSpec n{u(gen), u(gen), u(gen), -0.5, 0.5, 0.1, 1.0, JumpClock::Shared};
    const ExtinctionCoefficients c = extinction_coefficients(p, n);
    EXPECT_NEAR(c.c1 + n.sigma1 * n.sigma1 / 2, p.r1, 1e-14);
    EXPECT_NEAR(c.c2 + n.sigma2 * n.sigma2 / 2, p.r2, 1e-14);
    const double c3 = p.a1 * (p.K1 / p.r1) * c.c1 + p.a2 * (p.K2 / p.r2) * c.c2 - p.delta - n.sigma3 * n.sigma3 / 2;
    EXPECT_NEAR(c.c3, c3, 1e-12 * std::max(1.0, std::abs(c3)));
  }
}

TEST(Monotonicity, OverRandomDraws) {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> u(0.01, 0.5);
  for (int i = 0; i < 2000; ++i) {
    ModelParams p{u(gen), u(gen), 100.0, 100.0, u(gen), u(gen), u(gen), u(gen), u(gen), u(gen), u(gen)};
    NoiseSpec n{u(gen), u(gen), u(gen), -0.04, -0.006, -0.008, 1.0, JumpClock::Shared};
    NoiseSpec louder = n;
    louder.sigma1 += 0.1;
    EXPECT_LT(extinction_coefficients(p, louder).c1, extinction_coefficients(p, n).c1);

    ModelParams more_beta = p;
    more_beta.beta += 0.01;
    EXPECT_GT(boundedness_check(more_beta, n).B1, boundedness_check(p, n).B1);

    const PersistenceReport base = persistence_report(p, n);
    if (base.Lx > 0.0) {
      ModelParams more_a1 = p;
      more_a1.a1 += 0.05;
      EXPECT_GT(persistence_report(more_a1, n).Lz, base.Lz);
    }
  }
}

TEST(PredatorExtinction, NoRecruitmentGivesNonPositiveC4) {
  ModelParams p = test::persistence_params();
  p.a1 = p.a2 = 0.0;
  const PredatorExtinctionReport r = predator_extinction_report(p, test::persistence_noise());
  EXPECT_LE(r.c4, 0.0);
  EXPECT_NEAR(r.c4, -p.delta - 2e-4 * 2e-4 / 2, 1e-15);
}

TEST(PredatorExtinction, PreyMargin) {
  const PredatorExtinctionReport r = predator_extinction_report(test::persistence_params(), NoiseSpec{});
  EXPECT_NEAR(r.prey_margin1, 0.51, 1e-15);
  EXPECT_NEAR(r.min_condition, 0.5, 1e-15);
}

TEST(PredatorExtinction, FigureThreeMarginFails) {
  const PredatorExtinctionReport r = predator_extinction_report(test::figure3_params(), test::figure3_noise());
  EXPECT_NEAR(r.prey_margin1, -0.96, 1e-15);
  EXPECT_FALSE(r.hypothesis_holds);
  const RegimeReport report = classify(test::figure3_params(), test::figure3_noise(), test::table_delays());
  EXPECT_EQ(report.predicted, Regime::Indeterminate);
  const std::string text = format_report(report);
  EXPECT_NE(text.find("1 - r1 + 2 r1/K1"), std::string::npos);
}

TEST(Persistence, CanonicalScenario) {
  ModelParams p = test::persistence_params();
  p.alpha1 = 0.13;
  p.alpha2 = 0.17;
  const PersistenceReport r = persistence_report(p, NoiseSpec{});
  EXPECT_NEAR(r.Lx, 0.5 / 0.51, 1e-15);
  EXPECT_NEAR(r.Ly, 0.5 / 0.51, 1e-15);
  EXPECT_NEAR(r.Lz, (0.1 * (0.5 / 0.51) * 2 - 0.02) / 0.2, 1e-14);
  EXPECT_NEAR(r.Lz, 0.8804, 1e-4);
  EXPECT_TRUE(r.hypothesis_ok);
}

TEST(Persistence, BoundaryNoiseKillsBound) {
  NoiseSpec n;
  n.sigma1 = std::sqrt(2 * 0.5);
  const PersistenceReport r = persistence_report(test::persistence_params(), n);
  EXPECT_NEAR(r.Lx, 0.0, 1e-15);
  EXPECT_FALSE(r.hypothesis_ok);
}

TEST(Persistence, SingularQuantitiesNamed) {
  ModelParams p = test::persistence_params();
  p.alpha3 = 0.0;
  try {
    persistence_report(p, NoiseSpec{});
    FAIL();
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("alpha3"), std::string::npos);
  }
  p = test::persistence_params();
  p.r1 = 2.0;
  p.K1 = 4.0;
  EXPECT_THROW(persistence_report(p, NoiseSpec{}), InvalidArgument);
  const PredatorExtinctionReport r = predator_extinction_report(p, NoiseSpec{});
  EXPECT_TRUE(std::isnan(r.Lx));
}

TEST(Boundedness, FigureOneColumn) {
  const BoundednessReport b = boundedness_check(test::figure1_params(), test::figure1_noise());
  EXPECT_NEAR(b.B1, 1e-8 + 0.0016 + 1.4 + 0.01 - 30.0, 1e-12);
  EXPECT_TRUE(b.all_negative);
}

TEST(Boundedness, SingleTerm) {
  ModelParams p;
  p.alpha1 = 1.0;
  p.K1 = 1.0;
  NoiseSpec n;
  n.lambda = 0.0;
  EXPECT_DOUBLE_EQ(boundedness_check(p, n).B1, -1.0);
}

TEST(Boundedness, LargeBetaDominates) {
  ModelParams p = test::figure1_params();
  p.beta = 10.0;
  const BoundednessReport b = boundedness_check(p, test::figure1_noise());
  EXPECT_GT(b.B1, 0.0);
  EXPECT_FALSE(b.all_negative);
}

TEST(Classify, ExtinctionScenario) {
  const RegimeReport r = classify(test::extinction_params(), test::extinction_noise(), test::table_delays());
  EXPECT_EQ(r.predicted, Regime::ExtinctionAll);
  ASSERT_TRUE(r.extinction.has_value());
  EXPECT_NEAR(r.extinction->max(), -0.4, 1e-15);
}

TEST(Classify, PersistenceScenario) {
  const RegimeReport r = classify(test::persistence_params(), test::persistence_noise(), test::table_delays());
  EXPECT_EQ(r.predicted, Regime::AllPersist);
  ASSERT_TRUE(r.persistence.has_value());
  EXPECT_NEAR(r.persistence->Lx, 0.98039, 1e-5);
  EXPECT_NEAR(r.persistence->Lz, 0.8804, 1e-4);
}

TEST(Classify, PredatorExtinctionScenario) {
  ModelParams p = test::persistence_params();
  p.a1 = p.a2 = 1e-4;
  p.delta = 0.1;
  const RegimeReport r = classify(p, test::persistence_noise(), test::table_delays());
  EXPECT_EQ(r.predicted, Regime::PredatorExtinctPreyPersist);
  EXPECT_LE(r.predator_extinction.c4, 0.0);
}

TEST(Classify, FigureOneColumnTraceShowsBlockedHypotheses) {
  const RegimeReport r = classify(test::figure1_params(), test::figure1_noise(), test::table_delays());
  EXPECT_FALSE(r.global_solution_ok);
  EXPECT_FALSE(r.extinction_hypothesis);
  EXPECT_NE(r.predicted, Regime::ExtinctionAll);
  const std::string text = format_report(r);
  EXPECT_NE(text.find("c1 = 0.69999999499999999"), std::string::npos);
  EXPECT_NE(text.find("delta - alpha3"), std::string::npos);
}

TEST(Classify, IsPure) {
  const RegimeReport a = classify(test::figure1_params(), test::figure1_noise(), test::table_delays());
  const RegimeReport b = classify(test::figure1_params(), test::figure1_noise(), test::table_delays());
  EXPECT_EQ(format_report(a), format_report(b));
  EXPECT_EQ(a.fingerprint, b.fingerprint);
}

TEST(Classify, SingularInputsBecomeTraceEntries) {
  ModelParams p = test::persistence_params();
  p.r1 = 0.0;
  p.alpha3 = 0.0;
  RegimeReport r;
  EXPECT_NO_THROW(r = classify(p, test::persistence_noise(), test::table_delays()));
  EXPECT_FALSE(r.extinction.has_value());
  EXPECT_EQ(r.predicted, Regime::Indeterminate);
}

TEST(Classify, FingerprintTracksParameters) {
  ModelParams p = test::persistence_params();
  const auto base = parameter_fingerprint(p, test::persistence_noise(), test::table_delays());
  p.beta *= 2;
  EXPECT_NE(parameter_fingerprint(p, test::persistence_noise(), test::table_delays()), base);
}

}  // namespace
}  // namespace sdpp
