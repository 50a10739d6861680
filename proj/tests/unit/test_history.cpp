#include <gtest/gtest.h>

#include "sdpp/engine.hpp"
#include "sdpp/history.hpp"

namespace sdpp {
namespace {

StepConfig with_dt(double dt) {
  StepConfig c;
  c.dt = dt;
  return c;
}

TEST(InitHistory, ConstantFillsEveryGridPoint) {
  const HistoryBuffer b = init_history(HistorySpec::constant(State{50, 50, 10}), DelaySpec{0.5, 1.0, 1.5},
                                       with_dt(0.01));
  ASSERT_EQ(b.size(), 151u);
  EXPECT_NEAR(b.front_time(), -1.5, 1e-12);
  EXPECT_EQ(b.back_time(), 0.0);
  for (std::size_t k = 0; k < b.size(); ++k) EXPECT_EQ(b.lagged(k), (State{50, 50, 10}));
}

TEST(InitHistory, TableMidpoint) {
  const HistorySpec h = HistorySpec::table({{-1.0, State{0, 0, 0}}, {0.0, State{10, 10, 10}}});
  const HistoryBuffer b = init_history(h, DelaySpec{1.0, 0.0, 0.0}, with_dt(0.5));
  ASSERT_EQ(b.size(), 3u);
  EXPECT_EQ(b.at(-0.5), (State{5, 5, 5}));
  EXPECT_EQ(b.at(-1.0), (State{0, 0, 0}));
  EXPECT_EQ(b.back(), (State{10, 10, 10}));
}

TEST(InitHistory, NoDelayHoldsSingleSample) {
  const HistoryBuffer b = init_history(HistorySpec::constant(State{1, 2, 3}), DelaySpec{}, with_dt(0.01));
  EXPECT_EQ(b.size(), 1u);
  EXPECT_EQ(b.back(), (State{1, 2, 3}));
}

TEST(InitHistory, RejectsShortTable) {
  const HistorySpec h = HistorySpec::table({{-1.0, State{0, 0, 0}}, {0.0, State{10, 10, 10}}});
  EXPECT_THROW(init_history(h, DelaySpec{1.5, 0.0, 0.0}, with_dt(0.5)), InvalidArgument);
}

TEST(DelayedLookup, ZeroDelayIsCurrentState) {
  HistoryBuffer b(0.01, 2, 0);
  b.push(State{1, 1, 1});
  b.push(State{2, 3, 4});
  EXPECT_EQ(delayed_lookup(b, b.back_time(), 0.0), (State{2, 3, 4}));
}

TEST(DelayedLookup, GridAlignedIsBitIdentical) {
  HistoryBuffer b(0.01, 200, 0);
  for (int k = 0; k <= 200; ++k) b.push(State{0.1 * k + 1.0 / 3.0, 2.0 * k, 0.5 * k});
  const State stored = b.at_index(50);
  const State looked = delayed_lookup(b, 2.0, 1.5);
  EXPECT_EQ(looked, stored);
}

TEST(DelayedLookup, LinearMidpoint) {
  HistoryBuffer b(0.01, 1, 0);
  b.push(State{2, 0, 0});
  b.push(State{4, 0, 0});
  EXPECT_DOUBLE_EQ(delayed_lookup(b, 0.01, 0.005).x, 3.0);
}

TEST(DelayedLookup, BeforeBufferStartNamesRequestedTime) {
  HistoryBuffer b(0.01, 1, 0);
  b.push(State{2, 0, 0});
  b.push(State{4, 0, 0});
  try {
    delayed_lookup(b, 0.01, 0.5);
    FAIL() << "expected HistoryLookupError";
  } catch (const HistoryLookupError& e) {
    EXPECT_NEAR(e.requested_time(), -0.49, 1e-12);
    EXPECT_NEAR(e.earliest_time(), 0.0, 1e-12);
  }
}

TEST(HistoryBufferTest, RingDropsOldestSamples) {
  HistoryBuffer b(0.5, 2, 0);
  for (int k = 0; k < 10; ++k) b.push(State{static_cast<double>(k), 0, 0});
  EXPECT_EQ(b.size(), 3u);
  EXPECT_EQ(b.back_index(), 9);
  EXPECT_EQ(b.front_index(), 7);
  EXPECT_EQ(b.lagged(2).x, 7.0);
  EXPECT_THROW(b.at_index(6), HistoryLookupError);
}

}  // namespace
}  // namespace sdpp
