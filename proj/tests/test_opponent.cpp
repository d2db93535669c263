#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "moeq/opponent.hpp"

using namespace moeq;

TEST_CASE("cold start: uniform frequencies and a neutral last-action slot") {
  OpponentTracker tracker;
  CHECK(tracker.observed() == 0);
  const std::vector<double> f = tracker.features();
  REQUIRE(f.size() == kOpponentFeatureDim);
  for (int a = 0; a < 5; ++a) CHECK(f[a] == 0.2);
  CHECK(f[5] == 0.5);
}

TEST_CASE("frequencies are exact counts over observed actions") {
  OpponentTracker tracker;
  // 3, 1, 1, 0, 0 counts over actions 0..4.
  for (int a : {0, 0, 1, 2, 0}) tracker.update(a);
  CHECK(tracker.observed() == 5);
  const std::vector<double> f = tracker.features();
  CHECK(f[0] == 0.6);
  CHECK(f[1] == 0.2);
  CHECK(f[2] == 0.2);
  CHECK(f[3] == 0.0);
  CHECK(f[4] == 0.0);
}

TEST_CASE("last action is scaled by 1/4 into [0, 1]") {
  OpponentTracker tracker;
  tracker.update(0);
  CHECK(tracker.features()[5] == 0.0);
  tracker.update(1);
  CHECK(tracker.features()[5] == 0.25);
  tracker.update(2);
  CHECK(tracker.features()[5] == 0.5);
  tracker.update(3);
  CHECK(tracker.features()[5] == 0.75);
  tracker.update(4);
  CHECK(tracker.features()[5] == 1.0);
}

TEST_CASE("reset restores the cold-start features") {
  OpponentTracker tracker;
  for (int a : {4, 4, 3}) tracker.update(a);
  tracker.reset();
  CHECK(tracker.observed() == 0);
  const std::vector<double> f = tracker.features();
  for (int a = 0; a < 5; ++a) CHECK(f[a] == 0.2);
  CHECK(f[5] == 0.5);
}

TEST_CASE("a single observation replaces the uniform prior entirely") {
  OpponentTracker tracker;
  tracker.update(3);
  const std::vector<double> f = tracker.features();
  CHECK(f[0] == 0.0);
  CHECK(f[3] == 1.0);
  CHECK(f[5] == 0.75);
}

TEST_CASE("out-of-range actions are rejected") {
  OpponentTracker tracker;
  CHECK_THROWS(tracker.update(-1));
  CHECK_THROWS(tracker.update(5));
  // A rejected action must not corrupt the counts.
  CHECK(tracker.observed() == 0);
  CHECK(tracker.features()[0] == 0.2);
}
