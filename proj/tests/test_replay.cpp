#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "moeq/replay.hpp"
#include "moeq/rng.hpp"

using namespace moeq;

namespace {

Transition make_transition(double reward) {
  Transition t;
  t.state = {reward, 0.0};
  t.reward = reward;
  t.next_state = {reward, 1.0};
  return t;
}

}  // namespace

TEST_CASE("sum tree: hand-built four-leaf example") {
  SumTree tree(4);
  tree.set_leaf(0, 1.0);
  tree.set_leaf(1, 2.0);
  tree.set_leaf(2, 3.0);
  tree.set_leaf(3, 4.0);
  CHECK(tree.total() == 10.0);

  // Cumulative buckets: [0,1) -> 0, [1,3) -> 1, [3,6) -> 2, [6,10) -> 3.
  CHECK(tree.find_prefix(0.0) == 0);
  CHECK(tree.find_prefix(0.999) == 0);
  CHECK(tree.find_prefix(1.0) == 1);
  CHECK(tree.find_prefix(2.999) == 1);
  CHECK(tree.find_prefix(3.0) == 2);
  CHECK(tree.find_prefix(5.999) == 2);
  CHECK(tree.find_prefix(6.0) == 3);
  CHECK(tree.find_prefix(9.999) == 3);
}

TEST_CASE("sum tree: non-power-of-two capacities pad with zero leaves") {
  SumTree tree(3);
  CHECK(tree.capacity() == 4);
  tree.set_leaf(0, 2.0);
  tree.set_leaf(1, 5.0);
  tree.set_leaf(2, 1.0);
  CHECK(tree.leaf(3) == 0.0);
  CHECK(tree.total() == 8.0);
  // The padded zero leaf can never be drawn.
  CHECK(tree.find_prefix(7.999) == 2);
}

TEST_CASE("sum tree: updates reroute sampling immediately") {
  SumTree tree(4);
  tree.set_leaf(0, 1.0);
  tree.set_leaf(1, 1.0);
  CHECK(tree.find_prefix(1.5) == 1);
  tree.set_leaf(0, 10.0);
  CHECK(tree.total() == 11.0);
  CHECK(tree.find_prefix(1.5) == 0);
  CHECK(tree.find_prefix(10.5) == 1);
  tree.set_leaf(0, 0.0);
  CHECK(tree.total() == 1.0);
  CHECK(tree.find_prefix(0.5) == 1);
}

TEST_CASE("sum tree: total tracks many random updates") {
  SumTree tree(33);  // pads to 64
  Rng rng(7);
  std::vector<double> shadow(33, 0.0);
  for (int i = 0; i < 5000; ++i) {
    const int idx = rng.uniform_int(33);
    const double v = rng.uniform(0.0, 10.0);
    tree.set_leaf(idx, v);
    shadow[idx] = v;
  }
  double sum = 0.0;
  for (int i = 0; i < 33; ++i) {
    CHECK(tree.leaf(i) == shadow[i]);
    sum += shadow[i];
  }
  CHECK(tree.total() == doctest::Approx(sum).epsilon(1e-12));
  CHECK(tree.max_subtree_sum_error() <= 1e-9);
}

TEST_CASE("sum tree: argument validation") {
  CHECK_THROWS(SumTree(0));
  SumTree tree(4);
  tree.set_leaf(0, 1.0);
  CHECK_THROWS(tree.find_prefix(-0.1));
  CHECK_THROWS(tree.find_prefix(tree.total()));  // half-open on the right
  CHECK_THROWS(tree.set_leaf(0, -1.0));
  CHECK_THROWS(tree.set_leaf(4, 1.0));
  CHECK_THROWS(tree.leaf(-1));
}

TEST_CASE("per buffer: new transitions enter at the running max priority") {
  PerConfig cfg;
  cfg.capacity = 8;
  cfg.alpha = 0.6;
  cfg.epsilon = 1e-5;
  PerBuffer buf(cfg);
  CHECK(buf.max_priority() == 1.0);

  buf.push(make_transition(0.0));
  Rng rng(1);
  SampleBatch first = buf.sample(1, rng);
  CHECK(first.is_weights[0] == 1.0);

  // A large TD error lifts the running max; the next push inherits it.
  buf.update_priorities(first.tree_indices, {3.0});
  CHECK(buf.max_priority() == 3.0 + 1e-5);
  buf.push(make_transition(1.0));
  buf.push(make_transition(2.0));
  // Both new leaves equal pow(max_raw, alpha): drawing near the total lands on
  // the last pushed leaf, and the two new leaves split the mass evenly.
  SampleBatch probe = buf.sample(3, rng);
  CHECK(buf.size() == 3);
}

TEST_CASE("per buffer: ring storage overwrites the oldest transitions") {
  PerConfig cfg;
  cfg.capacity = 4;
  PerBuffer buf(cfg);
  for (int i = 0; i < 6; ++i) buf.push(make_transition(static_cast<double>(i)));
  CHECK(buf.size() == 4);
  Rng rng(3);
  std::set<double> seen;
  for (int trial = 0; trial < 200; ++trial) {
    SampleBatch b = buf.sample(4, rng);
    for (const Transition& t : b.transitions) seen.insert(t.reward);
  }
  CHECK(seen == std::set<double>{2.0, 3.0, 4.0, 5.0});
}

TEST_CASE("per buffer: importance weights, exact formula and normalization") {
  PerConfig cfg;
  cfg.capacity = 4;
  cfg.alpha = 0.6;
  cfg.beta0 = 0.4;
  cfg.epsilon = 1e-5;
  PerBuffer buf(cfg);
  for (int i = 0; i < 4; ++i) buf.push(make_transition(static_cast<double>(i)));

  // Equal priorities: every weight is exactly 1 after max normalization.
  Rng rng(5);
  SampleBatch eq = buf.sample(4, rng);
  for (double w : eq.is_weights) CHECK(w == 1.0);

  // Distinct priorities: recompute w = (N * p)^-beta / max_w by hand.
  buf.update_priorities({0, 1, 2, 3}, {0.5, 1.0, 2.0, 4.0});
  SampleBatch b = buf.sample(4, rng);
  double total = 0.0;
  std::vector<double> leaves(4);
  for (int i = 0; i < 4; ++i) {
    leaves[i] = std::pow(std::abs(std::vector<double>{0.5, 1.0, 2.0, 4.0}[i]) + cfg.epsilon,
                         cfg.alpha);
    total += leaves[i];
  }
  std::vector<double> expect(4);
  double max_w = 0.0;
  for (size_t i = 0; i < b.tree_indices.size(); ++i) {
    const double p = leaves[b.tree_indices[i]] / total;
    expect[i] = std::pow(4.0 * p, -buf.beta());
    max_w = std::max(max_w, expect[i]);
  }
  for (size_t i = 0; i < expect.size(); ++i) {
    CHECK(b.is_weights[i] == doctest::Approx(expect[i] / max_w).epsilon(1e-12));
    CHECK(b.is_weights[i] <= 1.0);
  }
}

TEST_CASE("per buffer: sampling follows the alpha-scaled priorities") {
  PerConfig cfg;
  cfg.capacity = 4;
  cfg.alpha = 0.6;
  cfg.epsilon = 1e-5;
  PerBuffer buf(cfg);
  for (int i = 0; i < 4; ++i) buf.push(make_transition(static_cast<double>(i)));
  buf.update_priorities({0, 1, 2, 3}, {0.1, 0.4, 1.0, 3.0});

  std::vector<double> leaves(4);
  double total = 0.0;
  for (int i = 0; i < 4; ++i) {
    leaves[i] = std::pow(std::vector<double>{0.1, 0.4, 1.0, 3.0}[i] + cfg.epsilon, cfg.alpha);
    total += leaves[i];
  }

  Rng rng(17);
  const int draws = 40000;
  std::vector<int> counts(4, 0);
  for (int i = 0; i < draws; ++i) {
    SampleBatch b = buf.sample(1, rng);  // batch 1: one uniform draw over the mass
    counts[b.tree_indices[0]]++;
  }
  for (int i = 0; i < 4; ++i) {
    const double expected = leaves[i] / total;
    const double observed = static_cast<double>(counts[i]) / draws;
    CHECK(observed == doctest::Approx(expected).epsilon(0.08));
  }
}

TEST_CASE("per buffer: beta anneals linearly and saturates at 1") {
  PerConfig cfg;
  cfg.capacity = 2;
  cfg.beta0 = 0.4;
  cfg.annealing_steps = 50000;
  PerBuffer buf(cfg);
  CHECK(buf.beta() == 0.4);
  buf.anneal_beta(25000);
  CHECK(buf.beta() == doctest::Approx(0.7).epsilon(1e-12));
  buf.anneal_beta(25000);
  CHECK(buf.beta() == 1.0);
  buf.anneal_beta(100000);
  CHECK(buf.beta() == 1.0);
}

TEST_CASE("per buffer: argument validation") {
  PerConfig bad;
  bad.capacity = 0;
  CHECK_THROWS(PerBuffer(bad));

  PerConfig cfg;
  cfg.capacity = 4;
  PerBuffer buf(cfg);
  Rng rng(1);
  CHECK_THROWS(buf.sample(1, rng));  // empty
  buf.push(make_transition(0.0));
  CHECK_THROWS(buf.sample(2, rng));  // fewer stored than requested
  CHECK_THROWS(buf.sample(0, rng));
  CHECK_THROWS(buf.update_priorities({0, 1}, {1.0}));
}

TEST_CASE("per buffer: identical seeds give identical sample sequences") {
  PerConfig cfg;
  cfg.capacity = 16;
  auto run = [&cfg]() {
    PerBuffer buf(cfg);
    Rng rng(99);
    for (int i = 0; i < 16; ++i) buf.push(make_transition(static_cast<double>(i)));
    std::vector<int> indices;
    for (int i = 0; i < 10; ++i) {
      SampleBatch b = buf.sample(8, rng);
      indices.insert(indices.end(), b.tree_indices.begin(), b.tree_indices.end());
      std::vector<double> errs(8);
      for (int j = 0; j < 8; ++j) errs[j] = rng.uniform(0.0, 2.0);
      buf.update_priorities(b.tree_indices, errs);
    }
    return indices;
  };
  CHECK(run() == run());
}
