#pragma once

#include <cstdint>
#include <vector>

#include "moeq/rng.hpp"

namespace moeq {

struct Transition {
  std::vector<double> state;
  int action = 0;
  double reward = 0.0;
  std::vector<double> next_state;
  bool done = false;
  // Opponent-model extras: the opponent's action this step and the tracker
  // features before/after it was recorded.
  int opponent_action = 0;
  std::vector<double> opponent_features;
  std::vector<double> next_opponent_features;
};

// Binary sum tree over `capacity` leaves (padded up to a power of two).
// Internal nodes hold the sum of their children, so sampling a priority mass
// prefix is a log-depth descent.
class SumTree {
 public:
  explicit SumTree(int capacity);

  int capacity() const { return capacity_; }
  double total() const { return nodes_[0]; }
  double leaf(int index) const;
  void set_leaf(int index, double value);
  // Returns the leaf index whose cumulative-sum bucket contains `prefix`.
  // Requires 0 <= prefix < total().
  int find_prefix(double prefix) const;
  // Structural self-check: max |node - (left + right)| over internal nodes.
  double max_subtree_sum_error() const;

 private:
  int capacity_;       // padded leaf count (power of two)
  int leaf_offset_;    // index of first leaf in nodes_
  std::vector<double> nodes_;
};

struct SampleBatch {
  std::vector<Transition> transitions;
  std::vector<int> tree_indices;
  std::vector<double> is_weights;
};

struct PerConfig {
  int capacity = 0;
  double alpha = 0.6;
  double beta0 = 0.4;
  double epsilon = 1e-5;
  long long annealing_steps = 1'000'000;
};

// Proportional prioritized replay. Leaves store (|delta| + epsilon)^alpha;
// new transitions enter at the running max of the raw priorities so they are
// replayed at least once with high probability.
class PerBuffer {
 public:
  explicit PerBuffer(const PerConfig& config);

  int size() const { return size_; }
  int capacity() const { return config_.capacity; }
  double max_priority() const { return max_priority_; }
  const SumTree& tree() const { return tree_; }
  // Beta annealed linearly from beta0 to 1 over annealing_steps env steps.
  double beta() const;
  void anneal_beta(long long env_steps = 1);

  void push(Transition t);
  // Stratified sampling: the priority mass is split into `batch` equal
  // segments and one draw taken per segment. Importance weights are
  // normalized by the batch max. Throws if fewer than `batch` stored.
  SampleBatch sample(int batch, Rng& rng);
  // Re-prioritize sampled leaves from fresh TD errors.
  void update_priorities(const std::vector<int>& tree_indices,
                         const std::vector<double>& td_errors);

 private:
  double priority_from_error(double td_error) const;

  PerConfig config_;
  SumTree tree_;
  std::vector<Transition> storage_;
  int next_slot_ = 0;
  int size_ = 0;
  double max_priority_ = 1.0;  // raw units, i.e. before the ^alpha
  long long env_steps_ = 0;
};

}  // namespace moeq
