#include "moeq/replay.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace moeq {

namespace {

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

SumTree::SumTree(int capacity) {
  if (capacity <= 0) throw std::invalid_argument("SumTree: capacity must be positive");
  capacity_ = next_pow2(capacity);
  leaf_offset_ = capacity_ - 1;
  nodes_.assign(2 * capacity_ - 1, 0.0);
}

double SumTree::leaf(int index) const {
  if (index < 0 || index >= capacity_) throw std::out_of_range("SumTree::leaf");
  return nodes_[leaf_offset_ + index];
}

void SumTree::set_leaf(int index, double value) {
  if (index < 0 || index >= capacity_) throw std::out_of_range("SumTree::set_leaf");
  if (!(value >= 0.0)) throw std::invalid_argument("SumTree::set_leaf: negative value");
  int node = leaf_offset_ + index;
  const double delta = value - nodes_[node];
  nodes_[node] = value;
  while (node > 0) {
    node = (node - 1) / 2;
    nodes_[node] += delta;
  }
}

double SumTree::max_subtree_sum_error() const {
  double worst = 0.0;
  for (int node = 0; node < leaf_offset_; ++node) {
    const double gap = std::abs(nodes_[node] - (nodes_[2 * node + 1] + nodes_[2 * node + 2]));
    worst = std::max(worst, gap);
  }
  return worst;
}

int SumTree::find_prefix(double prefix) const {
  if (!(prefix >= 0.0) || prefix >= total()) {
    throw std::out_of_range("SumTree::find_prefix: prefix outside [0, total)");
  }
  int node = 0;
  while (node < leaf_offset_) {
    const int left = 2 * node + 1;
    if (prefix < nodes_[left]) {
      node = left;
    } else {
      prefix -= nodes_[left];
      node = left + 1;
    }
  }
  return node - leaf_offset_;
}

PerBuffer::PerBuffer(const PerConfig& config)
    : config_(config), tree_(config.capacity > 0 ? config.capacity : 1) {
  if (config.capacity <= 0) throw std::invalid_argument("PerBuffer: capacity must be positive");
  if (config.alpha < 0.0 || config.epsilon <= 0.0) {
    throw std::invalid_argument("PerBuffer: bad alpha/epsilon");
  }
  storage_.resize(config.capacity);
}

double PerBuffer::beta() const {
  if (config_.annealing_steps <= 0) return 1.0;
  const double frac = static_cast<double>(env_steps_) / static_cast<double>(config_.annealing_steps);
  return std::min(1.0, config_.beta0 + (1.0 - config_.beta0) * frac);
}

void PerBuffer::anneal_beta(long long env_steps) {
  env_steps_ += env_steps;
}

double PerBuffer::priority_from_error(double td_error) const {
  return std::pow(std::abs(td_error) + config_.epsilon, config_.alpha);
}

void PerBuffer::push(Transition t) {
  storage_[next_slot_] = std::move(t);
  tree_.set_leaf(next_slot_, std::pow(max_priority_, config_.alpha));
  next_slot_ = (next_slot_ + 1) % config_.capacity;
  size_ = std::min(size_ + 1, config_.capacity);
}

SampleBatch PerBuffer::sample(int batch, Rng& rng) {
  if (batch <= 0) throw std::invalid_argument("PerBuffer::sample: batch must be positive");
  if (size_ < batch) throw std::logic_error("PerBuffer::sample: not enough transitions");
  SampleBatch out;
  out.transitions.reserve(batch);
  out.tree_indices.reserve(batch);
  out.is_weights.reserve(batch);
  const double total = tree_.total();
  const double segment = total / batch;
  const double b = beta();
  double max_w = 0.0;
  for (int i = 0; i < batch; ++i) {
    // Draw strictly inside the segment so the prefix stays below total().
    const double mass = segment * (i + rng.uniform());
    const int leaf = tree_.find_prefix(std::min(mass, std::nextafter(total, 0.0)));
    const double p = tree_.leaf(leaf) / total;
    const double w = std::pow(static_cast<double>(size_) * p, -b);
    out.transitions.push_back(storage_[leaf]);
    out.tree_indices.push_back(leaf);
    out.is_weights.push_back(w);
    max_w = std::max(max_w, w);
  }
  for (double& w : out.is_weights) w /= max_w;
  return out;
}

void PerBuffer::update_priorities(const std::vector<int>& tree_indices,
                                  const std::vector<double>& td_errors) {
  if (tree_indices.size() != td_errors.size()) {
    throw std::invalid_argument("PerBuffer::update_priorities: size mismatch");
  }
  for (size_t i = 0; i < tree_indices.size(); ++i) {
    const double raw = std::abs(td_errors[i]) + config_.epsilon;
    max_priority_ = std::max(max_priority_, raw);
    tree_.set_leaf(tree_indices[i], std::pow(raw, config_.alpha));
  }
}

}  // namespace moeq
