#include "moeq/opponent.hpp"

#include <stdexcept>

namespace moeq {

OpponentTracker::OpponentTracker() {
  reset();
}

void OpponentTracker::reset() {
  counts_.fill(0);
  last_action_ = -1;
  total_ = 0;
}

void OpponentTracker::update(int opponent_action) {
  if (opponent_action < 0 || opponent_action >= 5) {
    throw std::invalid_argument("OpponentTracker::update: action out of range");
  }
  ++counts_[opponent_action];
  ++total_;
  last_action_ = opponent_action;
}

std::vector<double> OpponentTracker::features() const {
  std::vector<double> f(kOpponentFeatureDim);
  if (total_ == 0) {
    for (int i = 0; i < 5; ++i) f[i] = 0.2;
    f[5] = 0.5;
    return f;
  }
  for (int i = 0; i < 5; ++i) {
    f[i] = static_cast<double>(counts_[i]) / static_cast<double>(total_);
  }
  f[5] = static_cast<double>(last_action_) / 4.0;
  return f;
}

}  // namespace moeq
