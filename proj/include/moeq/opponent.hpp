#pragma once

#include <array>
#include <vector>

namespace moeq {

constexpr int kOpponentFeatureDim = 6;

// Running sketch of the opponent's behaviour within an episode: the five
// normalized action frequencies plus the most recent action scaled to [0,1].
// Before any action is seen the frequencies read uniform (0.2 each) and the
// last-action slot reads 0.5.
class OpponentTracker {
 public:
  OpponentTracker();

  void reset();
  void update(int opponent_action);
  std::vector<double> features() const;
  long long observed() const { return total_; }

 private:
  std::array<long long, 5> counts_;
  int last_action_ = -1;
  long long total_ = 0;
};

}  // namespace moeq
