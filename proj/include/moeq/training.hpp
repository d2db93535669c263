#pragma once

#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

#include "moeq/batch.hpp"
#include "moeq/envs.hpp"
#include "moeq/opponent.hpp"
#include "moeq/replay.hpp"

namespace moeq {

// Seed-stream tags: every random sequence in a run is an independent stream
// derived from the single config seed.
constexpr std::uint64_t kStreamEnv = 0;
constexpr std::uint64_t kStreamGood = 1;
constexpr std::uint64_t kStreamAdv = 2;
constexpr std::uint64_t kStreamGoodBuffer = 3;
constexpr std::uint64_t kStreamAdvBuffer = 4;
constexpr std::uint64_t kStreamFrozen = 5;
constexpr std::uint64_t kStreamEval = 100;

struct RunConfig {
  ScenarioKind scenario = ScenarioKind::kSimplePush;
  std::uint64_t seed = 1;
  bool use_moe = false;
  bool double_q = true;
  int num_experts = 4;
  PhysicsConfig physics;

  int minibatch_size = 64;
  int replay_memory_size = 1'000'000;
  int target_network_update_frequency = 5;  // in episodes
  int train_frequency = 1;  // env steps per gradient step once the buffer is warm
  double discount_factor = 0.999;
  double learning_rate = 1e-4;
  double initial_epsilon = 1.0;
  double final_epsilon = 0.1;
  double epsilon_decay_fraction = 0.6;  // of total training env steps
  int replay_start_size = 50'000;
  int total_training_episodes = 3000;
  int total_testing_episodes = 1000;
  double frozen_opponent_epsilon = 0.02;
  int checkpoint_interval = 0;  // episodes between snapshots; 0 = final only

  double alpha = 0.6;
  double beta = 0.4;
  double epsilon_per = 1e-5;
  long long annealing_steps = 1'000'000;

  long long epsilon_decay_steps() const;
  // Which role learns in phase 2: the adversary pushes in SimplePush, the
  // good agent hides in SimpleAdversary.
  bool primary_is_good() const { return scenario == ScenarioKind::kSimpleAdversary; }
  PerConfig per_config() const;
};

// A Q-policy that is either the plain network or the mixture network.
class PolicyNet {
 public:
  explicit PolicyNet(MlpParams net) : net_(std::move(net)) {}
  explicit PolicyNet(MoeQNetwork net) : net_(std::move(net)) {}

  bool is_moe() const { return std::holds_alternative<MoeQNetwork>(net_); }
  int state_dim() const;
  int num_actions() const;
  // Mixture nets consume the opponent features; the plain net ignores them.
  std::vector<double> q_values(const std::vector<double>& obs,
                               const std::vector<double>& opp_features) const;

  MlpParams& mlp() { return std::get<MlpParams>(net_); }
  const MlpParams& mlp() const { return std::get<MlpParams>(net_); }
  MoeQNetwork& moe() { return std::get<MoeQNetwork>(net_); }
  const MoeQNetwork& moe() const { return std::get<MoeQNetwork>(net_); }

 private:
  std::variant<MlpParams, MoeQNetwork> net_;
};

struct EpisodeRecord {
  int episode = 0;
  double reward_good = 0.0;
  double reward_adv = 0.0;
  int steps = 0;
  double epsilon_end = 0.0;  // exploration rate when the episode closed
};

// Expanding-window moving average: entry i averages the last
// min(i+1, window) values.
std::vector<double> rolling_score(const std::vector<double>& rewards, int window = 100);

// Observation point for periodic checkpoints / progress reporting. A null
// side pointer means that side is frozen or absent.
struct TrainHooks {
  std::function<void(const EpisodeRecord&, const PolicyNet* good, const PolicyNet* adv)>
      on_episode_end;
};

struct AliResult {
  MlpParams good;
  MlpParams adversary;
  std::vector<EpisodeRecord> episodes;
};

// Phase 1 (adversarial learning initialization): two plain DDQN agents train
// simultaneously from scratch, each the other's moving target. Throws if
// config.use_moe is set; the mixture learner belongs to phase 2.
AliResult run_ali(const RunConfig& config, const TrainHooks& hooks = {});

struct TrainResult {
  PolicyNet primary;
  std::vector<EpisodeRecord> episodes;
};

// Phase 2: a fresh primary agent (plain or mixture per config.use_moe) trains
// against the frozen phase-1 opponent, which acts eps-greedily with
// frozen_opponent_epsilon and never learns.
TrainResult train_vs_fixed(const RunConfig& config, const PolicyNet& frozen_opponent,
                           const TrainHooks& hooks = {});

struct TrajectoryRow {
  int episode = 0;
  int step = 0;
  double agent_x = 0.0, agent_y = 0.0;
  double adv_x = 0.0, adv_y = 0.0;
  int action_good = 0, action_adv = 0;
  double reward_good = 0.0, reward_adv = 0.0;
};

struct EvalStats {
  double mean_good = 0.0, max_good = 0.0;
  double mean_adv = 0.0, max_adv = 0.0;
  std::vector<EpisodeRecord> episodes;
};

// Greedy test phase: total_testing_episodes episodes, both sides at eps = 0,
// per-episode seeds derived from the eval stream. Episodes run in parallel
// and reduce in episode order, so thread count never changes the result.
EvalStats evaluate(const PolicyNet& good, const PolicyNet& adversary,
                   const RunConfig& config,
                   std::vector<TrajectoryRow>* trajectories = nullptr);

}  // namespace moeq
