#pragma once

#include <array>
#include <utility>
#include <vector>

#include "moeq/rng.hpp"

namespace moeq {

// Discrete action set shared by both scenarios.
enum class Action { kNone = 0, kLeft = 1, kRight = 2, kDown = 3, kUp = 4 };
constexpr int kNumActions = 5;

enum class ScenarioKind { kSimplePush, kSimpleAdversary };

// Landmarks per scenario: SimplePush has a goal plus a decoy, SimpleAdversary
// has the goal only.
int landmark_count(ScenarioKind kind);

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Vec2& a, const Vec2& b);

struct PhysicsConfig {
  double dt = 0.1;
  double damping = 0.25;
  double accel = 5.0;
  double max_speed = 1.0;
  int episode_length = 25;
};

// Goal landmarks are tinted green, decoys red.
constexpr std::array<double, 3> kGoalColor = {0.25, 0.75, 0.25};
constexpr std::array<double, 3> kDecoyColor = {0.75, 0.25, 0.25};

struct WorldState {
  Vec2 agent_pos, agent_vel;          // the good agent
  Vec2 adversary_pos, adversary_vel;  // the adversary
  std::vector<Vec2> landmarks;
  std::vector<std::array<double, 3>> landmark_colors;
  int goal_index = 0;
  int step_count = 0;

  const Vec2& goal() const { return landmarks[goal_index]; }
};

struct StepOutcome {
  WorldState next;
  std::vector<double> obs_good;
  std::vector<double> obs_adversary;
  double reward_good = 0.0;
  double reward_adversary = 0.0;
  bool done = false;
};

// Positions uniform in [-1,1]^2, velocities zero, goal drawn uniformly for
// SimplePush. Draw order: agent x/y, adversary x/y, landmarks x/y in index
// order, then the goal index.
WorldState reset_world(ScenarioKind kind, Rng& rng);

// Force integration per entity: v <- v (1 - damping) + a dt, speed clamped to
// max_speed, p <- p + v dt. Rewards and observations use the post-move state.
// Throws if the episode already finished.
StepOutcome step_world(const WorldState& state, Action a_good, Action a_adv,
                       ScenarioKind kind, const PhysicsConfig& physics);

// Observation builders. Each throws when handed a state from the other
// scenario. Layouts are fixed:
//   push good (19): own vel, goal rel pos, goal color, both landmark rel
//                   positions, both landmark colors, adversary rel pos
//   push adversary (8): own vel, both landmark rel positions, agent rel pos
//   adversary good (6): own pos, goal rel pos, adversary rel pos
//   adversary adversary (4): landmark rel pos, agent rel pos
std::vector<double> observe_push_good(const WorldState& state);
std::vector<double> observe_push_adversary(const WorldState& state);
std::vector<double> observe_adv_good(const WorldState& state);
std::vector<double> observe_adv_adversary(const WorldState& state);

std::vector<double> observe(const WorldState& state, ScenarioKind kind, bool good_agent);
int observation_dim(ScenarioKind kind, bool good_agent);

// (r_good, r_adv). Push: good is penalized by its goal distance, the
// adversary earns the difference of the two goal distances.
std::pair<double, double> reward_push(const WorldState& state);
// SimpleAdversary: good earns adversary-goal distance minus its own,
// the adversary is penalized by its goal distance alone.
std::pair<double, double> reward_adversary_scenario(const WorldState& state);

std::pair<double, double> reward(const WorldState& state, ScenarioKind kind);

}  // namespace moeq
