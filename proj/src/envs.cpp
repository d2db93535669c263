#include "moeq/envs.hpp"

#include <cmath>
#include <stdexcept>
#include <tuple>

namespace moeq {

int landmark_count(ScenarioKind kind) {
  return kind == ScenarioKind::kSimplePush ? 2 : 1;
}

double distance(const Vec2& a, const Vec2& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

WorldState reset_world(ScenarioKind kind, Rng& rng) {
  WorldState s;
  s.agent_pos = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
  s.adversary_pos = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
  const int n = landmark_count(kind);
  s.landmarks.resize(n);
  for (int i = 0; i < n; ++i) {
    s.landmarks[i] = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
  }
  s.goal_index = kind == ScenarioKind::kSimplePush ? rng.uniform_int(n) : 0;
  s.landmark_colors.assign(n, kDecoyColor);
  s.landmark_colors[s.goal_index] = kGoalColor;
  s.agent_vel = s.adversary_vel = {0.0, 0.0};
  s.step_count = 0;
  return s;
}

namespace {

Vec2 action_accel(Action a, double accel) {
  switch (a) {
    case Action::kNone:
      return {0.0, 0.0};
    case Action::kLeft:
      return {-accel, 0.0};
    case Action::kRight:
      return {accel, 0.0};
    case Action::kDown:
      return {0.0, -accel};
    case Action::kUp:
      return {0.0, accel};
  }
  throw std::invalid_argument("action_accel: bad action");
}

void integrate(Vec2& pos, Vec2& vel, Action a, const PhysicsConfig& ph) {
  const Vec2 u = action_accel(a, ph.accel);
  vel.x = vel.x * (1.0 - ph.damping) + u.x * ph.dt;
  vel.y = vel.y * (1.0 - ph.damping) + u.y * ph.dt;
  const double speed = std::sqrt(vel.x * vel.x + vel.y * vel.y);
  if (speed > ph.max_speed) {
    const double scale = ph.max_speed / speed;
    vel.x *= scale;
    vel.y *= scale;
  }
  pos.x += vel.x * ph.dt;
  pos.y += vel.y * ph.dt;
}

void check_scenario(const WorldState& state, ScenarioKind kind, const char* who) {
  if (static_cast<int>(state.landmarks.size()) != landmark_count(kind)) {
    throw std::invalid_argument(std::string(who) + ": state does not match scenario");
  }
}

Vec2 rel(const Vec2& other, const Vec2& self) {
  return {other.x - self.x, other.y - self.y};
}

void push_vec(std::vector<double>& v, const Vec2& p) {
  v.push_back(p.x);
  v.push_back(p.y);
}

}  // namespace

StepOutcome step_world(const WorldState& state, Action a_good, Action a_adv,
                       ScenarioKind kind, const PhysicsConfig& physics) {
  check_scenario(state, kind, "step_world");
  if (state.step_count >= physics.episode_length) {
    throw std::logic_error("step_world: episode already finished");
  }
  StepOutcome out;
  out.next = state;
  integrate(out.next.agent_pos, out.next.agent_vel, a_good, physics);
  integrate(out.next.adversary_pos, out.next.adversary_vel, a_adv, physics);
  out.next.step_count = state.step_count + 1;
  out.done = out.next.step_count >= physics.episode_length;
  std::tie(out.reward_good, out.reward_adversary) = reward(out.next, kind);
  out.obs_good = observe(out.next, kind, true);
  out.obs_adversary = observe(out.next, kind, false);
  return out;
}

std::vector<double> observe_push_good(const WorldState& state) {
  check_scenario(state, ScenarioKind::kSimplePush, "observe_push_good");
  std::vector<double> v;
  v.reserve(19);
  push_vec(v, state.agent_vel);
  push_vec(v, rel(state.goal(), state.agent_pos));
  const auto& gc = state.landmark_colors[state.goal_index];
  v.insert(v.end(), gc.begin(), gc.end());
  for (const auto& lm : state.landmarks) push_vec(v, rel(lm, state.agent_pos));
  for (const auto& c : state.landmark_colors) v.insert(v.end(), c.begin(), c.end());
  push_vec(v, rel(state.adversary_pos, state.agent_pos));
  return v;
}

std::vector<double> observe_push_adversary(const WorldState& state) {
  check_scenario(state, ScenarioKind::kSimplePush, "observe_push_adversary");
  std::vector<double> v;
  v.reserve(8);
  push_vec(v, state.adversary_vel);
  for (const auto& lm : state.landmarks) push_vec(v, rel(lm, state.adversary_pos));
  push_vec(v, rel(state.agent_pos, state.adversary_pos));
  return v;
}

std::vector<double> observe_adv_good(const WorldState& state) {
  check_scenario(state, ScenarioKind::kSimpleAdversary, "observe_adv_good");
  std::vector<double> v;
  v.reserve(6);
  push_vec(v, state.agent_pos);
  push_vec(v, rel(state.goal(), state.agent_pos));
  push_vec(v, rel(state.adversary_pos, state.agent_pos));
  return v;
}

std::vector<double> observe_adv_adversary(const WorldState& state) {
  check_scenario(state, ScenarioKind::kSimpleAdversary, "observe_adv_adversary");
  std::vector<double> v;
  v.reserve(4);
  push_vec(v, rel(state.goal(), state.adversary_pos));
  push_vec(v, rel(state.agent_pos, state.adversary_pos));
  return v;
}

std::vector<double> observe(const WorldState& state, ScenarioKind kind, bool good_agent) {
  if (kind == ScenarioKind::kSimplePush) {
    return good_agent ? observe_push_good(state) : observe_push_adversary(state);
  }
  return good_agent ? observe_adv_good(state) : observe_adv_adversary(state);
}

int observation_dim(ScenarioKind kind, bool good_agent) {
  if (kind == ScenarioKind::kSimplePush) return good_agent ? 19 : 8;
  return good_agent ? 6 : 4;
}

std::pair<double, double> reward_push(const WorldState& state) {
  check_scenario(state, ScenarioKind::kSimplePush, "reward_push");
  const double d_good = distance(state.agent_pos, state.goal());
  const double d_adv = distance(state.adversary_pos, state.goal());
  return {-d_good, -d_adv + d_good};
}

std::pair<double, double> reward_adversary_scenario(const WorldState& state) {
  check_scenario(state, ScenarioKind::kSimpleAdversary, "reward_adversary_scenario");
  const double d_good = distance(state.agent_pos, state.goal());
  const double d_adv = distance(state.adversary_pos, state.goal());
  return {-d_good + d_adv, -d_adv};
}

std::pair<double, double> reward(const WorldState& state, ScenarioKind kind) {
  return kind == ScenarioKind::kSimplePush ? reward_push(state)
                                           : reward_adversary_scenario(state);
}

}  // namespace moeq
