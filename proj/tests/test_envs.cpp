#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "moeq/envs.hpp"

using namespace moeq;

namespace {

WorldState push_state() {
  WorldState s;
  s.agent_pos = {0.1, 0.2};
  s.agent_vel = {0.3, -0.4};
  s.adversary_pos = {-0.5, 0.6};
  s.adversary_vel = {0.05, 0.0};
  s.landmarks = {{0.7, 0.8}, {-0.9, 1.0}};
  s.goal_index = 1;
  s.landmark_colors = {kDecoyColor, kGoalColor};
  return s;
}

WorldState adversary_state() {
  WorldState s;
  s.agent_pos = {0.3, 0.4};
  s.adversary_pos = {0.0, 0.5};
  s.landmarks = {{0.0, 0.0}};
  s.goal_index = 0;
  s.landmark_colors = {kGoalColor};
  return s;
}

}  // namespace

TEST_CASE("observation dims: (19, 8) for push, (6, 4) for adversary") {
  CHECK(observation_dim(ScenarioKind::kSimplePush, true) == 19);
  CHECK(observation_dim(ScenarioKind::kSimplePush, false) == 8);
  CHECK(observation_dim(ScenarioKind::kSimpleAdversary, true) == 6);
  CHECK(observation_dim(ScenarioKind::kSimpleAdversary, false) == 4);

  CHECK(observe_push_good(push_state()).size() == 19);
  CHECK(observe_push_adversary(push_state()).size() == 8);
  CHECK(observe_adv_good(adversary_state()).size() == 6);
  CHECK(observe_adv_adversary(adversary_state()).size() == 4);
}

TEST_CASE("push good observation: every slot by hand") {
  const WorldState s = push_state();
  const std::vector<double> o = observe_push_good(s);
  const std::vector<double> expect = {
      0.3, -0.4,                    // own velocity
      -0.9 - 0.1, 1.0 - 0.2,        // goal relative position
      0.25, 0.75, 0.25,             // goal color
      0.7 - 0.1, 0.8 - 0.2,         // landmark 0 relative
      -0.9 - 0.1, 1.0 - 0.2,        // landmark 1 relative
      0.75, 0.25, 0.25,             // landmark 0 color (decoy)
      0.25, 0.75, 0.25,             // landmark 1 color (goal)
      -0.5 - 0.1, 0.6 - 0.2,        // adversary relative
  };
  REQUIRE(o.size() == expect.size());
  for (std::size_t i = 0; i < o.size(); ++i) CHECK(o[i] == expect[i]);
}

TEST_CASE("push adversary observation: no goal knowledge, only layout") {
  const WorldState s = push_state();
  const std::vector<double> o = observe_push_adversary(s);
  const std::vector<double> expect = {
      0.05, 0.0,                        // own velocity
      0.7 - -0.5, 0.8 - 0.6,            // landmark 0 relative
      -0.9 - -0.5, 1.0 - 0.6,           // landmark 1 relative
      0.1 - -0.5, 0.2 - 0.6,            // good agent relative
  };
  REQUIRE(o.size() == expect.size());
  for (std::size_t i = 0; i < o.size(); ++i) CHECK(o[i] == expect[i]);
}

TEST_CASE("adversary-scenario observations by hand") {
  const WorldState s = adversary_state();
  const std::vector<double> og = observe_adv_good(s);
  const std::vector<double> expect_g = {
      0.3, 0.4,            // own position
      -0.3, -0.4,          // goal relative
      -0.3, 0.1,           // adversary relative
  };
  REQUIRE(og.size() == expect_g.size());
  for (std::size_t i = 0; i < og.size(); ++i) {
    CHECK(og[i] == doctest::Approx(expect_g[i]).epsilon(1e-15));
  }
  const std::vector<double> oa = observe_adv_adversary(s);
  const std::vector<double> expect_a = {
      0.0, -0.5,           // goal relative
      0.3, -0.1,           // good agent relative
  };
  REQUIRE(oa.size() == expect_a.size());
  for (std::size_t i = 0; i < oa.size(); ++i) {
    CHECK(oa[i] == doctest::Approx(expect_a[i]).epsilon(1e-15));
  }
}

TEST_CASE("observation builders reject states from the other scenario") {
  CHECK_THROWS(observe_push_good(adversary_state()));
  CHECK_THROWS(observe_push_adversary(adversary_state()));
  CHECK_THROWS(observe_adv_good(push_state()));
  CHECK_THROWS(observe_adv_adversary(push_state()));
  CHECK_THROWS(reward_push(adversary_state()));
  CHECK_THROWS(reward_adversary_scenario(push_state()));
}

TEST_CASE("push rewards: the -5 + 10 configuration gives r_adv = 5 exactly") {
  WorldState s = push_state();
  s.landmarks = {{0.0, 0.0}, {0.5, 0.5}};
  s.goal_index = 0;
  s.landmark_colors = {kGoalColor, kDecoyColor};
  s.agent_pos = {6.0, 8.0};      // 10 from the goal
  s.adversary_pos = {3.0, 4.0};  // 5 from the goal
  const auto [r_good, r_adv] = reward_push(s);
  CHECK(r_good == -10.0);
  CHECK(r_adv == 5.0);  // -5 + 10
}

TEST_CASE("adversary-scenario rewards: good is relative, adversary absolute") {
  WorldState s = adversary_state();
  s.agent_pos = {3.0, 4.0};      // 5 from the goal
  s.adversary_pos = {0.0, 0.5};  // 0.5 from the goal
  const auto [r_good, r_adv] = reward_adversary_scenario(s);
  CHECK(r_good == -4.5);  // -5 + 0.5
  CHECK(r_adv == -0.5);

  // The adversary's reward ignores the good agent entirely.
  WorldState moved = s;
  moved.agent_pos = {-7.0, 2.0};
  const auto [r_good2, r_adv2] = reward_adversary_scenario(moved);
  CHECK(r_adv2 == r_adv);
  CHECK(r_good2 != r_good);
}

TEST_CASE("physics: accelerate right from rest, exact first steps") {
  WorldState s = push_state();
  s.agent_pos = {0.0, 0.0};
  s.agent_vel = {0.0, 0.0};
  const PhysicsConfig ph;

  StepOutcome o1 = step_world(s, Action::kRight, Action::kNone, ScenarioKind::kSimplePush, ph);
  CHECK(o1.next.agent_vel.x == 0.5);  // 0 * 0.75 + 5 * 0.1
  CHECK(o1.next.agent_vel.y == 0.0);
  CHECK(o1.next.agent_pos.x == 0.05);
  CHECK(o1.next.step_count == 1);

  StepOutcome o2 =
      step_world(o1.next, Action::kRight, Action::kNone, ScenarioKind::kSimplePush, ph);
  CHECK(o2.next.agent_vel.x == 0.875);  // 0.5 * 0.75 + 0.5
  CHECK(o2.next.agent_pos.x == doctest::Approx(0.1375).epsilon(1e-15));

  // Third push would reach 1.15625; the speed cap clamps it to 1.
  StepOutcome o3 =
      step_world(o2.next, Action::kRight, Action::kNone, ScenarioKind::kSimplePush, ph);
  CHECK(o3.next.agent_vel.x == doctest::Approx(1.0).epsilon(1e-15));
  const double speed = std::hypot(o3.next.agent_vel.x, o3.next.agent_vel.y);
  CHECK(speed <= 1.0 + 1e-12);
}

TEST_CASE("physics: damping decays a free velocity, actions map to axes") {
  WorldState s = push_state();
  s.adversary_vel = {0.8, 0.0};
  const PhysicsConfig ph;
  StepOutcome o = step_world(s, Action::kNone, Action::kNone, ScenarioKind::kSimplePush, ph);
  CHECK(o.next.adversary_vel.x == doctest::Approx(0.6).epsilon(1e-15));

  // up moves +y, down -y, left -x for the acting agent only
  WorldState z = push_state();
  z.agent_vel = {0.0, 0.0};
  z.adversary_vel = {0.0, 0.0};
  StepOutcome up = step_world(z, Action::kUp, Action::kDown, ScenarioKind::kSimplePush, ph);
  CHECK(up.next.agent_vel.y == 0.5);
  CHECK(up.next.agent_vel.x == 0.0);
  CHECK(up.next.adversary_vel.y == -0.5);
  StepOutcome lf = step_world(z, Action::kLeft, Action::kNone, ScenarioKind::kSimplePush, ph);
  CHECK(lf.next.agent_vel.x == -0.5);
}

TEST_CASE("step outcome: rewards and observations reflect the post-move state") {
  WorldState s = push_state();
  const PhysicsConfig ph;
  StepOutcome o = step_world(s, Action::kNone, Action::kNone, ScenarioKind::kSimplePush, ph);
  CHECK(o.reward_good == reward_push(o.next).first);
  CHECK(o.obs_good == observe_push_good(o.next));
  CHECK(o.obs_adversary == observe_push_adversary(o.next));
}

TEST_CASE("episodes end after episode_length steps; stepping past throws") {
  Rng rng(4);
  WorldState s = reset_world(ScenarioKind::kSimpleAdversary, rng);
  const PhysicsConfig ph;
  for (int t = 0; t < ph.episode_length; ++t) {
    StepOutcome o =
        step_world(s, Action::kRight, Action::kLeft, ScenarioKind::kSimpleAdversary, ph);
    CHECK(o.done == (t == ph.episode_length - 1));
    s = o.next;
  }
  CHECK(s.step_count == 25);
  CHECK_THROWS(step_world(s, Action::kNone, Action::kNone, ScenarioKind::kSimpleAdversary, ph));
}

TEST_CASE("reset: ranges, colors, and goal index coverage") {
  Rng rng(11);
  std::set<int> push_goals;
  for (int i = 0; i < 500; ++i) {
    const WorldState s = reset_world(ScenarioKind::kSimplePush, rng);
    REQUIRE(s.landmarks.size() == 2);
    for (const Vec2* p : {&s.agent_pos, &s.adversary_pos, &s.landmarks[0], &s.landmarks[1]}) {
      CHECK(p->x >= -1.0);
      CHECK(p->x < 1.0);
      CHECK(p->y >= -1.0);
      CHECK(p->y < 1.0);
    }
    CHECK(s.agent_vel.x == 0.0);
    CHECK(s.adversary_vel.y == 0.0);
    CHECK(s.step_count == 0);
    push_goals.insert(s.goal_index);
    CHECK(s.landmark_colors[s.goal_index] == kGoalColor);
    CHECK(s.landmark_colors[1 - s.goal_index] == kDecoyColor);
  }
  CHECK(push_goals == std::set<int>{0, 1});

  const WorldState a = reset_world(ScenarioKind::kSimpleAdversary, rng);
  REQUIRE(a.landmarks.size() == 1);
  CHECK(a.goal_index == 0);
  CHECK(a.landmark_colors[0] == kGoalColor);
}

TEST_CASE("full-trajectory determinism under a fixed seed") {
  for (ScenarioKind kind : {ScenarioKind::kSimplePush, ScenarioKind::kSimpleAdversary}) {
    Rng r1(123), r2(123), actions1(9), actions2(9);
    const PhysicsConfig ph;
    WorldState a = reset_world(kind, r1);
    WorldState b = reset_world(kind, r2);
    for (int t = 0; t < ph.episode_length; ++t) {
      const Action ag = static_cast<Action>(actions1.uniform_int(kNumActions));
      const Action aa = static_cast<Action>(actions1.uniform_int(kNumActions));
      const Action bg = static_cast<Action>(actions2.uniform_int(kNumActions));
      const Action ba = static_cast<Action>(actions2.uniform_int(kNumActions));
      REQUIRE(ag == bg);
      StepOutcome oa = step_world(a, ag, aa, kind, ph);
      StepOutcome ob = step_world(b, bg, ba, kind, ph);
      CHECK(oa.obs_good == ob.obs_good);
      CHECK(oa.obs_adversary == ob.obs_adversary);
      CHECK(oa.reward_good == ob.reward_good);
      CHECK(oa.reward_adversary == ob.reward_adversary);
      a = oa.next;
      b = ob.next;
    }
  }
}
