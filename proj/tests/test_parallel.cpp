#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "moeq/batch.hpp"
#include "moeq/rng.hpp"

using namespace moeq;

namespace {

std::vector<Transition> synth_batch(int n, int state_dim, int num_actions, Rng& rng,
                                    bool with_opponent) {
  std::vector<Transition> batch(n);
  for (Transition& t : batch) {
    t.state.resize(state_dim);
    t.next_state.resize(state_dim);
    for (double& x : t.state) x = rng.uniform(-1.0, 1.0);
    for (double& x : t.next_state) x = rng.uniform(-1.0, 1.0);
    t.action = rng.uniform_int(num_actions);
    t.reward = rng.uniform(-5.0, 5.0);
    t.done = rng.uniform() < 0.1;
    if (with_opponent) {
      t.opponent_action = rng.uniform_int(5);
      t.opponent_features.resize(kOpponentFeatureDim);
      t.next_opponent_features.resize(kOpponentFeatureDim);
      for (double& x : t.opponent_features) x = rng.uniform();
      for (double& x : t.next_opponent_features) x = rng.uniform();
    }
  }
  return batch;
}

std::vector<double> synth_weights(int n, Rng& rng) {
  std::vector<double> w(n);
  for (double& x : w) x = rng.uniform(0.1, 1.0);
  return w;
}

bool identical(std::vector<TensorView> a, std::vector<TensorView> b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (*a[i].data != *b[i].data) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("ddqn kernels: serial and parallel gradients are bit-identical") {
  Rng rng(101);
  for (int batch_size : {1, 7, 64, 129}) {
    for (bool double_q : {true, false}) {
      MlpParams online(11, kPlainHidden1, kPlainHidden2, 5);
      MlpParams target(11, kPlainHidden1, kPlainHidden2, 5);
      init_uniform(online, rng);
      init_uniform(target, rng);
      const std::vector<Transition> batch = synth_batch(batch_size, 11, 5, rng, false);
      const std::vector<double> weights = synth_weights(batch_size, rng);

      MlpGrad gs(11, kPlainHidden1, kPlainHidden2, 5), gp(11, kPlainHidden1, kPlainHidden2, 5);
      gs.zero();
      gp.zero();
      BatchResult rs = ddqn_batch_grads_serial(online, target, batch, weights, 0.99, double_q, gs);
      BatchResult rp = ddqn_batch_grads_omp(online, target, batch, weights, 0.99, double_q, gp);

      CHECK(rs.loss == rp.loss);
      CHECK(rs.td_errors == rp.td_errors);
      CHECK(identical(tensor_views(gs), tensor_views(gp)));
    }
  }
}

TEST_CASE("moe kernels: serial and parallel gradients are bit-identical") {
  Rng rng(202);
  for (int batch_size : {1, 5, 64, 100}) {
    for (int num_experts : {1, 4}) {
      MoeQNetwork online(9, 5, num_experts), target(9, 5, num_experts);
      init_uniform(online, rng);
      init_uniform(target, rng);
      const std::vector<Transition> batch = synth_batch(batch_size, 9, 5, rng, true);
      const std::vector<double> weights = synth_weights(batch_size, rng);

      MoeGrad gs(9, 5, num_experts), gp(9, 5, num_experts);
      gs.zero();
      gp.zero();
      BatchResult rs = moe_batch_grads_serial(online, target, batch, weights, 0.999, true, gs);
      BatchResult rp = moe_batch_grads_omp(online, target, batch, weights, 0.999, true, gp);

      CHECK(rs.loss == rp.loss);
      CHECK(rs.td_errors == rp.td_errors);
      CHECK(identical(tensor_views(gs), tensor_views(gp)));
    }
  }
}

TEST_CASE("ddqn batch gradient matches a direct per-sample recomputation") {
  Rng rng(303);
  const int state_dim = 6, actions = 5, n = 16;
  MlpParams online(state_dim, kPlainHidden1, kPlainHidden2, actions);
  MlpParams target(state_dim, kPlainHidden1, kPlainHidden2, actions);
  init_uniform(online, rng);
  init_uniform(target, rng);
  const std::vector<Transition> batch = synth_batch(n, state_dim, actions, rng, false);
  const std::vector<double> weights = synth_weights(n, rng);
  const double gamma = 0.95;

  MlpGrad g(state_dim, kPlainHidden1, kPlainHidden2, actions);
  g.zero();
  BatchResult res = ddqn_batch_grads_serial(online, target, batch, weights, gamma, true, g);

  // Reference: accumulate mlp_backward with out_grad[a] = 2 w delta / n.
  MlpGrad ref(state_dim, kPlainHidden1, kPlainHidden2, actions);
  ref.zero();
  double loss = 0.0;
  for (int i = 0; i < n; ++i) {
    const MlpCache cache = mlp_forward(online, batch[i].state);
    const std::vector<double> q_next = mlp_forward(online, batch[i].next_state).out;
    const std::vector<double> qt_next = mlp_forward(target, batch[i].next_state).out;
    const double y = ddqn_target(batch[i].reward, batch[i].done, q_next, qt_next, gamma, true);
    const double delta = cache.out[batch[i].action] - y;
    CHECK(res.td_errors[i] == delta);
    loss += weights[i] * delta * delta / n;
    std::vector<double> out_grad(actions, 0.0);
    out_grad[batch[i].action] = 2.0 * weights[i] * delta / n;
    mlp_backward(online, cache, out_grad, ref);
  }
  CHECK(res.loss == doctest::Approx(loss).epsilon(1e-12));
  std::vector<TensorView> got = tensor_views(g);
  std::vector<TensorView> want = tensor_views(ref);
  for (std::size_t t = 0; t < got.size(); ++t) {
    const std::vector<double>& a = *got[t].data;
    const std::vector<double>& b = *want[t].data;
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("train steps leave the target net untouched and move the online net") {
  Rng rng(404);
  MoeQNetwork online(6, 5, 2), target(6, 5, 2);
  init_uniform(online, rng);
  init_uniform(target, rng);
  const MoeQNetwork target_before = target;
  const std::vector<Transition> batch = synth_batch(32, 6, 5, rng, true);
  const std::vector<double> weights(32, 1.0);

  const std::vector<double> online_b0_before = online.expert_out[0].b;
  BatchResult res = moe_train_step(online, target, batch, weights, 0.999, 1e-3, true);
  CHECK(static_cast<int>(res.td_errors.size()) == 32);
  CHECK(online.adam_steps == 1);
  CHECK(online.expert_out[0].b != online_b0_before);
  CHECK(target.expert_out[0].b == target_before.expert_out[0].b);
  CHECK(target.state_enc.w.data == target_before.state_enc.w.data);
}

TEST_CASE("identical inputs produce identical train-step outcomes across calls") {
  auto run = []() {
    Rng rng(55);
    MlpParams online(8, kPlainHidden1, kPlainHidden2, 5);
    MlpParams target(8, kPlainHidden1, kPlainHidden2, 5);
    init_uniform(online, rng);
    init_uniform(target, rng);
    const std::vector<Transition> batch = synth_batch(64, 8, 5, rng, false);
    const std::vector<double> weights = synth_weights(64, rng);
    for (int i = 0; i < 5; ++i) {
      ddqn_train_step(online, target, batch, weights, 0.999, 1e-4, true);
    }
    return online.l3.b;
  };
  CHECK(run() == run());
}
