// Compares the serial reference kernels against their OpenMP twins: wall
// time per call and bitwise equality of every output. Run from the build
// tree; OMP_NUM_THREADS controls the parallel side.

#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "moeq/batch.hpp"
#include "moeq/config.hpp"
#include "moeq/training.hpp"

namespace {

using moeq::MlpGrad;
using moeq::MlpParams;
using moeq::MoeGrad;
using moeq::MoeQNetwork;
using moeq::Rng;
using moeq::TensorView;
using moeq::Transition;

std::vector<Transition> synth_batch(int n, int state_dim, Rng& rng) {
  std::vector<Transition> batch(n);
  for (Transition& t : batch) {
    t.state.resize(state_dim);
    t.next_state.resize(state_dim);
    for (double& x : t.state) x = rng.uniform(-1.0, 1.0);
    for (double& x : t.next_state) x = rng.uniform(-1.0, 1.0);
    t.action = rng.uniform_int(moeq::kNumActions);
    t.opponent_action = rng.uniform_int(moeq::kNumActions);
    t.reward = rng.uniform(-2.0, 2.0);
    t.done = rng.uniform() < 0.05;
    t.opponent_features.resize(moeq::kOpponentFeatureDim);
    t.next_opponent_features.resize(moeq::kOpponentFeatureDim);
    for (double& x : t.opponent_features) x = rng.uniform();
    for (double& x : t.next_opponent_features) x = rng.uniform();
  }
  return batch;
}

template <typename F>
double ms_per_call(F&& f, int iters) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < iters; ++i) f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / iters;
}

bool identical(std::vector<TensorView> a, std::vector<TensorView> b) {
  for (std::size_t t = 0; t < a.size(); ++t) {
    if (*a[t].data != *b[t].data) return false;
  }
  return true;
}

void report(const char* name, double serial_ms, double omp_ms, bool exact) {
  std::printf("%-14s %10.3f ms %10.3f ms %8.2fx   %s\n", name, serial_ms, omp_ms,
              serial_ms / omp_ms, exact ? "bit-exact" : "MISMATCH");
}

}  // namespace

int main() {
  const int batch_size = 64;
  const int state_dim = 19;
  const int iters = 50;
  Rng rng(7);

  std::vector<Transition> batch = synth_batch(batch_size, state_dim, rng);
  const std::vector<double> weights(batch_size, 1.0);

  MlpParams online(state_dim, moeq::kPlainHidden1, moeq::kPlainHidden2, moeq::kNumActions);
  MlpParams target = online;
  moeq::init_uniform(online, rng);
  moeq::init_uniform(target, rng);

  MoeQNetwork moe_online(state_dim, moeq::kNumActions, 4);
  MoeQNetwork moe_target(state_dim, moeq::kNumActions, 4);
  moeq::init_uniform(moe_online, rng);
  moeq::init_uniform(moe_target, rng);

  int threads = 1;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif
  std::printf("batch %d, state dim %d, %d iterations, %d thread(s)\n\n", batch_size,
              state_dim, iters, threads);
  std::printf("%-14s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");

  {
    MlpGrad gs(state_dim, moeq::kPlainHidden1, moeq::kPlainHidden2, moeq::kNumActions);
    MlpGrad gp = gs;
    const double t_serial = ms_per_call(
        [&] {
          gs.zero();
          moeq::ddqn_batch_grads_serial(online, target, batch, weights, 0.999, true, gs);
        },
        iters);
    const double t_omp = ms_per_call(
        [&] {
          gp.zero();
          moeq::ddqn_batch_grads_omp(online, target, batch, weights, 0.999, true, gp);
        },
        iters);
    report("ddqn grads", t_serial, t_omp, identical(tensor_views(gs), tensor_views(gp)));
  }

  {
    MoeGrad gs(state_dim, moeq::kNumActions, 4);
    MoeGrad gp = gs;
    const double t_serial = ms_per_call(
        [&] {
          gs.zero();
          moeq::moe_batch_grads_serial(moe_online, moe_target, batch, weights, 0.999, true, gs);
        },
        iters);
    const double t_omp = ms_per_call(
        [&] {
          gp.zero();
          moeq::moe_batch_grads_omp(moe_online, moe_target, batch, weights, 0.999, true, gp);
        },
        iters);
    report("moe grads", t_serial, t_omp, identical(tensor_views(gs), tensor_views(gp)));
  }

  {
    // Evaluation fan-out: same nets on both sides is meaningless play but a
    // fair timing target; the reduction is episode-ordered either way.
    moeq::RunConfig c = moeq::preset_config(moeq::ScenarioKind::kSimplePush, "desk");
    c.total_testing_episodes = 200;
    Rng grng(11);
    MlpParams good(moeq::observation_dim(c.scenario, true), moeq::kPlainHidden1,
                   moeq::kPlainHidden2, moeq::kNumActions);
    MlpParams adv(moeq::observation_dim(c.scenario, false), moeq::kPlainHidden1,
                  moeq::kPlainHidden2, moeq::kNumActions);
    moeq::init_uniform(good, grng);
    moeq::init_uniform(adv, grng);
    const moeq::PolicyNet pg(std::move(good)), pa(std::move(adv));
    const double t_eval = ms_per_call([&] { moeq::evaluate(pg, pa, c); }, 5);
    std::printf("\nevaluate(), %d episodes: %.3f ms (threads follow OMP_NUM_THREADS)\n",
                c.total_testing_episodes, t_eval);
  }
  return 0;
}
