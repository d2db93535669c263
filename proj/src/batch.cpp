#include "moeq/batch.hpp"

#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace moeq {

namespace {

void check_batch(std::size_t batch, std::size_t weights) {
  if (batch == 0) throw std::invalid_argument("batch kernel: empty batch");
  if (batch != weights) throw std::invalid_argument("batch kernel: weight count mismatch");
}

// The two kernel variants are bit-identical, so picking by thread count
// changes speed only. On one thread the per-sample slots are pure overhead.
bool want_parallel() {
#ifdef _OPENMP
  return omp_get_max_threads() > 1;
#else
  return false;
#endif
}

// Per-sample gradient and TD error for the plain network. The sample's
// weighted squared error is returned through `loss_term`.
void ddqn_sample_grad(const MlpParams& online, const MlpParams& target,
                      const Transition& t, double w, double inv_b, double gamma,
                      bool double_q, MlpGrad& g, double& td_error, double& loss_term) {
  MlpCache cache = mlp_forward(online, t.state);
  std::vector<double> q_online_next, q_target_next;
  if (!t.done) {
    q_online_next = mlp_forward(online, t.next_state).out;
    q_target_next = mlp_forward(target, t.next_state).out;
  }
  const double y = ddqn_target(t.reward, t.done, q_online_next, q_target_next, gamma, double_q);
  const double delta = cache.out[t.action] - y;
  td_error = delta;
  loss_term = w * delta * delta * inv_b;
  std::vector<double> out_grad(cache.out.size(), 0.0);
  out_grad[t.action] = 2.0 * w * delta * inv_b;
  mlp_backward(online, cache, out_grad, g);
}

void moe_sample_grad(const MoeQNetwork& online, const MoeQNetwork& target,
                     const Transition& t, double w, double inv_b, double gamma,
                     bool double_q, MoeGrad& g, double& td_error, double& loss_term) {
  MoeCache cache;
  moe_forward(online, t.state, t.opponent_features, &cache);
  std::vector<double> q_online_next, q_target_next;
  if (!t.done) {
    q_online_next = moe_forward(online, t.next_state, t.next_opponent_features);
    q_target_next = moe_forward(target, t.next_state, t.next_opponent_features);
  }
  const double y = ddqn_target(t.reward, t.done, q_online_next, q_target_next, gamma, double_q);
  const double delta = cache.q[t.action] - y;
  td_error = delta;
  loss_term = w * delta * delta * inv_b;
  std::vector<double> out_grad(cache.q.size(), 0.0);
  out_grad[t.action] = 2.0 * w * delta * inv_b;
  moe_backward(online, cache, out_grad, g);
}

// Adds each slot into g scalar-by-scalar in sample order — the same
// per-scalar addition order the serial kernels produce by accumulating
// directly, which is what makes serial and OpenMP outputs bit-identical.
template <typename Grad>
void reduce_slots(std::vector<Grad>& slots, std::vector<TensorView>& total_views) {
  for (Grad& slot : slots) {
    std::vector<TensorView> sv = tensor_views(slot);
    for (std::size_t t = 0; t < total_views.size(); ++t) {
      std::vector<double>& dst = *total_views[t].data;
      const std::vector<double>& src = *sv[t].data;
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
    }
  }
}

}  // namespace

BatchResult ddqn_batch_grads_serial(const MlpParams& online, const MlpParams& target,
                                    const std::vector<Transition>& batch,
                                    const std::vector<double>& is_weights,
                                    double gamma, bool double_q, MlpGrad& g) {
  check_batch(batch.size(), is_weights.size());
  const double inv_b = 1.0 / static_cast<double>(batch.size());
  BatchResult r;
  r.td_errors.resize(batch.size());
  std::vector<double> loss_terms(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    ddqn_sample_grad(online, target, batch[i], is_weights[i], inv_b, gamma, double_q,
                     g, r.td_errors[i], loss_terms[i]);
  }
  for (double lt : loss_terms) r.loss += lt;
  return r;
}

BatchResult ddqn_batch_grads_omp(const MlpParams& online, const MlpParams& target,
                                 const std::vector<Transition>& batch,
                                 const std::vector<double>& is_weights,
                                 double gamma, bool double_q, MlpGrad& g) {
  check_batch(batch.size(), is_weights.size());
  const double inv_b = 1.0 / static_cast<double>(batch.size());
  const int n = static_cast<int>(batch.size());
  BatchResult r;
  r.td_errors.resize(batch.size());
  std::vector<double> loss_terms(batch.size());
  std::vector<MlpGrad> slots(
      batch.size(), MlpGrad(online.in_dim(), online.l1.out_dim(), online.l2.out_dim(),
                            online.out_dim()));
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    ddqn_sample_grad(online, target, batch[i], is_weights[i], inv_b, gamma, double_q,
                     slots[i], r.td_errors[i], loss_terms[i]);
  }
  std::vector<TensorView> gv = tensor_views(g);
  reduce_slots(slots, gv);
  for (double lt : loss_terms) r.loss += lt;
  return r;
}

BatchResult moe_batch_grads_serial(const MoeQNetwork& online, const MoeQNetwork& target,
                                   const std::vector<Transition>& batch,
                                   const std::vector<double>& is_weights,
                                   double gamma, bool double_q, MoeGrad& g) {
  check_batch(batch.size(), is_weights.size());
  const double inv_b = 1.0 / static_cast<double>(batch.size());
  BatchResult r;
  r.td_errors.resize(batch.size());
  std::vector<double> loss_terms(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    moe_sample_grad(online, target, batch[i], is_weights[i], inv_b, gamma, double_q,
                    g, r.td_errors[i], loss_terms[i]);
  }
  for (double lt : loss_terms) r.loss += lt;
  return r;
}

BatchResult moe_batch_grads_omp(const MoeQNetwork& online, const MoeQNetwork& target,
                                const std::vector<Transition>& batch,
                                const std::vector<double>& is_weights,
                                double gamma, bool double_q, MoeGrad& g) {
  check_batch(batch.size(), is_weights.size());
  const double inv_b = 1.0 / static_cast<double>(batch.size());
  const int n = static_cast<int>(batch.size());
  BatchResult r;
  r.td_errors.resize(batch.size());
  std::vector<double> loss_terms(batch.size());
  MoeGrad proto(online.state_dim(), online.num_actions(), online.num_experts);
  std::vector<MoeGrad> slots(batch.size(), proto);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    moe_sample_grad(online, target, batch[i], is_weights[i], inv_b, gamma, double_q,
                    slots[i], r.td_errors[i], loss_terms[i]);
  }
  std::vector<TensorView> gv = tensor_views(g);
  reduce_slots(slots, gv);
  for (double lt : loss_terms) r.loss += lt;
  return r;
}

BatchResult ddqn_train_step(MlpParams& online, const MlpParams& target,
                            const std::vector<Transition>& batch,
                            const std::vector<double>& is_weights,
                            double gamma, double lr, bool double_q) {
  MlpGrad g(online.in_dim(), online.l1.out_dim(), online.l2.out_dim(), online.out_dim());
  BatchResult r =
      want_parallel()
          ? ddqn_batch_grads_omp(online, target, batch, is_weights, gamma, double_q, g)
          : ddqn_batch_grads_serial(online, target, batch, is_weights, gamma, double_q, g);
  adam_step(online, g, lr);
  return r;
}

BatchResult moe_train_step(MoeQNetwork& online, const MoeQNetwork& target,
                           const std::vector<Transition>& batch,
                           const std::vector<double>& is_weights,
                           double gamma, double lr, bool double_q) {
  MoeGrad g(online.state_dim(), online.num_actions(), online.num_experts);
  BatchResult r =
      want_parallel()
          ? moe_batch_grads_omp(online, target, batch, is_weights, gamma, double_q, g)
          : moe_batch_grads_serial(online, target, batch, is_weights, gamma, double_q, g);
  adam_step(online, g, lr);
  return r;
}

}  // namespace moeq
