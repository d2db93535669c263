#include "moeq/agents.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace moeq {

double tabular_q_update(QTable& table, int s, int a, double r, int s_next,
                        bool done, double gamma, double lr) {
  if (s < 0 || s >= table.num_states || s_next < 0 || s_next >= table.num_states ||
      a < 0 || a >= table.num_actions) {
    throw std::out_of_range("tabular_q_update: index out of range");
  }
  double target = r;
  if (!done) {
    double best = table.at(s_next, 0);
    for (int an = 1; an < table.num_actions; ++an) best = std::max(best, table.at(s_next, an));
    target += gamma * best;
  }
  const double delta = table.at(s, a) - target;
  table.at(s, a) -= lr * delta;
  return delta;
}

double EpsilonSchedule::value(long long step) const {
  if (decay_steps <= 0 || step >= decay_steps) return final_value;
  if (step < 0) return initial;
  const double frac = static_cast<double>(step) / static_cast<double>(decay_steps);
  return initial + (final_value - initial) * frac;
}

int argmax_action(const std::vector<double>& q_values) {
  if (q_values.empty()) throw std::invalid_argument("argmax_action: empty input");
  int best = 0;
  for (int i = 1; i < static_cast<int>(q_values.size()); ++i) {
    if (q_values[i] > q_values[best]) best = i;
  }
  return best;
}

int select_action(const std::vector<double>& q_values, double epsilon, Rng& rng) {
  if (rng.uniform() < epsilon) {
    return rng.uniform_int(static_cast<int>(q_values.size()));
  }
  return argmax_action(q_values);
}

DdqnAgent::DdqnAgent(int state_dim, int num_actions, Rng& rng)
    : online(state_dim, kPlainHidden1, kPlainHidden2, num_actions),
      target(state_dim, kPlainHidden1, kPlainHidden2, num_actions) {
  init_uniform(online, rng);
  sync_target(*this);
}

void sync_target(DdqnAgent& agent) {
  agent.target.l1 = agent.online.l1;
  agent.target.l2 = agent.online.l2;
  agent.target.l3 = agent.online.l3;
}

double ddqn_target(double reward, bool done, const std::vector<double>& q_online_next,
                   const std::vector<double>& q_target_next, double gamma,
                   bool double_q) {
  if (done) return reward;
  if (q_online_next.size() != q_target_next.size() || q_target_next.empty()) {
    throw std::invalid_argument("ddqn_target: q-value shape mismatch");
  }
  const int a = double_q ? argmax_action(q_online_next) : argmax_action(q_target_next);
  return reward + gamma * q_target_next[a];
}

// ---------------------------------------------------------------------------
// Mixture of experts.

MoeGrad::MoeGrad(int state_dim, int num_actions, int num_experts)
    : state_enc(kStateHidden, state_dim),
      opp_enc(kOppHidden, kOpponentFeatureDim),
      gate_hidden(kGateHidden, kOppHidden),
      gate_out(num_experts, kGateHidden) {
  expert_hidden.assign(num_experts, Linear(kExpertHidden, kStateHidden));
  expert_out.assign(num_experts, Linear(num_actions, kExpertHidden));
}

void MoeGrad::zero() {
  state_enc.zero();
  opp_enc.zero();
  for (Linear& l : expert_hidden) l.zero();
  for (Linear& l : expert_out) l.zero();
  gate_hidden.zero();
  gate_out.zero();
}

MoeQNetwork::MoeQNetwork(int state_dim, int num_actions, int num_experts)
    : num_experts(num_experts),
      state_enc(kStateHidden, state_dim),
      opp_enc(kOppHidden, kOpponentFeatureDim),
      gate_hidden(kGateHidden, kOppHidden),
      gate_out(num_experts, kGateHidden),
      adam_m(state_dim, num_actions, num_experts),
      adam_v(state_dim, num_actions, num_experts) {
  if (num_experts <= 0) throw std::invalid_argument("MoeQNetwork: need at least one expert");
  expert_hidden.assign(num_experts, Linear(kExpertHidden, kStateHidden));
  expert_out.assign(num_experts, Linear(num_actions, kExpertHidden));
}

void init_uniform(MoeQNetwork& net, Rng& rng) {
  init_uniform(net.state_enc, rng);
  init_uniform(net.opp_enc, rng);
  for (int k = 0; k < net.num_experts; ++k) {
    init_uniform(net.expert_hidden[k], rng);
    init_uniform(net.expert_out[k], rng);
  }
  init_uniform(net.gate_hidden, rng);
  init_uniform(net.gate_out, rng);
}

std::vector<double> moe_forward(const MoeQNetwork& net, const std::vector<double>& state,
                                const std::vector<double>& opp_features,
                                MoeCache* cache) {
  if (static_cast<int>(state.size()) != net.state_dim())
    throw std::invalid_argument("moe_forward: state dimension mismatch");
  if (static_cast<int>(opp_features.size()) != kOpponentFeatureDim)
    throw std::invalid_argument("moe_forward: opponent feature dimension mismatch");

  std::vector<double> hs = relu(linear_forward(net.state_enc, state));
  std::vector<double> ho = relu(linear_forward(net.opp_enc, opp_features));

  std::vector<std::vector<double>> expert_h(net.num_experts), expert_q(net.num_experts);
  for (int k = 0; k < net.num_experts; ++k) {
    expert_h[k] = relu(linear_forward(net.expert_hidden[k], hs));
    expert_q[k] = linear_forward(net.expert_out[k], expert_h[k]);
  }

  std::vector<double> gate_h = relu(linear_forward(net.gate_hidden, ho));
  std::vector<double> gate_logits = linear_forward(net.gate_out, gate_h);
  std::vector<double> gate_w = softmax(gate_logits);

  std::vector<double> q(net.num_actions(), 0.0);
  for (int k = 0; k < net.num_experts; ++k) {
    for (std::size_t a = 0; a < q.size(); ++a) q[a] += gate_w[k] * expert_q[k][a];
  }

  if (cache) {
    cache->state = state;
    cache->opp = opp_features;
    cache->hs = std::move(hs);
    cache->ho = std::move(ho);
    cache->expert_h = std::move(expert_h);
    cache->expert_q = std::move(expert_q);
    cache->gate_h = std::move(gate_h);
    cache->gate_logits = std::move(gate_logits);
    cache->gate_w = std::move(gate_w);
    cache->q = q;
  }
  return q;
}

void moe_backward(const MoeQNetwork& net, const MoeCache& cache,
                  const std::vector<double>& out_grad, MoeGrad& g) {
  if (static_cast<int>(out_grad.size()) != net.num_actions())
    throw std::invalid_argument("moe_backward: output gradient shape mismatch");

  // Expert branches: each head sees its mixture weight times the output grad.
  std::vector<double> d_hs(cache.hs.size(), 0.0);
  std::vector<double> dw(net.num_experts);
  for (int k = 0; k < net.num_experts; ++k) {
    std::vector<double> dq_k(out_grad.size());
    double dot = 0.0;
    for (std::size_t a = 0; a < out_grad.size(); ++a) {
      dq_k[a] = cache.gate_w[k] * out_grad[a];
      dot += out_grad[a] * cache.expert_q[k][a];
    }
    dw[k] = dot;  // d loss / d mixture weight k
    std::vector<double> d_eh = linear_backward(net.expert_out[k], cache.expert_h[k], dq_k,
                                               g.expert_out[k]);
    relu_backward_inplace(d_eh, cache.expert_h[k]);
    std::vector<double> dx = linear_backward(net.expert_hidden[k], cache.hs, d_eh,
                                             g.expert_hidden[k]);
    for (std::size_t i = 0; i < d_hs.size(); ++i) d_hs[i] += dx[i];
  }

  // Softmax backward: dlogit_k = w_k (dw_k - sum_j w_j dw_j).
  double inner = 0.0;
  for (int k = 0; k < net.num_experts; ++k) inner += cache.gate_w[k] * dw[k];
  std::vector<double> d_logits(net.num_experts);
  for (int k = 0; k < net.num_experts; ++k) {
    d_logits[k] = cache.gate_w[k] * (dw[k] - inner);
  }

  std::vector<double> d_gh = linear_backward(net.gate_out, cache.gate_h, d_logits, g.gate_out);
  relu_backward_inplace(d_gh, cache.gate_h);
  std::vector<double> d_ho = linear_backward(net.gate_hidden, cache.ho, d_gh, g.gate_hidden);

  relu_backward_inplace(d_hs, cache.hs);
  linear_backward(net.state_enc, cache.state, d_hs, g.state_enc);

  relu_backward_inplace(d_ho, cache.ho);
  linear_backward(net.opp_enc, cache.opp, d_ho, g.opp_enc);
}

namespace {

template <typename Net>
std::vector<TensorView> moe_views(Net& n) {
  std::vector<TensorView> v;
  append_views(v, "state_enc", n.state_enc);
  append_views(v, "opp_enc", n.opp_enc);
  for (std::size_t k = 0; k < n.expert_hidden.size(); ++k) {
    const std::string p = "expert" + std::to_string(k);
    append_views(v, p + ".hidden", n.expert_hidden[k]);
    append_views(v, p + ".out", n.expert_out[k]);
  }
  append_views(v, "gate_hidden", n.gate_hidden);
  append_views(v, "gate_out", n.gate_out);
  return v;
}

}  // namespace

std::vector<TensorView> tensor_views(MoeQNetwork& net) { return moe_views(net); }
std::vector<TensorView> tensor_views(MoeGrad& g) { return moe_views(g); }

void adam_step(MoeQNetwork& net, MoeGrad& g, double lr) {
  if (!(lr > 0.0)) throw std::invalid_argument("adam_step: lr must be positive");
  std::vector<TensorView> gv = tensor_views(g);
  for (const TensorView& tv : gv) {
    for (double x : *tv.data) {
      if (!std::isfinite(x))
        throw std::runtime_error("adam_step: non-finite gradient in " + tv.name);
    }
  }
  std::vector<TensorView> pv = tensor_views(net);
  std::vector<TensorView> mv = tensor_views(net.adam_m);
  std::vector<TensorView> vv = tensor_views(net.adam_v);
  if (gv.size() != pv.size()) throw std::invalid_argument("adam_step: gradient shape mismatch");
  const long long t = ++net.adam_steps;
  for (std::size_t i = 0; i < pv.size(); ++i) {
    if (gv[i].data->size() != pv[i].data->size())
      throw std::invalid_argument("adam_step: gradient shape mismatch");
    adam_update_tensor(*pv[i].data, *gv[i].data, *mv[i].data, *vv[i].data, t, lr);
  }
}

namespace {

// Straight-line extended-precision forward of the mixture, independent of
// moe_forward; records ReLU firing masks for kink detection.
long double moe_scalar_ref(const MoeQNetwork& net, const std::vector<double>& state,
                           const std::vector<double>& opp,
                           const std::vector<double>& out_grad,
                           std::vector<char>* mask = nullptr) {
  if (mask) mask->clear();
  auto dense_relu = [&](const Linear& l, const std::vector<long double>& x) {
    std::vector<long double> y(l.out_dim());
    for (int i = 0; i < l.out_dim(); ++i) {
      long double z = l.b[i];
      for (int j = 0; j < l.in_dim(); ++j) z += static_cast<long double>(l.w.at(i, j)) * x[j];
      y[i] = z > 0.0L ? z : 0.0L;
      if (mask) mask->push_back(z > 0.0L);
    }
    return y;
  };
  auto dense = [&](const Linear& l, const std::vector<long double>& x) {
    std::vector<long double> y(l.out_dim());
    for (int i = 0; i < l.out_dim(); ++i) {
      long double z = l.b[i];
      for (int j = 0; j < l.in_dim(); ++j) z += static_cast<long double>(l.w.at(i, j)) * x[j];
      y[i] = z;
    }
    return y;
  };

  std::vector<long double> sx(state.begin(), state.end());
  std::vector<long double> ox(opp.begin(), opp.end());
  std::vector<long double> hs = dense_relu(net.state_enc, sx);
  std::vector<long double> ho = dense_relu(net.opp_enc, ox);

  std::vector<std::vector<long double>> eq(net.num_experts);
  for (int k = 0; k < net.num_experts; ++k) {
    eq[k] = dense(net.expert_out[k], dense_relu(net.expert_hidden[k], hs));
  }

  std::vector<long double> logits = dense(net.gate_out, dense_relu(net.gate_hidden, ho));
  long double lmax = logits[0];
  for (long double v : logits) lmax = std::max(lmax, v);
  long double denom = 0.0L;
  std::vector<long double> w(net.num_experts);
  for (int k = 0; k < net.num_experts; ++k) {
    w[k] = std::exp(logits[k] - lmax);
    denom += w[k];
  }

  long double s = 0.0L;
  for (int k = 0; k < net.num_experts; ++k) {
    for (std::size_t a = 0; a < out_grad.size(); ++a) {
      s += (w[k] / denom) * eq[k][a] * out_grad[a];
    }
  }
  return s;
}

}  // namespace

double finite_diff_check(MoeQNetwork& net, const std::vector<double>& state,
                         const std::vector<double>& opp_features,
                         const std::vector<double>& out_grad) {
  const double h = 1e-5;
  MoeCache cache;
  moe_forward(net, state, opp_features, &cache);
  MoeGrad analytic(net.state_dim(), net.num_actions(), net.num_experts);
  analytic.zero();
  moe_backward(net, cache, out_grad, analytic);

  std::vector<TensorView> pv = tensor_views(net);
  std::vector<TensorView> av = tensor_views(analytic);

  double max_rel = 0.0;
  std::vector<char> mask_p, mask_m;
  for (std::size_t t = 0; t < pv.size(); ++t) {
    std::vector<double>& params = *pv[t].data;
    const std::vector<double>& grads = *av[t].data;
    for (std::size_t i = 0; i < params.size(); ++i) {
      const double orig = params[i];
      params[i] = orig + h;
      const long double fp = moe_scalar_ref(net, state, opp_features, out_grad, &mask_p);
      params[i] = orig - h;
      const long double fm = moe_scalar_ref(net, state, opp_features, out_grad, &mask_m);
      params[i] = orig;
      if (mask_p != mask_m) continue;  // ReLU kink inside the stencil
      const double numeric = static_cast<double>((fp - fm) / (2.0L * h));
      const double a = grads[i];
      const double rel = std::abs(a - numeric) / std::max(1e-8, std::abs(a) + std::abs(numeric));
      if (rel > max_rel) max_rel = rel;
    }
  }
  return max_rel;
}

}  // namespace moeq
