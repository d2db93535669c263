#pragma once

#include <vector>

#include "moeq/mlp.hpp"
#include "moeq/opponent.hpp"
#include "moeq/rng.hpp"

namespace moeq {

// ---------------------------------------------------------------------------
// Tabular Q-learning (test oracle for the Bellman machinery).

struct QTable {
  int num_states = 0;
  int num_actions = 0;
  std::vector<double> q;  // row-major [state][action]

  QTable(int states, int actions)
      : num_states(states), num_actions(actions),
        q(static_cast<size_t>(states) * actions, 0.0) {}

  double& at(int s, int a) { return q[static_cast<size_t>(s) * num_actions + a]; }
  double at(int s, int a) const { return q[static_cast<size_t>(s) * num_actions + a]; }
};

// Q(s,a) += lr * (r + gamma * max_a' Q(s',a') - Q(s,a)); terminal drops the
// bootstrap. Returns the TD error.
double tabular_q_update(QTable& table, int s, int a, double r, int s_next,
                        bool done, double gamma, double lr);

// ---------------------------------------------------------------------------
// Behaviour policy.

// Linear decay from initial to final over decay_steps, then flat.
struct EpsilonSchedule {
  double initial = 1.0;
  double final_value = 0.1;
  long long decay_steps = 1;

  double value(long long step) const;
};

int argmax_action(const std::vector<double>& q_values);

// Epsilon-greedy over q_values; greedy ties break toward the lowest index.
// Consumes exactly one uniform draw, plus one more when exploring.
int select_action(const std::vector<double>& q_values, double epsilon, Rng& rng);

// ---------------------------------------------------------------------------
// DDQN.

constexpr int kPlainHidden1 = 64;
constexpr int kPlainHidden2 = 128;

struct DdqnAgent {
  MlpParams online;
  MlpParams target;

  DdqnAgent(int state_dim, int num_actions, Rng& rng);
};

void sync_target(DdqnAgent& agent);

// Double-Q target: r + gamma * Q_target(s', argmax_a Q_online(s',a)), or just
// r on terminal transitions. With double_q=false the target net supplies both
// the argmax and the value (vanilla DQN ablation).
double ddqn_target(double reward, bool done, const std::vector<double>& q_online_next,
                   const std::vector<double>& q_target_next, double gamma,
                   bool double_q = true);

// ---------------------------------------------------------------------------
// Mixture-of-experts Q-network.

constexpr int kStateHidden = 64;
constexpr int kOppHidden = 16;
constexpr int kExpertHidden = 64;
constexpr int kGateHidden = 16;

struct MoeGrad {
  Linear state_enc, opp_enc;
  std::vector<Linear> expert_hidden, expert_out;
  Linear gate_hidden, gate_out;

  MoeGrad() = default;
  MoeGrad(int state_dim, int num_actions, int num_experts);
  void zero();
};

// Shared state encoder feeds K expert heads; a separate opponent encoder
// drives the softmax gate, so the mixture weights depend only on the
// opponent features.
struct MoeQNetwork {
  int num_experts = 0;
  Linear state_enc;                   // state_dim -> 64
  Linear opp_enc;                     // 6 -> 16
  std::vector<Linear> expert_hidden;  // 64 -> 64, one per expert
  std::vector<Linear> expert_out;     // 64 -> num_actions, one per expert
  Linear gate_hidden;                 // 16 -> 16
  Linear gate_out;                    // 16 -> num_experts

  MoeGrad adam_m, adam_v;
  long long adam_steps = 0;

  MoeQNetwork(int state_dim, int num_actions, int num_experts);

  int state_dim() const { return state_enc.in_dim(); }
  int num_actions() const { return expert_out.empty() ? 0 : expert_out[0].out_dim(); }
};

void init_uniform(MoeQNetwork& net, Rng& rng);

struct MoeCache {
  std::vector<double> state, opp;            // inputs
  std::vector<double> hs, ho;                // encoder post-activations
  std::vector<std::vector<double>> expert_h; // per-expert hidden post-relu
  std::vector<std::vector<double>> expert_q; // per-expert head outputs
  std::vector<double> gate_h;                // gate hidden post-relu
  std::vector<double> gate_logits;
  std::vector<double> gate_w;                // softmax mixture weights
  std::vector<double> q;                     // blended output
};

std::vector<double> moe_forward(const MoeQNetwork& net, const std::vector<double>& state,
                                const std::vector<double>& opp_features,
                                MoeCache* cache = nullptr);

// Accumulates parameter gradients for dL/dq = out_grad into g.
void moe_backward(const MoeQNetwork& net, const MoeCache& cache,
                  const std::vector<double>& out_grad, MoeGrad& g);

// Parameter enumeration in serialization order: encoders, experts
// (hidden then head, per expert), gate.
std::vector<TensorView> tensor_views(MoeQNetwork& net);
std::vector<TensorView> tensor_views(MoeGrad& g);

// One Adam step over every tensor; increments net.adam_steps.
void adam_step(MoeQNetwork& net, MoeGrad& g, double lr);

// Finite-difference audit analogous to the MLP one; returns max relative
// error over all parameters against a straight-line long double forward.
double finite_diff_check(MoeQNetwork& net, const std::vector<double>& state,
                         const std::vector<double>& opp_features,
                         const std::vector<double>& out_grad);

}  // namespace moeq
