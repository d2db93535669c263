#pragma once

#include <vector>

#include "moeq/agents.hpp"
#include "moeq/replay.hpp"

namespace moeq {

struct BatchResult {
  double loss = 0.0;                // importance-weighted MSE over the batch
  std::vector<double> td_errors;    // per sample: Q(s, a) - y
};

// Minibatch gradient of (1/B) sum_i w_i (Q(s_i,a_i) - y_i)^2 with the
// double-Q target y. Gradients accumulate into g (not zeroed here).
//
// Both variants compute per-sample contributions independently and reduce
// them in sample order, so their outputs are bit-identical; the _omp form
// fans the per-sample work across threads.
BatchResult ddqn_batch_grads_serial(const MlpParams& online, const MlpParams& target,
                                    const std::vector<Transition>& batch,
                                    const std::vector<double>& is_weights,
                                    double gamma, bool double_q, MlpGrad& g);

BatchResult ddqn_batch_grads_omp(const MlpParams& online, const MlpParams& target,
                                 const std::vector<Transition>& batch,
                                 const std::vector<double>& is_weights,
                                 double gamma, bool double_q, MlpGrad& g);

// Mixture network analogue. Current and next Q-values feed the cached
// opponent features stored with each transition.
BatchResult moe_batch_grads_serial(const MoeQNetwork& online, const MoeQNetwork& target,
                                   const std::vector<Transition>& batch,
                                   const std::vector<double>& is_weights,
                                   double gamma, bool double_q, MoeGrad& g);

BatchResult moe_batch_grads_omp(const MoeQNetwork& online, const MoeQNetwork& target,
                                const std::vector<Transition>& batch,
                                const std::vector<double>& is_weights,
                                double gamma, bool double_q, MoeGrad& g);

// Gradient + one Adam step on the online network. Returns the batch result
// whose td_errors re-prioritize the sampled transitions.
BatchResult ddqn_train_step(MlpParams& online, const MlpParams& target,
                            const std::vector<Transition>& batch,
                            const std::vector<double>& is_weights,
                            double gamma, double lr, bool double_q);

BatchResult moe_train_step(MoeQNetwork& online, const MoeQNetwork& target,
                           const std::vector<Transition>& batch,
                           const std::vector<double>& is_weights,
                           double gamma, double lr, bool double_q);

}  // namespace moeq
