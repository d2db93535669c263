#pragma once

#include <span>
#include <vector>

#include "moeq/nn.hpp"
#include "moeq/rng.hpp"

namespace moeq {

constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;

// Gradient of a two-hidden-layer network, one tensor per parameter.
struct MlpGrad {
  Linear l1, l2, l3;

  MlpGrad() = default;
  MlpGrad(int in, int h1, int h2, int out) : l1(h1, in), l2(h2, h1), l3(out, h2) {}
  void zero();
};

// in -> h1 -> h2 -> out, ReLU after both hidden layers. Adam moment
// estimates travel with the parameters so optimizer state moves as one value.
struct MlpParams {
  Linear l1, l2, l3;
  MlpGrad adam_m, adam_v;
  long long adam_steps = 0;

  MlpParams() = default;
  MlpParams(int in, int h1, int h2, int out)
      : l1(h1, in), l2(h2, h1), l3(out, h2),
        adam_m(in, h1, h2, out), adam_v(in, h1, h2, out) {}

  int in_dim() const { return l1.in_dim(); }
  int out_dim() const { return l3.out_dim(); }
};

// Weights and biases uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)],
// drawn row-major then bias, layer by layer.
void init_uniform(Linear& l, Rng& rng);
void init_uniform(MlpParams& p, Rng& rng);

// Post-activation values kept for the backward pass. A post-activation of
// exactly 0 marks an inactive ReLU unit (subgradient 0).
struct MlpCache {
  std::vector<double> x, h1, h2, out;
};

MlpCache mlp_forward(const MlpParams& p, std::span<const double> x);

MlpGrad mlp_backward(const MlpParams& p, const MlpCache& cache,
                     std::span<const double> out_grad);

// Accumulating form; g must shape-match p.
void mlp_backward(const MlpParams& p, const MlpCache& cache,
                  std::span<const double> out_grad, MlpGrad& g);

// Enumeration order w1,b1,w2,b2,w3,b3 fixes the serialization layout.
std::vector<TensorView> tensor_views(MlpParams& p);
std::vector<TensorView> tensor_views(MlpGrad& g);

// Shared elementwise Adam kernel (bias-corrected, step count t starts at 1).
void adam_update_tensor(std::span<double> param, std::span<const double> grad,
                        std::span<double> m, std::span<double> v, long long t, double lr);

// One Adam step over all parameters. Throws if any gradient is non-finite.
void adam_step(MlpParams& p, const MlpGrad& g, double lr);

// Max over parameters of |analytic - numeric| / max(1e-8, |analytic| + |numeric|)
// where numeric is a central difference (step 1e-5) of the scalar
// out . out_grad. The numeric side re-evaluates the network with
// straight-line extended-precision loops, independent of mlp_forward.
double finite_diff_check(const MlpParams& p, std::span<const double> x,
                         std::span<const double> out_grad);

}  // namespace moeq
