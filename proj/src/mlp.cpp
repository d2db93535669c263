#include "moeq/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace moeq {

void MlpGrad::zero() {
  l1.zero();
  l2.zero();
  l3.zero();
}

void init_uniform(Linear& l, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(l.in_dim()));
  for (double& w : l.w.data) w = rng.uniform(-bound, bound);
  for (double& b : l.b) b = rng.uniform(-bound, bound);
}

void init_uniform(MlpParams& p, Rng& rng) {
  init_uniform(p.l1, rng);
  init_uniform(p.l2, rng);
  init_uniform(p.l3, rng);
}

MlpCache mlp_forward(const MlpParams& p, std::span<const double> x) {
  if (static_cast<int>(x.size()) != p.in_dim())
    throw std::invalid_argument("mlp_forward: input dimension mismatch");
  MlpCache c;
  c.x.assign(x.begin(), x.end());
  c.h1 = relu(linear_forward(p.l1, c.x));
  c.h2 = relu(linear_forward(p.l2, c.h1));
  c.out = linear_forward(p.l3, c.h2);
  return c;
}

void mlp_backward(const MlpParams& p, const MlpCache& cache,
                  std::span<const double> out_grad, MlpGrad& g) {
  if (static_cast<int>(out_grad.size()) != p.out_dim())
    throw std::invalid_argument("mlp_backward: output gradient shape mismatch");
  std::vector<double> d2 = linear_backward(p.l3, cache.h2, out_grad, g.l3);
  relu_backward_inplace(d2, cache.h2);
  std::vector<double> d1 = linear_backward(p.l2, cache.h1, d2, g.l2);
  relu_backward_inplace(d1, cache.h1);
  linear_backward(p.l1, cache.x, d1, g.l1);
}

MlpGrad mlp_backward(const MlpParams& p, const MlpCache& cache,
                     std::span<const double> out_grad) {
  MlpGrad g(p.in_dim(), p.l1.out_dim(), p.l2.out_dim(), p.out_dim());
  mlp_backward(p, cache, out_grad, g);
  return g;
}

std::vector<TensorView> tensor_views(MlpParams& p) {
  std::vector<TensorView> v;
  append_views(v, "l1", p.l1);
  append_views(v, "l2", p.l2);
  append_views(v, "l3", p.l3);
  return v;
}

std::vector<TensorView> tensor_views(MlpGrad& g) {
  std::vector<TensorView> v;
  append_views(v, "l1", g.l1);
  append_views(v, "l2", g.l2);
  append_views(v, "l3", g.l3);
  return v;
}

void adam_update_tensor(std::span<double> param, std::span<const double> grad,
                        std::span<double> m, std::span<double> v, long long t, double lr) {
  const double bc1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(t));
  const double bc2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(t));
  for (std::size_t i = 0; i < param.size(); ++i) {
    m[i] = kAdamBeta1 * m[i] + (1.0 - kAdamBeta1) * grad[i];
    v[i] = kAdamBeta2 * v[i] + (1.0 - kAdamBeta2) * grad[i] * grad[i];
    const double mhat = m[i] / bc1;
    const double vhat = v[i] / bc2;
    param[i] -= lr * mhat / (std::sqrt(vhat) + kAdamEps);
  }
}

namespace {

void check_finite(const std::vector<TensorView>& views) {
  for (const TensorView& tv : views)
    for (double g : *tv.data)
      if (!std::isfinite(g))
        throw std::runtime_error("adam_step: non-finite gradient in " + tv.name);
}

}  // namespace

void adam_step(MlpParams& p, const MlpGrad& g, double lr) {
  if (!(lr > 0.0)) throw std::invalid_argument("adam_step: lr must be positive");
  std::vector<TensorView> gv = tensor_views(const_cast<MlpGrad&>(g));
  check_finite(gv);
  std::vector<TensorView> pv = tensor_views(p);
  std::vector<TensorView> mv = tensor_views(p.adam_m);
  std::vector<TensorView> vv = tensor_views(p.adam_v);
  const long long t = ++p.adam_steps;
  for (std::size_t i = 0; i < pv.size(); ++i) {
    if (gv[i].data->size() != pv[i].data->size())
      throw std::invalid_argument("adam_step: gradient shape mismatch");
    adam_update_tensor(*pv[i].data, *gv[i].data, *mv[i].data, *vv[i].data, t, lr);
  }
}

namespace {

// Straight-line forward pass in 80-bit arithmetic; the reference side of the
// gradient check. Kept free of any call into mlp_forward. `mask` records
// which ReLU units fired so callers can detect kink crossings.
long double forward_scalar_ref(const MlpParams& p, std::span<const double> x,
                               std::span<const double> out_grad,
                               std::vector<char>* mask = nullptr) {
  const int d = p.l1.in_dim(), h1 = p.l1.out_dim(), h2 = p.l2.out_dim(), o = p.l3.out_dim();
  if (mask) mask->clear();
  std::vector<long double> a1(h1), a2(h2);
  for (int i = 0; i < h1; ++i) {
    long double z = p.l1.b[i];
    for (int j = 0; j < d; ++j) z += static_cast<long double>(p.l1.w.at(i, j)) * x[j];
    a1[i] = z > 0.0L ? z : 0.0L;
    if (mask) mask->push_back(z > 0.0L);
  }
  for (int i = 0; i < h2; ++i) {
    long double z = p.l2.b[i];
    for (int j = 0; j < h1; ++j) z += static_cast<long double>(p.l2.w.at(i, j)) * a1[j];
    a2[i] = z > 0.0L ? z : 0.0L;
    if (mask) mask->push_back(z > 0.0L);
  }
  long double s = 0.0L;
  for (int i = 0; i < o; ++i) {
    long double z = p.l3.b[i];
    for (int j = 0; j < h2; ++j) z += static_cast<long double>(p.l3.w.at(i, j)) * a2[j];
    s += z * out_grad[i];
  }
  return s;
}

}  // namespace

double finite_diff_check(const MlpParams& p, std::span<const double> x,
                         std::span<const double> out_grad) {
  const double h = 1e-5;
  MlpCache cache = mlp_forward(p, x);
  MlpGrad analytic = mlp_backward(p, cache, out_grad);

  MlpParams work = p;
  std::vector<TensorView> pv = tensor_views(work);
  std::vector<TensorView> av = tensor_views(analytic);

  double max_rel = 0.0;
  std::vector<char> mask_p, mask_m;
  for (std::size_t t = 0; t < pv.size(); ++t) {
    std::vector<double>& params = *pv[t].data;
    const std::vector<double>& grads = *av[t].data;
    for (std::size_t i = 0; i < params.size(); ++i) {
      const double orig = params[i];
      params[i] = orig + h;
      const long double fp = forward_scalar_ref(work, x, out_grad, &mask_p);
      params[i] = orig - h;
      const long double fm = forward_scalar_ref(work, x, out_grad, &mask_m);
      params[i] = orig;
      // A ReLU flipping inside [-h, +h] makes the central difference
      // meaningless; the derivative does not exist there. Skip.
      if (mask_p != mask_m) continue;
      const double numeric = static_cast<double>((fp - fm) / (2.0L * h));
      const double a = grads[i];
      const double rel = std::abs(a - numeric) / std::max(1e-8, std::abs(a) + std::abs(numeric));
      if (rel > max_rel) max_rel = rel;
    }
  }
  return max_rel;
}

}  // namespace moeq
