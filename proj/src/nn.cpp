#include "moeq/nn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace moeq {

std::vector<double> relu(std::span<const double> x) {
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
  return y;
}

std::vector<double> softmax(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("softmax: empty input");
  const double m = *std::max_element(x.begin(), x.end());
  std::vector<double> y(x.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    y[i] = std::exp(x[i] - m);
    sum += y[i];
  }
  for (double& v : y) v /= sum;
  return y;
}

MseResult mse(std::span<const double> pred, std::span<const double> target) {
  if (pred.size() != target.size()) throw std::invalid_argument("mse: length mismatch");
  MseResult r;
  r.grad.resize(pred.size());
  const double inv_n = 1.0 / static_cast<double>(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double e = pred[i] - target[i];
    r.loss += e * e * inv_n;
    r.grad[i] = 2.0 * e * inv_n;
  }
  return r;
}

MseResult mse(std::span<const double> pred, std::span<const double> target,
              std::span<const double> weights) {
  if (pred.size() != target.size() || pred.size() != weights.size())
    throw std::invalid_argument("mse: length mismatch");
  MseResult r;
  r.grad.resize(pred.size());
  const double inv_n = 1.0 / static_cast<double>(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double e = pred[i] - target[i];
    r.loss += weights[i] * e * e * inv_n;
    r.grad[i] = 2.0 * weights[i] * e * inv_n;
  }
  return r;
}

void Linear::zero() {
  std::fill(w.data.begin(), w.data.end(), 0.0);
  std::fill(b.begin(), b.end(), 0.0);
}

std::vector<double> linear_forward(const Linear& l, std::span<const double> x) {
  std::vector<double> y = matvec(l.w, x);
  for (int i = 0; i < l.out_dim(); ++i) y[i] += l.b[i];
  return y;
}

std::vector<double> linear_backward(const Linear& l, std::span<const double> x,
                                    std::span<const double> dy, Linear& g) {
  if (static_cast<int>(dy.size()) != l.out_dim() || static_cast<int>(x.size()) != l.in_dim() ||
      g.out_dim() != l.out_dim() || g.in_dim() != l.in_dim())
    throw std::invalid_argument("linear_backward: shape mismatch");
  add_outer(g.w, dy, x);
  for (int i = 0; i < l.out_dim(); ++i) g.b[i] += dy[i];
  return matvec_transpose(l.w, dy);
}

void relu_backward_inplace(std::span<double> grad, std::span<const double> post) {
  if (grad.size() != post.size()) throw std::invalid_argument("relu_backward: length mismatch");
  for (std::size_t i = 0; i < grad.size(); ++i)
    if (!(post[i] > 0.0)) grad[i] = 0.0;
}

void append_views(std::vector<TensorView>& out, const std::string& prefix, Linear& l) {
  out.push_back({prefix + ".w", l.w.rows, l.w.cols, &l.w.data});
  out.push_back({prefix + ".b", static_cast<int>(l.b.size()), 1, &l.b});
}

}  // namespace moeq
