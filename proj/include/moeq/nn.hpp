#pragma once

#include <span>
#include <string>
#include <vector>

#include "moeq/matrix.hpp"

namespace moeq {

std::vector<double> relu(std::span<const double> x);

// Max-subtraction softmax. Output entries are in (0, 1] and sum to 1.
// Throws on empty input.
std::vector<double> softmax(std::span<const double> x);

struct MseResult {
  double loss = 0.0;
  std::vector<double> grad;  // d loss / d pred
};

// loss = mean((pred - target)^2), grad = 2 (pred - target) / n.
MseResult mse(std::span<const double> pred, std::span<const double> target);

// Per-element weights applied to the squared errors before averaging.
MseResult mse(std::span<const double> pred, std::span<const double> target,
              std::span<const double> weights);

// One affine block y = w x + b. The same shape doubles as gradient and
// Adam-moment storage for the block.
struct Linear {
  Matrix w;               // out x in
  std::vector<double> b;  // out

  Linear() = default;
  Linear(int out, int in) : w(out, in), b(static_cast<std::size_t>(out), 0.0) {}

  int in_dim() const { return w.cols; }
  int out_dim() const { return w.rows; }
  void zero();
};

std::vector<double> linear_forward(const Linear& l, std::span<const double> x);

// Accumulates dL/dw and dL/db into g; returns dL/dx.
std::vector<double> linear_backward(const Linear& l, std::span<const double> x,
                                    std::span<const double> dy, Linear& g);

// grad[i] := post[i] > 0 ? grad[i] : 0. The subgradient at exactly 0 is 0.
void relu_backward_inplace(std::span<double> grad, std::span<const double> post);

// Named view over one parameter tensor. The enumeration order of a network's
// views defines its serialization layout and drives the shared Adam kernel.
struct TensorView {
  std::string name;
  int rows = 0;
  int cols = 0;
  std::vector<double>* data = nullptr;
};

void append_views(std::vector<TensorView>& out, const std::string& prefix, Linear& l);

}  // namespace moeq
