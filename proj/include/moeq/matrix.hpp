#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace moeq {

// Dense row-major matrix of doubles.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c)
      : rows(r), cols(c), data(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), 0.0) {}

  double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }

  std::span<const double> row(int r) const {
    return {data.data() + static_cast<std::size_t>(r) * cols, static_cast<std::size_t>(cols)};
  }
};

// y = m x. Throws on dimension mismatch; no silent broadcasting.
std::vector<double> matvec(const Matrix& m, std::span<const double> x);

// x = m^T y.
std::vector<double> matvec_transpose(const Matrix& m, std::span<const double> y);

// acc += u v^T.
void add_outer(Matrix& acc, std::span<const double> u, std::span<const double> v);

}  // namespace moeq
