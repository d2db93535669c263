#include "moeq/matrix.hpp"

#include <stdexcept>
#include <string>

namespace moeq {

namespace {

void check(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("matrix: ") + what);
}

}  // namespace

std::vector<double> matvec(const Matrix& m, std::span<const double> x) {
  check(static_cast<int>(x.size()) == m.cols, "matvec dimension mismatch");
  std::vector<double> y(static_cast<std::size_t>(m.rows));
  const double* row = m.data.data();
  for (int r = 0; r < m.rows; ++r, row += m.cols) {
    double acc = 0.0;
    for (int c = 0; c < m.cols; ++c) acc += row[c] * x[c];
    y[r] = acc;
  }
  return y;
}

std::vector<double> matvec_transpose(const Matrix& m, std::span<const double> y) {
  check(static_cast<int>(y.size()) == m.rows, "matvec_transpose dimension mismatch");
  std::vector<double> x(static_cast<std::size_t>(m.cols), 0.0);
  const double* row = m.data.data();
  for (int r = 0; r < m.rows; ++r, row += m.cols) {
    const double yr = y[r];
    for (int c = 0; c < m.cols; ++c) x[c] += yr * row[c];
  }
  return x;
}

void add_outer(Matrix& acc, std::span<const double> u, std::span<const double> v) {
  check(static_cast<int>(u.size()) == acc.rows && static_cast<int>(v.size()) == acc.cols,
        "add_outer dimension mismatch");
  double* row = acc.data.data();
  for (int r = 0; r < acc.rows; ++r, row += acc.cols) {
    const double ur = u[r];
    for (int c = 0; c < acc.cols; ++c) row[c] += ur * v[c];
  }
}

}  // namespace moeq
