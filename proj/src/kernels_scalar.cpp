#include "kernels_impl.hpp"

namespace focuss::kernels::scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void gemv(const double* A, std::size_t rows, std::size_t cols, const double* x, double* y) {
  for (std::size_t i = 0; i < rows; ++i) y[i] = dot(A + i * cols, x, cols);
}

void gemv_t(const double* A, std::size_t rows, std::size_t cols, const double* x, double* y) {
  for (std::size_t j = 0; j < cols; ++j) y[j] = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    const double xi = x[i];
    const double* a = A + i * cols;
    for (std::size_t j = 0; j < cols; ++j) y[j] += a[j] * xi;
  }
}

void weighted_gram(const double* A, std::size_t rows, std::size_t cols, const double* w,
                   double* G) {
  std::vector<double> scaled(cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const double* ai = A + i * cols;
    for (std::size_t k = 0; k < cols; ++k) scaled[k] = ai[k] * w[k];
    for (std::size_t j = i; j < rows; ++j) {
      const double g = dot(scaled.data(), A + j * cols, cols);
      G[i * rows + j] = g;
      G[j * rows + i] = g;
    }
  }
}

}  // namespace focuss::kernels::scalar
