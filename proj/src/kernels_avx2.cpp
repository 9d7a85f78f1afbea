// Compiled with -mavx2 -mfma. Only reached through the dispatch table after a
// runtime CPU check.
#include <immintrin.h>

#include "kernels_impl.hpp"

namespace focuss::kernels::avx2 {

namespace {

double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void gemv(const double* A, std::size_t rows, std::size_t cols, const double* x, double* y) {
  for (std::size_t i = 0; i < rows; ++i) y[i] = dot(A + i * cols, x, cols);
}

void gemv_t(const double* A, std::size_t rows, std::size_t cols, const double* x, double* y) {
  for (std::size_t j = 0; j < cols; ++j) y[j] = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    const double* a = A + i * cols;
    const __m256d xi = _mm256_set1_pd(x[i]);
    std::size_t j = 0;
    for (; j + 4 <= cols; j += 4) {
      __m256d yj = _mm256_loadu_pd(y + j);
      _mm256_storeu_pd(y + j, _mm256_fmadd_pd(_mm256_loadu_pd(a + j), xi, yj));
    }
    for (; j < cols; ++j) y[j] += a[j] * x[i];
  }
}

void weighted_gram(const double* A, std::size_t rows, std::size_t cols, const double* w,
                   double* G) {
  std::vector<double> scaled(cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const double* ai = A + i * cols;
    std::size_t k = 0;
    for (; k + 4 <= cols; k += 4)
      _mm256_storeu_pd(scaled.data() + k,
                       _mm256_mul_pd(_mm256_loadu_pd(ai + k), _mm256_loadu_pd(w + k)));
    for (; k < cols; ++k) scaled[k] = ai[k] * w[k];
    for (std::size_t j = i; j < rows; ++j) {
      const double g = dot(scaled.data(), A + j * cols, cols);
      G[i * rows + j] = g;
      G[j * rows + i] = g;
    }
  }
}

}  // namespace focuss::kernels::avx2
