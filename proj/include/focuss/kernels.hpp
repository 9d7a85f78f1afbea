#pragma once

#include <cstddef>

// Hot loops of the solver: dot products, matrix-vector products and the
// weighted Gram matrix A diag(w) A^T. All matrices are dense row-major.
namespace focuss::kernels {

enum class Backend { Scalar, Avx2 };

struct KernelTable {
  Backend backend;
  const char* name;
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y = A x, A is rows x cols.
  void (*gemv)(const double* A, std::size_t rows, std::size_t cols, const double* x, double* y);
  // y = A^T x, A is rows x cols, y has cols entries.
  void (*gemv_t)(const double* A, std::size_t rows, std::size_t cols, const double* x, double* y);
  // G = A diag(w) A^T, G is rows x rows and fully populated (symmetric).
  void (*weighted_gram)(const double* A, std::size_t rows, std::size_t cols, const double* w,
                        double* G);
};

const KernelTable& scalar_table();

// nullptr when the AVX2 variant was not compiled in.
const KernelTable* avx2_table();

bool cpu_supports_avx2();

// Table chosen at first use: AVX2 when compiled and supported, else scalar.
const KernelTable& active();

// Override the runtime choice. Returns false if the backend is unavailable.
bool select_backend(Backend backend);

}  // namespace focuss::kernels
