#pragma once

#include <cstddef>
#include <vector>

#include "focuss/kernels.hpp"

namespace focuss::kernels {

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void gemv(const double* A, std::size_t rows, std::size_t cols, const double* x, double* y);
void gemv_t(const double* A, std::size_t rows, std::size_t cols, const double* x, double* y);
void weighted_gram(const double* A, std::size_t rows, std::size_t cols, const double* w,
                   double* G);
}  // namespace scalar

#ifdef FOCUSS_HAVE_AVX2
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void gemv(const double* A, std::size_t rows, std::size_t cols, const double* x, double* y);
void gemv_t(const double* A, std::size_t rows, std::size_t cols, const double* x, double* y);
void weighted_gram(const double* A, std::size_t rows, std::size_t cols, const double* w,
                   double* G);
}  // namespace avx2
#endif

}  // namespace focuss::kernels
