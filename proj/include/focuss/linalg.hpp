#pragma once

#include <cstddef>
#include <vector>

namespace focuss {

using Vector = std::vector<double>;

struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> entries;  // row-major

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), entries(r * c, fill) {}

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix from_rows(const std::vector<std::vector<double>>& rows);

  double& operator()(std::size_t i, std::size_t j) { return entries[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return entries[i * cols + j]; }
  const double* row(std::size_t i) const { return entries.data() + i * cols; }
  double* row(std::size_t i) { return entries.data() + i * cols; }

  Vector column(std::size_t j) const;
  DenseMatrix transpose() const;
  bool all_finite() const;
};

enum class RidgeMode { Never, Auto, Always };

struct RidgePolicy {
  RidgeMode mode = RidgeMode::Auto;
  double value = 1e-12;  // rcond threshold for Auto, epsilon for Always

  static RidgePolicy never() { return {RidgeMode::Never, 0.0}; }
  static RidgePolicy automatic(double threshold = 1e-12) { return {RidgeMode::Auto, threshold}; }
  static RidgePolicy always(double epsilon) { return {RidgeMode::Always, epsilon}; }
};

struct SolveOutcome {
  Vector solution;
  double ridge_used = 0.0;
  double estimated_rcond = 0.0;
};

// Cholesky factor L (lower, row-major) with G = L L^T.
struct Cholesky {
  std::size_t n = 0;
  std::vector<double> L;
  bool ok = false;

  static Cholesky factor(const DenseMatrix& G, double shift = 0.0);
  Vector solve(const Vector& b) const;
};

SolveOutcome spd_solve(const DenseMatrix& G, const Vector& b, RidgePolicy policy);
DenseMatrix null_space_basis(const DenseMatrix& M, double tol = 1e-10);
Vector pseudoinverse_apply(const DenseMatrix& M, const Vector& b);
double rcond_estimate(const DenseMatrix& G);

// Small helpers used across modules. They route through the active kernels.
Vector matvec(const DenseMatrix& A, const Vector& x);
Vector matvec_t(const DenseMatrix& A, const Vector& y);
DenseMatrix weighted_gram(const DenseMatrix& A, const Vector& w);
DenseMatrix matmul(const DenseMatrix& A, const DenseMatrix& B);
double dot(const Vector& a, const Vector& b);
double norm2(const Vector& v);
double norm_inf(const Vector& v);
double max_abs(const DenseMatrix& M);
Vector subtract(const Vector& a, const Vector& b);

}  // namespace focuss
