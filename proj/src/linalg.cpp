#include "focuss/linalg.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <string>

#include "focuss/error.hpp"
#include "focuss/kernels.hpp"

namespace focuss {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMat> as_eigen(const DenseMatrix& M) {
  return {M.entries.data(), static_cast<Eigen::Index>(M.rows), static_cast<Eigen::Index>(M.cols)};
}

double norm1(const DenseMatrix& G) {
  double best = 0.0;
  for (std::size_t j = 0; j < G.cols; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < G.rows; ++i) s += std::abs(G(i, j));
    best = std::max(best, s);
  }
  return best;
}

double vec_norm1(const Vector& v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

// Hager's estimate of ||G^{-1}||_1 with Higham's alternating-sign safeguard.
double inverse_norm1_estimate(const Cholesky& chol) {
  const std::size_t n = chol.n;
  Vector x(n, 1.0 / static_cast<double>(n));
  double est = 0.0;
  std::size_t last_j = n;
  for (int iter = 0; iter < 5; ++iter) {
    Vector y = chol.solve(x);
    est = vec_norm1(y);
    Vector xi(n);
    for (std::size_t i = 0; i < n; ++i) xi[i] = y[i] >= 0.0 ? 1.0 : -1.0;
    Vector z = chol.solve(xi);
    std::size_t j = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(z[i]) > std::abs(z[j])) j = i;
    double ztx = 0.0;
    for (std::size_t i = 0; i < n; ++i) ztx += z[i] * x[i];
    if (std::abs(z[j]) <= ztx || j == last_j) break;
    std::fill(x.begin(), x.end(), 0.0);
    x[j] = 1.0;
    last_j = j;
  }
  Vector alt(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double mag = n > 1 ? 1.0 + static_cast<double>(i) / static_cast<double>(n - 1) : 1.0;
    alt[i] = (i % 2 == 0) ? mag : -mag;
  }
  const double alt_est = 2.0 * vec_norm1(chol.solve(alt)) / (3.0 * static_cast<double>(n));
  return std::max(est, alt_est);
}

double rcond_from_factor(double g_norm1, const Cholesky& chol) {
  if (!chol.ok || g_norm1 == 0.0) return 0.0;
  const double inv = inverse_norm1_estimate(chol);
  if (!std::isfinite(inv) || inv == 0.0) return 0.0;
  return std::clamp(1.0 / (g_norm1 * inv), 0.0, 1.0);
}

void check_symmetric(const DenseMatrix& G) {
  if (G.rows != G.cols) throw Error(ErrorCode::NotSymmetric, "matrix is not square");
  const double scale = std::max(max_abs(G), 1e-300);
  for (std::size_t i = 0; i < G.rows; ++i)
    for (std::size_t j = i + 1; j < G.cols; ++j)
      if (std::abs(G(i, j) - G(j, i)) > 1e-10 * scale)
        throw Error(ErrorCode::NotSymmetric, "asymmetry at (" + std::to_string(i) + ", " +
                                                 std::to_string(j) + ")");
}

}  // namespace

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix I(n, n);
  for (std::size_t i = 0; i < n; ++i) I(i, i) = 1.0;
  return I;
}

DenseMatrix DenseMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  DenseMatrix M(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t i = 0; i < M.rows; ++i) {
    if (rows[i].size() != M.cols) throw Error(ErrorCode::InvalidArgument, "ragged rows");
    std::copy(rows[i].begin(), rows[i].end(), M.row(i));
  }
  return M;
}

Vector DenseMatrix::column(std::size_t j) const {
  Vector c(rows);
  for (std::size_t i = 0; i < rows; ++i) c[i] = (*this)(i, j);
  return c;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix T(cols, rows);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) T(j, i) = (*this)(i, j);
  return T;
}

bool DenseMatrix::all_finite() const {
  return std::all_of(entries.begin(), entries.end(), [](double v) { return std::isfinite(v); });
}

Cholesky Cholesky::factor(const DenseMatrix& G, double shift) {
  Cholesky c;
  c.n = G.rows;
  c.L.assign(c.n * c.n, 0.0);
  const auto& k = kernels::active();
  for (std::size_t j = 0; j < c.n; ++j) {
    double* Lj = c.L.data() + j * c.n;
    const double d = G(j, j) + shift - k.dot(Lj, Lj, j);
    if (!(d > 0.0) || !std::isfinite(d)) return c;
    const double ljj = std::sqrt(d);
    Lj[j] = ljj;
    for (std::size_t i = j + 1; i < c.n; ++i) {
      double* Li = c.L.data() + i * c.n;
      Li[j] = (G(i, j) - k.dot(Li, Lj, j)) / ljj;
    }
  }
  c.ok = true;
  return c;
}

Vector Cholesky::solve(const Vector& b) const {
  Vector y(b);
  for (std::size_t i = 0; i < n; ++i) {
    const double* Li = L.data() + i * n;
    double s = y[i];
    for (std::size_t j = 0; j < i; ++j) s -= Li[j] * y[j];
    y[i] = s / Li[i];
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = y[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= L[j * n + i] * y[j];
    y[i] = s / L[i * n + i];
  }
  return y;
}

SolveOutcome spd_solve(const DenseMatrix& G, const Vector& b, RidgePolicy policy) {
  check_symmetric(G);
  if (b.size() != G.rows) throw Error(ErrorCode::InvalidArgument, "rhs length mismatch");
  if (!std::all_of(b.begin(), b.end(), [](double v) { return std::isfinite(v); }))
    throw Error(ErrorCode::InvalidArgument, "rhs is not finite");

  const double g1 = norm1(G);
  SolveOutcome out;
  if (policy.mode == RidgeMode::Always) {
    Cholesky c = Cholesky::factor(G, policy.value);
    if (!c.ok) throw Error(ErrorCode::Singular, "factorization failed with ridge");
    out.ridge_used = policy.value;
    out.estimated_rcond = rcond_from_factor(g1 + policy.value, c);
    out.solution = c.solve(b);
    return out;
  }

  Cholesky c = Cholesky::factor(G);
  if (c.ok) {
    out.estimated_rcond = rcond_from_factor(g1, c);
    if (policy.mode == RidgeMode::Never || out.estimated_rcond >= policy.value) {
      out.solution = c.solve(b);
      return out;
    }
  } else if (policy.mode == RidgeMode::Never) {
    throw Error(ErrorCode::Singular, "factorization failed");
  }

  double trace = 0.0;
  for (std::size_t i = 0; i < G.rows; ++i) trace += G(i, i);
  const double eps = (trace > 0.0 && std::isfinite(trace))
                         ? 1e-8 * trace / static_cast<double>(G.rows)
                         : 1e-8;
  Cholesky r = Cholesky::factor(G, eps);
  if (!r.ok) throw Error(ErrorCode::Singular, "factorization failed with ridge");
  out.ridge_used = eps;
  out.estimated_rcond = rcond_from_factor(g1 + eps, r);
  out.solution = r.solve(b);
  return out;
}

DenseMatrix null_space_basis(const DenseMatrix& M, double tol) {
  if (M.cols == 0) return DenseMatrix(0, 0);
  if (M.rows == 0) return DenseMatrix::identity(M.cols);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(as_eigen(M), Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol * smax) ++rank;
  const std::size_t d = M.cols - rank;
  DenseMatrix B(M.cols, d);
  const Eigen::MatrixXd& V = svd.matrixV();
  for (std::size_t i = 0; i < M.cols; ++i)
    for (std::size_t j = 0; j < d; ++j)
      B(i, j) = V(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(rank + j));
  return B;
}

Vector pseudoinverse_apply(const DenseMatrix& M, const Vector& b) {
  if (b.size() != M.rows) throw Error(ErrorCode::InvalidArgument, "rhs length mismatch");
  if (M.rows == 0 || M.cols == 0) return Vector(M.cols, 0.0);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(as_eigen(M), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd v = svd.solve(Eigen::Map<const Eigen::VectorXd>(b.data(), b.size()));
  return Vector(v.data(), v.data() + v.size());
}

double rcond_estimate(const DenseMatrix& G) {
  check_symmetric(G);
  if (G.rows == 0) return 1.0;
  return rcond_from_factor(norm1(G), Cholesky::factor(G));
}

Vector matvec(const DenseMatrix& A, const Vector& x) {
  if (x.size() != A.cols) throw Error(ErrorCode::InvalidArgument, "matvec size mismatch");
  Vector y(A.rows);
  kernels::active().gemv(A.entries.data(), A.rows, A.cols, x.data(), y.data());
  return y;
}

Vector matvec_t(const DenseMatrix& A, const Vector& y) {
  if (y.size() != A.rows) throw Error(ErrorCode::InvalidArgument, "matvec_t size mismatch");
  Vector x(A.cols);
  kernels::active().gemv_t(A.entries.data(), A.rows, A.cols, y.data(), x.data());
  return x;
}

DenseMatrix weighted_gram(const DenseMatrix& A, const Vector& w) {
  if (w.size() != A.cols) throw Error(ErrorCode::InvalidArgument, "weight length mismatch");
  DenseMatrix G(A.rows, A.rows);
  kernels::active().weighted_gram(A.entries.data(), A.rows, A.cols, w.data(), G.entries.data());
  return G;
}

DenseMatrix matmul(const DenseMatrix& A, const DenseMatrix& B) {
  if (A.cols != B.rows) throw Error(ErrorCode::InvalidArgument, "matmul size mismatch");
  DenseMatrix C(A.rows, B.cols);
  for (std::size_t i = 0; i < A.rows; ++i)
    for (std::size_t k = 0; k < A.cols; ++k) {
      const double a = A(i, k);
      if (a == 0.0) continue;
      const double* bk = B.row(k);
      double* ci = C.row(i);
      for (std::size_t j = 0; j < B.cols; ++j) ci[j] += a * bk[j];
    }
  return C;
}

double dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::InvalidArgument, "dot size mismatch");
  return kernels::active().dot(a.data(), b.data(), a.size());
}

double norm2(const Vector& v) {
  // Scaled to avoid overflow and underflow for extreme magnitudes.
  const double scale = norm_inf(v);
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double s = 0.0;
  for (double x : v) {
    const double r = x / scale;
    s += r * r;
  }
  return scale * std::sqrt(s);
}

double norm_inf(const Vector& v) {
  double m = 0.0;
  for (double x : v) {
    if (std::isnan(x)) return x;
    m = std::max(m, std::abs(x));
  }
  return m;
}

double max_abs(const DenseMatrix& M) { return norm_inf(M.entries); }

Vector subtract(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::InvalidArgument, "subtract size mismatch");
  Vector d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

}  // namespace focuss
