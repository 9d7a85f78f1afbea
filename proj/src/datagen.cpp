#include "focuss/datagen.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "focuss/analysis.hpp"
#include "focuss/error.hpp"
#include "focuss/focuss.hpp"
#include "focuss/rng.hpp"

namespace focuss {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

DenseMatrix gaussian(Rng& rng, std::size_t rows, std::size_t cols) {
  DenseMatrix M(rows, cols);
  for (double& v : M.entries) v = rng.normal();
  return M;
}

Vector gaussian(Rng& rng, std::size_t n) {
  Vector v(n);
  for (double& x : v) x = rng.normal();
  return v;
}

void require_p_between_one_and_two(double p) {
  if (!(p > 1.0 && p < 2.0)) throw Error(ErrorCode::InvalidArgument, "generator requires 1 < p < 2");
}

double min_over_max(const Vector& v) {
  double lo = std::abs(v.front()), hi = 0.0;
  for (double x : v) {
    lo = std::min(lo, std::abs(x));
    hi = std::max(hi, std::abs(x));
  }
  return hi > 0.0 ? lo / hi : 0.0;
}

Eigen::Map<const RowMat> as_eigen(const DenseMatrix& M) {
  return {M.entries.data(), static_cast<Eigen::Index>(M.rows), static_cast<Eigen::Index>(M.cols)};
}

}  // namespace

GeneratedDataset gen_random(std::size_t m, std::size_t n, std::uint64_t seed, double p) {
  if (m == 0 || m >= n) throw Error(ErrorCode::InvalidArgument, "random instances require 0 < m < n");
  Rng rng(seed);
  for (int attempt = 0; attempt < 10; ++attempt) {
    GeneratedDataset d;
    d.instance.A = gaussian(rng, m, n);
    d.instance.x = gaussian(rng, m);
    d.p = p;
    d.generator = GeneratorKind::Random;
    d.seed = seed;
    if (validate_assumptions(d.instance, {}, seed + static_cast<std::uint64_t>(attempt)).all_ok())
      return d;
  }
  throw Error(ErrorCode::AssumptionFailure, "no valid instance after 10 draws");
}

GeneratedDataset gen_appendix_a(std::size_t m, std::size_t n, double p, std::uint64_t seed) {
  if (m == 0 || m >= n) throw Error(ErrorCode::InfeasibleDimensions, "requires 0 < m < n");
  if (2 * m <= n)
    throw Error(ErrorCode::InfeasibleDimensions,
                "requires 2m > n (got m=" + std::to_string(m) + ", n=" + std::to_string(n) + ")");
  require_p_between_one_and_two(p);
  Rng rng(seed);
  const std::size_t o = n - m;
  DenseMatrix A = gaussian(rng, m, n);

  Eigen::MatrixXd AN(m, m), AO(m, o);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) AN(i, j) = A(i, j);
    for (std::size_t j = 0; j < o; ++j) AO(i, j) = A(i, m + j);
  }
  // M = A_O^T A_N^{-T} = (A_N^{-1} A_O)^T
  const Eigen::MatrixXd Mt = AN.partialPivLu().solve(AO);
  DenseMatrix M(o, m);
  for (std::size_t i = 0; i < o; ++i)
    for (std::size_t j = 0; j < m; ++j) M(i, j) = Mt(j, i);

  const DenseMatrix Z = null_space_basis(M);
  if (Z.cols == 0) throw Error(ErrorCode::DegenerateNullVector, "null space is empty");

  Vector best;
  double best_ratio = -1.0;
  for (int draw = 0; draw < 100; ++draw) {
    const Vector v = matvec(Z, gaussian(rng, Z.cols));
    const double r = min_over_max(v);
    if (r > best_ratio) {
      best_ratio = r;
      best = v;
    }
  }
  if (!(best_ratio > 1e-6))
    throw Error(ErrorCode::DegenerateNullVector, "no null vector with all entries nonzero");
  const double scale = norm_inf(best);
  for (double& v : best) v /= scale;

  Vector planted(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    planted[i] = std::pow(std::abs(best[i]), 1.0 / (p - 1.0)) * (best[i] > 0.0 ? 1.0 : -1.0);

  GeneratedDataset d;
  d.instance.A = std::move(A);
  d.instance.x = matvec(d.instance.A, planted);
  d.p = p;
  d.planted_solution = std::move(planted);
  d.generator = GeneratorKind::AppendixA;
  d.seed = seed;
  d.certificate = norm_inf(matvec(M, best));
  return d;
}

GeneratedDataset gen_appendix_b(std::size_t m, std::size_t k, std::size_t n, double p,
                                std::uint64_t seed) {
  if (!(m < k && k < n))
    throw Error(ErrorCode::InfeasibleDimensions, "requires m < k < n");
  if (n - k > m - 1)
    throw Error(ErrorCode::InfeasibleDimensions,
                "requires n - k <= m - 1 (got n-k=" + std::to_string(n - k) +
                    ", m-1=" + std::to_string(m - 1) + ")");
  require_p_between_one_and_two(p);
  Rng rng(seed);

  SolverConfig cfg;
  cfg.measure = SparsityMeasure::lp(p);
  cfg.step_tol = 1e-12;
  cfg.max_iter = 2000;
  cfg.record_trace = false;

  ProblemInstance sub;
  Vector sN;
  double best_ratio = -1.0;
  for (int attempt = 0; attempt < 10 && best_ratio < 1e-8; ++attempt) {
    ProblemInstance cand{gaussian(rng, m, k), gaussian(rng, m)};
    const Vector s0 = default_init(cand, rng.next_u64());
    const Vector s = polish_reference(cand, solve(cand, s0, cfg).solution, cfg);
    const double r = min_over_max(s);
    if (r > best_ratio) {
      best_ratio = r;
      sub = std::move(cand);
      sN = s;
    }
  }

  Vector w(k);
  for (std::size_t j = 0; j < k; ++j) w[j] = std::pow(std::abs(sN[j]), 2.0 - p);
  const Vector alpha = spd_solve(weighted_gram(sub.A, w), sub.x, RidgePolicy::never()).solution;

  DenseMatrix alpha_row(1, m);
  std::copy(alpha.begin(), alpha.end(), alpha_row.entries.begin());
  const DenseMatrix Z = null_space_basis(alpha_row);  // m x (m-1)
  const DenseMatrix R = gaussian(rng, Z.cols, n - k);
  const DenseMatrix AO = matmul(Z, R);

  GeneratedDataset d;
  d.instance.A = DenseMatrix(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < k; ++j) d.instance.A(i, j) = sub.A(i, j);
    for (std::size_t j = 0; j < n - k; ++j) d.instance.A(i, k + j) = AO(i, j);
  }
  d.instance.x = sub.x;
  Vector planted(n, 0.0);
  std::copy(sN.begin(), sN.end(), planted.begin());
  d.planted_solution = std::move(planted);
  d.p = p;
  d.generator = GeneratorKind::AppendixB;
  d.seed = seed;
  d.certificate = norm_inf(matvec_t(AO, alpha)) / norm2(alpha);
  return d;
}

namespace {

bool lex_less(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

OracleResult brute_force_oracle(const ProblemInstance& instance, double p, std::size_t max_n) {
  instance.check();
  if (!(p > 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidArgument, "oracle requires 0 < p <= 1");
  const std::size_t m = instance.m(), n = instance.n();
  if (n > max_n)
    throw Error(ErrorCode::TooLarge, "n=" + std::to_string(n) + " exceeds " + std::to_string(max_n));

  OracleResult out;
  out.best_solution.assign(n, 0.0);
  const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(instance.x.data(), m);
  if (x.norm() == 0.0) return out;

  const auto A = as_eigen(instance.A);
  bool found = false;
  std::vector<std::size_t> best_support;
  for (std::size_t size = 1; size <= m; ++size) {
    std::vector<std::size_t> cols(size);
    std::iota(cols.begin(), cols.end(), 0);
    while (true) {
      ++out.supports_examined;
      Eigen::MatrixXd B(m, size);
      for (std::size_t j = 0; j < size; ++j) B.col(static_cast<Eigen::Index>(j)) = A.col(static_cast<Eigen::Index>(cols[j]));
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(B);
      qr.setThreshold(1e-10);
      if (static_cast<std::size_t>(qr.rank()) == size) {
        const Eigen::VectorXd c = qr.solve(x);
        if ((B * c - x).norm() <= 1e-9 * x.norm()) {
          Vector s(n, 0.0);
          double cst = 0.0;
          for (std::size_t j = 0; j < size; ++j) {
            s[cols[j]] = c(static_cast<Eigen::Index>(j));
            cst += std::pow(std::abs(c(static_cast<Eigen::Index>(j))), p);
          }
          const double cut = 1e-12 * std::max(1.0, norm_inf(s));
          std::vector<std::size_t> support;
          for (std::size_t i = 0; i < n; ++i)
            if (std::abs(s[i]) > cut) support.push_back(i);
          const bool better = !found || cst < out.best_cost - 1e-12 ||
                              (std::abs(cst - out.best_cost) <= 1e-12 && lex_less(support, best_support));
          if (better) {
            found = true;
            out.best_cost = cst;
            out.best_solution = std::move(s);
            best_support = std::move(support);
          }
        }
      }
      // next combination
      std::size_t i = size;
      while (i-- > 0 && cols[i] == n - size + i) {
      }
      if (i == static_cast<std::size_t>(-1)) break;
      ++cols[i];
      for (std::size_t j = i + 1; j < size; ++j) cols[j] = cols[j - 1] + 1;
    }
  }
  if (!found) throw Error(ErrorCode::NoExactSolution, "no support of size <= m reproduces x");
  return out;
}

}  // namespace focuss
