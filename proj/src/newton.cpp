#include "focuss/newton.hpp"

#include <cmath>

#include "focuss/error.hpp"

namespace focuss {

namespace {

void require_nonzero(const ProblemInstance& instance, const Vector& s) {
  instance.check();
  if (s.size() != instance.n()) throw Error(ErrorCode::InvalidArgument, "s length differs from n");
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] == 0.0 || !std::isfinite(s[i]))
      throw Error(ErrorCode::ZeroComponent, "component " + std::to_string(i) + " is zero");
}

double coefficient(double p, NewtonVariant variant) {
  if (variant == NewtonVariant::Quasi) return p;
  if (p == 1.0) throw Error(ErrorCode::ExactAtPEqualsOne, "exact Hessian vanishes at p = 1");
  return p * (p - 1.0);
}

Vector pi_inverse(const Vector& s, double p) {
  Vector w(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) w[i] = std::pow(std::abs(s[i]), 2.0 - p);
  return w;
}

Cholesky factor_gram(const ProblemInstance& instance, const Vector& w) {
  Cholesky c = Cholesky::factor(weighted_gram(instance.A, w));
  if (!c.ok) throw Error(ErrorCode::SingularGram, "A Pi^{-1} A^T is not positive definite");
  return c;
}

}  // namespace

BlockSystem assemble_block(const ProblemInstance& instance, const Vector& s, double p,
                           NewtonVariant variant) {
  require_nonzero(instance, s);
  const double c = coefficient(p, variant);
  const std::size_t m = instance.m(), n = instance.n();
  BlockSystem b{DenseMatrix(m + n, m + n), c};
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      b.H(i, m + j) = instance.A(i, j);
      b.H(m + j, i) = instance.A(i, j);
    }
  for (std::size_t j = 0; j < n; ++j) b.H(m + j, m + j) = c * std::pow(std::abs(s[j]), p - 2.0);
  return b;
}

DenseMatrix block_inverse(const ProblemInstance& instance, const Vector& s, double p,
                          NewtonVariant variant) {
  require_nonzero(instance, s);
  const double c = coefficient(p, variant);
  const std::size_t m = instance.m(), n = instance.n();
  const Vector w = pi_inverse(s, p);
  const Cholesky chol = factor_gram(instance, w);

  DenseMatrix Minv(m, m);
  for (std::size_t j = 0; j < m; ++j) {
    Vector e(m, 0.0);
    e[j] = 1.0;
    const Vector col = chol.solve(e);
    for (std::size_t i = 0; i < m; ++i) Minv(i, j) = col[i];
  }
  // B = M^{-1} A Pi^{-1}  (m x n)
  DenseMatrix B = matmul(Minv, instance.A);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) B(i, j) *= w[j];
  // C = Pi^{-1} A^T M^{-1} A Pi^{-1} = (A Pi^{-1})^T B
  DenseMatrix APi = instance.A;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) APi(i, j) *= w[j];
  const DenseMatrix C = matmul(APi.transpose(), B);

  DenseMatrix Hinv(m + n, m + n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) Hinv(i, j) = -c * Minv(i, j);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Hinv(i, m + j) = B(i, j);
      Hinv(m + j, i) = B(i, j);
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      Hinv(m + i, m + j) = ((i == j ? w[i] : 0.0) - C(i, j)) / c;
  return Hinv;
}

QuasiNewtonStep quasi_newton_step(const ProblemInstance& instance, const Vector& s, double p) {
  require_nonzero(instance, s);
  const Vector w = pi_inverse(s, p);
  const Vector y = factor_gram(instance, w).solve(instance.x);  // M^{-1} x
  QuasiNewtonStep out;
  out.alpha_next.resize(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out.alpha_next[i] = -p * y[i];
  out.s_next = matvec_t(instance.A, y);
  for (std::size_t j = 0; j < w.size(); ++j) out.s_next[j] *= w[j];
  return out;
}

Vector exact_newton_step(const ProblemInstance& instance, const Vector& s, double p) {
  if (p == 1.0) throw Error(ErrorCode::PEqualsOne, "exact Newton step undefined at p = 1");
  const Vector g = quasi_newton_step(instance, s, p).s_next;
  const double a = 1.0 / (p - 1.0);
  Vector out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = a * g[i] + (1.0 - a) * s[i];
  return out;
}

Vector newton_divergence_probe(const ProblemInstance& instance, const Vector& s0, double p,
                               std::size_t iters) {
  auto lp_cost = [p](const Vector& s) {
    double c = 0.0;
    for (double v : s) c += std::pow(std::abs(v), p);
    return c;
  };
  Vector costs{lp_cost(s0)};
  Vector s = s0;
  for (std::size_t t = 0; t < iters; ++t) {
    if (t > 0) {
      bool usable = true;
      for (double v : s) usable = usable && v != 0.0 && std::isfinite(v);
      if (!usable) break;
    }
    Vector next;
    try {
      next = exact_newton_step(instance, s, p);
    } catch (const Error& e) {
      if (t > 0 && e.code() == ErrorCode::SingularGram) break;
      throw;
    }
    const double c = lp_cost(next);
    if (!std::isfinite(c)) break;
    costs.push_back(c);
    s = std::move(next);
  }
  return costs;
}

}  // namespace focuss
