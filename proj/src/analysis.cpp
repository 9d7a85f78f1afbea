#include "focuss/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "focuss/error.hpp"

namespace focuss {

std::string to_string(RateClass c) {
  switch (c) {
    case RateClass::Superlinear: return "Superlinear";
    case RateClass::Linear: return "Linear";
    case RateClass::Sublinear: return "Sublinear";
    case RateClass::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

std::size_t RateReport::valid_count() const {
  return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), true));
}

namespace {

constexpr std::size_t kTail = 5;
constexpr double kSuperlinearSlope = 0.02;
constexpr double kLinearSpread = 0.05;
constexpr double kSublinearRate = 0.95;

double median(Vector v) {
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size();
  return k % 2 ? v[k / 2] : 0.5 * (v[k / 2 - 1] + v[k / 2]);
}

// Least-squares slope of y on x.
double slope(const Vector& x, const Vector& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

Vector lp_inverse_weights(const Vector& s, double p) {
  Vector w(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) w[i] = s[i] == 0.0 ? 0.0 : std::pow(std::abs(s[i]), 2.0 - p);
  return w;
}

Cholesky gram_factor(const ProblemInstance& instance, const Vector& w) {
  Cholesky c = Cholesky::factor(weighted_gram(instance.A, w));
  if (!c.ok) throw Error(ErrorCode::SingularGram, "A Pi^{-1} A^T is not positive definite");
  return c;
}

void check_diag_input(const ProblemInstance& instance, const Vector& s, double p) {
  instance.check();
  if (s.size() != instance.n()) throw Error(ErrorCode::InvalidArgument, "s length differs from n");
  if (!(p > 0.0 && p < 2.0)) throw Error(ErrorCode::InvalidArgument, "requires 0 < p < 2");
}

}  // namespace

RateReport rate_series(const SolveTrace& trace, const Vector& reference, double floor) {
  if (trace.iterates.size() < 3)
    throw Error(ErrorCode::InvalidArgument, "rate series needs at least 3 iterates");
  RateReport r;
  r.reference = reference;
  const double cut = floor * (1.0 + norm2(reference));
  const std::size_t T = trace.iterates.size() - 1;

  Vector e(T + 1);
  for (std::size_t t = 0; t <= T; ++t) e[t] = norm2(subtract(trace.iterates[t], reference));
  for (std::size_t t = 0; t <= T; ++t) {
    if (e[t] != 0.0) continue;
    for (std::size_t u = t + 1; u <= T; ++u)
      if (e[u] > cut)
        throw Error(ErrorCode::DegenerateReference,
                    "reference equals iterate " + std::to_string(t) + " but the trace leaves it");
    break;
  }

  r.r_series.resize(T);
  r.valid.resize(T);
  r.errors.assign(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(T));
  for (std::size_t t = 0; t < T; ++t) {
    r.valid[t] = e[t] > cut;
    r.r_series[t] = e[t] > 0.0 ? e[t + 1] / e[t] : std::numeric_limits<double>::quiet_NaN();
  }

  Vector tail_r, tail_log_e, tail_log_r;
  for (std::size_t t = T; t-- > 0 && tail_r.size() < kTail;) {
    if (!r.valid[t]) continue;
    tail_r.push_back(r.r_series[t]);
    tail_log_e.push_back(std::log(e[t]));
    tail_log_r.push_back(std::log(std::max(r.r_series[t], 1e-300)));
  }
  if (tail_r.empty()) {
    r.limiting_rate = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  r.limiting_rate = median(tail_r);
  if (tail_r.size() < 3) return r;

  r.order_slope = slope(tail_log_e, tail_log_r);
  const auto [lo, hi] = std::minmax_element(tail_r.begin(), tail_r.end());
  if (r.order_slope > kSuperlinearSlope && r.limiting_rate < 1.0)
    r.classification = RateClass::Superlinear;
  else if (r.limiting_rate > kSublinearRate)
    r.classification = RateClass::Sublinear;
  else if (*hi - *lo < kLinearSpread)
    r.classification = RateClass::Linear;
  else
    r.classification = RateClass::Inconclusive;
  return r;
}

Vector polish_reference(const ProblemInstance& instance, const Vector& s,
                        const SolverConfig& config, std::size_t max_iter, std::size_t patience) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  Vector cur = s;
  // Vanishing coordinates keep shrinking after the step reaches rounding level, so that
  // level must hold for several consecutive iterations.
  constexpr std::size_t kConfirm = 5;
  double best = std::numeric_limits<double>::infinity();
  std::size_t stall = 0, settled = 0;
  for (std::size_t it = 0; it < max_iter; ++it) {
    Vector next = focuss_step(instance, cur, config);
    const double d = norm2(subtract(next, cur));
    cur = std::move(next);
    if (d <= 4.0 * eps * (1.0 + norm2(cur))) {
      if (++settled >= kConfirm) break;
      continue;
    }
    settled = 0;
    if (d < best) {
      best = d;
      stall = 0;
    } else if (++stall >= patience) {
      break;
    }
  }
  return cur;
}

std::size_t support_count(const Vector& s, double threshold) {
  const double cut = threshold * std::max(1.0, norm_inf(s));
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [cut](double v) { return std::abs(v) > cut; }));
}

Vector h_vector(const ProblemInstance& instance, const Vector& s, double p) {
  check_diag_input(instance, s, p);
  const Vector y = gram_factor(instance, lp_inverse_weights(s, p)).solve(instance.x);
  const Vector d = matvec_t(instance.A, y);
  Vector h(s.size(), 0.0);
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (s[j] == 0.0) continue;
    h[j] = std::pow(std::abs(s[j]), 1.0 - p) * (s[j] > 0.0 ? 1.0 : -1.0) * d[j];
  }
  return h;
}

DenseMatrix g_matrix(const ProblemInstance& instance, const Vector& s, double p) {
  check_diag_input(instance, s, p);
  const std::size_t m = instance.m(), n = instance.n();
  const Vector w = lp_inverse_weights(s, p);
  const Cholesky chol = gram_factor(instance, w);
  DenseMatrix MinvA(m, n);  // M^{-1} A
  for (std::size_t j = 0; j < n; ++j) {
    const Vector c = chol.solve(instance.A.column(j));
    for (std::size_t i = 0; i < m; ++i) MinvA(i, j) = c[i];
  }
  DenseMatrix G = matmul(instance.A.transpose(), MinvA);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) G(i, j) *= w[i];
  return G;
}

IterationJacobian iteration_jacobian(const ProblemInstance& instance, const Vector& s, double p) {
  IterationJacobian J;
  J.h = h_vector(instance, s, p);
  J.Q = g_matrix(instance, s, p);
  const std::size_t n = instance.n();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) J.Q(i, j) *= J.h[j];
  J.matrix = DenseMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      J.matrix(i, j) = (2.0 - p) * ((i == j ? J.h[i] : 0.0) - J.Q(i, j));
  return J;
}

TheoryVerdict classify_against_theory(double p, std::size_t support, std::size_t m,
                                      std::size_t n, const RateReport& report) {
  std::ostringstream os;
  const RateClass c = report.classification;
  os << "p=" << p << " support=" << support << " m=" << m << " n=" << n
     << " measured=" << to_string(c) << " rate=" << report.limiting_rate;
  auto verdict = [&](bool ok, const std::string& expected) {
    return TheoryVerdict{ok, os.str() + " expected=" + expected};
  };
  if (p < 1.0) return verdict(c == RateClass::Superlinear, "Superlinear");
  if (p == 1.0) {
    // Only an upper bound is known: no better than first order.
    const bool ok = c != RateClass::Superlinear && report.limiting_rate <= 1.0 + 1e-6;
    return verdict(ok, "first order at most");
  }
  if (p < 2.0) {
    if (support == m) return verdict(c == RateClass::Superlinear, "Superlinear");
    if (support > m) {
      const bool ok =
          c == RateClass::Linear && std::abs(report.limiting_rate - (2.0 - p)) <= 0.05;
      return verdict(ok, "Linear(" + std::to_string(2.0 - p) + ")");
    }
    return verdict(false, "support of at least m");
  }
  return verdict(false, "p outside the covered range");
}

bool support_bounds_check(double p, std::size_t support, std::size_t m, std::size_t n) {
  if (p <= 1.0) return support <= m;
  if (p < 2.0) return support + m >= n + 1;
  return false;
}

}  // namespace focuss
