#include "focuss/model.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

#include "focuss/error.hpp"
#include "focuss/rng.hpp"

namespace focuss {

void ProblemInstance::check() const {
  if (A.rows == 0 || A.cols == 0) throw Error(ErrorCode::InvalidArgument, "empty matrix");
  if (A.rows > A.cols) throw Error(ErrorCode::InvalidArgument, "instance requires m <= n");
  if (x.size() != A.rows) throw Error(ErrorCode::InvalidArgument, "x length differs from m");
  if (!A.all_finite()) throw Error(ErrorCode::InvalidArgument, "A has non-finite entries");
  for (double v : x)
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "x has non-finite entries");
}

SparsityMeasure SparsityMeasure::lp(double p) {
  if (!(p > 0.0 && p < 2.0)) throw Error(ErrorCode::InvalidArgument, "Lp requires 0 < p < 2");
  return {Kind::Lp, p};
}

SparsityMeasure SparsityMeasure::log_abs() { return {Kind::LogAbs, 0.0}; }

SparsityMeasure SparsityMeasure::neg_power(double p) {
  if (!(p < 0.0)) throw Error(ErrorCode::InvalidArgument, "NegPower requires p < 0");
  return {Kind::NegPower, p};
}

std::string SparsityMeasure::name() const {
  switch (kind) {
    case Kind::Lp: return "lp(" + std::to_string(p) + ")";
    case Kind::LogAbs: return "log_abs";
    case Kind::NegPower: return "neg_power(" + std::to_string(p) + ")";
  }
  return "unknown";
}

double SparsityMeasure::atom(double s) const {
  const double a = std::abs(s);
  switch (kind) {
    case Kind::Lp: return std::pow(a, p);
    case Kind::LogAbs: return std::log(a);
    case Kind::NegPower: return -std::pow(a, p);
  }
  return 0.0;
}

double SparsityMeasure::atom_derivative(double s) const {
  const double a = std::abs(s);
  switch (kind) {
    case Kind::Lp: return p * std::pow(a, p - 1.0);
    case Kind::LogAbs: return 1.0 / a;
    case Kind::NegPower: return -p * std::pow(a, p - 1.0);
  }
  return 0.0;
}

double SparsityMeasure::inverse_weight_exponent() const {
  return kind == Kind::LogAbs ? 2.0 : 2.0 - p;
}

double measure_weight(const SparsityMeasure& measure, double s) {
  const double a = std::abs(s);
  if (a == 0.0) return std::numeric_limits<double>::infinity();
  switch (measure.kind) {
    case SparsityMeasure::Kind::Lp: return std::pow(a, measure.p - 2.0);
    case SparsityMeasure::Kind::LogAbs: return 1.0 / (2.0 * a * a);
    case SparsityMeasure::Kind::NegPower: return -measure.p * std::pow(a, measure.p - 2.0) / 2.0;
  }
  return 0.0;
}

double inverse_weight(const SparsityMeasure& measure, double s) {
  const double a = std::abs(s);
  if (a == 0.0) return 0.0;
  switch (measure.kind) {
    case SparsityMeasure::Kind::Lp: return std::pow(a, 2.0 - measure.p);
    case SparsityMeasure::Kind::LogAbs: return 2.0 * a * a;
    case SparsityMeasure::Kind::NegPower: return 2.0 * std::pow(a, 2.0 - measure.p) / -measure.p;
  }
  return 0.0;
}

double cost(const SparsityMeasure& measure, const Vector& s, double zero_threshold) {
  double total = 0.0;
  if (measure.kind == SparsityMeasure::Kind::Lp) {
    for (double v : s) total += std::pow(std::abs(v), measure.p);
    return total;
  }
  double inf = 0.0;
  for (double v : s) inf = std::max(inf, std::abs(v));
  const double cut = zero_threshold * std::max(1.0, inf);
  for (double v : s)
    if (std::abs(v) > cut) total += measure.atom(v);
  return total;
}

namespace {

using Subset = std::vector<std::size_t>;

// Number of k-subsets of n, saturating at `cap + 1`.
std::size_t binomial_capped(std::size_t n, std::size_t k, std::size_t cap) {
  k = std::min(k, n - k);
  long double c = 1.0L;
  for (std::size_t i = 1; i <= k; ++i) {
    c = c * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    if (c > static_cast<long double>(cap)) return cap + 1;
  }
  return static_cast<std::size_t>(std::llround(c));
}

bool next_combination(Subset& c, std::size_t n) {
  const std::size_t k = c.size();
  for (std::size_t i = k; i-- > 0;) {
    if (c[i] < n - k + i) {
      ++c[i];
      for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

Subset random_subset(Rng& rng, std::size_t n, std::size_t k) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(idx[i], idx[j]);
  }
  Subset s(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(s.begin(), s.end());
  return s;
}

Eigen::MatrixXd columns(const DenseMatrix& A, const Subset& cols) {
  Eigen::MatrixXd B(A.rows, cols.size());
  for (std::size_t i = 0; i < A.rows; ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) B(i, j) = A(i, cols[j]);
  return B;
}

constexpr double kRankTol = 1e-10;

bool full_column_rank(const DenseMatrix& A, const Subset& cols) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(columns(A, cols));
  qr.setThreshold(kRankTol);
  return static_cast<std::size_t>(qr.rank()) == cols.size();
}

bool expresses(const DenseMatrix& A, const Subset& cols, const Eigen::VectorXd& x) {
  if (cols.empty()) return x.norm() == 0.0;
  const Eigen::MatrixXd B = columns(A, cols);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(B);
  qr.setThreshold(kRankTol);
  const Eigen::VectorXd c = qr.solve(x);
  return (B * c - x).norm() <= kRankTol * x.norm();
}

// Runs `check` on every k-subset when affordable, otherwise on `samples` random ones.
// Returns {all passed, subsets checked, exhaustive}.
template <typename Check>
std::tuple<bool, std::size_t, bool> over_subsets(std::size_t n, std::size_t k,
                                                 const ValidationBudget& budget, Rng& rng,
                                                 Check&& check) {
  const std::size_t total = binomial_capped(n, k, budget.exhaustive_limit);
  std::size_t checked = 0;
  if (total <= budget.exhaustive_limit) {
    Subset c(k);
    std::iota(c.begin(), c.end(), 0);
    do {
      ++checked;
      if (!check(c)) return {false, checked, false};
    } while (k > 0 && next_combination(c, n));
    return {true, checked, true};
  }
  for (std::size_t s = 0; s < budget.samples; ++s) {
    ++checked;
    if (!check(random_subset(rng, n, k))) return {false, checked, false};
  }
  return {true, checked, false};
}

}  // namespace

AssumptionReport validate_assumptions(const ProblemInstance& instance, ValidationBudget budget,
                                      std::uint64_t seed) {
  instance.check();
  const std::size_t m = instance.m();
  const std::size_t n = instance.n();
  AssumptionReport report;
  report.x_nonzero = std::any_of(instance.x.begin(), instance.x.end(),
                                 [](double v) { return v != 0.0; });
  Rng rng(seed);

  auto [cols_ok, checked, cols_exh] = over_subsets(
      n, m, budget, rng, [&](const Subset& s) { return full_column_rank(instance.A, s); });
  report.columns_ok = cols_ok;
  report.columns_checked = checked;

  const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(instance.x.data(), m);
  auto [expr_ok, echecked, expr_exh] = over_subsets(
      n, m - 1, budget, rng, [&](const Subset& s) { return !expresses(instance.A, s, x); });
  (void)echecked;
  report.expressibility_ok = expr_ok;
  report.exhaustive = cols_exh && expr_exh;
  return report;
}

std::string to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::Random: return "random";
    case GeneratorKind::AppendixA: return "appendix-a";
    case GeneratorKind::AppendixB: return "appendix-b";
  }
  return "random";
}

GeneratorKind generator_from_string(const std::string& text) {
  if (text == "random") return GeneratorKind::Random;
  if (text == "appendix-a") return GeneratorKind::AppendixA;
  if (text == "appendix-b") return GeneratorKind::AppendixB;
  throw Error(ErrorCode::Schema, "unknown generator '" + text + "'");
}

}  // namespace focuss
