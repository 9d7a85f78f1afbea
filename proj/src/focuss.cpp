#include "focuss/focuss.hpp"

#include <cmath>
#include <limits>

#include "focuss/analysis.hpp"
#include "focuss/error.hpp"
#include "focuss/rng.hpp"

namespace focuss {

std::string to_string(StopReason reason) {
  return reason == StopReason::StepTol ? "StepTol" : "MaxIter";
}

StepOutcome reweighted_step(const ProblemInstance& instance, const Vector& inverse_weights,
                            RidgePolicy ridge) {
  const DenseMatrix G = weighted_gram(instance.A, inverse_weights);
  SolveOutcome y;
  try {
    y = spd_solve(G, instance.x, ridge);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Singular) throw Error(ErrorCode::SingularGram, e.what());
    throw;
  }
  Vector s = matvec_t(instance.A, y.solution);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] *= inverse_weights[i];
  return {std::move(s), y.ridge_used};
}

namespace {

Vector inverse_weights(const SparsityMeasure& measure, const Vector& s) {
  Vector w(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) w[i] = inverse_weight(measure, s[i]);
  return w;
}

void check_step_input(const ProblemInstance& instance, const Vector& s) {
  if (s.size() != instance.n()) throw Error(ErrorCode::InvalidArgument, "s length differs from n");
  for (double v : s)
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "s has non-finite entries");
}

}  // namespace

StepOutcome focuss_step_ex(const ProblemInstance& instance, const Vector& s,
                           const SolverConfig& config) {
  check_step_input(instance, s);
  return reweighted_step(instance, inverse_weights(config.measure, s), config.ridge);
}

Vector focuss_step(const ProblemInstance& instance, const Vector& s, const SolverConfig& config) {
  return focuss_step_ex(instance, s, config).s_next;
}

Vector focuss_step_threeform(const ProblemInstance& instance, const Vector& s,
                             const SolverConfig& config) {
  check_step_input(instance, s);
  Vector w = inverse_weights(config.measure, s);
  for (double& v : w) v = std::sqrt(v);
  DenseMatrix AW = instance.A;
  for (std::size_t i = 0; i < AW.rows; ++i)
    for (std::size_t j = 0; j < AW.cols; ++j) AW(i, j) *= w[j];
  Vector q = pseudoinverse_apply(AW, instance.x);
  for (std::size_t j = 0; j < q.size(); ++j) q[j] *= w[j];
  return q;
}

SolveResult solve(const ProblemInstance& instance, const Vector& s0, const SolverConfig& config) {
  instance.check();
  check_step_input(instance, s0);
  if (config.max_iter < 1) throw Error(ErrorCode::InvalidArgument, "max_iter must be >= 1");
  if (!(config.step_tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "step_tol must be > 0");
  std::size_t zeros = 0;
  for (double v : s0) zeros += (v == 0.0);
  if (zeros == s0.size()) throw Error(ErrorCode::InvalidArgument, "initial point is all zero");
  if (config.require_nonzero_init && zeros > 0)
    throw Error(ErrorCode::InvalidArgument, "initial point must be entrywise nonzero");

  SolveResult result;
  SolveTrace& tr = result.trace;
  auto record = [&](const Vector& s, double step, double ridge) {
    if (!config.record_trace) return;
    tr.iterates.push_back(s);
    tr.costs.push_back(cost(config.measure, s, config.zero_threshold));
    tr.residuals.push_back(norm2(subtract(matvec(instance.A, s), instance.x)));
    tr.step_norms.push_back(step);
    tr.support_sizes.push_back(support_count(s, config.zero_threshold));
    tr.ridge_used.push_back(ridge);
  };

  Vector s = s0;
  record(s, std::numeric_limits<double>::quiet_NaN(), 0.0);
  result.stop_reason = StopReason::MaxIter;
  for (std::size_t it = 1; it <= config.max_iter; ++it) {
    StepOutcome next = focuss_step_ex(instance, s, config);
    const double step = norm2(subtract(next.s_next, s));
    s = std::move(next.s_next);
    record(s, step, next.ridge_used);
    result.iterations = it;
    if (step <= config.step_tol * (1.0 + norm2(s))) {
      result.stop_reason = StopReason::StepTol;
      break;
    }
  }
  tr.stop_reason = result.stop_reason;
  result.solution = std::move(s);
  return result;
}

double auxiliary_value(const SparsityMeasure& measure, double s, double s_anchor) {
  if (s_anchor == 0.0) throw Error(ErrorCode::ZeroAnchor, "anchor must be nonzero");
  const double a = std::abs(s_anchor);
  const double pi = measure.atom_derivative(a) / (2.0 * a);
  return pi * s * s + measure.atom(a) - pi * a * a;
}

Vector default_init(const ProblemInstance& instance, std::uint64_t seed) {
  Vector s = pseudoinverse_apply(instance.A, instance.x);
  double fill = 1e-3 * norm_inf(s);
  if (fill == 0.0) fill = 1e-3;
  Rng rng(seed);
  for (double& v : s)
    if (v == 0.0) v = fill * rng.sign();
  return s;
}

Vector random_init(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Vector s(n);
  for (double& v : s) {
    do v = rng.normal();
    while (v == 0.0);
  }
  return s;
}

}  // namespace focuss
