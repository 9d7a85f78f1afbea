#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "focuss/linalg.hpp"
#include "focuss/model.hpp"

namespace focuss {

struct SolverConfig {
  SparsityMeasure measure = SparsityMeasure::lp(0.8);
  std::size_t max_iter = 500;
  double step_tol = 1e-10;
  RidgePolicy ridge = RidgePolicy::automatic(1e-12);
  double zero_threshold = 1e-8;
  bool record_trace = true;
  bool require_nonzero_init = true;
};

enum class StopReason { StepTol, MaxIter };

std::string to_string(StopReason reason);

// One row per iterate s^(t), t = 0..T. step_norms[t] = ||s^(t) - s^(t-1)||, NaN at t = 0.
// The run stops at the first t whose step is at most step_tol (1 + ||s^(t)||).
struct SolveTrace {
  std::vector<Vector> iterates;
  Vector costs;
  Vector residuals;
  Vector step_norms;
  std::vector<std::size_t> support_sizes;
  Vector ridge_used;  // ridge added in the step that produced s^(t); 0 for t = 0
  StopReason stop_reason = StopReason::MaxIter;

  std::size_t size() const { return iterates.size(); }
};

struct SolveResult {
  Vector solution;
  SolveTrace trace;
  std::size_t iterations = 0;  // number of step evaluations
  StopReason stop_reason = StopReason::MaxIter;
};

struct StepOutcome {
  Vector s_next;
  double ridge_used = 0.0;
};

// s+ = W A^T [A W A^T (+ eps I)]^{-1} x for a given inverse-weight diagonal W.
StepOutcome reweighted_step(const ProblemInstance& instance, const Vector& inverse_weights,
                            RidgePolicy ridge);

StepOutcome focuss_step_ex(const ProblemInstance& instance, const Vector& s,
                           const SolverConfig& config);
Vector focuss_step(const ProblemInstance& instance, const Vector& s, const SolverConfig& config);

// Same map through W = diag(sqrt(inverse weight)), q = (A W)^+ x, s+ = W q.
Vector focuss_step_threeform(const ProblemInstance& instance, const Vector& s,
                             const SolverConfig& config);

SolveResult solve(const ProblemInstance& instance, const Vector& s0, const SolverConfig& config);

// Majorizer f(s | anchor) = Pi(anchor) s^2 + F(anchor) - Pi(anchor) anchor^2 with
// Pi = F'(|anchor|) / (2 |anchor|).
double auxiliary_value(const SparsityMeasure& measure, double s, double s_anchor);

// Minimum-norm solution with any zero entry replaced by +-1e-3 ||A^+ x||_inf.
Vector default_init(const ProblemInstance& instance, std::uint64_t seed);

// Entrywise standard normal start.
Vector random_init(std::size_t n, std::uint64_t seed);

}  // namespace focuss
