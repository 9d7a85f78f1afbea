#pragma once

#include <string>
#include <vector>

#include "focuss/focuss.hpp"
#include "focuss/linalg.hpp"
#include "focuss/model.hpp"

namespace focuss {

enum class RateClass { Superlinear, Linear, Sublinear, Inconclusive };

std::string to_string(RateClass c);

struct RateReport {
  Vector r_series;          // R^(t) for t = 0..T-1
  std::vector<bool> valid;  // denominator above the precision floor
  Vector errors;            // ||s^(t) - s*|| for t = 0..T-1
  double limiting_rate = 0.0;
  double order_slope = 0.0;  // d log R / d log e over the last valid entries
  RateClass classification = RateClass::Inconclusive;
  Vector reference;

  std::size_t valid_count() const;
};

constexpr double kDefaultRateFloor = 1e3 * 2.220446049250313e-16;

// floor is relative: entries with ||s^(t) - s*|| <= floor (1 + ||s*||) are invalid.
RateReport rate_series(const SolveTrace& trace, const Vector& reference,
                       double floor = kDefaultRateFloor);

// Continue iterating from s until the step stays at a few ulps for 5 consecutive
// iterations or stops shrinking for `patience` iterations. The result serves as the limit point for R^(t).
Vector polish_reference(const ProblemInstance& instance, const Vector& s,
                        const SolverConfig& config, std::size_t max_iter = 2000,
                        std::size_t patience = 50);

std::size_t support_count(const Vector& s, double threshold);

// h_j = |s_j|^{1-p} sign(s_j) a_j^T [A Pi^{-1} A^T]^{-1} x, with h_j = 0 where s_j = 0.
Vector h_vector(const ProblemInstance& instance, const Vector& s, double p);

// G = Pi^{-1} A^T [A Pi^{-1} A^T]^{-1} A.
DenseMatrix g_matrix(const ProblemInstance& instance, const Vector& s, double p);

struct IterationJacobian {
  DenseMatrix matrix;  // (2 - p)(diag(h) - Q)
  Vector h;
  DenseMatrix Q;       // G diag(h)
};

IterationJacobian iteration_jacobian(const ProblemInstance& instance, const Vector& s, double p);

struct TheoryVerdict {
  bool consistent = false;
  std::string detail;
};

TheoryVerdict classify_against_theory(double p, std::size_t support, std::size_t m,
                                      std::size_t n, const RateReport& report);

bool support_bounds_check(double p, std::size_t support, std::size_t m, std::size_t n);

}  // namespace focuss
