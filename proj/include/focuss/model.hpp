#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "focuss/linalg.hpp"

namespace focuss {

struct ProblemInstance {
  DenseMatrix A;
  Vector x;

  std::size_t m() const { return A.rows; }
  std::size_t n() const { return A.cols; }

  // Throws Error(InvalidArgument) unless m <= n, sizes agree and all entries are finite.
  // Square systems are accepted; the step then reduces to A^{-1} x.
  void check() const;
};

// Diversity measure F applied entrywise to |s_i|.
//   Lp:       F = |s|^p, 0 < p < 2
//   LogAbs:   F = ln|s|
//   NegPower: F = -|s|^p, p < 0
struct SparsityMeasure {
  enum class Kind { Lp, LogAbs, NegPower };
  Kind kind = Kind::Lp;
  double p = 0.8;

  static SparsityMeasure lp(double p);
  static SparsityMeasure log_abs();
  static SparsityMeasure neg_power(double p);

  std::string name() const;
  // F(|s|). For LogAbs and NegPower, s = 0 yields -infinity.
  double atom(double s) const;
  // F'(|s|) for |s| > 0.
  double atom_derivative(double s) const;
  // Exponent q with inverse weight proportional to |s|^q (2 - p, or 2 for LogAbs).
  double inverse_weight_exponent() const;
};

// Diagonal entry of Pi. Lp uses |s|^(p-2); the other measures use F'(|s|)/(2|s|).
// Infinite at s = 0 for every shipped measure; the solver only uses inverse_weight.
double measure_weight(const SparsityMeasure& measure, double s);

// Reciprocal of measure_weight, exactly 0 at s = 0.
double inverse_weight(const SparsityMeasure& measure, double s);

// Sum of F(|s_i|). For LogAbs and NegPower, entries with
// |s_i| <= zero_threshold * max(1, ||s||_inf) are skipped.
double cost(const SparsityMeasure& measure, const Vector& s, double zero_threshold = 1e-8);

struct AssumptionReport {
  bool x_nonzero = false;
  std::size_t columns_checked = 0;  // subsets examined for the column-independence check
  bool columns_ok = false;
  bool expressibility_ok = false;
  bool exhaustive = false;

  bool all_ok() const { return x_nonzero && columns_ok && expressibility_ok; }
};

struct ValidationBudget {
  std::size_t exhaustive_limit = 100000;  // enumerate when C(n, m) is at most this
  std::size_t samples = 1000;             // otherwise sample this many subsets
};

AssumptionReport validate_assumptions(const ProblemInstance& instance,
                                      ValidationBudget budget = {}, std::uint64_t seed = 0);

enum class GeneratorKind { Random, AppendixA, AppendixB };

std::string to_string(GeneratorKind kind);
GeneratorKind generator_from_string(const std::string& text);

struct GeneratedDataset {
  ProblemInstance instance;
  double p = 0.8;
  std::optional<Vector> planted_solution;
  GeneratorKind generator = GeneratorKind::Random;
  std::uint64_t seed = 0;
  std::optional<double> certificate;
};

}  // namespace focuss
