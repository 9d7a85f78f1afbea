#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "focuss/datagen.hpp"
#include "focuss/error.hpp"
#include "focuss/focuss.hpp"
#include "test_support.hpp"

using namespace focuss;
using namespace focuss::testing;

namespace {

SolverConfig config_for(double p) {
  SolverConfig c;
  c.measure = SparsityMeasure::lp(p);
  return c;
}

Vector nonzero_vector(Rng& rng, std::size_t n) {
  Vector v = random_vector(rng, n);
  for (double& x : v)
    if (std::abs(x) < 1e-3) x = 1e-3;
  return v;
}

}  // namespace

TEST_CASE("square diagonal system collapses to A^{-1} x in one step") {
  const ProblemInstance inst = square_diagonal();
  Rng rng(31);
  for (double p : {0.3, 0.8, 1.0, 1.5, 1.9}) {
    const Vector s = nonzero_vector(rng, 2);
    const Vector a = focuss_step(inst, s, config_for(p));
    const Vector b = focuss_step_threeform(inst, s, config_for(p));
    CHECK(max_abs_diff(a, {1, 1}) <= 1e-14);
    CHECK(max_abs_diff(b, {1, 1}) <= 1e-14);
  }
}

TEST_CASE("zero right-hand side maps to zero") {
  Rng rng(32);
  ProblemInstance inst = random_instance(rng, 3, 6);
  inst.x.assign(3, 0.0);
  const Vector s = nonzero_vector(rng, 6);
  CHECK(norm_inf(focuss_step(inst, s, config_for(0.8))) == 0.0);
  CHECK(norm_inf(focuss_step_threeform(inst, s, config_for(0.8))) == 0.0);
}

TEST_CASE("exact zeros stay zero") {
  Rng rng(33);
  const ProblemInstance inst = random_instance(rng, 4, 9);
  Vector s = nonzero_vector(rng, 9);
  s[0] = 0.0;
  s[5] = 0.0;
  for (double p : {0.5, 1.0, 1.5}) {
    const Vector a = focuss_step(inst, s, config_for(p));
    CHECK(a[0] == 0.0);
    CHECK(a[5] == 0.0);
  }
}

TEST_CASE("three-step form agrees with the direct step") {
  Rng rng(34);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 2 + rng.below(8), n = m + 1 + rng.below(12);
    const ProblemInstance inst = random_instance(rng, m, n);
    const Vector s = nonzero_vector(rng, n);
    const SolverConfig cfg = config_for(rng.uniform(0.1, 1.9));
    const Vector a = focuss_step(inst, s, cfg);
    const Vector b = focuss_step_threeform(inst, s, cfg);
    CHECK(norm2(subtract(a, b)) <= 1e-9 * (1.0 + norm2(a)));
  }
}

TEST_CASE("scaling the weights by a constant leaves the step unchanged") {
  Rng rng(35);
  for (int trial = 0; trial < 50; ++trial) {
    const ProblemInstance inst = random_instance(rng, 5, 11);
    const Vector s = nonzero_vector(rng, 11);
    const double p = rng.uniform(0.1, 1.9);
    Vector w(11);
    for (std::size_t i = 0; i < 11; ++i) w[i] = inverse_weight(SparsityMeasure::lp(p), s[i]);
    const Vector base = reweighted_step(inst, w, RidgePolicy::never()).s_next;
    for (double c : {1e-3, 0.5, 7.0, 1e4}) {
      Vector wc = w;
      for (double& v : wc) v /= c;
      const Vector scaled = reweighted_step(inst, wc, RidgePolicy::never()).s_next;
      CHECK(norm2(subtract(base, scaled)) <= 1e-12 * norm2(base) * 10.0);
    }
  }
}

TEST_CASE("permutation equivariance") {
  Rng rng(36);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t m = 4, n = 10;
    const ProblemInstance inst = random_instance(rng, m, n);
    const Vector s = nonzero_vector(rng, n);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
    // (P s)_i = s_{perm[i]}; A P^T has column i equal to a_{perm[i]}.
    ProblemInstance permuted{DenseMatrix(m, n), inst.x};
    Vector ps(n);
    for (std::size_t i = 0; i < n; ++i) {
      ps[i] = s[perm[i]];
      for (std::size_t r = 0; r < m; ++r) permuted.A(r, i) = inst.A(r, perm[i]);
    }
    const SolverConfig cfg = config_for(0.7);
    const Vector base = focuss_step(inst, s, cfg);
    const Vector moved = focuss_step(permuted, ps, cfg);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(std::abs(moved[i] - base[perm[i]]) <= 1e-12 * (1.0 + norm_inf(base)));
  }
}

TEST_CASE("solve: square diagonal converges at t = 1") {
  const ProblemInstance inst = square_diagonal();
  const SolveResult r = solve(inst, default_init(inst, 1), config_for(0.8));
  CHECK(r.stop_reason == StopReason::StepTol);
  CHECK(r.trace.size() == 2);
  CHECK(max_abs_diff(r.solution, {1, 1}) <= 1e-14);
  CHECK(std::isnan(r.trace.step_norms[0]));
  CHECK(r.trace.step_norms[1] <= 1e-10);
  // From an arbitrary start the first iterate is already A^{-1} x.
  const SolveResult g = solve(inst, {0.3, -2.0}, config_for(0.8));
  CHECK(max_abs_diff(g.trace.iterates[1], {1, 1}) <= 1e-14);
  CHECK(g.stop_reason == StopReason::StepTol);
}

TEST_CASE("solve rejects starts with zero entries unless allowed") {
  const ProblemInstance inst = square_diagonal();
  CHECK_THROWS_AS(solve(inst, {0.0, 1.0}, config_for(0.8)), Error);
  SolverConfig cfg = config_for(0.8);
  cfg.require_nonzero_init = false;
  const SolveResult r = solve(inst, {0.0, 1.0}, cfg);
  CHECK(r.solution[0] == 0.0);
}

TEST_CASE("descent and constraint preservation from feasible starts") {
  Rng rng(37);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t m = 3 + rng.below(10), n = m + 1 + rng.below(20);
    const ProblemInstance inst = random_instance(rng, m, n);
    for (double p : {0.5, 0.8, 1.0, 1.5}) {
      const SolverConfig cfg = config_for(p);
      const SolveResult r = solve(inst, feasible_init(rng, inst), cfg);
      const SolveTrace& t = r.trace;
      const double slack = 1e-12 * (1.0 + t.costs[0]);
      for (std::size_t i = 1; i < t.size(); ++i) {
        CHECK(t.costs[i] <= t.costs[i - 1] + slack);
        if (t.ridge_used[i] == 0.0) CHECK(t.residuals[i] <= 1e-8 * (1.0 + norm2(inst.x)));
      }
    }
  }
}

TEST_CASE("converged solution is a fixed point") {
  Rng rng(38);
  for (double p : {0.5, 0.8, 1.3}) {
    const ProblemInstance inst = random_instance(rng, 6, 14);
    const SolverConfig cfg = config_for(p);
    const SolveResult r = solve(inst, default_init(inst, 1), cfg);
    REQUIRE(r.stop_reason == StopReason::StepTol);
    const Vector next = focuss_step(inst, r.solution, cfg);
    CHECK(norm2(subtract(next, r.solution)) <= 10.0 * cfg.step_tol * (1.0 + norm2(r.solution)));
  }
}

TEST_CASE("squared steps are summable") {
  Rng rng(39);
  for (double p : {0.5, 0.8, 1.5}) {
    const ProblemInstance inst = random_instance(rng, 8, 20);
    SolverConfig cfg = config_for(p);
    cfg.step_tol = 1e-12;
    cfg.max_iter = 2000;
    const SolveResult r = solve(inst, random_init(20, rng.next_u64()), cfg);
    REQUIRE(r.stop_reason == StopReason::StepTol);
    const Vector& steps = r.trace.step_norms;
    const std::size_t T = steps.size() - 1;
    double tail = 0.0;
    bool below = false;
    for (std::size_t i = T; i >= 1; --i) {
      tail += steps[i] * steps[i];
      REQUIRE(std::isfinite(tail));
      if (tail < 1e-16) below = true;
    }
    CHECK(below);
    // Partial sums of the steps bound the distance from any iterate to the limit.
    double suffix = 0.0;
    for (std::size_t i = T; i-- > 0;) {
      suffix += steps[i + 1];
      CHECK(norm2(subtract(r.trace.iterates[i], r.solution)) <= suffix + 1e-12);
    }
  }
}

TEST_CASE("2x3 toy instance: best of 20 starts matches the enumeration oracle") {
  const ProblemInstance inst{DenseMatrix::from_rows({{1, 0, 1}, {0, 1, 1}}), {1, 1}};
  const SolverConfig cfg = config_for(0.5);
  double best = std::numeric_limits<double>::infinity();
  double best_residual = 0.0;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const SolveResult r = solve(inst, random_init(3, 100 + i), cfg);
    const double c = cost(cfg.measure, r.solution);
    if (c < best) {
      best = c;
      best_residual = r.trace.residuals.back();
    }
  }
  const OracleResult oracle = brute_force_oracle(inst, 0.5);
  CHECK(oracle.best_cost == doctest::Approx(1.0));
  // The ridge leaves the iterate off the constraint by the residual, so the
  // oracle bound for exact solutions only holds up to that amount.
  CHECK(best_residual <= 1e-7);
  CHECK(best >= oracle.best_cost - best_residual);
  CHECK(best == doctest::Approx(oracle.best_cost).epsilon(1e-6));
}

TEST_CASE("auto ridge engages when the weights drop below rank") {
  Rng rng(40);
  const ProblemInstance inst = random_instance(rng, 4, 8);
  Vector s(8, 0.0);
  s[1] = 1.0;
  s[6] = -2.0;
  SolverConfig cfg = config_for(0.8);
  const StepOutcome o = focuss_step_ex(inst, s, cfg);
  CHECK(o.ridge_used > 0.0);
  for (double v : o.s_next) CHECK(std::isfinite(v));
  cfg.ridge = RidgePolicy::never();
  CHECK_THROWS_AS(focuss_step_ex(inst, s, cfg), Error);
}

TEST_CASE("other measures keep the constraint") {
  Rng rng(41);
  const ProblemInstance inst = random_instance(rng, 5, 12);
  for (const auto& m : {SparsityMeasure::log_abs(), SparsityMeasure::neg_power(-1.0)}) {
    SolverConfig cfg;
    cfg.measure = m;
    cfg.max_iter = 100;
    const SolveResult r = solve(inst, random_init(12, 5), cfg);
    CHECK(r.trace.size() >= 2);
    CHECK(norm2(subtract(matvec(inst.A, r.trace.iterates[1]), inst.x)) <= 1e-8 * (1.0 + norm2(inst.x)));
  }
}

TEST_CASE("default_init is entrywise nonzero and feasible") {
  Rng rng(42);
  const ProblemInstance inst = random_instance(rng, 5, 9);
  const Vector s0 = default_init(inst, 3);
  for (double v : s0) CHECK(v != 0.0);
  CHECK(norm2(subtract(matvec(inst.A, s0), inst.x)) <= 1e-10);
  CHECK(default_init(inst, 3) == s0);
}
