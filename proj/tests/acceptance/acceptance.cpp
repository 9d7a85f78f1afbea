// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "focuss/analysis.hpp"
#include "focuss/datagen.hpp"
#include "focuss/error.hpp"
#include "focuss/focuss.hpp"
#include "focuss/newton.hpp"
#include "focuss/rng.hpp"
#include "test_support.hpp"

using namespace focuss;

namespace {

constexpr std::uint64_t kSeed = 2024;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void fail(const std::string& why) {
    if (pass) detail.str("");
    pass = false;
    detail << why << "; ";
  }
};

struct Run {
  double p = 0.0;
  Vector solution;   // final recorded iterate
  Vector reference;  // polished limit
  SolveTrace trace;
  RateReport report;
  std::size_t support = 0;
  std::size_t m = 0, n = 0;
};

SolverConfig rate_config(double p) {
  SolverConfig c;
  c.measure = SparsityMeasure::lp(p);
  c.step_tol = 1e-12;
  c.max_iter = 2000;
  return c;
}

Run run_cell(const ProblemInstance& inst, double p, const Vector& s0, double support_threshold) {
  const SolverConfig cfg = rate_config(p);
  const SolveResult r = solve(inst, s0, cfg);
  Run out;
  out.p = p;
  out.solution = r.solution;
  out.reference = polish_reference(inst, r.solution, cfg);
  out.report = rate_series(r.trace, out.reference);
  out.trace = r.trace;
  out.support = support_count(r.solution, support_threshold);
  out.m = inst.m();
  out.n = inst.n();
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Vector random_nonzero(Rng& rng, std::size_t n) {
  Vector v(n);
  for (double& x : v) {
    x = rng.normal();
    if (std::abs(x) < 1e-3) x = std::copysign(1e-3, x);
  }
  return v;
}

// Shared state between criteria.
ProblemInstance g_fig_instance;
std::vector<Run> g_runs1, g_runs2, g_runs3, g_runs4;
std::vector<ProblemInstance> g_instances3;

Outcome criterion1() {
  Outcome o;
  g_fig_instance = gen_random(125, 200, kSeed).instance;
  std::uint64_t init = 1;
  for (double p : {0.6, 0.7, 0.8, 0.95}) {
    Run r = run_cell(g_fig_instance, p, random_init(200, kSeed + init++), 1e-6);
    o.detail << "p=" << p << ":" << r.support << "/" << to_string(r.report.classification) << " ";
    if (r.support != 125) o.fail("p=" + fmt(p) + " support " + std::to_string(r.support));
    if (r.report.classification != RateClass::Superlinear)
      o.fail("p=" + fmt(p) + " classified " + to_string(r.report.classification));
    g_runs1.push_back(std::move(r));
  }
  return o;
}

Outcome criterion2() {
  Outcome o;
  std::uint64_t init = 11;
  for (double p : {1.1, 1.3, 1.5, 1.7, 1.9, 1.95}) {
    Run r = run_cell(g_fig_instance, p, random_init(200, kSeed + init++), 1e-30);
    o.detail << "p=" << p << ":" << fmt(r.report.limiting_rate) << " ";
    if (r.support != 200) o.fail("p=" + fmt(p) + " support " + std::to_string(r.support));
    if (!(std::abs(r.report.limiting_rate - (2.0 - p)) <= 0.05))
      o.fail("p=" + fmt(p) + " rate " + fmt(r.report.limiting_rate));
    g_runs2.push_back(std::move(r));
  }
  return o;
}

Outcome criterion3() {
  Outcome o;
  std::uint64_t seed = kSeed;
  for (double p : {1.1, 1.2, 1.3, 1.4, 1.5, 1.6}) {
    const GeneratedDataset d = gen_appendix_a(15, 20, p, seed++);
    if (!(*d.certificate <= 1e-10)) o.fail("p=" + fmt(p) + " certificate " + fmt(*d.certificate));
    int hits = 0;
    for (std::uint64_t i = 1; i <= 5; ++i) {
      Run r = run_cell(d.instance, p, random_init(20, 100 * seed + i), 1e-12);
      if (r.support == 15 && r.report.classification == RateClass::Superlinear) ++hits;
      g_runs3.push_back(std::move(r));
      g_instances3.push_back(d.instance);
    }
    o.detail << "p=" << p << ":" << hits << "/5 ";
    if (hits < 4) o.fail("p=" + fmt(p) + " only " + std::to_string(hits) + "/5 inits");
  }
  return o;
}

Outcome criterion4() {
  Outcome o;
  const std::vector<std::pair<double, std::size_t>> cells{{1.1, 19}, {1.3, 18}, {1.5, 17},
                                                          {1.7, 16}, {1.9, 15}, {1.95, 14}};
  std::uint64_t seed = kSeed;
  for (const auto& [p, k] : cells) {
    const GeneratedDataset d = gen_appendix_b(13, k, 20, p, seed++);
    int hits = 0;
    for (std::uint64_t i = 1; i <= 5; ++i) {
      Run r = run_cell(d.instance, p, random_init(20, 100 * seed + i), 1e-12);
      if (r.support == k && std::abs(r.report.limiting_rate - (2.0 - p)) <= 0.05) ++hits;
      g_runs4.push_back(std::move(r));
    }
    o.detail << "(" << p << "," << k << "):" << hits << "/5 ";
    if (hits < 4) o.fail("(p=" + fmt(p) + ",k=" + std::to_string(k) + ") only " + std::to_string(hits) + "/5");
  }
  return o;
}

Outcome criterion5() {
  Outcome o;
  Rng rng(kSeed + 5);
  std::size_t traces = 0, steps = 0;
  for (int inst_i = 0; inst_i < 100; ++inst_i) {
    const std::size_t m = 3 + rng.below(28);
    const std::size_t n = m + 1 + rng.below(60 - m);
    const ProblemInstance inst = gen_random(m, n, rng.next_u64()).instance;
    const double xnorm = norm2(inst.x);
    for (double p : {0.5, 0.8, 1.0, 1.5}) {
      SolverConfig cfg;
      cfg.measure = SparsityMeasure::lp(p);
      // Descent is measured from feasible starts, where the majorization argument applies.
      const SolveResult r = solve(inst, testing::feasible_init(rng, inst), cfg);
      const SolveTrace& t = r.trace;
      ++traces;
      const double slack = 1e-12 * (1.0 + t.costs[0]);
      for (std::size_t i = 1; i < t.size(); ++i) {
        ++steps;
        if (t.costs[i] > t.costs[i - 1] + slack)
          o.fail("cost increase m=" + std::to_string(m) + " n=" + std::to_string(n) + " p=" + fmt(p));
        if (t.ridge_used[i] == 0.0 && t.residuals[i] > 1e-8 * (1.0 + xnorm))
          o.fail("residual " + fmt(t.residuals[i]) + " m=" + std::to_string(m) + " p=" + fmt(p));
      }
    }
  }
  if (o.pass) o.detail << traces << " traces, " << steps << " steps";
  return o;
}

Outcome criterion6() {
  Outcome o;
  Rng rng(kSeed + 6);
  const std::vector<SparsityMeasure> measures{
      SparsityMeasure::lp(0.3), SparsityMeasure::lp(0.5), SparsityMeasure::lp(1.0),
      SparsityMeasure::lp(1.5), SparsityMeasure::lp(1.9), SparsityMeasure::log_abs(),
      SparsityMeasure::neg_power(-1.0)};
  for (const auto& m : measures) {
    double worst_gap = std::numeric_limits<double>::infinity(), worst_eq = 0.0;
    for (int i = 0; i < 10000; ++i) {
      double anchor = 0.0, s = 0.0;
      while (anchor == 0.0) anchor = rng.normal() * std::exp(rng.normal());
      while (s == 0.0) s = rng.normal() * std::exp(rng.normal());
      worst_gap = std::min(worst_gap, auxiliary_value(m, s, anchor) - m.atom(s));
      worst_eq = std::max(worst_eq, std::abs(auxiliary_value(m, anchor, anchor) - m.atom(anchor)));
    }
    if (worst_gap < -1e-12) o.fail(m.name() + " gap " + fmt(worst_gap));
    if (worst_eq > 1e-12) o.fail(m.name() + " anchor mismatch " + fmt(worst_eq));
    if (o.pass) o.detail << m.name() << " min gap " << fmt(worst_gap) << " ";
  }
  return o;
}

Outcome criterion7() {
  Outcome o;
  Rng rng(kSeed + 7);
  double worst_step = 0.0, worst_inv = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 2 + rng.below(9), n = m + 1 + rng.below(15);
    const ProblemInstance inst = gen_random(m, n, rng.next_u64()).instance;
    const Vector s = random_nonzero(rng, n);
    double p = rng.uniform(0.1, 1.9);
    if (std::abs(p - 1.0) < 1e-6) p = 0.9;
    SolverConfig cfg;
    cfg.measure = SparsityMeasure::lp(p);
    const Vector f = focuss_step(inst, s, cfg);
    const Vector q = quasi_newton_step(inst, s, p).s_next;
    worst_step = std::max(worst_step, norm2(subtract(f, q)) / (1.0 + norm2(s)));
    for (auto v : {NewtonVariant::Quasi, NewtonVariant::Exact}) {
      DenseMatrix prod = matmul(assemble_block(inst, s, p, v).H, block_inverse(inst, s, p, v));
      for (std::size_t i = 0; i < prod.rows; ++i) prod(i, i) -= 1.0;
      worst_inv = std::max(worst_inv, max_abs(prod));
    }
  }
  if (worst_step > 1e-10) o.fail("step mismatch " + fmt(worst_step));
  if (worst_inv > 1e-8) o.fail("H Hinv - I = " + fmt(worst_inv));
  o.detail << "max step gap " << fmt(worst_step) << ", max |H Hinv - I| " << fmt(worst_inv);
  return o;
}

Outcome criterion8() {
  Outcome o;
  Rng rng(kSeed + 8);
  int matches = 0;
  for (int inst_i = 0; inst_i < 20; ++inst_i) {
    const std::size_t m = 1 + rng.below(3), n = m + 1 + rng.below(6 - m);
    const ProblemInstance inst = gen_random(m, n, rng.next_u64(), 0.5).instance;
    const OracleResult oracle = brute_force_oracle(inst, 0.5);
    SolverConfig cfg;
    cfg.measure = SparsityMeasure::lp(0.5);
    cfg.max_iter = 2000;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 20; ++i)
      best = std::min(best, cost(cfg.measure, solve(inst, random_nonzero(rng, n), cfg).solution));
    if (best < oracle.best_cost - 1e-9)
      o.fail("instance " + std::to_string(inst_i) + " beats oracle: " + fmt(best) + " < " + fmt(oracle.best_cost));
    if (std::abs(best - oracle.best_cost) <= 1e-6 * oracle.best_cost) ++matches;
  }
  o.detail << matches << "/20 match";
  if (matches < 15) o.fail("only " + std::to_string(matches) + "/20 instances match the oracle");
  return o;
}

Outcome criterion9() {
  Outcome o;
  double worst_h1 = 0.0, worst_h3 = 0.0, worst_j = 0.0, worst_fd = 0.0;
  auto zero_one_gap = [](const Vector& h) {
    double g = 0.0;
    for (double v : h) g = std::max(g, std::min(std::abs(v), std::abs(v - 1.0)));
    return g;
  };
  for (const Run& r : g_runs1) {
    worst_h1 = std::max(worst_h1, zero_one_gap(h_vector(g_fig_instance, r.reference, r.p)));
    worst_j = std::max(worst_j, max_abs(iteration_jacobian(g_fig_instance, r.reference, r.p).matrix));
  }
  for (std::size_t i = 0; i < g_runs3.size(); ++i)
    worst_h3 = std::max(worst_h3, zero_one_gap(h_vector(g_instances3[i], g_runs3[i].reference, g_runs3[i].p)));

  // Central differences at a mid-trajectory iterate of the p = 0.8 run.
  const Run& mid_run = g_runs1[2];
  const Vector s = mid_run.trace.iterates[mid_run.trace.size() / 2];
  SolverConfig cfg;
  cfg.measure = SparsityMeasure::lp(mid_run.p);
  const DenseMatrix J = iteration_jacobian(g_fig_instance, s, mid_run.p).matrix;
  std::size_t checked = 0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (std::abs(s[j]) < 1e-3) continue;
    ++checked;
    const double step = 1e-6 * std::max(1.0, std::abs(s[j]));
    Vector up = s, down = s;
    up[j] += step;
    down[j] -= step;
    const Vector diff = subtract(focuss_step(g_fig_instance, up, cfg), focuss_step(g_fig_instance, down, cfg));
    for (std::size_t i = 0; i < s.size(); ++i)
      worst_fd = std::max(worst_fd, std::abs(diff[i] / (2.0 * step) - J(i, j)));
  }
  o.detail << "h01 gap c1 " << fmt(worst_h1) << ", c3 " << fmt(worst_h3) << "; |J| c1 " << fmt(worst_j)
           << "; FD " << fmt(worst_fd) << " over " << checked << " cols";
  const std::string summary = o.detail.str();
  if (worst_h1 > 1e-6) o.fail("criterion-1 h off {0,1} by " + fmt(worst_h1));
  if (worst_h3 > 1e-6) o.fail("criterion-3 h off {0,1} by " + fmt(worst_h3));
  if (worst_j > 1e-6) o.fail("Jacobian norm " + fmt(worst_j));
  if (worst_fd > 1e-4) o.fail("finite-difference gap " + fmt(worst_fd));
  if (checked == 0) o.fail("no non-degenerate coordinates at the mid-trajectory point");
  if (!o.pass) o.detail << summary;
  return o;
}

Outcome criterion10() {
  Outcome o;
  std::size_t checked = 0;
  for (const auto* runs : {&g_runs1, &g_runs2, &g_runs3, &g_runs4})
    for (const Run& r : *runs) {
      ++checked;
      if (!support_bounds_check(r.p, r.support, r.m, r.n))
        o.fail("p=" + fmt(r.p) + " support " + std::to_string(r.support) + " m=" + std::to_string(r.m) +
               " n=" + std::to_string(r.n));
    }
  if (o.pass) o.detail << checked << " solutions";
  return o;
}

Outcome criterion11() {
  Outcome o;
  for (std::size_t m : {5u, 10u, 15u, 20u, 25u}) {
    const ProblemInstance inst = gen_random(m, 30, kSeed + m, 1.0).instance;
    const Run r = run_cell(inst, 1.0, default_init(inst, kSeed + m), 1e-8);
    double worst = 0.0;
    for (std::size_t t = 0; t < r.report.r_series.size(); ++t)
      if (r.report.valid[t]) worst = std::max(worst, r.report.r_series[t]);
    o.detail << "m=" << m << ":" << fmt(r.report.limiting_rate) << " ";
    if (worst > 1.0 + 1e-6) o.fail("m=" + std::to_string(m) + " max valid R " + fmt(worst));
    if (!(r.report.limiting_rate > 0.0 && r.report.limiting_rate < 1.0))
      o.fail("m=" + std::to_string(m) + " limiting rate " + fmt(r.report.limiting_rate));
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"random 125x200, p<1: support m and superlinear", criterion1},
      {"random 125x200, 1<p<2: full support and rate 2-p", criterion2},
      {"planted support m: certificate and superlinear support m", criterion3},
      {"planted support k: support k and rate 2-p", criterion4},
      {"descent and feasibility on 100 random instances", criterion5},
      {"auxiliary function majorization", criterion6},
      {"quasi-Newton step equivalence and block inverses", criterion7},
      {"oracle equivalence on tiny instances", criterion8},
      {"h vector, Jacobian and finite differences", criterion9},
      {"support bounds on every converged solution", criterion10},
      {"p = 1 rate bound", criterion11},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!out.pass) ++failures;
    std::printf("%s criterion %zu: %s [%.1fs] %s\n", out.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                secs, out.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
