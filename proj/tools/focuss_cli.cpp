// focuss: command-line driver for the solver, rate analysis, generators and checks.
// Exit codes: 0 ok, 2 input, 3 solver, 4 infeasible.
#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "focuss/analysis.hpp"
#include "focuss/datagen.hpp"
#include "focuss/error.hpp"
#include "focuss/focuss.hpp"
#include "focuss/io.hpp"
#include "focuss/kernels.hpp"
#include "focuss/newton.hpp"
#include "focuss/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace focuss;

namespace {

constexpr int kOk = 0;
constexpr int kInput = 2;
constexpr int kSolver = 3;

struct Options {
  std::string input;
  std::string out_dir = ".";
  std::vector<double> p;
  std::size_t m = 0, n = 0, k = 0;
  std::string kind = "random";
  std::uint64_t seed = 0;
  std::optional<std::size_t> max_iter;
  std::optional<double> step_tol;
  double zero_threshold = 1e-8;
  std::optional<std::size_t> inits;
};

SparsityMeasure measure_for(double p) {
  if (p < 0.0) return SparsityMeasure::neg_power(p);
  if (p > 0.0 && p < 2.0) return SparsityMeasure::lp(p);
  throw Error(ErrorCode::InvalidArgument,
              "p must lie in (-inf, 0) or (0, 2); got " + io::format_double(p));
}

std::string tag(double p, std::size_t init) {
  return "p" + io::format_double(p) + "_init" + std::to_string(init);
}

fs::path prepare_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create '" + dir + "': " + ec.message());
  return fs::path(dir);
}

Vector init_for(const ProblemInstance& inst, std::size_t index, std::uint64_t seed) {
  return index == 0 ? default_init(inst, seed) : random_init(inst.n(), seed + index);
}

std::vector<double> p_grid(const Options& o, const GeneratedDataset& d) {
  return o.p.empty() ? std::vector<double>{d.p} : o.p;
}

int cmd_solve(const Options& o) {
  const GeneratedDataset d = io::read_dataset(o.input);
  const fs::path out = prepare_out_dir(o.out_dir);
  int status = kOk;
  for (double p : p_grid(o, d)) {
    SolverConfig cfg;
    cfg.measure = measure_for(p);
    cfg.max_iter = o.max_iter.value_or(500);
    cfg.step_tol = o.step_tol.value_or(1e-10);
    cfg.zero_threshold = o.zero_threshold;
    for (std::size_t i = 0; i < o.inits.value_or(1); ++i) {
      const SolveResult r = solve(d.instance, init_for(d.instance, i, o.seed), cfg);
      std::ostringstream csv;
      io::write_trace_csv(csv, r.trace);
      io::write_text((out / ("trace_" + tag(p, i) + ".csv")).string(), csv.str());
      const std::size_t support = support_count(r.solution, cfg.zero_threshold);
      double max_ridge = 0.0;
      for (double v : r.trace.ridge_used) max_ridge = std::max(max_ridge, v);
      json j;
      j["p"] = p;
      j["init"] = i;
      j["solution"] = r.solution;
      j["support"] = support;
      j["cost"] = cost(cfg.measure, r.solution, cfg.zero_threshold);
      j["iterations"] = r.iterations;
      j["stop_reason"] = to_string(r.stop_reason);
      j["residual"] = norm2(subtract(matvec(d.instance.A, r.solution), d.instance.x));
      j["max_ridge"] = max_ridge;
      io::write_text((out / ("solution_" + tag(p, i) + ".json")).string(), j.dump(1) + "\n");
      std::cout << "p=" << io::format_double(p) << " init=" << i
                << " stop=" << to_string(r.stop_reason) << " iterations=" << r.iterations
                << " support=" << support << "\n";
      if (r.stop_reason != StopReason::StepTol) {
        std::cerr << "solve: p=" << io::format_double(p) << " init=" << i
                  << " reached max_iter without meeting step_tol\n";
        status = kSolver;
      }
    }
  }
  return status;
}

int cmd_rate(const Options& o) {
  const GeneratedDataset d = io::read_dataset(o.input);
  const fs::path out = prepare_out_dir(o.out_dir);
  int status = kOk;
  for (double p : p_grid(o, d)) {
    SolverConfig cfg;
    cfg.measure = measure_for(p);
    cfg.max_iter = o.max_iter.value_or(2000);
    cfg.step_tol = o.step_tol.value_or(1e-12);
    cfg.zero_threshold = o.zero_threshold;
    for (std::size_t i = 0; i < o.inits.value_or(1); ++i) {
      const SolveResult r = solve(d.instance, init_for(d.instance, i, o.seed), cfg);
      if (r.stop_reason != StopReason::StepTol) {
        std::cerr << "rate: p=" << io::format_double(p) << " init=" << i
                  << " reached max_iter without meeting step_tol\n";
        status = kSolver;
      }
      if (r.trace.size() < 3) {
        std::cerr << "rate: p=" << io::format_double(p) << " init=" << i
                  << " converged in fewer than 3 iterates; no rate series\n";
        status = kSolver;
        continue;
      }
      const Vector ref = polish_reference(d.instance, r.solution, cfg);
      const RateReport rep = rate_series(r.trace, ref);
      const std::size_t support = support_count(ref, cfg.zero_threshold);
      const bool lp = cfg.measure.kind == SparsityMeasure::Kind::Lp;
      const TheoryVerdict v =
          classify_against_theory(p, support, d.instance.m(), d.instance.n(), rep);
      std::ostringstream csv;
      io::write_rate_csv(csv, rep);
      io::write_text((out / ("rate_" + tag(p, i) + ".csv")).string(), csv.str());
      json j;
      j["p"] = p;
      j["limiting_rate"] = rep.limiting_rate;
      j["classification"] = to_string(rep.classification);
      j["support"] = support;
      j["theory_consistent"] = lp || p < 0.0 ? json(v.consistent) : json(nullptr);
      io::write_text((out / ("rate_" + tag(p, i) + ".json")).string(), j.dump(1) + "\n");
      std::cout << "p=" << io::format_double(p) << " init=" << i
                << " limiting_rate=" << io::format_double(rep.limiting_rate)
                << " classification=" << to_string(rep.classification) << " support=" << support
                << " theory_consistent=" << (v.consistent ? "true" : "false") << "\n";
    }
  }
  return status;
}

int cmd_gen(const Options& o) {
  GeneratedDataset d;
  if (o.kind == "random") {
    d = gen_random(o.m, o.n, o.seed, o.p.empty() ? 0.8 : o.p.front());
  } else if (o.kind == "appendix-a") {
    d = gen_appendix_a(o.m, o.n, o.p.empty() ? 1.5 : o.p.front(), o.seed);
  } else if (o.kind == "appendix-b") {
    d = gen_appendix_b(o.m, o.k, o.n, o.p.empty() ? 1.5 : o.p.front(), o.seed);
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown --kind '" + o.kind + "'");
  }
  const fs::path out = prepare_out_dir(o.out_dir) / "dataset.json";
  io::write_dataset(out.string(), d);
  std::cout << "wrote " << out.string() << " generator=" << to_string(d.generator);
  if (d.certificate) std::cout << " certificate=" << io::format_double(*d.certificate);
  std::cout << "\n";
  return kOk;
}

int cmd_oracle(const Options& o) {
  const GeneratedDataset d = io::read_dataset(o.input);
  const double p = o.p.empty() ? d.p : o.p.front();
  const OracleResult r = brute_force_oracle(d.instance, p);
  const fs::path out = prepare_out_dir(o.out_dir) / "oracle.json";
  io::write_text(out.string(), io::oracle_to_json(r, p));
  std::cout << "best_cost=" << io::format_double(r.best_cost)
            << " supports_examined=" << r.supports_examined << "\n";
  return kOk;
}

int cmd_newton_check(const Options& o) {
  const std::size_t trials = o.inits.value_or(100);
  Rng rng(o.seed);
  std::optional<GeneratedDataset> fixed;
  if (!o.input.empty()) fixed = io::read_dataset(o.input);
  const std::size_t m = o.m ? o.m : 5, n = o.n ? o.n : 8;
  double worst = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const ProblemInstance inst =
        fixed ? fixed->instance : gen_random(m, n, rng.next_u64()).instance;
    const double p = o.p.empty() ? rng.uniform(0.1, 1.9) : o.p[t % o.p.size()];
    Vector s = random_init(inst.n(), rng.next_u64());
    SolverConfig cfg;
    cfg.measure = SparsityMeasure::lp(p);
    cfg.ridge = RidgePolicy::never();
    const Vector f = focuss_step(inst, s, cfg);
    const Vector q = quasi_newton_step(inst, s, p).s_next;
    worst = std::max(worst, norm2(subtract(q, f)) / (1.0 + norm2(s)));
  }
  std::cout << "max_step_equivalence_error=" << io::format_double(worst) << " trials=" << trials
            << "\n";
  return worst <= 1e-10 ? kOk : kSolver;
}

int cmd_bench(const Options& o) {
  const std::size_t m = o.m ? o.m : 125, n = o.n ? o.n : 200;
  const double p = o.p.empty() ? 0.8 : o.p.front();
  const std::size_t reps = o.inits.value_or(50);
  Rng rng(o.seed);
  ProblemInstance inst{DenseMatrix(m, n), Vector(m)};
  for (double& v : inst.A.entries) v = rng.normal();
  for (double& v : inst.x) v = rng.normal();
  const Vector s = random_init(n, o.seed + 1);
  SolverConfig cfg;
  cfg.measure = measure_for(p);

  std::vector<kernels::Backend> backends{kernels::Backend::Scalar};
  if (kernels::avx2_table() && kernels::cpu_supports_avx2()) backends.push_back(kernels::Backend::Avx2);
  const kernels::Backend original = kernels::active().backend;
  std::cout << "m=" << m << " n=" << n << " p=" << io::format_double(p) << " reps=" << reps << "\n";
  Vector reference;
  for (auto b : backends) {
    kernels::select_backend(b);
    const auto t0 = std::chrono::steady_clock::now();
    Vector out;
    for (std::size_t r = 0; r < reps; ++r) out = focuss_step(inst, s, cfg);
    const auto t1 = std::chrono::steady_clock::now();
    const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
    if (reference.empty()) reference = out;
    std::cout << kernels::active().name << ": " << ms << " ms/step, max |diff| vs scalar "
              << io::format_double(norm_inf(subtract(out, reference))) << "\n";
  }
  kernels::select_backend(original);
  return kOk;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--input", o.input, "dataset JSON");
  sub->add_option("--out-dir", o.out_dir, "output directory");
  sub->add_option("--p", o.p, "exponent p (repeatable)")->allow_extra_args(false);
  sub->add_option("--m", o.m, "rows");
  sub->add_option("--n", o.n, "columns");
  sub->add_option("--k", o.k, "planted support size (appendix-b)");
  sub->add_option("--kind", o.kind, "generator kind")
      ->check(CLI::IsMember({"random", "appendix-a", "appendix-b"}));
  sub->add_option("--seed", o.seed, "random seed");
  sub->add_option("--max-iter", o.max_iter, "iteration cap");
  sub->add_option("--step-tol", o.step_tol, "relative step-norm stop");
  sub->add_option("--zero-threshold", o.zero_threshold, "relative zero threshold");
  sub->add_option("--inits", o.inits, "number of initializations or trials");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FOCUSS sparse-recovery solver and convergence-rate toolkit"};
  app.require_subcommand(1);
  Options o;
  struct Cmd {
    const char* name;
    const char* help;
    int (*run)(const Options&);
  };
  const Cmd cmds[] = {
      {"solve", "run FOCUSS and write solution JSON and trace CSV", cmd_solve},
      {"rate", "measure R^(t) and classify the convergence rate", cmd_rate},
      {"gen", "generate a dataset", cmd_gen},
      {"oracle", "brute-force the sparsest lp solution of a tiny instance", cmd_oracle},
      {"newton-check", "compare quasi-Newton and FOCUSS steps", cmd_newton_check},
      {"bench", "time one FOCUSS step per kernel backend", cmd_bench},
  };
  std::vector<std::pair<CLI::App*, const Cmd*>> subs;
  for (const Cmd& c : cmds) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    add_common(sub, o);
    subs.emplace_back(sub, &c);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }
  try {
    for (auto& [sub, cmd] : subs) {
      if (!sub->parsed()) continue;
      const std::string name = cmd->name;
      if ((name == "solve" || name == "rate" || name == "oracle") && o.input.empty())
        throw Error(ErrorCode::InvalidArgument, "--input is required");
      return cmd->run(o);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolver;
  }
  return kInput;
}
