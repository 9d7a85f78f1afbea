#include "focuss/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "focuss/error.hpp"

namespace focuss::io {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

[[noreturn]] void schema_error(const std::string& what) { throw Error(ErrorCode::Schema, what); }

double as_number(const json& j, const std::string& field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() && *end == '\0') return v;
  }
  schema_error("field '" + field + "' must be a number");
}

Vector as_vector(const json& j, const std::string& field) {
  if (!j.is_array()) schema_error("field '" + field + "' must be an array");
  Vector v;
  v.reserve(j.size());
  for (const auto& e : j) v.push_back(as_number(e, field));
  return v;
}

std::size_t as_count(const json& j, const std::string& field) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) schema_error("field '" + field + "' must be an integer");
  const auto v = j.get<long long>();
  if (v < 0) schema_error("field '" + field + "' must be non-negative");
  return static_cast<std::size_t>(v);
}

const json& require(const json& root, const char* key) {
  if (!root.contains(key)) schema_error(std::string("missing field '") + key + "'");
  return root.at(key);
}

}  // namespace

std::string dataset_to_json(const GeneratedDataset& d) {
  json j;
  j["m"] = d.instance.m();
  j["n"] = d.instance.n();
  j["p"] = d.p;
  json rows = json::array();
  for (std::size_t i = 0; i < d.instance.A.rows; ++i)
    rows.push_back(std::vector<double>(d.instance.A.row(i), d.instance.A.row(i) + d.instance.A.cols));
  j["A"] = std::move(rows);
  j["x"] = d.instance.x;
  if (d.planted_solution) j["planted_solution"] = *d.planted_solution;
  j["generator"] = to_string(d.generator);
  j["seed"] = d.seed;
  if (d.certificate) j["certificate"] = *d.certificate;
  return j.dump(1) + "\n";
}

GeneratedDataset dataset_from_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    schema_error(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) schema_error("dataset must be a JSON object");

  GeneratedDataset d;
  const std::size_t m = as_count(require(root, "m"), "m");
  const std::size_t n = as_count(require(root, "n"), "n");
  const json& rows = require(root, "A");
  if (!rows.is_array() || rows.size() != m) schema_error("A must have m rows");
  d.instance.A = DenseMatrix(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    const Vector r = as_vector(rows[i], "A");
    if (r.size() != n) schema_error("row " + std::to_string(i) + " of A must have n entries");
    std::copy(r.begin(), r.end(), d.instance.A.row(i));
  }
  d.instance.x = as_vector(require(root, "x"), "x");
  if (d.instance.x.size() != m) schema_error("x must have m entries");
  d.p = as_number(require(root, "p"), "p");
  const json& gen = require(root, "generator");
  if (!gen.is_string()) schema_error("generator must be a string");
  try {
    d.generator = generator_from_string(gen.get<std::string>());
  } catch (const Error& e) {
    schema_error(e.what());
  }
  const json& seed = require(root, "seed");
  if (!seed.is_number_unsigned() && !seed.is_number_integer()) schema_error("seed must be an integer");
  d.seed = seed.get<std::uint64_t>();
  if (root.contains("planted_solution") && !root["planted_solution"].is_null()) {
    d.planted_solution = as_vector(root["planted_solution"], "planted_solution");
    if (d.planted_solution->size() != n) schema_error("planted_solution must have n entries");
  }
  if (root.contains("certificate") && !root["certificate"].is_null())
    d.certificate = as_number(root["certificate"], "certificate");
  try {
    d.instance.check();
  } catch (const Error& e) {
    schema_error(e.what());
  }
  return d;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for '" + path + "'");
}

GeneratedDataset read_dataset(const std::string& path) { return dataset_from_json(read_text(path)); }

void write_dataset(const std::string& path, const GeneratedDataset& dataset) {
  write_text(path, dataset_to_json(dataset));
}

void write_trace_csv(std::ostream& out, const SolveTrace& trace) {
  out << "t,cost,residual,step_norm,support\n";
  for (std::size_t t = 0; t < trace.iterates.size(); ++t) {
    const double step = trace.step_norms[t];
    out << t << ',' << format_double(trace.costs[t]) << ',' << format_double(trace.residuals[t])
        << ',' << format_double(step) << ',' << trace.support_sizes[t] << '\n';
  }
}

void write_rate_csv(std::ostream& out, const RateReport& report) {
  out << "t,R_t,valid\n";
  for (std::size_t t = 0; t < report.r_series.size(); ++t)
    out << t << ',' << format_double(report.r_series[t]) << ',' << (report.valid[t] ? 1 : 0) << '\n';
}

std::string oracle_to_json(const OracleResult& result, double p) {
  json j;
  j["p"] = p;
  j["best_solution"] = result.best_solution;
  j["best_cost"] = result.best_cost;
  j["supports_examined"] = result.supports_examined;
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < result.best_solution.size(); ++i)
    if (result.best_solution[i] != 0.0) support.push_back(i);
  j["support"] = support;
  return j.dump(1) + "\n";
}

}  // namespace focuss::io
