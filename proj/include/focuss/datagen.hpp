#pragma once

#include <cstdint>

#include "focuss/model.hpp"

namespace focuss {

GeneratedDataset gen_random(std::size_t m, std::size_t n, std::uint64_t seed, double p = 0.8);

// Planted stationary point with support exactly m for 1 < p < 2. Requires 2m > n.
GeneratedDataset gen_appendix_a(std::size_t m, std::size_t n, double p, std::uint64_t seed);

// Planted stationary point with support k, m < k < n, for 1 < p < 2.
// Requires n - k <= m - 1.
GeneratedDataset gen_appendix_b(std::size_t m, std::size_t k, std::size_t n, double p,
                                std::uint64_t seed);

struct OracleResult {
  Vector best_solution;
  double best_cost = 0.0;
  std::size_t supports_examined = 0;
};

// Enumerates every support of size 1..m and returns the cheapest exact solution
// under sum |s_i|^p. Ties within 1e-12 go to the lexicographically smallest support.
OracleResult brute_force_oracle(const ProblemInstance& instance, double p,
                                std::size_t max_n = 20);

}  // namespace focuss
