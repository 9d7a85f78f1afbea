#pragma once

#include "focuss/linalg.hpp"
#include "focuss/model.hpp"

namespace focuss {

enum class NewtonVariant { Quasi, Exact };

// H = [[0, A], [A^T, c Pi]] with c = p (quasi) or p (p - 1) (exact), Pi = diag|s|^{p-2}.
struct BlockSystem {
  DenseMatrix H;
  double c = 0.0;
};

BlockSystem assemble_block(const ProblemInstance& instance, const Vector& s, double p,
                           NewtonVariant variant);

// Closed-form H^{-1} built from M = A Pi^{-1} A^T.
DenseMatrix block_inverse(const ProblemInstance& instance, const Vector& s, double p,
                          NewtonVariant variant);

struct QuasiNewtonStep {
  Vector alpha_next;
  Vector s_next;
};

QuasiNewtonStep quasi_newton_step(const ProblemInstance& instance, const Vector& s, double p);

Vector exact_newton_step(const ProblemInstance& instance, const Vector& s, double p);

// Costs sum |s_i|^p of the exact-Newton iterates, starting with s0. Stops early on
// non-finite iterates or a zero component.
Vector newton_divergence_probe(const ProblemInstance& instance, const Vector& s0, double p,
                               std::size_t iters);

}  // namespace focuss
