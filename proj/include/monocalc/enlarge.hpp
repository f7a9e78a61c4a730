// The eps-enlargement of an operator and the constructive restricted
// Brondsted-Rockafellar search (prox construction + graph scan fallback).
#pragma once

#include "monocalc/report.hpp"

namespace monocalc {

struct MonoInf {
  double value = kInf;  // inf over the graph of <z.x - y, z.xs - y*>
  bool exact = true;    // false when computed from a window-bounded sample
};

// Exact for finite graphs, affine maps, 1-D polyhedral subdifferentials,
// 1-D restricted affine maps and inverses of these; window-bounded sampling
// (with the caveat flag cleared from `exact`) otherwise.
MonoInf monotonicity_inf(const OperatorSpec& spec, const PairPoint& z, const Box& window);

// z in T^eps  <=>  inf over graph of the monotonicity product >= -eps.
bool te_contains(const OperatorSpec& spec, double eps, const PairPoint& z, const Box& window);

// Dual-axis grid sample of the slice {x* : (x, x*) in T^eps}.
std::vector<Vector> te_slice(const OperatorSpec& spec, double eps, const Vector& x,
                             const Box& window);

// Verifies T^0 = T on the window grid (true for maximal operators; fails
// with extension witnesses for restrictions).
CheckReport t0_check(const OperatorSpec& spec, const Box& window, double tol);

struct BRQuery {
  Vector x;
  Vector xs;
  double eps = 0.0;        // enlargement level of the query point
  double eps_tilde = 0.0;  // > eps
  double lambda = 1.0;     // > 0
};

struct BRResult {
  std::optional<PairPoint> found;
  double primal_residual = kInf;  // ||x - found.x||
  double dual_residual = kInf;    // ||xs - found.xs||
  bool satisfied = false;         // primal < lambda and dual < eps_tilde/lambda
  std::string strategy;           // "prox" or "grid_scan"
};

// Prox construction for subdifferential-type specs (polyhedral pieces, or
// affine with symmetric matrix): the returned point is an exact graph point
// with primal residual <= lambda and dual residual <= 2 eps / lambda.
// Empty when the operator has no prox path.
std::optional<PairPoint> br_prox_step(const OperatorSpec& spec, const BRQuery& q);

// Requires the query to lie in T^eps (refusal_error otherwise). Runs both
// strategies and returns the better result; ties go to prox.
BRResult br_search(const OperatorSpec& spec, const BRQuery& q, const Box& window);

}  // namespace monocalc
