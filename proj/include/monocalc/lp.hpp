// Dense two-phase simplex for the tiny equality-form programs that back
// hull-function evaluation and conjugation:
//
//   min  <c, x>   s.t.  A x = b,  x >= 0.
//
// Bland's rule throughout, so runs are deterministic and cycling-free.
#pragma once

#include <cstdint>

#include "monocalc/core.hpp"
#include "monocalc/linalg.hpp"

namespace monocalc {

struct LPProblem {
  Vector objective;  // length = number of variables
  Matrix eq;         // rows x vars
  Vector rhs;        // length = rows
};

enum class LPStatus { optimal, infeasible, unbounded };

struct LPResult {
  LPStatus status = LPStatus::infeasible;
  double value = kInf;
  Vector solution;
};

inline const char* to_string(LPStatus s) {
  switch (s) {
    case LPStatus::optimal: return "optimal";
    case LPStatus::infeasible: return "infeasible";
    case LPStatus::unbounded: return "unbounded";
  }
  return "?";
}

LPResult solve_lp(const LPProblem& p);

// Monotonically increasing count of simplex solves, reported in check
// statistics. Single orchestrating process; not synchronized.
std::int64_t lp_call_count();
void reset_lp_call_count();

}  // namespace monocalc
