// Seeded multistart coordinate descent over a box. Used for polishing grid
// minima of nonconvex objectives (polar certificate search, premax checks).
#pragma once

#include <cstdint>
#include <functional>

#include "monocalc/core.hpp"

namespace monocalc {

struct MultistartConfig {
  int starts = 64;
  std::uint64_t seed = 1;
  int max_iterations = 400;
  double step_tolerance = 1e-9;
};

struct MinimizeResult {
  double best_value = kInf;
  Vector best_point;
  int starts_run = 0;
  std::int64_t evaluations = 0;
};

// Best over {box corners} u {seeded uniform starts}, each polished by
// pattern search with shrinking steps. Deterministic given cfg.seed: start i
// uses seed + i, and ties resolve to the earliest start.
MinimizeResult minimize_nonconvex(const std::function<double(const Vector&)>& objective,
                                  const Box& box, const MultistartConfig& cfg);

}  // namespace monocalc
