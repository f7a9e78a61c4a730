#include "monocalc/lp.hpp"

#include <cmath>

namespace monocalc {

namespace {

std::int64_t g_lp_calls = 0;

constexpr double kPivotEps = 1e-11;

// Tableau simplex on equality-form data with an existing basic feasible
// start. Bland's rule: entering = lowest-index negative reduced cost,
// leaving = lowest-index argmin ratio.
// Returns false when unbounded.
bool run_simplex(Matrix& t, std::vector<std::size_t>& basis, std::size_t nvars, long max_iters) {
  const std::size_t m = t.rows - 1;  // last row holds reduced costs
  for (long iter = 0; iter < max_iters; ++iter) {
    std::size_t enter = nvars;
    for (std::size_t j = 0; j < nvars; ++j) {
      if (t(m, j) < -kPivotEps) {
        enter = j;
        break;
      }
    }
    if (enter == nvars) return true;  // optimal

    std::size_t leave = m;
    double best_ratio = kInf;
    for (std::size_t i = 0; i < m; ++i) {
      if (t(i, enter) > kPivotEps) {
        double ratio = t(i, nvars) / t(i, enter);
        if (ratio < best_ratio - 1e-15 ||
            (std::abs(ratio - best_ratio) <= 1e-15 && (leave == m || basis[i] < basis[leave]))) {
          best_ratio = ratio;
          leave = i;
        }
      }
    }
    if (leave == m) return false;  // unbounded along entering column

    double piv = t(leave, enter);
    for (std::size_t j = 0; j <= nvars; ++j) t(leave, j) /= piv;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave) continue;
      double f = t(i, enter);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= nvars; ++j) t(i, j) -= f * t(leave, j);
    }
    basis[leave] = enter;
  }
  throw solver_error("simplex: iteration cap exceeded");
}

}  // namespace

std::int64_t lp_call_count() { return g_lp_calls; }
void reset_lp_call_count() { g_lp_calls = 0; }

LPResult solve_lp(const LPProblem& p) {
  ++g_lp_calls;
  const std::size_t m = p.eq.rows;
  const std::size_t n = p.objective.size();
  if (p.eq.cols != n || p.rhs.size() != m) throw input_error("solve_lp: shape mismatch");
  if (m > 64 || n > 4096) throw input_error("solve_lp: problem exceeds desk-scale caps");
  const long max_iters = 200 + 40L * long(m + n);

  // Phase 1: minimize the sum of artificial variables.
  const std::size_t total = n + m;
  Matrix t(m + 1, total + 1, 0.0);
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    double sgn = p.rhs[i] < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) t(i, j) = sgn * p.eq(i, j);
    t(i, n + i) = 1.0;
    t(i, total) = sgn * p.rhs[i];
    basis[i] = n + i;
  }
  for (std::size_t j = 0; j <= total; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += t(i, j);
    t(m, j) = (j < n ? -s : (j < total ? 1.0 - s : -s));
  }
  // cost row of phase 1 is sum of artificials: artificial columns carry cost 1
  for (std::size_t j = n; j < total; ++j) t(m, j) = 0.0;

  if (!run_simplex(t, basis, total, max_iters))
    throw solver_error("solve_lp: phase-1 unbounded (inconsistent tableau)");
  const double phase1 = -t(m, total);  // cost row carries the negated objective
  if (phase1 < -1e-8) throw solver_error("solve_lp: negative phase-1 objective");
  if (phase1 > 1e-9) {
    LPResult r;
    r.status = LPStatus::infeasible;
    return r;
  }

  // Drive any artificial variable still basic (at zero level) out of the basis.
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < n) continue;
    std::size_t enter = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(t(i, j)) > kPivotEps) {
        enter = j;
        break;
      }
    }
    if (enter == n) continue;  // redundant row
    double piv = t(i, enter);
    for (std::size_t j = 0; j <= total; ++j) t(i, j) /= piv;
    for (std::size_t k = 0; k <= m; ++k) {
      if (k == i) continue;
      double f = t(k, enter);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= total; ++j) t(k, j) -= f * t(i, j);
    }
    basis[i] = enter;
  }

  // Phase 2 on the original columns.
  Matrix t2(m + 1, n + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t2(i, j) = t(i, j);
    t2(i, n) = t(i, total);
  }
  for (std::size_t j = 0; j < n; ++j) t2(m, j) = p.objective[j];
  t2(m, n) = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] >= n) continue;
    double f = t2(m, basis[i]);
    if (f == 0.0) continue;
    for (std::size_t j = 0; j <= n; ++j) t2(m, j) -= f * t2(i, j);
  }

  LPResult r;
  if (!run_simplex(t2, basis, n, max_iters)) {
    r.status = LPStatus::unbounded;
    r.value = -kInf;
    return r;
  }

  r.status = LPStatus::optimal;
  r.solution.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) r.solution[basis[i]] = t2(i, n);

  // feasibility trap: reported optima must satisfy the constraints
  for (std::size_t i = 0; i < m; ++i) {
    double ax = 0.0;
    for (std::size_t j = 0; j < n; ++j) ax += p.eq(i, j) * r.solution[j];
    if (std::abs(ax - p.rhs[i]) > 1e-9)
      throw solver_error("solve_lp: reported solution violates a constraint");
  }

  double v = 0.0;
  for (std::size_t j = 0; j < n; ++j) v += p.objective[j] * r.solution[j];
  r.value = v;
  return r;
}

}  // namespace monocalc
