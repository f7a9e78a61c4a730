#include "monocalc/enlarge.hpp"

#include <algorithm>
#include <cmath>

namespace monocalc {

namespace {

// min over u of <u, Q u> + <r, u> for symmetric psd Q: the negative of the
// matching concave sup; -inf when r escapes range(Q).
double convex_quadratic_inf(const Matrix& q_sym, const Vector& r) {
  double s = concave_quadratic_sup(q_sym, r);
  return is_finite(s) ? -s : -kInf;
}

MonoInf inf_affine(const AffineOp& node, const PairPoint& z) {
  // substitute u = z.x - y: product becomes <u, sym(M) u> + <u, r>,
  // r = z.xs - M z.x - b
  Vector r = sub(z.xs, add(node.M.mul(z.x), node.b));
  return {convex_quadratic_inf(symmetric_part(node.M), r), true};
}

MonoInf inf_subdiff_1d(const SubdiffOp& node, const PairPoint& z) {
  Envelope1D env = upper_envelope_1d(node);
  double x = z.x[0], xs = z.xs[0];
  double cmin = env.pieces.front().c[0];
  double cmax = env.pieces.back().c[0];
  if (xs < cmin || xs > cmax) return {-kInf, true};  // an unbounded ray wins
  if (env.pieces.size() == 1) return {0.0, true};    // horizontal-line graph, xs == c
  double m = kInf;
  for (std::size_t k = 0; k + 1 < env.pieces.size(); ++k) {
    double y = env.breakpoints[k];
    for (double ys : {env.pieces[k].c[0], env.pieces[k + 1].c[0]})
      m = std::min(m, (x - y) * (xs - ys));
  }
  return {m, true};
}

std::optional<MonoInf> inf_restricted_affine_1d(const RestrictedOp& node, const PairPoint& z) {
  const auto* aff = std::get_if<AffineOp>(&node.inner->node);
  if (!aff || aff->b.size() != 1) return std::nullopt;
  double m = aff->M(0, 0);
  if (m < 0.0) return std::nullopt;
  double b = aff->b[0];
  double lo = node.window.lower[0], hi = node.window.upper[0];
  if (m > 0.0) {
    lo = std::max(lo, (node.window.lower[1] - b) / m);
    hi = std::min(hi, (node.window.upper[1] - b) / m);
  } else if (b < node.window.lower[1] || b > node.window.upper[1]) {
    return std::nullopt;
  }
  if (!(lo <= hi)) return std::nullopt;
  double x = z.x[0], xs = z.xs[0];
  // (x - y)(xs - my - b) is convex in y for m >= 0
  auto val = [&](double y) { return (x - y) * (xs - m * y - b); };
  double best;
  if (m > 0.0) {
    double yhat = std::clamp((m * x + xs - b) / (2.0 * m), lo, hi);
    best = std::min({val(lo), val(hi), val(yhat)});
  } else {
    best = std::min(val(lo), val(hi));
  }
  return MonoInf{best, true};
}

MonoInf inf_sampled(const OperatorSpec& spec, const PairPoint& z, const Box& window) {
  FiniteGraph g = sample_graph(spec, window);
  double m = kInf;
  for (const auto& a : g.points) m = std::min(m, mono_product(z, a));
  return {m, false};
}

}  // namespace

MonoInf monotonicity_inf(const OperatorSpec& spec, const PairPoint& z, const Box& window) {
  if (z.dim() != spec.dim) throw input_error("monotonicity_inf: dimension mismatch");
  return std::visit(
      [&](const auto& node) -> MonoInf {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, FiniteGraphOp>) {
          double m = kInf;
          for (const auto& a : node.graph.points) m = std::min(m, mono_product(z, a));
          return {m, true};
        } else if constexpr (std::is_same_v<T, AffineOp>) {
          return inf_affine(node, z);
        } else if constexpr (std::is_same_v<T, SubdiffOp>) {
          if (spec.dim == 1) return inf_subdiff_1d(node, z);
          return inf_sampled(spec, z, window);
        } else if constexpr (std::is_same_v<T, RestrictedOp>) {
          if (spec.dim == 1)
            if (auto r = inf_restricted_affine_1d(node, z)) return *r;
          return inf_sampled(spec, z, window);
        } else {
          return monotonicity_inf(*node.inner, z.swapped(), window.swapped_blocks());
        }
      },
      spec.node);
}

bool te_contains(const OperatorSpec& spec, double eps, const PairPoint& z, const Box& window) {
  if (eps < 0.0) throw input_error("te_contains: eps must be >= 0");
  return monotonicity_inf(spec, z, window).value >= -eps;
}

std::vector<Vector> te_slice(const OperatorSpec& spec, double eps, const Vector& x,
                             const Box& window) {
  if (eps < 0.0) throw input_error("te_slice: eps must be >= 0");
  if (x.size() != spec.dim) throw input_error("te_slice: dimension mismatch");
  const std::size_t n = spec.dim;

  // iterate the dual-block grid of the window
  std::vector<Vector> out;
  std::vector<int> idx(n, 0);
  Vector xs(n);
  for (;;) {
    for (std::size_t a = 0; a < n; ++a) xs[a] = window.coord(n + a, idx[a]);
    if (te_contains(spec, eps, PairPoint(x, xs), window)) out.push_back(xs);
    std::size_t a = 0;
    while (a < n) {
      if (++idx[a] < window.resolution[n + a]) break;
      idx[a] = 0;
      ++a;
    }
    if (a == n) break;
  }
  return out;
}

CheckReport t0_check(const OperatorSpec& spec, const Box& window, double tol) {
  CheckReport rep;
  rep.check = "t0";
  rep.op = spec.name.empty() ? spec.kind() : spec.name;
  rep.window = window;
  rep.tolerances["membership"] = tol;

  for_each_node(window, [&](const Vector& v) {
    PairPoint z = PairPoint::from_flat(v);
    bool in_t0 = te_contains(spec, 0.0, z, window);
    bool in_graph = membership(spec, z, tol);
    ++rep.stats.evaluations;
    if (in_t0 == in_graph) return;
    rep.status = CheckStatus::fail;
    if (rep.witnesses.size() < 8) {
      nlohmann::json w = pair_point_json(z);
      w["type"] = in_t0 ? "extension_point" : "membership_without_t0";
      rep.witnesses.push_back(w);
    }
  });
  return rep;
}

namespace {

// minimize max_i(<c_i,u> + d_i) - <xs,u> + (alpha/2)|u - x|^2 by
// enumerating candidate active sets (Caratheodory: at most n+1 pieces).
std::optional<Vector> prox_subdiff(const SubdiffOp& op, const Vector& x, const Vector& xs,
                                   double alpha, Vector& subgrad_out) {
  const std::size_t n = x.size();
  const std::size_t m = op.pieces.size();
  if (m > 24) return std::nullopt;

  auto objective = [&](const Vector& u) {
    double q = 0.0;
    for (std::size_t i = 0; i < n; ++i) q += (u[i] - x[i]) * (u[i] - x[i]);
    return subdiff_value(op, u) - dot(xs, u) + 0.5 * alpha * q;
  };

  double best_f = kInf;
  Vector best_u, best_grad;

  std::vector<std::size_t> subset;
  auto try_subset = [&]() {
    const std::size_t s = subset.size();
    // unknowns: u (n) then lambda (s)
    Matrix sys(n + s, n + s, 0.0);
    Vector rhs(n + s, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      sys(i, i) = alpha;
      for (std::size_t k = 0; k < s; ++k) sys(i, n + k) = op.pieces[subset[k]].c[i];
      rhs[i] = alpha * x[i] + xs[i];
    }
    for (std::size_t k = 0; k + 1 < s; ++k) {
      // equal active values: <c_k - c_{k+1}, u> = d_{k+1} - d_k
      const auto& a = op.pieces[subset[k]];
      const auto& b = op.pieces[subset[k + 1]];
      for (std::size_t i = 0; i < n; ++i) sys(n + k, i) = a.c[i] - b.c[i];
      rhs[n + k] = b.d - a.d;
    }
    for (std::size_t k = 0; k < s; ++k) sys(n + s - 1, n + k) = 1.0;
    rhs[n + s - 1] = 1.0;

    Vector sol;
    try {
      sol = solve_linear(sys, rhs);
    } catch (const solver_error&) {
      return;  // singular configuration; another subset covers it
    }
    Vector u(sol.begin(), sol.begin() + n);
    Vector lam(sol.begin() + n, sol.end());
    for (double l : lam)
      if (l < -1e-9) return;

    // subset must actually attain the max at u
    double active_val = dot(op.pieces[subset[0]].c, u) + op.pieces[subset[0]].d;
    double fmax = subdiff_value(op, u);
    if (active_val < fmax - 1e-8 * std::max(1.0, std::abs(fmax))) return;

    double f = objective(u);
    if (f < best_f) {
      best_f = f;
      best_u = u;
      Vector grad(n, 0.0);
      for (std::size_t k = 0; k < s; ++k)
        for (std::size_t i = 0; i < n; ++i) grad[i] += lam[k] * op.pieces[subset[k]].c[i];
      best_grad = std::move(grad);
    }
  };

  std::function<void(std::size_t)> recurse = [&](std::size_t from) {
    if (!subset.empty()) try_subset();
    if (subset.size() > n) return;  // Caratheodory cap: n+1 pieces
    for (std::size_t i = from; i < m; ++i) {
      subset.push_back(i);
      recurse(i + 1);
      subset.pop_back();
    }
  };
  recurse(0);

  if (!is_finite(best_f)) return std::nullopt;
  subgrad_out = std::move(best_grad);
  return best_u;
}

double score_of(const BRQuery& q, double primal, double dual) {
  return std::max(primal / q.lambda, dual * q.lambda / q.eps_tilde);
}

BRResult make_result(const BRQuery& q, PairPoint found, const char* strategy) {
  BRResult r;
  r.primal_residual = norm2(sub(q.x, found.x));
  r.dual_residual = norm2(sub(q.xs, found.xs));
  r.satisfied = r.primal_residual < q.lambda && r.dual_residual < q.eps_tilde / q.lambda;
  r.strategy = strategy;
  r.found = std::move(found);
  return r;
}

}  // namespace

std::optional<PairPoint> br_prox_step(const OperatorSpec& spec, const BRQuery& q) {
  if (q.eps <= 0.0) return std::nullopt;  // alpha degenerates at eps = 0
  const double alpha = 2.0 * q.eps / (q.lambda * q.lambda);

  if (const auto* sd = std::get_if<SubdiffOp>(&spec.node)) {
    Vector grad;
    auto u = prox_subdiff(*sd, q.x, q.xs, alpha, grad);
    if (!u) return std::nullopt;
    return PairPoint(*u, grad);
  }
  if (const auto* aff = std::get_if<AffineOp>(&spec.node)) {
    // only gradient-type affine maps (symmetric M) are subdifferentials
    Matrix d = symmetric_part(aff->M);
    for (std::size_t i = 0; i < aff->M.rows; ++i)
      for (std::size_t j = 0; j < aff->M.cols; ++j)
        if (std::abs(aff->M(i, j) - d(i, j)) > 1e-12) return std::nullopt;
    Matrix sys = aff->M;
    for (std::size_t i = 0; i < sys.rows; ++i) sys(i, i) += alpha;
    Vector rhs = sub(add(q.xs, scale(alpha, q.x)), aff->b);
    Vector u = solve_linear(sys, rhs);
    return PairPoint(u, add(aff->M.mul(u), aff->b));
  }
  return std::nullopt;
}

BRResult br_search(const OperatorSpec& spec, const BRQuery& q, const Box& window) {
  if (q.x.size() != spec.dim || q.xs.size() != spec.dim)
    throw input_error("br_search: dimension mismatch");
  if (q.eps < 0.0) throw input_error("br_search: eps must be >= 0");
  if (!(q.eps_tilde > q.eps)) throw input_error("br_search: eps_tilde must exceed eps");
  if (!(q.lambda > 0.0)) throw input_error("br_search: lambda must be positive");

  PairPoint z(q.x, q.xs);
  if (!te_contains(spec, q.eps, z, window))
    throw refusal_error("br_search: query point is not in the eps-enlargement");

  // the point itself when it already lies in the graph
  if (membership(spec, z, 1e-9)) return make_result(q, z, "grid_scan");

  std::optional<BRResult> prox_result;
  if (auto p = br_prox_step(spec, q)) {
    if (!membership(spec, *p, 1e-9))
      throw internal_error("br_search: prox produced a non-graph point");
    BRResult r = make_result(q, std::move(*p), "prox");
    // strong-convexity guarantee of the prox construction; violations are bugs
    if (r.primal_residual > q.lambda * (1.0 + 1e-9) ||
        r.dual_residual > 2.0 * q.eps / q.lambda * (1.0 + 1e-9))
      throw internal_error("br_search: prox bounds violated");
    prox_result = std::move(r);
  }

  std::optional<BRResult> grid_result;
  {
    FiniteGraph g = sample_graph(spec, window);
    double best = kInf;
    const PairPoint* best_p = nullptr;
    for (const auto& p : g.points) {
      double s = score_of(q, norm2(sub(q.x, p.x)), norm2(sub(q.xs, p.xs)));
      if (s < best) {
        best = s;
        best_p = &p;
      }
    }
    if (best_p) grid_result = make_result(q, *best_p, "grid_scan");
  }

  if (prox_result && grid_result) {
    double sp = score_of(q, prox_result->primal_residual, prox_result->dual_residual);
    double sg = score_of(q, grid_result->primal_residual, grid_result->dual_residual);
    return sg < sp ? std::move(*grid_result) : std::move(*prox_result);  // tie -> prox
  }
  if (prox_result) return std::move(*prox_result);
  if (grid_result) return std::move(*grid_result);
  throw solver_error("br_search: no strategy produced a point");
}

}  // namespace monocalc
