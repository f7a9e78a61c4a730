#include "monocalc/operators.hpp"

#include <algorithm>
#include <cmath>

#include "monocalc/lp.hpp"

namespace monocalc {

namespace {

bool lex_less(const PairPoint& a, const PairPoint& b) {
  if (a.x != b.x) return a.x < b.x;
  return a.xs < b.xs;
}

void sort_dedupe(FiniteGraph& g) {
  std::sort(g.points.begin(), g.points.end(), lex_less);
  g.points.erase(std::unique(g.points.begin(), g.points.end()), g.points.end());
}

void require_pair_window(const OperatorSpec& spec, const Box& window) {
  if (window.dim() != 2 * spec.dim)
    throw input_error("window dimension must be twice the operator dimension");
}

// Visits the primal-block grid of a pair-space window.
template <typename F>
void for_each_primal_node(const Box& window, std::size_t n, F&& f) {
  std::vector<int> idx(n, 0);
  Vector x(n);
  for (;;) {
    for (std::size_t a = 0; a < n; ++a) x[a] = window.coord(a, idx[a]);
    f(x);
    std::size_t a = 0;
    while (a < n) {
      if (++idx[a] < window.resolution[a]) break;
      idx[a] = 0;
      ++a;
    }
    if (a == n) return;
  }
}

bool dual_contains(const Box& window, std::size_t n, const Vector& xs, double tol = 0.0) {
  for (std::size_t i = 0; i < n; ++i)
    if (xs[i] < window.lower[n + i] - tol || xs[i] > window.upper[n + i] + tol) return false;
  return true;
}

void sample_into(const OperatorSpec& spec, const Box& window, FiniteGraph& out);

void sample_subdiff(const SubdiffOp& op, std::size_t n, const Box& window, FiniteGraph& out) {
  for_each_primal_node(window, n, [&](const Vector& x) {
    double vmax = -kInf;
    for (const auto& p : op.pieces) vmax = std::max(vmax, dot(p.c, x) + p.d);
    double atol = 1e-12 * std::max(1.0, std::abs(vmax));
    std::vector<Vector> active;
    for (const auto& p : op.pieces) {
      if (dot(p.c, x) + p.d >= vmax - atol &&
          std::find(active.begin(), active.end(), p.c) == active.end())
        active.push_back(p.c);
    }
    for (const auto& c : active)
      if (dual_contains(window, n, c)) out.points.emplace_back(x, c);
    if (active.size() >= 2) {
      Vector mid(n, 0.0);
      for (const auto& c : active) mid = add(mid, c);
      mid = scale(1.0 / double(active.size()), mid);
      if (dual_contains(window, n, mid)) out.points.emplace_back(x, mid);
    }
  });

  // Kink enumeration (1-D): breakpoints carry vertical graph segments that
  // grid-only sampling misses. Endpoints plus midpoint of each interval.
  if (n == 1) {
    Envelope1D env = upper_envelope_1d(op);
    for (std::size_t k = 0; k + 1 < env.pieces.size(); ++k) {
      double b = env.breakpoints[k];
      if (b < window.lower[0] || b > window.upper[0]) continue;
      double clo = env.pieces[k].c[0];
      double chi = env.pieces[k + 1].c[0];
      for (double s : {clo, 0.5 * (clo + chi), chi})
        if (dual_contains(window, 1, {s})) out.points.emplace_back(Vector{b}, Vector{s});
    }
  }
}

void sample_into(const OperatorSpec& spec, const Box& window, FiniteGraph& out) {
  require_pair_window(spec, window);
  const std::size_t n = spec.dim;
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, FiniteGraphOp>) {
          for (const auto& p : node.graph.points)
            if (window.contains(p.flat())) out.points.push_back(p);
        } else if constexpr (std::is_same_v<T, AffineOp>) {
          for_each_primal_node(window, n, [&](const Vector& x) {
            Vector xs = add(node.M.mul(x), node.b);
            if (dual_contains(window, n, xs)) out.points.emplace_back(x, xs);
          });
        } else if constexpr (std::is_same_v<T, SubdiffOp>) {
          sample_subdiff(node, n, window, out);
        } else if constexpr (std::is_same_v<T, RestrictedOp>) {
          FiniteGraph inner;
          inner.dim = n;
          sample_into(*node.inner, window, inner);
          for (auto& p : inner.points)
            if (node.window.contains(p.flat())) out.points.push_back(std::move(p));
        } else if constexpr (std::is_same_v<T, InverseOp>) {
          FiniteGraph inner;
          inner.dim = n;
          sample_into(*node.inner, window.swapped_blocks(), inner);
          for (auto& p : inner.points) out.points.push_back(p.swapped());
        }
      },
      spec.node);
}

}  // namespace

const char* OperatorSpec::kind() const {
  switch (node.index()) {
    case 0: return "finite_graph";
    case 1: return "affine";
    case 2: return "subdiff_polyhedral";
    case 3: return "restricted";
    case 4: return "inverse";
  }
  return "?";
}

OperatorSpec make_finite_graph(FiniteGraph g, std::string name) {
  if (g.points.empty()) throw input_error("finite graph: empty");
  for (const auto& p : g.points)
    if (p.dim() != g.dim) throw input_error("finite graph: point dimension mismatch");
  OperatorSpec spec;
  spec.dim = g.dim;
  spec.name = std::move(name);
  spec.monotone = is_monotone_set(g).monotone;
  spec.maximal = false;  // a finite set is never maximal in R^n x R^n
  spec.node = FiniteGraphOp{std::move(g)};
  return spec;
}

OperatorSpec make_affine(Matrix M, Vector b, std::string name) {
  if (M.rows != M.cols || M.rows != b.size()) throw input_error("affine: shape mismatch");
  OperatorSpec spec;
  spec.dim = b.size();
  spec.name = std::move(name);
  spec.monotone = is_psd(symmetric_part(M));
  spec.maximal = spec.monotone;  // full-domain monotone affine maps are maximal
  spec.node = AffineOp{std::move(M), std::move(b)};
  return spec;
}

OperatorSpec make_subdiff(std::vector<SubdiffPiece> pieces, std::string name) {
  if (pieces.empty()) throw input_error("subdiff_polyhedral: needs at least one piece");
  std::size_t n = pieces.front().c.size();
  for (const auto& p : pieces)
    if (p.c.size() != n) throw input_error("subdiff_polyhedral: piece dimension mismatch");
  OperatorSpec spec;
  spec.dim = n;
  spec.name = std::move(name);
  spec.monotone = true;  // subdifferential of a finite convex function
  spec.maximal = true;
  spec.node = SubdiffOp{std::move(pieces)};
  return spec;
}

OperatorSpec make_restricted(OperatorSpec inner, Box window, std::string name) {
  if (window.dim() != 2 * inner.dim) throw input_error("restricted: window dimension mismatch");
  OperatorSpec spec;
  spec.dim = inner.dim;
  spec.name = std::move(name);
  spec.monotone = inner.monotone;  // subset of a monotone graph
  spec.maximal = false;
  spec.node = RestrictedOp{std::make_shared<OperatorSpec>(std::move(inner)), std::move(window)};
  return spec;
}

OperatorSpec make_inverse(OperatorSpec inner, std::string name) {
  OperatorSpec spec;
  spec.dim = inner.dim;
  spec.name = std::move(name);
  spec.monotone = inner.monotone;  // the swap preserves monotonicity products
  spec.maximal = inner.maximal;
  spec.node = InverseOp{std::make_shared<OperatorSpec>(std::move(inner))};
  return spec;
}

MonotoneSetResult is_monotone_set(const FiniteGraph& g) {
  if (g.points.empty()) throw input_error("is_monotone_set: empty graph");
  MonotoneSetResult r;
  for (std::size_t i = 0; i < g.points.size(); ++i) {
    for (std::size_t j = i + 1; j < g.points.size(); ++j) {
      double prod = mono_product(g.points[i], g.points[j]);
      if (prod < 0.0) {
        r.monotone = false;
        r.witness = {g.points[i], g.points[j]};
        r.product = prod;
        return r;
      }
    }
  }
  return r;
}

FiniteGraph invert_graph(const FiniteGraph& g) {
  FiniteGraph out;
  out.dim = g.dim;
  out.points.reserve(g.points.size());
  for (const auto& p : g.points) out.points.push_back(p.swapped());
  return out;
}

FiniteGraph sample_graph(const OperatorSpec& spec, const Box& window) {
  FiniteGraph out;
  out.dim = spec.dim;
  sample_into(spec, window, out);
  sort_dedupe(out);
  if (out.points.empty()) throw input_error("sample_graph: empty intersection with window");
  return out;
}

double subdiff_value(const SubdiffOp& op, const Vector& x) {
  double v = -kInf;
  for (const auto& p : op.pieces) v = std::max(v, dot(p.c, x) + p.d);
  return v;
}

double subdiff_conjugate_value(const SubdiffOp& op, const Vector& y) {
  const std::size_t n = y.size();
  const std::size_t m = op.pieces.size();
  LPProblem lp;
  lp.objective.resize(m);
  lp.eq = Matrix(n + 1, m);
  lp.rhs = y;
  lp.rhs.push_back(1.0);
  for (std::size_t j = 0; j < m; ++j) {
    lp.objective[j] = -op.pieces[j].d;
    for (std::size_t i = 0; i < n; ++i) lp.eq(i, j) = op.pieces[j].c[i];
    lp.eq(n, j) = 1.0;
  }
  LPResult r = solve_lp(lp);
  if (r.status == LPStatus::infeasible) return kInf;
  if (r.status != LPStatus::optimal) throw solver_error("subdiff conjugate: simplex failed");
  return r.value;
}

bool membership(const OperatorSpec& spec, const PairPoint& p, double tol) {
  if (p.dim() != spec.dim) throw input_error("membership: dimension mismatch");
  return std::visit(
      [&](const auto& node) -> bool {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, FiniteGraphOp>) {
          for (const auto& q : node.graph.points)
            if (norm_inf(sub(p.x, q.x)) <= tol && norm_inf(sub(p.xs, q.xs)) <= tol) return true;
          return false;
        } else if constexpr (std::is_same_v<T, AffineOp>) {
          return norm_inf(sub(p.xs, add(node.M.mul(p.x), node.b))) <= tol;
        } else if constexpr (std::is_same_v<T, SubdiffOp>) {
          double fs = subdiff_conjugate_value(node, p.xs);
          if (!is_finite(fs)) return false;
          return subdiff_value(node, p.x) + fs - duality(p) <= tol;
        } else if constexpr (std::is_same_v<T, RestrictedOp>) {
          return membership(*node.inner, p, tol) && node.window.contains(p.flat(), tol);
        } else {
          return membership(*node.inner, p.swapped(), tol);
        }
      },
      spec.node);
}

Envelope1D upper_envelope_1d(const SubdiffOp& op) {
  if (op.pieces.empty() || op.pieces.front().c.size() != 1)
    throw input_error("upper_envelope_1d: needs 1-D pieces");
  std::vector<SubdiffPiece> lines = op.pieces;
  std::sort(lines.begin(), lines.end(), [](const SubdiffPiece& a, const SubdiffPiece& b) {
    if (a.c[0] != b.c[0]) return a.c[0] < b.c[0];
    return a.d < b.d;
  });
  // equal slopes: keep the highest intercept only
  std::vector<SubdiffPiece> uniq;
  for (auto& l : lines) {
    if (!uniq.empty() && uniq.back().c[0] == l.c[0])
      uniq.back() = l;
    else
      uniq.push_back(l);
  }

  auto meet = [](const SubdiffPiece& a, const SubdiffPiece& b) {
    return (a.d - b.d) / (b.c[0] - a.c[0]);
  };

  Envelope1D env;
  for (const auto& l : uniq) {
    // the stack top is dominated when the new line overtakes it no later
    // than the previous breakpoint
    while (env.pieces.size() >= 2 && meet(env.pieces.back(), l) <= env.breakpoints.back()) {
      env.pieces.pop_back();
      env.breakpoints.pop_back();
    }
    if (!env.pieces.empty()) env.breakpoints.push_back(meet(env.pieces.back(), l));
    env.pieces.push_back(l);
  }
  return env;
}

nlohmann::json box_to_json(const Box& b) {
  return nlohmann::json{{"lower", b.lower}, {"upper", b.upper}, {"resolution", b.resolution}};
}

Box box_from_json(const nlohmann::json& j) {
  return Box(j.at("lower").get<Vector>(), j.at("upper").get<Vector>(),
             j.at("resolution").get<std::vector<int>>());
}

nlohmann::json operator_to_json(const OperatorSpec& spec) {
  nlohmann::json j;
  j["dim"] = spec.dim;
  j["kind"] = spec.kind();
  if (!spec.name.empty()) j["name"] = spec.name;
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, FiniteGraphOp>) {
          auto pts = nlohmann::json::array();
          for (const auto& p : node.graph.points) pts.push_back(p.flat());
          j["points"] = pts;
        } else if constexpr (std::is_same_v<T, AffineOp>) {
          auto rows = nlohmann::json::array();
          for (std::size_t i = 0; i < node.M.rows; ++i) {
            Vector row(node.M.cols);
            for (std::size_t k = 0; k < node.M.cols; ++k) row[k] = node.M(i, k);
            rows.push_back(row);
          }
          j["M"] = rows;
          j["b"] = node.b;
        } else if constexpr (std::is_same_v<T, SubdiffOp>) {
          auto pieces = nlohmann::json::array();
          for (const auto& p : node.pieces) pieces.push_back({{"c", p.c}, {"d", p.d}});
          j["pieces"] = pieces;
        } else if constexpr (std::is_same_v<T, RestrictedOp>) {
          j["inner"] = operator_to_json(*node.inner);
          j["window"] = box_to_json(node.window);
        } else {
          j["inner"] = operator_to_json(*node.inner);
        }
      },
      spec.node);
  return j;
}

OperatorSpec operator_from_json(const nlohmann::json& j) {
  const std::size_t dim = j.at("dim").get<std::size_t>();
  if (dim == 0) throw input_error("operator: dim must be positive");
  const std::string kind = j.at("kind").get<std::string>();
  std::string name = j.value("name", std::string{});

  OperatorSpec spec;
  if (kind == "finite_graph") {
    FiniteGraph g;
    g.dim = dim;
    for (const auto& flat : j.at("points")) {
      Vector z = flat.get<Vector>();
      if (z.size() != 2 * dim) throw input_error("operator: point length must be 2*dim");
      g.points.push_back(PairPoint::from_flat(z));
    }
    spec = make_finite_graph(std::move(g), std::move(name));
  } else if (kind == "affine") {
    const auto& rows = j.at("M");
    Matrix M(dim, dim);
    if (rows.size() != dim) throw input_error("operator: M must be dim x dim");
    for (std::size_t i = 0; i < dim; ++i) {
      Vector row = rows[i].get<Vector>();
      if (row.size() != dim) throw input_error("operator: M must be dim x dim");
      for (std::size_t k = 0; k < dim; ++k) M(i, k) = row[k];
    }
    Vector b = j.value("b", Vector(dim, 0.0));
    if (b.size() != dim) throw input_error("operator: b length mismatch");
    spec = make_affine(std::move(M), std::move(b), std::move(name));
  } else if (kind == "subdiff_polyhedral") {
    std::vector<SubdiffPiece> pieces;
    for (const auto& pj : j.at("pieces")) {
      SubdiffPiece p;
      p.c = pj.at("c").get<Vector>();
      p.d = pj.value("d", 0.0);
      if (p.c.size() != dim) throw input_error("operator: piece dimension mismatch");
      pieces.push_back(std::move(p));
    }
    spec = make_subdiff(std::move(pieces), std::move(name));
  } else if (kind == "restricted") {
    spec = make_restricted(operator_from_json(j.at("inner")), box_from_json(j.at("window")),
                           std::move(name));
  } else if (kind == "inverse") {
    spec = make_inverse(operator_from_json(j.at("inner")), std::move(name));
  } else {
    throw input_error("operator: unknown kind '" + kind + "'");
  }
  if (spec.dim != dim) throw input_error("operator: nested dim mismatch");
  return spec;
}

}  // namespace monocalc
