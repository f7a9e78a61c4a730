#include "monocalc/fitz.hpp"

#include <algorithm>
#include <cmath>

namespace monocalc {

MaxAffine phi_of(const FiniteGraph& g) {
  if (g.points.empty()) throw input_error("phi_of: empty graph");
  MaxAffine f;
  f.terms.reserve(g.points.size());
  for (const auto& p : g.points) {
    // term value at (x, x*): <x, y*> + <y, x*> - <y, y*>
    Vector slope = p.xs;
    slope.insert(slope.end(), p.x.begin(), p.x.end());
    f.terms.push_back({std::move(slope), -duality(p)});
  }
  return f;
}

HullFunc s_of(const FiniteGraph& g) {
  if (g.points.empty()) throw input_error("s_of: empty graph");
  std::vector<std::pair<PairPoint, double>> data;
  data.reserve(g.points.size());
  for (const auto& p : g.points) data.emplace_back(p, duality(p));
  return clconv_from_points(data);
}

namespace {

// sup over t in [lo, hi] of -m t^2 + l t  (m >= 0).
double concave_interval_sup(double m, double l, double lo, double hi) {
  if (m > 0.0) {
    double t = std::clamp(l / (2.0 * m), lo, hi);
    return -m * t * t + l * t;
  }
  return std::max(l * lo, l * hi);
}

PhiFn phi_affine(const AffineOp& node) {
  Matrix q = symmetric_part(node.M);
  Matrix mt = node.M.transposed();
  Vector b = node.b;
  return [q, mt, b](const PairPoint& z) {
    Vector r = sub(add(mt.mul(z.x), z.xs), b);
    double s = concave_quadratic_sup(q, r);
    return is_finite(s) ? dot(z.x, b) + s : kInf;
  };
}

PhiFn phi_subdiff_1d(const SubdiffOp& node) {
  Envelope1D env = upper_envelope_1d(node);
  return [env](const PairPoint& z) {
    double x = z.x[0], xs = z.xs[0];
    double cmin = env.pieces.front().c[0];
    double cmax = env.pieces.back().c[0];
    if (xs < cmin || xs > cmax) return kInf;
    if (env.pieces.size() == 1) return x * cmin;  // horizontal-line graph
    double best = -kInf;
    for (std::size_t k = 0; k + 1 < env.pieces.size(); ++k) {
      double y = env.breakpoints[k];
      for (double ys : {env.pieces[k].c[0], env.pieces[k + 1].c[0]})
        best = std::max(best, x * ys + y * xs - y * ys);
    }
    return best;
  };
}

// 1-D affine graph clipped to an interval of primal values.
std::optional<PhiFn> phi_restricted_affine_1d(const RestrictedOp& node) {
  const auto* aff = std::get_if<AffineOp>(&node.inner->node);
  if (!aff || aff->b.size() != 1) return std::nullopt;
  double m = aff->M(0, 0);
  double b = aff->b[0];
  if (m < 0.0) return std::nullopt;  // non-monotone direction: no closed form kept
  double lo = node.window.lower[0], hi = node.window.upper[0];
  if (m > 0.0) {
    lo = std::max(lo, (node.window.lower[1] - b) / m);
    hi = std::min(hi, (node.window.upper[1] - b) / m);
  } else if (b < node.window.lower[1] || b > node.window.upper[1]) {
    return std::nullopt;  // empty graph
  }
  if (!(lo <= hi)) return std::nullopt;
  return PhiFn([m, b, lo, hi](const PairPoint& z) {
    double x = z.x[0], xs = z.xs[0];
    // sup over y in [lo,hi] of x(my+b) + y xs - y(my+b)
    return x * b + concave_interval_sup(m, m * x + xs - b, lo, hi);
  });
}

}  // namespace

std::optional<PhiFn> exact_phi(const OperatorSpec& spec) {
  return std::visit(
      [&](const auto& node) -> std::optional<PhiFn> {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, FiniteGraphOp>) {
          MaxAffine f = phi_of(node.graph);
          return PhiFn([f](const PairPoint& z) { return eval(ConvexFuncRep(f), z); });
        } else if constexpr (std::is_same_v<T, AffineOp>) {
          return phi_affine(node);
        } else if constexpr (std::is_same_v<T, SubdiffOp>) {
          if (spec.dim != 1) return std::nullopt;
          return phi_subdiff_1d(node);
        } else if constexpr (std::is_same_v<T, RestrictedOp>) {
          if (spec.dim != 1) return std::nullopt;
          return phi_restricted_affine_1d(node);
        } else {
          auto inner = exact_phi(*node.inner);
          if (!inner) return std::nullopt;
          return PhiFn([f = *inner](const PairPoint& z) { return f(z.swapped()); });
        }
      },
      spec.node);
}

bool b_contains(const ConvexFuncRep& h, const PairPoint& z, double tol) {
  return eval(h, z) <= duality(z) + tol;
}

bool l_contains(const ConvexFuncRep& h, const PairPoint& z, double tol) {
  double v = eval(h, z);
  return is_finite(v) && std::abs(v - duality(z)) <= tol;
}

std::vector<PairPoint> grid_pair_points(const Box& window) {
  if (window.dim() % 2 != 0) throw input_error("grid_pair_points: odd window dimension");
  std::vector<PairPoint> pts;
  pts.reserve(std::size_t(window.node_count()));
  for_each_node(window, [&](const Vector& v) { pts.push_back(PairPoint::from_flat(v)); });
  return pts;
}

FamilyReport in_family_check(const ConvexFuncRep& h, const OperatorSpec& spec, const Box& window,
                             double tol) {
  if (func_dim(h) != 2 * spec.dim) throw input_error("in_family_check: dimension mismatch");
  FamilyReport rep;

  for_each_node(window, [&](const Vector& v) {
    PairPoint z = PairPoint::from_flat(v);
    double gap = eval(h, z) - duality(z);
    ++rep.evaluations;
    if (gap < rep.lower_gap) rep.lower_gap = gap;
    if (gap < -tol && rep.witnesses.size() < 8) rep.witnesses.push_back(z);
  });

  FiniteGraph g = sample_graph(spec, window);
  for (const auto& a : g.points) {
    double v = eval(h, a);
    ++rep.evaluations;
    double gap = is_finite(v) ? std::abs(v - duality(a)) : kInf;
    if (gap > rep.graph_gap) rep.graph_gap = gap;
    if (gap > tol && rep.witnesses.size() < 8) rep.witnesses.push_back(a);
  }

  rep.pass = rep.lower_gap >= -tol && rep.graph_gap <= tol;
  return rep;
}

CheckReport bs_identity_check(const FiniteGraph& g, const std::vector<PairPoint>& testpoints,
                              double tol) {
  if (g.points.empty()) throw input_error("bs_identity_check: empty graph");
  CheckReport rep;
  rep.check = "bs-identity";
  rep.tolerances["value"] = tol;

  ConvexFuncRep phi = phi_of(g);
  ConvexFuncRep js = j_transform(ConvexFuncRep(s_of(g)));

  double max_dev = 0.0;
  std::optional<PairPoint> worst;
  for (const auto& z : testpoints) {
    double a = eval(phi, z);
    double b = eval(js, z);
    rep.stats.evaluations += 2;
    double dev = std::abs(a - b);
    if (dev > max_dev) {
      max_dev = dev;
      worst = z;
    }
  }
  rep.data["max_deviation"] = max_dev;
  rep.data["test_points"] = testpoints.size();
  rep.status = max_dev <= tol ? CheckStatus::pass : CheckStatus::fail;
  if (rep.status == CheckStatus::fail && worst) {
    nlohmann::json w = pair_point_json(*worst);
    w["type"] = "identity_deviation";
    w["deviation"] = max_dev;
    rep.witnesses.push_back(w);
  }
  return rep;
}

CheckReport family_order_check(const FiniteGraph& g, const std::vector<ConvexFuncRep>& hs,
                               const std::vector<PairPoint>& testpoints, double tol) {
  CheckReport rep;
  rep.check = "family-order";
  rep.tolerances["value"] = tol;

  ConvexFuncRep phi = phi_of(g);
  ConvexFuncRep s = s_of(g);

  for (std::size_t k = 0; k < hs.size(); ++k) {
    for (const auto& z : testpoints) {
      double lo = eval(phi, z);
      double hi = eval(s, z);
      double v = eval(hs[k], z);
      rep.stats.evaluations += 3;
      bool below = v < lo - tol;
      bool above = v > hi + tol;
      if (below || above) {
        rep.status = CheckStatus::fail;
        if (rep.witnesses.size() < 8) {
          nlohmann::json w = pair_point_json(z);
          w["type"] = below ? "below_phi" : "above_s";
          w["member_index"] = k;
          w["value"] = v;
          w["phi"] = lo;
          w["s"] = is_finite(hi) ? nlohmann::json(hi) : nlohmann::json("inf");
          rep.witnesses.push_back(w);
        }
      }
    }
  }
  return rep;
}

}  // namespace monocalc
