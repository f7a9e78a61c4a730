#include "monocalc/polar.hpp"

#include <algorithm>
#include <cmath>

namespace monocalc {

namespace {

constexpr double kDualPathTol = 1e-9;
constexpr double kPenaltyWeight = 1e3;

}  // namespace

PolarOracle::PolarOracle(FiniteGraph base) : base_(std::move(base)) {
  if (base_.points.empty()) throw input_error("PolarOracle: empty base");
  phi_ = phi_of(base_);
}

double PolarOracle::margin(const PairPoint& z) const {
  double m = kInf;
  for (const auto& a : base_.points) m = std::min(m, mono_product(z, a));

  // Eq.-(22)-style second route: duality(z) - phi(z) is the same number up
  // to rounding; any real disagreement is a bug.
  double best = -kInf;
  Vector flat = z.flat();
  for (const auto& t : phi_.terms) best = std::max(best, dot(t.slope, flat) + t.offset);
  double phi_route = duality(z) - best;
  ++queries_;
  if (std::abs(m - phi_route) > kDualPathTol)
    throw internal_error("polar membership: direct and Fitzpatrick routes disagree");
  return m;
}

bool PolarOracle::contains(const PairPoint& z) const { return margin(z) >= 0.0; }

double PolarOracle::phi_minus_duality(const PairPoint& z) const { return -margin(z); }

bool polar_contains(const FiniteGraph& base, const PairPoint& z) {
  return PolarOracle(base).contains(z);
}

PolarDecision polar_monotone_decide(const FiniteGraph& base, const Box& window,
                                    const MultistartConfig& cfg) {
  MonotoneSetResult mono = is_monotone_set(base);
  if (!mono.monotone) throw input_error("polar_monotone_decide: base set is not monotone");
  if (window.dim() != 2 * base.dim)
    throw input_error("polar_monotone_decide: window dimension mismatch");

  PolarOracle oracle(base);
  PolarDecision out;

  // (i) exhaustive scan: collect polar members on the window grid, then
  // check all pairs for a negative product.
  std::vector<PairPoint> members;
  for_each_node(window, [&](const Vector& v) {
    ++out.grid_nodes;
    PairPoint z = PairPoint::from_flat(v);
    if (oracle.contains(z)) members.push_back(std::move(z));
  });
  out.polar_members = std::int64_t(members.size());

  // keep the pair scan at desk scale; stride-subsample very dense member sets
  std::size_t stride = 1;
  while (members.size() / stride > 3000) ++stride;

  std::optional<std::pair<PairPoint, PairPoint>> best_pair;
  for (std::size_t i = 0; i < members.size(); i += stride) {
    for (std::size_t j = i + 1; j < members.size(); j += stride) {
      ++out.pairs_checked;
      double prod = mono_product(members[i], members[j]);
      if (prod < out.best_product_found) {
        out.best_product_found = prod;
        best_pair = {members[i], members[j]};
      }
    }
  }

  auto certify = [&](const PairPoint& p, const PairPoint& q) -> bool {
    double prod = mono_product(p, q);
    if (!(prod < 0.0)) return false;
    if (!oracle.contains(p) || !oracle.contains(q)) return false;
    PolarCertificate cert;
    cert.p = p;
    cert.q = q;
    cert.product = prod;
    cert.polar_margin_p = oracle.phi_minus_duality(p);
    cert.polar_margin_q = oracle.phi_minus_duality(q);
    out.monotone = false;
    out.certificate = std::move(cert);
    return true;
  };

  if (best_pair && out.best_product_found < 0.0 && certify(best_pair->first, best_pair->second))
    return out;

  // (ii) multistart descent on product + penalty over (p, q).
  const std::size_t n = base.dim;
  Vector lo = window.lower, hi = window.upper;
  lo.insert(lo.end(), window.lower.begin(), window.lower.end());
  hi.insert(hi.end(), window.upper.begin(), window.upper.end());
  Box pq_box(lo, hi, std::vector<int>(4 * n, 2));

  auto objective = [&](const Vector& v) {
    PairPoint p(Vector(v.begin(), v.begin() + n), Vector(v.begin() + n, v.begin() + 2 * n));
    PairPoint q(Vector(v.begin() + 2 * n, v.begin() + 3 * n), Vector(v.begin() + 3 * n, v.end()));
    double viol_p = std::max(0.0, oracle.phi_minus_duality(p));
    double viol_q = std::max(0.0, oracle.phi_minus_duality(q));
    return mono_product(p, q) + kPenaltyWeight * (viol_p * viol_p + viol_q * viol_q);
  };

  MinimizeResult min = minimize_nonconvex(objective, pq_box, cfg);
  out.search_evaluations = min.evaluations;
  if (min.best_value < out.best_product_found) out.best_product_found = min.best_value;
  if (min.best_value < 0.0) {
    const Vector& v = min.best_point;
    PairPoint p(Vector(v.begin(), v.begin() + n), Vector(v.begin() + n, v.begin() + 2 * n));
    PairPoint q(Vector(v.begin() + 2 * n, v.begin() + 3 * n), Vector(v.begin() + 3 * n, v.end()));
    certify(p, q);  // exact re-verification; near-misses stay "monotone"
  }
  return out;
}

CheckReport polar_decide_report(const FiniteGraph& base, const Box& window,
                                const MultistartConfig& cfg, std::string op_name) {
  CheckReport rep;
  rep.check = "polar-decide";
  rep.op = std::move(op_name);
  rep.window = window;
  rep.seed = cfg.seed;

  PolarDecision d = polar_monotone_decide(base, window, cfg);
  rep.stats.evaluations = d.grid_nodes + d.search_evaluations;
  rep.data["grid_nodes"] = d.grid_nodes;
  rep.data["polar_members"] = d.polar_members;
  rep.data["pairs_checked"] = d.pairs_checked;
  rep.data["best_product_found"] = d.best_product_found;
  if (d.monotone) {
    // bounded verdict: no certificate found within this search budget
    rep.status = CheckStatus::bounded_pass;
    rep.data["verdict"] = "monotone-within-budget";
  } else {
    rep.status = CheckStatus::fail;
    const PolarCertificate& c = *d.certificate;
    nlohmann::json w;
    w["type"] = "polar_certificate";
    w["p"] = pair_point_json(c.p);
    w["q"] = pair_point_json(c.q);
    w["product"] = c.product;
    w["polar_margin_p"] = c.polar_margin_p;
    w["polar_margin_q"] = c.polar_margin_q;
    rep.witnesses.push_back(w);
  }
  return rep;
}

CheckReport phi_ge_pi_check(const OperatorSpec& spec, const Box& window, double tol) {
  auto phi = exact_phi(spec);
  if (!phi)
    throw input_error("phi_ge_pi_check: spec has no exact Fitzpatrick path (unsupported input)");
  if (window.dim() != 2 * spec.dim) throw input_error("phi_ge_pi_check: window dimension mismatch");

  CheckReport rep;
  rep.check = "premax";
  rep.op = spec.name.empty() ? spec.kind() : spec.name;
  rep.window = window;
  rep.tolerances["min_gap"] = tol;

  double min_gap = kInf;
  std::optional<PairPoint> argmin;
  std::int64_t b_not_l = 0;
  std::optional<PairPoint> bl_witness;
  for_each_node(window, [&](const Vector& v) {
    PairPoint z = PairPoint::from_flat(v);
    double g = (*phi)(z);
    ++rep.stats.evaluations;
    if (!is_finite(g)) return;
    double gap = g - duality(z);
    if (gap < min_gap) {
      min_gap = gap;
      argmin = z;
    }
    // Eq.-(a1) cross-check: a grid point of b(phi) \ L(phi)
    if (gap < -tol) {
      ++b_not_l;
      if (!bl_witness) bl_witness = z;
    }
  });

  // polish the grid minimum with the seeded multistart search
  auto objective = [&](const Vector& v) {
    PairPoint z = PairPoint::from_flat(v);
    double g = (*phi)(z);
    return is_finite(g) ? g - duality(z) : 1e100;
  };
  MultistartConfig cfg;
  cfg.starts = 32;
  MinimizeResult polished = minimize_nonconvex(objective, window, cfg);
  rep.stats.evaluations += polished.evaluations;
  if (polished.best_value < min_gap && polished.best_value > -1e99) {
    min_gap = polished.best_value;
    argmin = PairPoint::from_flat(polished.best_point);
  }

  rep.data["min_gap"] = min_gap;
  rep.data["b_equals_L_on_grid"] = (b_not_l == 0);
  rep.status = min_gap >= -tol ? CheckStatus::pass : CheckStatus::fail;
  if (rep.status == CheckStatus::fail) {
    if (argmin) {
      nlohmann::json w = pair_point_json(*argmin);
      w["type"] = "phi_below_duality";
      w["gap"] = min_gap;
      rep.witnesses.push_back(w);
    }
    if (bl_witness) {
      nlohmann::json w = pair_point_json(*bl_witness);
      w["type"] = "b_without_L";
      rep.witnesses.push_back(w);
    }
  }
  return rep;
}

bool ExtensionOracle::contains(const PairPoint& z) const {
  if (polar_) return polar_->contains(z);
  if (phi_) {
    double g = (*phi_)(z);
    return is_finite(g) && g <= duality(z) + 1e-12;
  }
  return membership(*spec_, z, 1e-9);
}

FiniteGraph ExtensionOracle::sample(const Box& window) const {
  if (window.dim() != 2 * dim_) throw input_error("ExtensionOracle::sample: window mismatch");
  FiniteGraph g;
  g.dim = dim_;
  for_each_node(window, [&](const Vector& v) {
    PairPoint z = PairPoint::from_flat(v);
    if (contains(z)) g.points.push_back(std::move(z));
  });
  return g;
}

ExtensionOracle unique_extension_oracle(const FiniteGraph& base, const Box& window,
                                        const MultistartConfig& cfg) {
  PolarDecision d = polar_monotone_decide(base, window, cfg);
  if (!d.monotone)
    throw refusal_error(
        "unique_extension_oracle: polar is not monotone (certificate exists); no unique "
        "extension");
  ExtensionOracle oracle;
  oracle.dim_ = base.dim;
  oracle.polar_ = std::make_shared<PolarOracle>(base);
  return oracle;
}

ExtensionOracle unique_extension_oracle(const OperatorSpec& spec, const Box& window,
                                        const MultistartConfig& cfg) {
  ExtensionOracle oracle;
  oracle.dim_ = spec.dim;
  if (spec.maximal) {
    // a maximal operator is its own polar
    oracle.spec_ = std::make_shared<OperatorSpec>(spec);
    return oracle;
  }
  if (auto phi = exact_phi(spec)) {
    CheckReport premax = phi_ge_pi_check(spec, window, 1e-8);
    if (premax.status != CheckStatus::pass)
      throw refusal_error("unique_extension_oracle: premax test failed for the operator");
    oracle.phi_ = phi;
    return oracle;
  }
  if (const auto* fg = std::get_if<FiniteGraphOp>(&spec.node))
    return unique_extension_oracle(fg->graph, window, cfg);
  throw refusal_error("unique_extension_oracle: no route to establish the precondition");
}

CheckReport cond_as_check(const OperatorSpec& spec, const Box& window, double tol,
                          double path_agree_tol) {
  CheckReport rep;
  rep.check = "cond-as";
  rep.op = spec.name.empty() ? spec.kind() : spec.name;
  rep.window = window;
  rep.tolerances["min_gap"] = tol;
  rep.tolerances["path_agreement"] = path_agree_tol;

  if (!spec.maximal) {
    rep.status = CheckStatus::refused;
    rep.data["reason"] = "spec is not tagged maximal monotone";
    return rep;
  }

  FiniteGraph g = sample_graph(spec, window);
  ConvexFuncRep via_conjugate = conjugate(ConvexFuncRep(s_of(g)));
  ConvexFuncRep via_inverse = ConvexFuncRep(phi_of(invert_graph(g)));

  // (S_T)* lives on the block-swapped space; evaluate on the swapped grid.
  Box dual_window = window.swapped_blocks();
  double max_path_dev = 0.0;
  double min_gap = kInf;
  std::optional<PairPoint> argmin;
  for_each_node(dual_window, [&](const Vector& v) {
    PairPoint w = PairPoint::from_flat(v);
    double a = eval(via_conjugate, w);
    double b = eval(via_inverse, w);
    rep.stats.evaluations += 2;
    max_path_dev = std::max(max_path_dev, std::abs(a - b));
    double gap = b - duality(w);
    if (gap < min_gap) {
      min_gap = gap;
      argmin = w;
    }
  });

  if (max_path_dev > path_agree_tol)
    throw internal_error("cond_as_check: conjugate-of-S and inverted-graph routes disagree");

  rep.data["max_path_deviation"] = max_path_dev;
  rep.data["min_gap"] = min_gap;
  rep.data["sample_points"] = g.points.size();
  rep.status = min_gap >= -tol ? CheckStatus::pass : CheckStatus::fail;
  if (rep.status == CheckStatus::fail && argmin) {
    nlohmann::json w = pair_point_json(*argmin);
    w["type"] = "conjugate_below_duality";
    w["gap"] = min_gap;
    rep.witnesses.push_back(w);
  }
  return rep;
}

}  // namespace monocalc
