#include "monocalc/zoo.hpp"

#include <cmath>
#include <fstream>

#include "monocalc/rng.hpp"

namespace monocalc {

OperatorSpec build_operator(const nlohmann::json& spec_json) {
  return operator_from_json(spec_json);
}

ConvexityResult convexity_check(const OperatorSpec& spec, const Box& window, int trials,
                                std::uint64_t seed) {
  if (trials < 1) throw input_error("convexity_check: trials must be >= 1");
  constexpr double kTol = 1e-9;
  FiniteGraph g = sample_graph(spec, window);

  ConvexityResult out;
  Xorshift64Star rng(seed);
  for (int t = 0; t < trials; ++t) {
    ++out.trials_run;
    std::size_t i = std::size_t(rng.next_u64() % g.points.size());
    std::size_t j = std::size_t(rng.next_u64() % g.points.size());
    if (i == j) continue;
    const PairPoint& a = g.points[i];
    const PairPoint& b = g.points[j];
    PairPoint mid(scale(0.5, add(a.x, b.x)), scale(0.5, add(a.xs, b.xs)));
    if (membership(spec, mid, kTol)) continue;
    // re-verify the certificate before reporting it
    if (!membership(spec, a, kTol) || !membership(spec, b, kTol))
      throw internal_error("convexity_check: sampled endpoint fails membership");
    out.pass = false;
    out.certificate = MidpointCertificate{a, b, mid};
    return out;
  }
  return out;
}

AffineFitResult affine_fit(const FiniteGraph& g, double tol) {
  if (g.points.empty()) throw input_error("affine_fit: empty graph");
  std::vector<Vector> flats;
  flats.reserve(g.points.size());
  for (const auto& p : g.points) flats.push_back(p.flat());
  AffineFit fit = fit_affine_subspace(flats, g.dim, tol);
  return {std::move(fit.offset), std::move(fit.basis), fit.residual};
}

CheckReport maximality_check(const OperatorSpec& spec, const Box& window, double tol) {
  if (!spec.monotone) throw input_error("maximality_check: spec must be monotone");
  CheckReport rep;
  rep.check = "maximality";
  rep.op = spec.name.empty() ? spec.kind() : spec.name;
  rep.window = window;
  rep.tolerances["membership"] = tol;

  for_each_node(window, [&](const Vector& v) {
    PairPoint z = PairPoint::from_flat(v);
    ++rep.stats.evaluations;
    if (!te_contains(spec, 0.0, z, window)) return;
    if (membership(spec, z, tol)) return;
    rep.status = CheckStatus::fail;
    if (rep.witnesses.size() < 8) {
      nlohmann::json w = pair_point_json(z);
      w["type"] = "extension_point";
      rep.witnesses.push_back(w);
    }
  });
  return rep;
}

std::vector<CorpusEntry> load_corpus(const nlohmann::json& manifest) {
  if (!manifest.is_array()) throw input_error("corpus manifest must be a JSON array");
  std::vector<CorpusEntry> entries;
  for (const auto& item : manifest) {
    // "window" belongs to restricted specs; the sampling box rides along as
    // "eval_window"
    CorpusEntry e{operator_from_json(item), item.contains("eval_window")
                                                ? box_from_json(item.at("eval_window"))
                                                : Box({-2, -2}, {2, 2}, {21, 21})};
    if (e.window.dim() != 2 * e.op.dim)
      throw input_error("corpus entry window dimension mismatch: " + e.op.name);
    entries.push_back(std::move(e));
  }
  return entries;
}

std::vector<CorpusEntry> load_corpus_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open corpus file: " + path);
  nlohmann::json j;
  in >> j;
  return load_corpus(j);
}

CheckReport lemma_bas_suite(const std::vector<CorpusEntry>& corpus, double tol,
                            std::uint64_t seed) {
  CheckReport rep;
  rep.check = "lemma-bas";
  rep.op = "corpus";
  rep.tolerances["affine_residual"] = tol;
  rep.seed = seed;

  auto entries = nlohmann::json::array();
  for (const auto& entry : corpus) {
    nlohmann::json e;
    e["operator"] = entry.op.name.empty() ? entry.op.kind() : entry.op.name;

    CheckReport maxrep = maximality_check(entry.op, entry.window, 1e-8);
    ConvexityResult conv = convexity_check(entry.op, entry.window, 200, seed);
    rep.stats.evaluations += maxrep.stats.evaluations + conv.trials_run;
    e["maximality"] = to_string(maxrep.status);
    e["convexity"] = conv.pass ? "pass" : "fail";

    if (!conv.pass) {
      // the lemma's hypothesis fails; record the certificate, assert nothing
      const auto& c = *conv.certificate;
      e["midpoint_certificate"] = {{"a", pair_point_json(c.a)},
                                   {"b", pair_point_json(c.b)},
                                   {"midpoint", pair_point_json(c.midpoint)}};
    } else if (maxrep.ok()) {
      AffineFitResult fit = affine_fit(sample_graph(entry.op, entry.window), tol);
      e["affine_residual"] = fit.residual;
      if (fit.residual > tol) {
        rep.status = CheckStatus::fail;  // maximal + convex graph must be affine
        nlohmann::json w;
        w["type"] = "lemma_violation";
        w["operator"] = e["operator"];
        w["residual"] = fit.residual;
        rep.witnesses.push_back(w);
      }
    }
    entries.push_back(std::move(e));
  }
  rep.data["entries"] = entries;
  return rep;
}

}  // namespace monocalc
