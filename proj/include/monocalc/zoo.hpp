// Example-operator corpus plumbing and the structural checks (graph
// convexity, affine detection, maximality) behind the convex-implies-affine
// verification suite.
#pragma once

#include "monocalc/enlarge.hpp"
#include "monocalc/report.hpp"

namespace monocalc {

// JSON -> tagged OperatorSpec (schema errors throw input_error).
OperatorSpec build_operator(const nlohmann::json& spec_json);

struct MidpointCertificate {
  PairPoint a;
  PairPoint b;
  PairPoint midpoint;
};

struct ConvexityResult {
  bool pass = true;
  std::optional<MidpointCertificate> certificate;
  int trials_run = 0;
};

// Seeded sampling of graph-point pairs; each certificate is re-verified by
// membership before being reported.
ConvexityResult convexity_check(const OperatorSpec& spec, const Box& window, int trials,
                                std::uint64_t seed);

struct AffineFitResult {
  Vector offset;
  std::vector<Vector> basis;
  double residual = 0.0;
};

// Best affine subspace of dimension <= n through the graph points (a maximal
// monotone affine graph in R^n x R^n has dimension exactly n). residual <=
// tol iff the graph lies on such a subspace.
AffineFitResult affine_fit(const FiniteGraph& g, double tol);

// Grid check that every point of T^0 already belongs to the graph; failures
// are extension witnesses.
CheckReport maximality_check(const OperatorSpec& spec, const Box& window, double tol);

struct CorpusEntry {
  OperatorSpec op;
  Box window;
};

std::vector<CorpusEntry> load_corpus(const nlohmann::json& manifest);
std::vector<CorpusEntry> load_corpus_file(const std::string& path);

// For every corpus operator passing both maximality_check and
// convexity_check, asserts the affine-fit residual stays below tol;
// convexity failures are recorded with their certificates instead.
CheckReport lemma_bas_suite(const std::vector<CorpusEntry>& corpus, double tol,
                            std::uint64_t seed);

}  // namespace monocalc
