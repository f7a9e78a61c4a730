// Monotone polar membership (dual-path checked), the polar-monotonicity
// decision with certificate search, the phi >= duality pre-maximality test
// and the (S_T)* >= duality condition check.
#pragma once

#include "monocalc/fitz.hpp"
#include "monocalc/multistart.hpp"

namespace monocalc {

// Witness that the polar of a monotone set is not monotone: two polar points
// with strictly negative mutual monotonicity product.
struct PolarCertificate {
  PairPoint p;
  PairPoint q;
  double product = 0.0;       // < 0, recomputed exactly from the points
  double polar_margin_p = 0;  // phi_A - duality at p (<= 0)
  double polar_margin_q = 0;  // phi_A - duality at q (<= 0)
};

// Pre-built polar membership oracle for a fixed base set; runs the direct
// minimum-product test and the Fitzpatrick-function test on every query and
// traps any disagreement beyond 1e-9.
class PolarOracle {
 public:
  explicit PolarOracle(FiniteGraph base);

  // min over base points of <z - a> monotonicity products (exact).
  double margin(const PairPoint& z) const;
  bool contains(const PairPoint& z) const;
  double phi_minus_duality(const PairPoint& z) const;

  const FiniteGraph& base() const { return base_; }
  std::int64_t queries() const { return queries_; }

 private:
  FiniteGraph base_;
  MaxAffine phi_;
  mutable std::int64_t queries_ = 0;
};

bool polar_contains(const FiniteGraph& base, const PairPoint& z);

struct PolarDecision {
  bool monotone = true;  // bounded-search verdict, not a proof
  std::optional<PolarCertificate> certificate;
  std::int64_t grid_nodes = 0;
  std::int64_t polar_members = 0;
  std::int64_t pairs_checked = 0;
  std::int64_t search_evaluations = 0;
  double best_product_found = kInf;
};

// Searches window x window for a certificate: exhaustive grid scan first,
// then seeded multistart descent on a penalty formulation. Any certificate
// returned has been re-verified exactly.
PolarDecision polar_monotone_decide(const FiniteGraph& base, const Box& window,
                                    const MultistartConfig& cfg);

CheckReport polar_decide_report(const FiniteGraph& base, const Box& window,
                                const MultistartConfig& cfg, std::string op_name);

// Minimizes phi - duality over the window for specs with an exact
// Fitzpatrick path; pass iff the minimum stays above -tol, re-verifying
// b(phi) = L(phi) on the grid. Throws input_error without an exact path.
CheckReport phi_ge_pi_check(const OperatorSpec& spec, const Box& window, double tol);

// Membership oracle of the unique maximal monotone extension, available only
// once polar monotonicity (bounded) or the premax test has been established.
class ExtensionOracle {
 public:
  bool contains(const PairPoint& z) const;
  // Grid points of the window accepted by the oracle.
  FiniteGraph sample(const Box& window) const;
  std::size_t dim() const { return dim_; }

  friend ExtensionOracle unique_extension_oracle(const FiniteGraph& base, const Box& window,
                                                 const MultistartConfig& cfg);
  friend ExtensionOracle unique_extension_oracle(const OperatorSpec& spec, const Box& window,
                                                 const MultistartConfig& cfg);

 private:
  std::size_t dim_ = 0;
  std::shared_ptr<PolarOracle> polar_;       // finite-graph route
  std::shared_ptr<OperatorSpec> spec_;       // maximal-spec route
  std::optional<PhiFn> phi_;                 // exact-phi route
};

ExtensionOracle unique_extension_oracle(const FiniteGraph& base, const Box& window,
                                        const MultistartConfig& cfg);
ExtensionOracle unique_extension_oracle(const OperatorSpec& spec, const Box& window,
                                        const MultistartConfig& cfg);

// (S_T)* computed as conjugate(S of sampled graph) and as phi of the
// inverted graph; the two must agree pointwise, and the minimum of
// (S_T)*(w) - <w> over the block-swapped window grid must be >= -tol.
CheckReport cond_as_check(const OperatorSpec& spec, const Box& window, double tol,
                          double path_agree_tol = 1e-8);

}  // namespace monocalc
