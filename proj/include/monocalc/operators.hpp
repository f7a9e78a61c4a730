// Operator specifications on R^n x R^n: finite graphs, affine maps,
// polyhedral subdifferentials, window restrictions and inverses, together
// with graph sampling, membership and monotonicity primitives.
#pragma once

#include <memory>
#include <optional>
#include <variant>

#include "monocalc/core.hpp"
#include "monocalc/linalg.hpp"

#include "json.hpp"

namespace monocalc {

struct FiniteGraph {
  std::size_t dim = 0;
  std::vector<PairPoint> points;
};

struct OperatorSpec;
using OperatorPtr = std::shared_ptr<const OperatorSpec>;

struct FiniteGraphOp {
  FiniteGraph graph;
};

// x* = M x + b
struct AffineOp {
  Matrix M;
  Vector b;
};

// T = subdifferential of f(x) = max_i <c_i, x> + d_i
struct SubdiffPiece {
  Vector c;
  double d = 0.0;
};
struct SubdiffOp {
  std::vector<SubdiffPiece> pieces;
};

// Graph of `inner` intersected with a pair-space box.
struct RestrictedOp {
  OperatorPtr inner;
  Box window;
};

// Graph of `inner` with primal and dual blocks exchanged (T^-1).
struct InverseOp {
  OperatorPtr inner;
};

struct OperatorSpec {
  std::size_t dim = 0;  // ambient n; pair space has dimension 2n
  std::string name;
  std::variant<FiniteGraphOp, AffineOp, SubdiffOp, RestrictedOp, InverseOp> node;
  bool monotone = false;
  bool maximal = false;

  const char* kind() const;
};

// Factories classify monotone/maximal tags on construction.
OperatorSpec make_finite_graph(FiniteGraph g, std::string name = {});
OperatorSpec make_affine(Matrix M, Vector b, std::string name = {});
OperatorSpec make_subdiff(std::vector<SubdiffPiece> pieces, std::string name = {});
OperatorSpec make_restricted(OperatorSpec inner, Box window, std::string name = {});
OperatorSpec make_inverse(OperatorSpec inner, std::string name = {});

struct MonotoneSetResult {
  bool monotone = true;
  // One violating pair when not monotone, with its exact product.
  std::optional<std::pair<PairPoint, PairPoint>> witness;
  double product = 0.0;
};

// Brute-force all-pairs check; this loop is the definition, not an
// approximation of it.
MonotoneSetResult is_monotone_set(const FiniteGraph& g);

FiniteGraph invert_graph(const FiniteGraph& g);

// Deterministic grid sample of the operator's graph intersected with the
// pair-space window. Points come out lexicographically sorted and deduped.
// Throws input_error when the intersection is empty.
FiniteGraph sample_graph(const OperatorSpec& spec, const Box& window);

bool membership(const OperatorSpec& spec, const PairPoint& p, double tol);

// Value of the max-affine potential of a SubdiffOp.
double subdiff_value(const SubdiffOp& op, const Vector& x);

// Conjugate of the max-affine potential at y, solved as an exact LP over
// simplex combinations of the pieces; +inf outside conv{c_i}.
double subdiff_conjugate_value(const SubdiffOp& op, const Vector& y);

// Upper envelope of 1-D affine pieces: effective pieces sorted by slope and
// the breakpoints between consecutive ones. Used for exact kink enumeration.
struct Envelope1D {
  std::vector<SubdiffPiece> pieces;  // slope-ascending, non-dominated
  Vector breakpoints;                // size = pieces.size() - 1
};
Envelope1D upper_envelope_1d(const SubdiffOp& op);

// JSON wire formats.
nlohmann::json box_to_json(const Box& b);
Box box_from_json(const nlohmann::json& j);
nlohmann::json operator_to_json(const OperatorSpec& spec);
OperatorSpec operator_from_json(const nlohmann::json& j);

}  // namespace monocalc
