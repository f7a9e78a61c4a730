// Extended-real convex functions on R^d in three representations:
//
//   MaxAffine  f(z) = max_i <slope_i, z> + offset_i
//   HullFunc   f(z) = min { sum l_i v_i : sum l_i g_i = z, l in simplex }
//   GridFunc   values tabulated on a box, nearest-node evaluation
//
// Conjugation maps the first two onto each other exactly (polyhedral
// Legendre transform); grids conjugate by exhaustive discrete search.
// On pair spaces (d = 2n) the slope/point blocks are (x-block, xs-block).
#pragma once

#include <variant>

#include "monocalc/core.hpp"
#include "monocalc/operators.hpp"

namespace monocalc {

struct AffineTerm {
  Vector slope;
  double offset = 0.0;
};

struct MaxAffine {
  std::vector<AffineTerm> terms;

  std::size_t dim() const { return terms.empty() ? 0 : terms.front().slope.size(); }
};

struct HullGenerator {
  Vector point;
  double value = 0.0;
};

struct HullFunc {
  std::vector<HullGenerator> generators;

  std::size_t dim() const { return generators.empty() ? 0 : generators.front().point.size(); }
};

struct GridFunc {
  Box box;
  Vector values;  // node-major (lexicographic index order); +inf allowed, NaN not
};

using ConvexFuncRep = std::variant<MaxAffine, HullFunc, GridFunc>;

std::size_t func_dim(const ConvexFuncRep& f);

// Extended-real value at z. HullFunc evaluation solves the exact LP and
// returns +inf when z lies outside the generator hull.
double eval(const ConvexFuncRep& f, const Vector& z);

// Nearest-node lookup behind GridFunc evaluation, with the node it used.
struct GridSample {
  Vector node;
  double value = 0.0;
};
GridSample grid_nearest(const GridFunc& f, const Vector& z);

inline double eval(const ConvexFuncRep& f, const PairPoint& z) { return eval(f, z.flat()); }

ConvexFuncRep conjugate(const ConvexFuncRep& f);

// cl conv of the function equal to v_i at z_i and +inf elsewhere.
HullFunc clconv_from_points(const std::vector<std::pair<PairPoint, double>>& data);

// g with g(x, xs) = f*(xs, x): conjugate followed by a block swap.
ConvexFuncRep j_transform(const ConvexFuncRep& f);

// Validation helpers used by constructors and JSON loading.
void validate(const MaxAffine& f);
void validate(const HullFunc& f);
void validate(const GridFunc& f);

nlohmann::json func_to_json(const ConvexFuncRep& f);

}  // namespace monocalc
