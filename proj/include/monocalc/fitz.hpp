// Fitzpatrick function and S-function of finite graphs, exact Fitzpatrick
// evaluation for closed-form operator specs, family membership and the
// conjugation identity between the two functions.
#pragma once

#include <functional>

#include "monocalc/convexfn.hpp"
#include "monocalc/report.hpp"

namespace monocalc {

// phi_g(x, x*) = max over graph points (y, y*) of <x,y*> + <y,x*> - <y,y*>.
MaxAffine phi_of(const FiniteGraph& g);

// S_g = cl conv(duality + indicator of g): generators ((y,y*), <y,y*>).
HullFunc s_of(const FiniteGraph& g);

// Exact Fitzpatrick value of the full (non-sampled) operator, available for:
// affine maps (any n), 1-D polyhedral subdifferentials (kink enumeration),
// 1-D window-restricted affine maps, finite graphs, and inverses of these.
// Empty when the operator has no exact path.
using PhiFn = std::function<double(const PairPoint&)>;
std::optional<PhiFn> exact_phi(const OperatorSpec& spec);

// b(h) membership: h(z) <= <z.x, z.xs> + tol.
bool b_contains(const ConvexFuncRep& h, const PairPoint& z, double tol);
// L(h) membership: |h(z) - <z.x, z.xs>| <= tol.
bool l_contains(const ConvexFuncRep& h, const PairPoint& z, double tol);

struct FamilyReport {
  double lower_gap = kInf;   // min over the window grid of h - duality
  double graph_gap = 0.0;    // max over the sampled graph of |h - duality|
  bool pass = false;
  std::vector<PairPoint> witnesses;
  std::int64_t evaluations = 0;
};

// Checks h >= duality on the window grid and h = duality on the sampled
// graph of the operator.
FamilyReport in_family_check(const ConvexFuncRep& h, const OperatorSpec& spec, const Box& window,
                             double tol);

// | phi_g - J(S_g) | <= tol at every test point (the two sides reach the
// same polyhedral function through independent code paths).
CheckReport bs_identity_check(const FiniteGraph& g, const std::vector<PairPoint>& testpoints,
                              double tol);

// phi_g - tol <= h <= S_g + tol at every finite test point, for each h.
CheckReport family_order_check(const FiniteGraph& g, const std::vector<ConvexFuncRep>& hs,
                               const std::vector<PairPoint>& testpoints, double tol);

// Pair points of all window grid nodes, in lexicographic node order.
std::vector<PairPoint> grid_pair_points(const Box& window);

}  // namespace monocalc
