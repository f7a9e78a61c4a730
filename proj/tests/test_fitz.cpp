#include <cmath>

#include "doctest.h"
#include "monocalc/fitz.hpp"
#include "test_util.hpp"

using namespace monocalc;
using tu::pp1;

namespace {

// independent loop: sup over graph points of <x,y*> + <y,x*> - <y,y*>
double phi_brute(const FiniteGraph& g, const PairPoint& z) {
  double best = -kInf;
  for (const auto& p : g.points)
    best = std::max(best, dot(z.x, p.xs) + dot(p.x, z.xs) - duality(p));
  return best;
}

std::vector<PairPoint> grid1(double lo, double hi, int res) {
  return grid_pair_points(tu::win1(lo, hi, res));
}

}  // namespace

TEST_CASE("phi of the two-point graph") {
  MaxAffine phi = phi_of(tu::two_point_graph());
  ConvexFuncRep f(phi);
  // phi(x, x*) = max{0, x + x* - 1}
  CHECK(eval(f, pp1(1, 0)) == doctest::Approx(0.0));
  CHECK(eval(f, pp1(2, 2)) == doctest::Approx(3.0));
  CHECK(eval(f, pp1(-1, 2)) == doctest::Approx(0.0));
}

TEST_CASE("phi of a singleton zero graph is identically zero") {
  FiniteGraph g;
  g.dim = 1;
  g.points = {pp1(0, 0)};
  ConvexFuncRep f(phi_of(g));
  for (const auto& z : grid1(-2, 2, 5)) CHECK(eval(f, z) == 0.0);
}

TEST_CASE("phi equals the brute-force maximum to machine precision") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    FiniteGraph g = tu::random_graph(seed % 2 ? 1 : 2, 3 + seed % 15, seed * 77 + 5);
    ConvexFuncRep f(phi_of(g));
    Xorshift64Star rng(seed);
    for (int k = 0; k < 50; ++k) {
      Vector x(g.dim), xs(g.dim);
      for (auto& v : x) v = rng.uniform(-3, 3);
      for (auto& v : xs) v = rng.uniform(-3, 3);
      PairPoint z(x, xs);
      CHECK(eval(f, z) == doctest::Approx(phi_brute(g, z)).epsilon(1e-14));
    }
  }
}

TEST_CASE("phi of a dense identity sample approaches (x + x*)^2 / 4") {
  FiniteGraph g;
  g.dim = 1;
  const int res = 6001;
  for (int i = 0; i < res; ++i) {
    double t = -3.0 + 6.0 * i / double(res - 1);
    g.points.push_back(pp1(t, t));
  }
  ConvexFuncRep f(phi_of(g));
  CHECK(eval(f, pp1(1, 1)) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(eval(f, pp1(0.3, -0.7)) == doctest::Approx(0.04).epsilon(1e-4));
}

TEST_CASE("s function of the two-point graph") {
  ConvexFuncRep s(s_of(tu::two_point_graph()));
  CHECK(eval(s, pp1(0.5, 0.5)) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(eval(s, pp1(0, 0)) == doctest::Approx(0.0));
  CHECK(eval(s, pp1(2, 2)) == kInf);
}

TEST_CASE("s equals duality exactly on generators of monotone graphs") {
  auto g = sample_graph(tu::abs_op(), tu::win1(-2, 2, 9));
  ConvexFuncRep s(s_of(g));
  for (const auto& a : g.points)
    CHECK(eval(s, a) == doctest::Approx(duality(a)).epsilon(1e-10));
}

TEST_CASE("s stays above duality everywhere for monotone graphs") {
  for (std::uint64_t seed = 2; seed <= 40; ++seed) {
    FiniteGraph g = tu::random_graph(1, 6, seed);
    if (!is_monotone_set(g).monotone) continue;
    ConvexFuncRep s(s_of(g));
    for (const auto& z : grid1(-2, 2, 7)) {
      double v = eval(s, z);
      if (is_finite(v)) CHECK(v >= duality(z) - 1e-9);
    }
  }
}

TEST_CASE("bs identity: phi = J(S) on two-point, singleton, and sampled graphs") {
  auto pts = grid1(-2, 2, 10);

  CheckReport two = bs_identity_check(tu::two_point_graph(), pts, 1e-8);
  CHECK(two.status == CheckStatus::pass);

  FiniteGraph single;
  single.dim = 1;
  single.points = {pp1(0.7, -0.4)};
  CHECK(bs_identity_check(single, pts, 1e-8).status == CheckStatus::pass);

  auto abs_g = sample_graph(tu::abs_op(), tu::win1(-2, 2, 17));
  CHECK(bs_identity_check(abs_g, pts, 1e-8).status == CheckStatus::pass);
}

TEST_CASE("bs identity against an independent double-conjugation oracle") {
  // J(S_g)(x,x*) = max over graph of <x*,y> + <x,y*> ... computed by a raw
  // loop on the defining formula, no representation machinery
  FiniteGraph g = tu::random_graph(2, 9, 1234);
  ConvexFuncRep js = j_transform(ConvexFuncRep(s_of(g)));
  Xorshift64Star rng(8);
  for (int k = 0; k < 40; ++k) {
    PairPoint z({rng.uniform(-2, 2), rng.uniform(-2, 2)}, {rng.uniform(-2, 2), rng.uniform(-2, 2)});
    double oracle = -kInf;
    for (const auto& p : g.points)
      oracle = std::max(oracle, dot(z.xs, p.x) + dot(z.x, p.xs) - duality(p));
    CHECK(eval(js, z) == doctest::Approx(oracle).epsilon(1e-12));
  }
}

TEST_CASE("b and L membership around the two-point Fitzpatrick function") {
  ConvexFuncRep phi(phi_of(tu::two_point_graph()));
  CHECK(b_contains(phi, pp1(1, 0), 1e-9));
  CHECK(l_contains(phi, pp1(1, 0), 1e-9));  // 0 = 0
  CHECK(b_contains(phi, pp1(2, 2), 1e-9));  // 3 <= 4
  CHECK_FALSE(l_contains(phi, pp1(2, 2), 1e-9));
  CHECK_FALSE(b_contains(phi, pp1(-1, 2), 1e-9));  // 0 > -2
}

TEST_CASE("in_family: phi of the sampled identity belongs to its family") {
  OperatorSpec id = tu::identity_op();
  Box w = tu::win1(-2, 2, 21);
  ConvexFuncRep phi(phi_of(sample_graph(id, w)));
  FamilyReport rep = in_family_check(phi, id, w, 1e-6);
  CHECK(rep.pass);
  CHECK(rep.lower_gap >= -1e-6);
  CHECK(rep.graph_gap <= 1e-6);
}

TEST_CASE("in_family: the zero function is rejected for the identity") {
  MaxAffine zero;
  zero.terms = {{{0, 0}, 0.0}};
  FamilyReport rep =
      in_family_check(ConvexFuncRep(zero), tu::identity_op(), tu::win1(-2, 2, 21), 1e-6);
  CHECK_FALSE(rep.pass);
  CHECK(rep.lower_gap < -0.5);  // 0 - x x* at (2,2) is -4
  REQUIRE(!rep.witnesses.empty());
  CHECK(duality(rep.witnesses.front()) > 0.0);
}

TEST_CASE("in_family: S of the sampled abs subdifferential passes") {
  OperatorSpec abs = tu::abs_op();
  Box w = tu::win1(-2, 2, 21);
  ConvexFuncRep s(s_of(sample_graph(abs, w)));
  FamilyReport rep = in_family_check(s, abs, w, 1e-6);
  CHECK(rep.pass);
}

TEST_CASE("family order: phi <= member <= S with the pointwise midpoint") {
  auto g = sample_graph(tu::abs_op(), tu::win1(-2, 2, 9));
  auto pts = grid1(-1.5, 1.5, 7);

  ConvexFuncRep phi(phi_of(g));
  ConvexFuncRep s(s_of(g));

  // midpoint (phi + S)/2 tabulated on the grid
  Box w = tu::win1(-1.5, 1.5, 7);
  GridFunc mid;
  mid.box = w;
  for_each_node(w, [&](const Vector& v) {
    double a = eval(phi, v);
    double b = eval(s, v);
    mid.values.push_back(is_finite(b) ? 0.5 * (a + b) : kInf);
  });

  CheckReport rep = family_order_check(g, {phi, s, ConvexFuncRep(mid)}, pts, 1e-9);
  CHECK(rep.status == CheckStatus::pass);

  MaxAffine zero;
  zero.terms = {{{0, 0}, 0.0}};
  CheckReport bad = family_order_check(g, {ConvexFuncRep(zero)}, pts, 1e-9);
  CHECK(bad.status == CheckStatus::fail);
  CHECK(!bad.witnesses.empty());
}

TEST_CASE("sandwich phi <= S on grids for monotone graphs") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    FiniteGraph g = tu::random_graph(1, 5, seed * 3);
    if (!is_monotone_set(g).monotone) continue;
    ConvexFuncRep phi(phi_of(g));
    ConvexFuncRep s(s_of(g));
    for (const auto& z : grid1(-2, 2, 7)) {
      double lo = eval(phi, z);
      double hi = eval(s, z);
      if (is_finite(hi)) CHECK(lo <= hi + 1e-9);
    }
  }
}

TEST_CASE("exact phi for affine specs matches the closed form") {
  auto phi = exact_phi(tu::identity_op());
  REQUIRE(phi.has_value());
  Xorshift64Star rng(4);
  for (int k = 0; k < 40; ++k) {
    double x = rng.uniform(-3, 3), xs = rng.uniform(-3, 3);
    CHECK((*phi)(pp1(x, xs)) == doctest::Approx((x + xs) * (x + xs) / 4.0).epsilon(1e-12));
  }

  // skew rotation: symmetric part is zero; finite exactly on the graph
  OperatorSpec rot90 = tu::rotation_op(M_PI / 2, "rot90");
  auto phi2 = exact_phi(rot90);
  REQUIRE(phi2.has_value());
  PairPoint on({1.0, 2.0}, {-2.0, 1.0});  // (x, Mx)
  CHECK((*phi2)(on) == doctest::Approx(duality(on)).epsilon(1e-12));
  CHECK((*phi2)(PairPoint({1.0, 2.0}, {0.0, 0.0})) == kInf);
}

TEST_CASE("exact phi for the abs subdifferential is |x| on the slope band") {
  auto phi = exact_phi(tu::abs_op());
  REQUIRE(phi.has_value());
  Xorshift64Star rng(6);
  for (int k = 0; k < 50; ++k) {
    double x = rng.uniform(-3, 3), xs = rng.uniform(-1, 1);
    CHECK((*phi)(pp1(x, xs)) == doctest::Approx(std::abs(x)).epsilon(1e-12));
  }
  CHECK((*phi)(pp1(0.5, 1.5)) == kInf);
  CHECK((*phi)(pp1(0.5, -1.0001)) == kInf);
}

TEST_CASE("exact phi for a dense sample agrees with the affine closed form") {
  // cross-validates the finite-graph route against the affine route
  OperatorSpec id = tu::identity_op();
  FiniteGraph g = sample_graph(id, tu::win1(-4, 4, 1601));
  auto phi_graph = exact_phi(make_finite_graph(g));
  auto phi_formula = exact_phi(id);
  REQUIRE(phi_graph.has_value());
  REQUIRE(phi_formula.has_value());
  for (const auto& z : grid1(-1.5, 1.5, 7))
    CHECK((*phi_graph)(z) == doctest::Approx((*phi_formula)(z)).epsilon(1e-4));
}

TEST_CASE("exact phi of the half-line identity (restricted affine)") {
  OperatorSpec half =
      make_restricted(tu::identity_op(), Box({0, -10}, {3, 10}, {31, 2}), "half_line");
  auto phi = exact_phi(half);
  REQUIRE(phi.has_value());
  // sup over t in [0,3] of t(x + x*) - t^2
  auto closed = [](double x, double xs) {
    double t = std::clamp((x + xs) / 2.0, 0.0, 3.0);
    return t * (x + xs) - t * t;
  };
  Xorshift64Star rng(12);
  for (int k = 0; k < 50; ++k) {
    double x = rng.uniform(-4, 4), xs = rng.uniform(-4, 4);
    CHECK((*phi)(pp1(x, xs)) == doctest::Approx(closed(x, xs)).epsilon(1e-12));
  }
  // oracle-confirmed classification point: phi(-1,-1) = 0 < 1 = duality
  CHECK((*phi)(pp1(-1, -1)) == doctest::Approx(0.0));
}

TEST_CASE("exact phi of the inverse operator swaps arguments") {
  OperatorSpec ncone = make_inverse(tu::relu_op(), "normal_cone_01");
  auto phi = exact_phi(ncone);
  REQUIRE(phi.has_value());
  auto phi_relu = exact_phi(tu::relu_op());
  Xorshift64Star rng(14);
  for (int k = 0; k < 30; ++k) {
    double x = rng.uniform(-2, 2), xs = rng.uniform(-2, 2);
    CHECK((*phi)(pp1(x, xs)) == (*phi_relu)(pp1(xs, x)));
  }
}

TEST_CASE("no exact phi path for 2-D subdifferentials") {
  OperatorSpec f = make_subdiff({{{1, 0}, 0.0}, {{0, 1}, 0.0}}, "max_xy");
  CHECK_FALSE(exact_phi(f).has_value());
}
