#include "monocalc/convexfn.hpp"

#include <algorithm>
#include <cmath>

#include "monocalc/lp.hpp"

namespace monocalc {

namespace {

Vector swap_blocks(const Vector& z) {
  if (z.size() % 2 != 0) throw input_error("swap_blocks: odd dimension");
  std::size_t n = z.size() / 2;
  Vector w(z.size());
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = z[n + i];
    w[n + i] = z[i];
  }
  return w;
}

std::int64_t grid_index(const Box& box, const std::vector<int>& idx) {
  std::int64_t lin = 0;
  std::int64_t stride = 1;
  for (std::size_t a = 0; a < box.dim(); ++a) {
    lin += stride * idx[a];
    stride *= box.resolution[a];
  }
  return lin;
}


GridFunc conjugate_grid(const GridFunc& f) {
  const std::size_t d = f.box.dim();

  // Dual window per axis: the range of finite-difference slopes of f along
  // that axis, over nodes where both values are finite.
  Vector dlo(d, kInf), dhi(d, -kInf);
  std::vector<int> idx(d, 0);
  const std::int64_t total = f.box.node_count();
  for (std::int64_t lin = 0; lin < total; ++lin) {
    // decode lin -> idx
    std::int64_t rest = lin;
    for (std::size_t a = 0; a < d; ++a) {
      idx[a] = int(rest % f.box.resolution[a]);
      rest /= f.box.resolution[a];
    }
    double v0 = f.values[std::size_t(lin)];
    if (!is_finite(v0)) continue;
    for (std::size_t a = 0; a < d; ++a) {
      if (idx[a] + 1 >= f.box.resolution[a]) continue;
      std::vector<int> jdx = idx;
      ++jdx[a];
      double v1 = f.values[std::size_t(grid_index(f.box, jdx))];
      if (!is_finite(v1)) continue;
      double s = (v1 - v0) / f.box.step(a);
      dlo[a] = std::min(dlo[a], s);
      dhi[a] = std::max(dhi[a], s);
    }
  }
  for (std::size_t a = 0; a < d; ++a) {
    if (!(dlo[a] < dhi[a])) {  // flat or all-infinite axis; give it a unit window
      dlo[a] = (is_finite(dlo[a]) ? dlo[a] : 0.0) - 0.5;
      dhi[a] = dlo[a] + 1.0;
    }
  }

  GridFunc g;
  g.box = Box(dlo, dhi, f.box.resolution);
  g.values.assign(std::size_t(g.box.node_count()), -kInf);

  // Exhaustive discrete Legendre transform: g(w) = max_z <w,z> - f(z).
  std::vector<Vector> primal_nodes;
  Vector primal_vals;
  {
    std::vector<int> pidx(d, 0);
    Vector z(d);
    for (std::int64_t lin = 0; lin < total; ++lin) {
      std::int64_t rest = lin;
      for (std::size_t a = 0; a < d; ++a) {
        pidx[a] = int(rest % f.box.resolution[a]);
        rest /= f.box.resolution[a];
      }
      double v = f.values[std::size_t(lin)];
      if (!is_finite(v)) continue;
      for (std::size_t a = 0; a < d; ++a) z[a] = f.box.coord(a, pidx[a]);
      primal_nodes.push_back(z);
      primal_vals.push_back(v);
    }
  }
  if (primal_nodes.empty()) throw input_error("GridFunc conjugate: no finite values");

  std::size_t w_lin = 0;
  for_each_node(g.box, [&](const Vector& w) {
    double best = -kInf;
    for (std::size_t k = 0; k < primal_nodes.size(); ++k) {
      double cand = dot(w, primal_nodes[k]) - primal_vals[k];
      if (cand > best) best = cand;
    }
    g.values[w_lin++] = best;
  });
  return g;
}

GridFunc swap_grid_blocks(const GridFunc& f) {
  GridFunc g;
  g.box = f.box.swapped_blocks();
  g.values.assign(f.values.size(), 0.0);
  const std::size_t d = f.box.dim();
  const std::size_t n = d / 2;
  std::vector<int> idx(d, 0);
  const std::int64_t total = f.box.node_count();
  for (std::int64_t lin = 0; lin < total; ++lin) {
    std::int64_t rest = lin;
    for (std::size_t a = 0; a < d; ++a) {
      idx[a] = int(rest % f.box.resolution[a]);
      rest /= f.box.resolution[a];
    }
    std::vector<int> jdx(d);
    for (std::size_t i = 0; i < n; ++i) {
      jdx[i] = idx[n + i];
      jdx[n + i] = idx[i];
    }
    g.values[std::size_t(grid_index(g.box, jdx))] = f.values[std::size_t(lin)];
  }
  return g;
}

}  // namespace

GridSample grid_nearest(const GridFunc& f, const Vector& z) {
  if (z.size() != f.box.dim()) throw input_error("GridFunc eval: dimension mismatch");
  std::vector<int> idx(f.box.dim());
  GridSample out;
  out.node.resize(f.box.dim());
  for (std::size_t a = 0; a < f.box.dim(); ++a) {
    double t = (z[a] - f.box.lower[a]) / f.box.step(a);
    idx[a] = std::clamp(int(std::lround(t)), 0, f.box.resolution[a] - 1);
    out.node[a] = f.box.coord(a, idx[a]);
  }
  out.value = f.values[std::size_t(grid_index(f.box, idx))];
  return out;
}

void validate(const MaxAffine& f) {
  if (f.terms.empty()) throw input_error("MaxAffine: needs at least one term");
  for (const auto& t : f.terms) {
    check_finite(t.slope, "MaxAffine.slope");
    if (!is_finite(t.offset)) throw input_error("MaxAffine: non-finite offset");
    if (t.slope.size() != f.terms.front().slope.size())
      throw input_error("MaxAffine: term dimension mismatch");
  }
}

void validate(const HullFunc& f) {
  if (f.generators.empty()) throw input_error("HullFunc: needs at least one generator");
  for (const auto& g : f.generators) {
    check_finite(g.point, "HullFunc.point");
    if (!is_finite(g.value)) throw input_error("HullFunc: non-finite value");
    if (g.point.size() != f.generators.front().point.size())
      throw input_error("HullFunc: generator dimension mismatch");
  }
}

void validate(const GridFunc& f) {
  f.box.validate();
  if (std::int64_t(f.values.size()) != f.box.node_count())
    throw input_error("GridFunc: value count mismatch");
  for (double v : f.values)
    if (std::isnan(v)) throw input_error("GridFunc: NaN value");
}

std::size_t func_dim(const ConvexFuncRep& f) {
  return std::visit(
      [](const auto& r) -> std::size_t {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, GridFunc>)
          return r.box.dim();
        else
          return r.dim();
      },
      f);
}

double eval(const ConvexFuncRep& f, const Vector& z) {
  return std::visit(
      [&](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, MaxAffine>) {
          if (z.size() != r.dim()) throw input_error("eval: dimension mismatch");
          double best = -kInf;
          for (const auto& t : r.terms) best = std::max(best, dot(t.slope, z) + t.offset);
          return best;
        } else if constexpr (std::is_same_v<T, HullFunc>) {
          if (z.size() != r.dim()) throw input_error("eval: dimension mismatch");
          const std::size_t d = z.size();
          const std::size_t m = r.generators.size();
          LPProblem lp;
          lp.objective.resize(m);
          lp.eq = Matrix(d + 1, m);
          lp.rhs = z;
          lp.rhs.push_back(1.0);
          for (std::size_t j = 0; j < m; ++j) {
            lp.objective[j] = r.generators[j].value;
            for (std::size_t i = 0; i < d; ++i) lp.eq(i, j) = r.generators[j].point[i];
            lp.eq(d, j) = 1.0;
          }
          LPResult res = solve_lp(lp);
          if (res.status == LPStatus::infeasible) return kInf;  // outside the hull
          if (res.status != LPStatus::optimal) throw solver_error("HullFunc eval: simplex failed");
          return res.value;
        } else {
          return grid_nearest(r, z).value;
        }
      },
      f);
}

ConvexFuncRep conjugate(const ConvexFuncRep& f) {
  return std::visit(
      [&](const auto& r) -> ConvexFuncRep {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, MaxAffine>) {
          validate(r);
          HullFunc h;
          h.generators.reserve(r.terms.size());
          for (const auto& t : r.terms) h.generators.push_back({t.slope, -t.offset});
          return h;
        } else if constexpr (std::is_same_v<T, HullFunc>) {
          validate(r);
          MaxAffine m;
          m.terms.reserve(r.generators.size());
          for (const auto& g : r.generators) m.terms.push_back({g.point, -g.value});
          return m;
        } else {
          validate(r);
          return conjugate_grid(r);
        }
      },
      f);
}

HullFunc clconv_from_points(const std::vector<std::pair<PairPoint, double>>& data) {
  if (data.empty()) throw input_error("clconv_from_points: empty input");
  HullFunc h;
  h.generators.reserve(data.size());
  for (const auto& [z, v] : data) h.generators.push_back({z.flat(), v});
  validate(h);
  return h;
}

ConvexFuncRep j_transform(const ConvexFuncRep& f) {
  ConvexFuncRep conj = conjugate(f);
  return std::visit(
      [&](auto& r) -> ConvexFuncRep {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, MaxAffine>) {
          for (auto& t : r.terms) t.slope = swap_blocks(t.slope);
          return r;
        } else if constexpr (std::is_same_v<T, HullFunc>) {
          for (auto& g : r.generators) g.point = swap_blocks(g.point);
          return r;
        } else {
          return swap_grid_blocks(r);
        }
      },
      conj);
}

nlohmann::json func_to_json(const ConvexFuncRep& f) {
  return std::visit(
      [](const auto& r) -> nlohmann::json {
        using T = std::decay_t<decltype(r)>;
        nlohmann::json j;
        if constexpr (std::is_same_v<T, MaxAffine>) {
          j["kind"] = "max_affine";
          auto terms = nlohmann::json::array();
          for (const auto& t : r.terms) terms.push_back({{"slope", t.slope}, {"offset", t.offset}});
          j["terms"] = terms;
        } else if constexpr (std::is_same_v<T, HullFunc>) {
          j["kind"] = "hull";
          auto gens = nlohmann::json::array();
          for (const auto& g : r.generators) gens.push_back({{"point", g.point}, {"value", g.value}});
          j["generators"] = gens;
        } else {
          j["kind"] = "grid";
          j["box"] = box_to_json(r.box);
          auto vals = nlohmann::json::array();
          for (double v : r.values) {
            if (v == kInf)
              vals.push_back("inf");
            else if (v == -kInf)
              vals.push_back("-inf");
            else
              vals.push_back(v);
          }
          j["values"] = vals;
        }
        return j;
      },
      f);
}

}  // namespace monocalc
