#include "monocalc/multistart.hpp"

#include <algorithm>
#include <cmath>

#include "monocalc/rng.hpp"

namespace monocalc {

namespace {

struct Polish {
  double value;
  Vector point;
};

Polish coordinate_descent(const std::function<double(const Vector&)>& f, const Box& box, Vector x,
                          const MultistartConfig& cfg, std::int64_t& evals) {
  const std::size_t d = box.dim();
  double step = 0.0;
  for (std::size_t a = 0; a < d; ++a) step = std::max(step, (box.upper[a] - box.lower[a]) / 4.0);

  double fx = f(x);
  ++evals;
  int iters = 0;
  while (step > cfg.step_tolerance && iters < cfg.max_iterations) {
    bool moved = false;
    for (std::size_t a = 0; a < d; ++a) {
      for (double dir : {+1.0, -1.0}) {
        double old = x[a];
        double cand = std::clamp(old + dir * step, box.lower[a], box.upper[a]);
        if (cand == old) continue;
        x[a] = cand;
        double fc = f(x);
        ++evals;
        if (fc < fx) {
          fx = fc;
          moved = true;
        } else {
          x[a] = old;
        }
      }
    }
    ++iters;
    if (!moved) step *= 0.5;
  }
  return {fx, std::move(x)};
}

}  // namespace

MinimizeResult minimize_nonconvex(const std::function<double(const Vector&)>& objective,
                                  const Box& box, const MultistartConfig& cfg) {
  if (cfg.starts < 1) throw input_error("minimize_nonconvex: starts must be >= 1");
  const std::size_t d = box.dim();

  std::vector<Vector> starts;
  if (d <= 12) {  // 2^d corners
    for (std::uint64_t mask = 0; mask < (1ull << d); ++mask) {
      Vector c(d);
      for (std::size_t a = 0; a < d; ++a) c[a] = (mask >> a) & 1 ? box.upper[a] : box.lower[a];
      starts.push_back(std::move(c));
    }
  }
  for (int s = 0; s < cfg.starts; ++s) {
    Xorshift64Star rng(cfg.seed + std::uint64_t(s));
    Vector p(d);
    for (std::size_t a = 0; a < d; ++a) p[a] = rng.uniform(box.lower[a], box.upper[a]);
    starts.push_back(std::move(p));
  }

  MinimizeResult out;
  for (auto& s : starts) {
    Polish p = coordinate_descent(objective, box, std::move(s), cfg, out.evaluations);
    ++out.starts_run;
    if (p.value < out.best_value) {
      out.best_value = p.value;
      out.best_point = std::move(p.point);
    }
  }
  return out;
}

}  // namespace monocalc
