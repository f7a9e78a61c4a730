// Core types: vectors in R^n, pair points of R^n x R^n, the duality
// product, axis-aligned evaluation boxes and monotonicity primitives.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace monocalc {

using Vector = std::vector<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Error taxonomy; the CLI maps these onto its exit-code contract.
struct input_error : std::runtime_error {
  explicit input_error(const std::string& m) : std::runtime_error(m) {}
};
struct solver_error : std::runtime_error {
  explicit solver_error(const std::string& m) : std::runtime_error(m) {}
};
// Bug trap: two supposedly-equivalent computation paths disagreed.
struct internal_error : std::logic_error {
  explicit internal_error(const std::string& m) : std::logic_error(m) {}
};

inline bool is_finite(double v) { return std::isfinite(v); }

inline void check_finite(const Vector& v, const char* what) {
  for (double e : v)
    if (!std::isfinite(e)) throw input_error(std::string(what) + ": non-finite entry");
}

inline double dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw input_error("dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm_inf(const Vector& a) {
  double m = 0.0;
  for (double e : a) m = std::max(m, std::abs(e));
  return m;
}

inline double norm2(const Vector& a) { return std::sqrt(dot(a, a)); }

inline Vector sub(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw input_error("sub: dimension mismatch");
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vector add(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw input_error("add: dimension mismatch");
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vector scale(double t, const Vector& a) {
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = t * a[i];
  return r;
}

// A point (x, x*) of the product space R^n x R^n.
struct PairPoint {
  Vector x;
  Vector xs;

  PairPoint() = default;
  PairPoint(Vector x_, Vector xs_) : x(std::move(x_)), xs(std::move(xs_)) {
    if (x.size() != xs.size()) throw input_error("PairPoint: dimension mismatch");
    check_finite(x, "PairPoint.x");
    check_finite(xs, "PairPoint.xs");
  }

  std::size_t dim() const { return x.size(); }

  // Flat coordinates (x_0..x_{n-1}, xs_0..xs_{n-1}) used by convex-function
  // representations on the product space.
  Vector flat() const {
    Vector z(x);
    z.insert(z.end(), xs.begin(), xs.end());
    return z;
  }
  static PairPoint from_flat(const Vector& z) {
    if (z.size() % 2 != 0) throw input_error("PairPoint::from_flat: odd length");
    std::size_t n = z.size() / 2;
    return PairPoint(Vector(z.begin(), z.begin() + n), Vector(z.begin() + n, z.end()));
  }

  PairPoint swapped() const { return PairPoint(xs, x); }

  bool operator==(const PairPoint& o) const { return x == o.x && xs == o.xs; }
};

// Duality product <x, x*>.
inline double duality(const PairPoint& p) { return dot(p.x, p.xs); }

// <p.x - q.x, p.xs - q.xs>, the quantity whose sign defines monotone relation.
inline double mono_product(const PairPoint& p, const PairPoint& q) {
  if (p.dim() != q.dim()) throw input_error("mono_product: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.dim(); ++i) s += (p.x[i] - q.x[i]) * (p.xs[i] - q.xs[i]);
  return s;
}

// Exact test, no tolerance.
inline bool mu_related(const PairPoint& p, const PairPoint& q) {
  return mono_product(p, q) >= 0.0;
}

// Axis-aligned box with a per-axis grid resolution. Used both for pair-space
// windows (dim = 2n, x-block first) and for plain R^d boxes.
struct Box {
  Vector lower;
  Vector upper;
  std::vector<int> resolution;

  Box() = default;
  Box(Vector lo, Vector hi, std::vector<int> res)
      : lower(std::move(lo)), upper(std::move(hi)), resolution(std::move(res)) {
    validate();
  }

  void validate() const {
    if (lower.size() != upper.size() || lower.size() != resolution.size())
      throw input_error("Box: inconsistent dimensions");
    if (lower.empty()) throw input_error("Box: empty");
    check_finite(lower, "Box.lower");
    check_finite(upper, "Box.upper");
    for (std::size_t i = 0; i < lower.size(); ++i) {
      if (!(lower[i] < upper[i])) throw input_error("Box: lower must be < upper componentwise");
      if (resolution[i] < 2) throw input_error("Box: resolution must be >= 2");
    }
  }

  std::size_t dim() const { return lower.size(); }

  double step(std::size_t axis) const {
    return (upper[axis] - lower[axis]) / double(resolution[axis] - 1);
  }

  // Single source of truth for grid coordinates; alignment arguments elsewhere
  // rely on every module computing node coordinates through this formula.
  double coord(std::size_t axis, int i) const { return lower[axis] + step(axis) * double(i); }

  std::int64_t node_count() const {
    std::int64_t c = 1;
    for (int r : resolution) c *= r;
    return c;
  }

  bool contains(const Vector& v, double tol = 0.0) const {
    if (v.size() != dim()) throw input_error("Box::contains: dimension mismatch");
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i] < lower[i] - tol || v[i] > upper[i] + tol) return false;
    return true;
  }

  // Pair-space block swap (primal block <-> dual block); requires even dim.
  Box swapped_blocks() const {
    if (dim() % 2 != 0) throw input_error("Box::swapped_blocks: odd dimension");
    std::size_t n = dim() / 2;
    Vector lo(dim()), hi(dim());
    std::vector<int> res(dim());
    for (std::size_t i = 0; i < n; ++i) {
      lo[i] = lower[n + i]; hi[i] = upper[n + i]; res[i] = resolution[n + i];
      lo[n + i] = lower[i]; hi[n + i] = upper[i]; res[n + i] = resolution[i];
    }
    return Box(lo, hi, res);
  }
};

// Visits every grid node of the box in lexicographic index order.
template <typename F>
void for_each_node(const Box& box, F&& f) {
  std::vector<int> idx(box.dim(), 0);
  Vector v(box.dim());
  for (;;) {
    for (std::size_t a = 0; a < box.dim(); ++a) v[a] = box.coord(a, idx[a]);
    f(v);
    std::size_t a = 0;
    while (a < box.dim()) {
      if (++idx[a] < box.resolution[a]) break;
      idx[a] = 0;
      ++a;
    }
    if (a == box.dim()) return;
  }
}

// Grid coordinates of one axis.
inline Vector axis_coords(const Box& box, std::size_t axis) {
  Vector v(box.resolution[axis]);
  for (int i = 0; i < box.resolution[axis]; ++i) v[i] = box.coord(axis, i);
  return v;
}

}  // namespace monocalc
