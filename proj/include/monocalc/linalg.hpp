// Small dense linear algebra: row-major matrices, Gaussian solves, Jacobi
// eigenvalues of symmetric matrices, pivoted Gram-Schmidt. Everything here
// targets the desk scale (n <= 3 ambient, pair space <= 6).
#pragma once

#include <algorithm>
#include <cmath>

#include "monocalc/core.hpp"

namespace monocalc {

struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  Vector a;  // row-major

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), a(r * c, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  Matrix transposed() const {
    Matrix t(cols, rows);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Vector mul(const Vector& v) const {
    if (v.size() != cols) throw input_error("Matrix::mul: dimension mismatch");
    Vector r(rows, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < cols; ++j) s += (*this)(i, j) * v[j];
      r[i] = s;
    }
    return r;
  }

  bool operator==(const Matrix& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
};

inline Matrix symmetric_part(const Matrix& m) {
  if (m.rows != m.cols) throw input_error("symmetric_part: square matrix required");
  Matrix s(m.rows, m.cols);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) s(i, j) = 0.5 * (m(i, j) + m(j, i));
  return s;
}

// Gaussian elimination with partial pivoting. Throws solver_error on a
// (numerically) singular system.
inline Vector solve_linear(Matrix m, Vector rhs) {
  if (m.rows != m.cols || rhs.size() != m.rows) throw input_error("solve_linear: shape mismatch");
  const std::size_t n = m.rows;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(m(i, k)) > std::abs(m(piv, k))) piv = i;
    if (std::abs(m(piv, k)) < 1e-14) throw solver_error("solve_linear: singular matrix");
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
      std::swap(rhs[k], rhs[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      double f = m(i, k) / m(k, k);
      if (f == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) m(i, j) -= f * m(k, j);
      rhs[i] -= f * rhs[k];
    }
  }
  Vector x(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    double s = rhs[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= m(i, j) * x[j];
    x[i] = s / m(i, i);
  }
  return x;
}

// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
// Deterministic sweep order; plenty for n <= 6.
struct SymEigen {
  Vector values;   // ascending
  Matrix vectors;  // columns are eigenvectors
};

inline SymEigen sym_eigen(Matrix s) {
  if (s.rows != s.cols) throw input_error("sym_eigen: square matrix required");
  const std::size_t n = s.rows;
  Matrix v = Matrix::identity(n);
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += s(p, q) * s(p, q);
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(s(p, q)) < 1e-300) continue;
        double theta = (s(q, q) - s(p, p)) / (2.0 * s(p, q));
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double skp = s(k, p), skq = s(k, q);
          s(k, p) = c * skp - sn * skq;
          s(k, q) = sn * skp + c * skq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double spk = s(p, k), sqk = s(q, k);
          s(p, k) = c * spk - sn * sqk;
          s(q, k) = sn * spk + c * sqk;
          double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
  }
  SymEigen out;
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.values[i] = s(i, i);
  // sort ascending, permuting columns alongside
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return out.values[a] < out.values[b]; });
  Vector ev(n);
  Matrix evec(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    ev[i] = out.values[order[i]];
    for (std::size_t k = 0; k < n; ++k) evec(k, i) = v(k, order[i]);
  }
  out.values = std::move(ev);
  out.vectors = std::move(evec);
  return out;
}

inline bool is_psd(const Matrix& sym, double tol = 1e-12) {
  SymEigen e = sym_eigen(sym);
  return e.values.empty() || e.values.front() >= -tol;
}

// sup_y ( -<y, Q y> + <r, y> ) for symmetric psd Q: equals <r, Q^+ r> / 4 when
// r lies in range(Q), +inf otherwise. The workhorse behind closed-form
// Fitzpatrick functions of affine operators.
inline double concave_quadratic_sup(const Matrix& q_sym, const Vector& r, double range_tol = 1e-9) {
  SymEigen e = sym_eigen(q_sym);
  const std::size_t n = r.size();
  double val = 0.0;
  double scale = 1.0;
  for (double ev : e.values) scale = std::max(scale, std::abs(ev));
  for (std::size_t i = 0; i < n; ++i) {
    double comp = 0.0;
    for (std::size_t k = 0; k < n; ++k) comp += e.vectors(k, i) * r[k];
    if (e.values[i] > range_tol * scale) {
      val += comp * comp / (4.0 * e.values[i]);
    } else if (std::abs(comp) > range_tol * (1.0 + norm2(r))) {
      return kInf;  // linear term escapes along the null space
    }
  }
  return val;
}

// Greedy pivoted Gram-Schmidt fit of an affine subspace of dimension at most
// max_dim through `points` (translated by the first point). Returns the
// orthonormal basis found and the worst distance of any translated point to
// its span.
struct AffineFit {
  Vector offset;
  std::vector<Vector> basis;
  double residual = 0.0;
};

inline AffineFit fit_affine_subspace(const std::vector<Vector>& points, std::size_t max_dim,
                                     double tol) {
  if (points.empty()) throw input_error("fit_affine_subspace: no points");
  AffineFit fit;
  fit.offset = points.front();
  std::vector<Vector> shifted;
  shifted.reserve(points.size());
  for (const auto& p : points) shifted.push_back(sub(p, fit.offset));

  auto residual_of = [&](const Vector& v) {
    Vector r = v;
    for (const auto& b : fit.basis) {
      double c = dot(r, b);
      for (std::size_t i = 0; i < r.size(); ++i) r[i] -= c * b[i];
    }
    return r;
  };

  for (;;) {
    double worst = -1.0;
    Vector worst_res;
    for (const auto& s : shifted) {
      Vector r = residual_of(s);
      double d = norm2(r);
      if (d > worst) {
        worst = d;
        worst_res = std::move(r);
      }
    }
    fit.residual = std::max(worst, 0.0);
    if (worst <= tol || fit.basis.size() >= max_dim) return fit;
    fit.basis.push_back(scale(1.0 / worst, worst_res));
  }
}

}  // namespace monocalc
