#pragma once

// Small dense linear algebra, generic over the dual scalar types. Dimensions
// in this library never exceed a handful, so everything is O(n^3) and naive.

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "tfa/dual.hpp"
#include "tfa/error.hpp"
#include "tfa/smooth_map.hpp"

namespace tfa {

template <class S>
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<S> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r * c), S(0.0)) {}
  Mat(int r, int c, std::vector<S> data) : rows(r), cols(c), a(std::move(data)) {}

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = S(1.0);
    return m;
  }

  S& operator()(int r, int c) { return a[static_cast<std::size_t>(r * cols + c)]; }
  const S& operator()(int r, int c) const { return a[static_cast<std::size_t>(r * cols + c)]; }

  Vec<S> col(int c) const {
    Vec<S> out(rows);
    for (int r = 0; r < rows; ++r) out[r] = (*this)(r, c);
    return out;
  }
};

using MatD = Mat<double>;

template <class S>
Mat<S> transpose(const Mat<S>& m) {
  Mat<S> t(m.cols, m.rows);
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c) t(c, r) = m(r, c);
  return t;
}

template <class S>
Mat<S> operator*(const Mat<S>& x, const Mat<S>& y) {
  Mat<S> out(x.rows, y.cols);
  for (int r = 0; r < x.rows; ++r)
    for (int k = 0; k < x.cols; ++k)
      for (int c = 0; c < y.cols; ++c) out(r, c) += x(r, k) * y(k, c);
  return out;
}

template <class S>
Vec<S> operator*(const Mat<S>& x, const Vec<S>& v) {
  Vec<S> out(x.rows, S(0.0));
  for (int r = 0; r < x.rows; ++r)
    for (int k = 0; k < x.cols; ++k) out[r] += x(r, k) * v[k];
  return out;
}

template <class S>
S dot(const Vec<S>& x, const Vec<S>& y) {
  S s(0.0);
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

// <x, y>_g
template <class S>
S inner(const Mat<S>& g, const Vec<S>& x, const Vec<S>& y) {
  return dot(x, g * y);
}

inline double norm_g(const MatD& g, const Vec<double>& x) {
  return std::sqrt(std::max(0.0, inner(g, x, x)));
}

inline double norm2(const Vec<double>& x) { return std::sqrt(dot(x, x)); }

template <class S>
Vec<S> axpy(const Vec<S>& x, S alpha, const Vec<S>& y) {  // x + alpha*y
  Vec<S> out(x);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += alpha * y[i];
  return out;
}

inline Vec<double> sub(const Vec<double>& x, const Vec<double>& y) { return axpy(x, -1.0, y); }
inline Vec<double> scaled(const Vec<double>& x, double s) {
  Vec<double> out(x);
  for (double& e : out) e *= s;
  return out;
}

// Lower Cholesky factor; failure means the matrix is not SPD.
template <class S>
Mat<S> cholesky(const Mat<S>& m) {
  const int n = m.rows;
  Mat<S> l(n, n);
  double scale = 0.0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(primal(m(i, i))));
  for (int j = 0; j < n; ++j) {
    S d = m(j, j);
    for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(primal(d) > 1e-14 * scale) || !std::isfinite(primal(d))) {
      fail(ErrorKind::non_invertible_metric,
           "matrix is not positive definite (pivot " + std::to_string(j) + " = " +
               std::to_string(primal(d)) + ")");
    }
    l(j, j) = sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      S s = m(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

template <class S>
Vec<S> cholesky_solve(const Mat<S>& l, Vec<S> b) {
  const int n = l.rows;
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < i; ++k) b[i] -= l(i, k) * b[k];
    b[i] /= l(i, i);
  }
  for (int i = n - 1; i >= 0; --i) {
    for (int k = i + 1; k < n; ++k) b[i] -= l(k, i) * b[k];
    b[i] /= l(i, i);
  }
  return b;
}

template <class S>
Mat<S> spd_inverse(const Mat<S>& m) {
  Mat<S> l = cholesky(m);
  Mat<S> inv(m.rows, m.rows);
  for (int c = 0; c < m.rows; ++c) {
    Vec<S> e(m.rows, S(0.0));
    e[c] = S(1.0);
    Vec<S> x = cholesky_solve(l, e);
    for (int r = 0; r < m.rows; ++r) inv(r, c) = x[r];
  }
  return inv;
}

// Cofactor expansion along the first row. Unlike elimination it stays
// differentiable where the primal matrix is singular.
template <class S>
S laplace_determinant(const Mat<S>& m) {
  const int n = m.rows;
  if (n == 1) return m(0, 0);
  if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  S det(0.0);
  Mat<S> minor(n - 1, n - 1);
  for (int c = 0; c < n; ++c) {
    for (int r = 1; r < n; ++r) {
      for (int k = 0, kk = 0; k < n; ++k) {
        if (k != c) minor(r - 1, kk++) = m(r, k);
      }
    }
    const S term = m(0, c) * laplace_determinant(minor);
    det = (c % 2 == 0) ? det + term : det - term;
  }
  return det;
}

// Small matrices by cofactor expansion, larger ones by elimination with
// partial pivoting on primal values.
template <class S>
S determinant(Mat<S> m) {
  const int n = m.rows;
  if (n <= 6) return laplace_determinant(m);
  S det(1.0);
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(primal(m(r, c))) > std::abs(primal(m(piv, c)))) piv = r;
    if (primal(m(piv, c)) == 0.0) return S(0.0);
    if (piv != c) {
      for (int k = 0; k < n; ++k) std::swap(m(c, k), m(piv, k));
      det = -det;
    }
    det *= m(c, c);
    for (int r = c + 1; r < n; ++r) {
      S f = m(r, c) / m(c, c);
      for (int k = c; k < n; ++k) m(r, k) -= f * m(c, k);
    }
  }
  return det;
}

struct SolveResult {
  Vec<double> x;
  double min_pivot_ratio = 0.0;  // smallest |pivot| / largest |pivot|
};

// General square solve with partial pivoting; reports conditioning via pivots.
SolveResult solve_linear(MatD a, Vec<double> b, double rank_tol, const char* what);

struct EigenPairs {
  Vec<double> values;  // descending
  MatD vectors;        // column k belongs to values[k]
  int sweeps = 0;
};

// Cyclic Jacobi for symmetric matrices.
EigenPairs jacobi_eigen(MatD a, double tol = 1e-15, int max_sweeps = 100);

// Smallest singular value of a tall matrix (via eigenvalues of A^T A).
double smallest_singular_value(const MatD& a);

}  // namespace tfa
