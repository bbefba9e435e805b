#include "tfa/linalg.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace tfa {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::non_invertible_metric: return "non_invertible_metric";
    case ErrorKind::degenerate_plane: return "degenerate_plane";
    case ErrorKind::zero_field: return "zero_field";
    case ErrorKind::degenerate_fit: return "degenerate_fit";
    case ErrorKind::degenerate_immersion: return "degenerate_immersion";
    case ErrorKind::vanishing_tangential: return "vanishing_tangential";
    case ErrorKind::ruled_regime: return "ruled_regime";
    case ErrorKind::dimension: return "dimension";
    case ErrorKind::blow_up: return "blow_up";
    case ErrorKind::numerical: return "numerical";
    case ErrorKind::invalid_input: return "invalid_input";
    case ErrorKind::unknown_name: return "unknown_name";
    case ErrorKind::parse: return "parse";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

SolveResult solve_linear(MatD a, Vec<double> b, double rank_tol, const char* what) {
  const int n = a.rows;
  double max_piv = 0.0;
  double min_piv = std::numeric_limits<double>::infinity();
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
    if (piv != c) {
      for (int k = 0; k < n; ++k) std::swap(a(c, k), a(piv, k));
      std::swap(b[c], b[piv]);
    }
    const double p = std::abs(a(c, c));
    max_piv = std::max(max_piv, p);
    min_piv = std::min(min_piv, p);
    if (p == 0.0) break;
    for (int r = c + 1; r < n; ++r) {
      const double f = a(r, c) / a(c, c);
      for (int k = c; k < n; ++k) a(r, k) -= f * a(c, k);
      b[r] -= f * b[c];
    }
  }
  const double ratio = max_piv > 0.0 ? min_piv / max_piv : 0.0;
  if (!(ratio > rank_tol)) {
    fail(ErrorKind::degenerate_fit, std::string(what) + ": rank-deficient system (pivot ratio " +
                                        std::to_string(ratio) + ")");
  }
  for (int r = n - 1; r >= 0; --r) {
    for (int k = r + 1; k < n; ++k) b[r] -= a(r, k) * b[k];
    b[r] /= a(r, r);
  }
  return {std::move(b), ratio};
}

EigenPairs jacobi_eigen(MatD a, double tol, int max_sweeps) {
  const int n = a.rows;
  MatD v = MatD::identity(n);
  int sweep = 0;
  auto off = [&] {
    double s = 0.0, d = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) (i == j ? d : s) += a(i, j) * a(i, j);
    return std::sqrt(s) <= tol * std::max(1.0, std::sqrt(d));
  };
  while (!off()) {
    if (sweep++ >= max_sweeps) {
      fail(ErrorKind::numerical,
           "Jacobi eigen-solver did not converge after " + std::to_string(max_sweeps) + " sweeps");
    }
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  // Sort descending; ties broken by lexicographic order of the (sign-fixed)
  // eigenvector so output is reproducible.
  for (int k = 0; k < n; ++k) {
    int lead = 0;
    for (int i = 0; i < n; ++i)
      if (std::abs(v(i, k)) > 1e-12) { lead = i; break; }
    if (v(lead, k) < 0)
      for (int i = 0; i < n; ++i) v(i, k) = -v(i, k);
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    const double dx = a(x, x), dy = a(y, y);
    if (std::abs(dx - dy) > 1e-12 * std::max({1.0, std::abs(dx), std::abs(dy)})) return dx > dy;
    for (int i = 0; i < n; ++i) {
      if (std::abs(v(i, x) - v(i, y)) > 1e-12) return v(i, x) > v(i, y);
    }
    return x < y;
  });
  EigenPairs out;
  out.values.resize(n);
  out.vectors = MatD(n, n);
  out.sweeps = sweep;
  for (int k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (int i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

double smallest_singular_value(const MatD& a) {
  MatD ata = transpose(a) * a;
  EigenPairs e = jacobi_eigen(ata);
  return std::sqrt(std::max(0.0, e.values.back()));
}

}  // namespace tfa
