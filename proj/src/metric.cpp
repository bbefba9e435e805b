#include "tfa/metric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tfa {

namespace {

std::string describe(const Vec<double>& p) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
  os << ')';
  return os.str();
}

}  // namespace

bool MetricField::contains(const Vec<double>& p) const {
  if (static_cast<int>(p.size()) != dim_) return false;
  for (double x : p)
    if (!std::isfinite(x)) return false;
  return !domain_ || domain_(p);
}

void MetricField::require(const Vec<double>& p) const {
  if (static_cast<int>(p.size()) != dim_) {
    fail(ErrorKind::invalid_input, "point has dimension " + std::to_string(p.size()) +
                                       ", chart expects " + std::to_string(dim_));
  }
  if (!contains(p)) fail(ErrorKind::domain, "point " + describe(p) + " is outside the chart domain");
}

MatD MetricField::eval(const Coords& p) const {
  require(p.values);
  return eval_t(p.values);
}

Vec<double> ChristoffelSymbols::contract(const Vec<double>& x, const Vec<double>& y) const {
  Vec<double> out(m, 0.0);
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) out[k] += (*this)(k, i, j) * x[i] * y[j];
  return out;
}

ChristoffelSymbols christoffel(const MetricField& metric, const Coords& p) {
  metric.require(p.values);
  const int m = metric.dim();
  auto g_of = [&metric](const auto& x) { return metric.components()(x); };
  return {m, christoffel_t<double>(g_of, p.values, m)};
}

std::vector<double> christoffel_derivatives(const MetricField& metric, const Coords& p) {
  metric.require(p.values);
  const int m = metric.dim();
  auto g_of = [&metric](const auto& x) { return metric.components()(x); };
  std::vector<double> dgamma(static_cast<std::size_t>(m * m * m * m), 0.0);
  for (int l = 0; l < m; ++l) {
    Vec<D1> gl = christoffel_t<D1>(g_of, seed(p.values, l), m);
    for (int e = 0; e < m * m * m; ++e) dgamma[l * m * m * m + e] = gl[e].d;
  }
  return dgamma;
}

Vec<double> RiemannTensor::apply(const Vec<double>& x, const Vec<double>& y,
                                 const Vec<double>& z) const {
  Vec<double> out(m, 0.0);
  for (int l = 0; l < m; ++l)
    for (int k = 0; k < m; ++k)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) out[l] += (*this)(l, k, i, j) * x[i] * y[j] * z[k];
  return out;
}

RiemannTensor riemann(const MetricField& metric, const Coords& p) {
  const int m = metric.dim();
  const ChristoffelSymbols gam = christoffel(metric, p);
  const std::vector<double> dgam = christoffel_derivatives(metric, p);
  auto d = [&](int l, int k, int i, int j) { return dgam[((l * m + k) * m + i) * m + j]; };
  RiemannTensor r{m, std::vector<double>(static_cast<std::size_t>(m * m * m * m), 0.0)};
  // R^l_kij = d_i Gamma^l_jk - d_j Gamma^l_ik + Gamma^l_ip Gamma^p_jk - Gamma^l_jp Gamma^p_ik
  for (int l = 0; l < m; ++l) {
    for (int k = 0; k < m; ++k) {
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
          double v = d(i, l, j, k) - d(j, l, i, k);
          for (int q = 0; q < m; ++q) v += gam(l, i, q) * gam(q, j, k) - gam(l, j, q) * gam(q, i, k);
          r.r[((l * m + k) * m + i) * m + j] = v;
        }
      }
    }
  }
  return r;
}

Vec<double> curvature(const MetricField& metric, const Coords& p, const Vec<double>& x,
                      const Vec<double>& y, const Vec<double>& z) {
  return riemann(metric, p).apply(x, y, z);
}

double sectional_curvature(const MetricField& metric, const Coords& p, const Vec<double>& u,
                           const Vec<double>& v, double degenerate_tol) {
  const MatD g = metric.eval(p);
  const double uu = inner(g, u, u);
  const double vv = inner(g, v, v);
  const double uv = inner(g, u, v);
  const double den = uu * vv - uv * uv;
  if (!(std::abs(den) > degenerate_tol * uu * vv)) {
    fail(ErrorKind::degenerate_plane, "vectors do not span a plane");
  }
  const Vec<double> r = curvature(metric, p, u, v, v);
  return inner(g, r, u) / den;
}

double metric_compatibility_residual(const MetricField& metric, const Coords& p) {
  metric.require(p.values);
  const int m = metric.dim();
  const ChristoffelSymbols gam = christoffel(metric, p);
  const MatD g = metric.eval(p);
  double worst = 0.0;
  for (int k = 0; k < m; ++k) {
    const Vec<D1> gk = metric.components()(seed(p.values, k));
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        double rhs = 0.0;
        for (int l = 0; l < m; ++l) rhs += gam(l, k, i) * g(l, j) + gam(l, k, j) * g(i, l);
        worst = std::max(worst, std::abs(gk[i * m + j].d - rhs));
      }
    }
  }
  return worst;
}

}  // namespace tfa
