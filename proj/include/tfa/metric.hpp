#pragma once

// Coordinate-chart tensor calculus: metric evaluation, Christoffel symbols,
// Riemann tensor and sectional curvature. All derivatives of the metric come
// from nested dual scalars.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "tfa/linalg.hpp"
#include "tfa/smooth_map.hpp"

namespace tfa {

struct Coords {
  std::vector<double> values;
  std::string chart;

  Coords() = default;
  Coords(std::vector<double> v, std::string chart_id = {})  // NOLINT
      : values(std::move(v)), chart(std::move(chart_id)) {}
  Coords(std::initializer_list<double> v) : values(v) {}

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
};

// Riemannian metric on a chart of dimension `dim`. `components` maps a point
// to the m*m row-major matrix g_ij.
class MetricField {
 public:
  using Domain = std::function<bool(const Vec<double>&)>;

  MetricField() = default;
  MetricField(int dim, SmoothMap components, Domain domain, std::string chart = {})
      : dim_(dim), g_(std::move(components)), domain_(std::move(domain)), chart_(std::move(chart)) {}

  int dim() const { return dim_; }
  const std::string& chart() const { return chart_; }
  const SmoothMap& components() const { return g_; }

  bool contains(const Vec<double>& p) const;
  // Throws ErrorKind::domain when p is outside the chart domain.
  void require(const Vec<double>& p) const;

  MatD eval(const Coords& p) const;

  template <class S>
  Mat<S> eval_t(const Vec<S>& x) const {
    return Mat<S>(dim_, dim_, g_(x));
  }

 private:
  int dim_ = 0;
  SmoothMap g_;
  Domain domain_;
  std::string chart_;
};

struct ChristoffelSymbols {
  int m = 0;
  std::vector<double> gamma;  // Gamma^k_ij at (k * m + i) * m + j

  double operator()(int k, int i, int j) const { return gamma[(k * m + i) * m + j]; }

  // Gamma(X, Y)^k = Gamma^k_ij X^i Y^j
  Vec<double> contract(const Vec<double>& x, const Vec<double>& y) const;
};

// Generic Levi-Civita symbols of the metric provided by `metric_of`, a generic
// callable taking Vec<Dual<S>> and returning the m*m matrix entries.
template <class S, class MetricOf>
Vec<S> christoffel_t(const MetricOf& metric_of, const Vec<S>& x, int m) {
  Mat<S> g(m, m);
  // dg[(l * m + i) * m + j] = d_l g_ij
  Vec<S> dg(static_cast<std::size_t>(m * m * m), S(0.0));
  for (int l = 0; l < m; ++l) {
    Vec<Dual<S>> gl = metric_of(seed(x, l));
    for (int e = 0; e < m * m; ++e) {
      if (l == 0) g.a[e] = gl[e].v;
      dg[l * m * m + e] = gl[e].d;
    }
  }
  Mat<S> l = cholesky(g);
  Vec<S> gamma(static_cast<std::size_t>(m * m * m), S(0.0));
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      // first kind: [ij, l] = 1/2 (d_i g_jl + d_j g_il - d_l g_ij)
      Vec<S> first(m);
      for (int q = 0; q < m; ++q) {
        first[q] = 0.5 * (dg[(i * m + j) * m + q] + dg[(j * m + i) * m + q] - dg[(q * m + i) * m + j]);
      }
      Vec<S> second = cholesky_solve(l, first);
      for (int k = 0; k < m; ++k) {
        gamma[(k * m + i) * m + j] = second[k];
        gamma[(k * m + j) * m + i] = second[k];
      }
    }
  }
  return gamma;
}

ChristoffelSymbols christoffel(const MetricField& metric, const Coords& p);

// Riemann tensor R^l_{kij} stored at ((l*m + k)*m + i)*m + j, with
// R(X,Y)Z = R^l_{kij} X^i Y^j Z^k.
struct RiemannTensor {
  int m = 0;
  std::vector<double> r;

  double operator()(int l, int k, int i, int j) const { return r[((l * m + k) * m + i) * m + j]; }
  Vec<double> apply(const Vec<double>& x, const Vec<double>& y, const Vec<double>& z) const;
};

RiemannTensor riemann(const MetricField& metric, const Coords& p);

// d_l Gamma^k_ij at ((l*m + k)*m + i)*m + j.
std::vector<double> christoffel_derivatives(const MetricField& metric, const Coords& p);

Vec<double> curvature(const MetricField& metric, const Coords& p, const Vec<double>& x,
                      const Vec<double>& y, const Vec<double>& z);

double sectional_curvature(const MetricField& metric, const Coords& p, const Vec<double>& u,
                           const Vec<double>& v, double degenerate_tol = 1e-12);

// max_{k,i,j} |d_k g_ij - Gamma^l_ki g_lj - Gamma^l_kj g_il|
double metric_compatibility_residual(const MetricField& metric, const Coords& p);

struct Tolerances {
  double autodiff = 1e-8;
  double finite_difference = 1e-5;
};

}  // namespace tfa
