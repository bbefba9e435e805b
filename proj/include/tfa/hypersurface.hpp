#pragma once

// Immersed hypersurfaces phi: (parameter box in R^n) -> ambient chart R^{n+1}.

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tfa/ambient.hpp"
#include "tfa/metric.hpp"

namespace tfa {

struct Immersion {
  std::string name;
  int n = 0;
  AmbientSpec ambient_spec;
  MetricField ambient;
  SmoothMap map;                                     // R^n -> R^{n+1}
  std::vector<std::pair<double, double>> param_box;  // open box
  std::function<bool(const Vec<double>&)> exclusion;  // true = excluded
  std::vector<std::string> param_names;
  int orientation = 1;  // multiplies the det[J | U] > 0 normal
  // Closed-form normal direction when one is known (not necessarily unit).
  std::optional<SmoothMap> reference_normal;

  bool in_domain(const Vec<double>& q) const;
  void require(const Vec<double>& q) const;
};

// Build an immersion; orientation defaults to det[J | U] > 0.
Immersion make_immersion(std::string name, const AmbientSpec& ambient, SmoothMap map,
                         std::vector<std::pair<double, double>> box, std::vector<std::string> param_names = {});

struct SurfaceFrame {
  Vec<double> point;      // phi(q)
  MatD ambient_metric;    // g at phi(q)
  MatD jacobian;          // (n+1) x n
  MatD induced_metric;    // J^T g J
  Vec<double> normal;     // unit normal U
  int orientation_sign = 1;
};

struct ShapeReport {
  MatD shape_matrix;                  // A e_i = sum_j S(j, i) e_j
  MatD second_fundamental_form;       // B = G S
  Vec<double> principal_curvatures;   // descending
  MatD principal_directions;          // parameter coordinates, G-orthonormal columns
  double mean_curvature = 0.0;
  double self_adjoint_residual = 0.0;  // max |B - B^T|
  double normal_leak = 0.0;            // max |<nabla_X U, U>|
};

namespace detail {

template <class S>
struct FrameT {
  Vec<S> x;
  Mat<S> jac;
  Mat<S> g;
  Vec<S> normal;
};

template <class S>
Mat<S> jacobian_t(const SmoothMap& map, const Vec<S>& q) {
  const int n = map.in_dim();
  const int m = map.out_dim();
  Mat<S> j(m, n);
  for (int c = 0; c < n; ++c) {
    const Vec<Dual<S>> y = map(seed(q, c));
    for (int r = 0; r < m; ++r) j(r, c) = y[r].d;
  }
  return j;
}

template <class S>
FrameT<S> frame_t(const Immersion& imm, const Vec<S>& q) {
  FrameT<S> f;
  const int n = imm.n;
  const int m = n + 1;
  f.x = imm.map(q);
  f.jac = jacobian_t(imm.map, q);
  f.g = imm.ambient.eval_t(f.x);
  // nu_k = (-1)^{k+n} det(J without row k) annihilates the columns of J and
  // makes det[J | g^{-1} nu] > 0.
  Vec<S> nu(m);
  for (int k = 0; k < m; ++k) {
    Mat<S> minor(n, n);
    for (int r = 0, rr = 0; r < m; ++r) {
      if (r == k) continue;
      for (int c = 0; c < n; ++c) minor(rr, c) = f.jac(r, c);
      ++rr;
    }
    const S det = determinant(minor);
    nu[k] = ((k + n) % 2 == 0) ? det : -det;
  }
  const Vec<S> raised = cholesky_solve(cholesky(f.g), nu);
  const S len = sqrt(dot(nu, raised));
  f.normal.resize(m);
  for (int k = 0; k < m; ++k) f.normal[k] = raised[k] / len * double(imm.orientation);
  return f;
}

template <class S>
Mat<S> induced_metric_t(const Immersion& imm, const Vec<S>& q) {
  const Mat<S> j = jacobian_t(imm.map, q);
  const Mat<S> g = imm.ambient.eval_t(imm.map(q));
  return transpose(j) * (g * j);
}

// Tangent coordinates of an ambient vector's tangential part: G^{-1} J^T g w.
template <class S>
Vec<S> tangent_coords(const Mat<S>& jac, const Mat<S>& g, const Mat<S>& induced, const Vec<S>& w) {
  return cholesky_solve(cholesky(induced), transpose(jac) * (g * w));
}

}  // namespace detail

// Choose `orientation` so that U agrees in sign with the reference normal at q.
void orient_by_reference(Immersion& imm, const Vec<double>& q);

SurfaceFrame frame_at(const Immersion& imm, const Vec<double>& q);

// Christoffel symbols of the induced metric at q.
ChristoffelSymbols induced_christoffel(const Immersion& imm, const Vec<double>& q);

// nabla^0_{e_i} U for each coordinate tangent, as ambient vectors (columns).
MatD normal_derivatives(const Immersion& imm, const Vec<double>& q);

ShapeReport shape_operator(const Immersion& imm, const Vec<double>& q);

// g-norm of (R(e_i,e_j)U)^T - ((nabla_{e_j} A) e_i - (nabla_{e_i} A) e_j).
double codazzi_residual(const Immersion& imm, const Vec<double>& q, int i, int j);

// max_{i,j} g-norm of nabla^0_{e_i} e_j - nabla_{e_i} e_j - <A e_i, e_j> U.
double gauss_formula_residual(const Immersion& imm, const Vec<double>& q);

// Apply A to a tangent vector given in parameter coordinates.
Vec<double> apply_shape(const ShapeReport& rep, const Vec<double>& t);

}  // namespace tfa
