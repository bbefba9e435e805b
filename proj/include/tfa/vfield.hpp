#pragma once

// Ambient vector fields, covariant derivatives and the torse-forming fit
//   nabla_X V = f X + omega(X) V.

#include <optional>
#include <string>
#include <vector>

#include "tfa/ambient.hpp"
#include "tfa/metric.hpp"

namespace tfa {

struct VectorField {
  std::string name;
  int dim = 0;
  SmoothMap eval;  // R^m -> R^m

  // Closed-form metadata, when the field comes with one.
  std::optional<SmoothMap> conformal_scalar;  // R^m -> R
  std::optional<SmoothMap> generating_form;   // R^m -> R^m (covector components)

  Vec<double> at(const Vec<double>& p) const { return eval(p); }
};

struct TorseFormingFit {
  double f = 0.0;
  Vec<double> omega;       // covector
  Vec<double> generative;  // g^{-1} omega
  double residual = 0.0;           // tensor norm of nabla V - f Id - omega (x) V
  double relative_residual = 0.0;  // residual / max(|nabla V|, |V|)
};

enum class AxisTag { not_torse_forming, torse_forming_proper, anti_torqued, torqued, concircular };

const char* to_string(AxisTag tag);

struct ClassifyTolerances {
  double residual = 1e-6;
  double form = 1e-6;
};

struct AxisClass {
  AxisTag tag = AxisTag::not_torse_forming;
  ClassifyTolerances tolerances;
  bool f_vanishes = false;  // recurrent case; reported, not classified separately
};

// (nabla_X V)^k = X^i d_i V^k + Gamma^k_ij X^i V^j
Vec<double> covariant_derivative(const MetricField& metric, const VectorField& v, const Coords& p,
                                 const Vec<double>& x);

// Full (1,1) tensor D(k, i) = (nabla_{e_i} V)^k.
MatD covariant_jacobian(const MetricField& metric, const VectorField& v, const Coords& p);

// Least-squares (f, omega) over the coordinate frame, weighted by the
// g^{-1} (x) g tensor norm so the residual is chart independent.
TorseFormingFit fit_torse_forming(const MetricField& metric, const VectorField& v, const Coords& p,
                                  double zero_tol = 1e-12);

AxisClass classify_axis(const MetricField& metric, const VectorField& v, const Coords& p,
                        const TorseFormingFit& fit, const ClassifyTolerances& tol = {});

// Coordinate names used by expressions over the ambient chart.
std::vector<std::string> chart_coordinate_names(const AmbientSpec& spec);

// Named axes:
//   warped_base_unit     d_u on I x_p F, f = (log p)'
//   base_concircular     p(u) d_u, f = p'(u), omega = 0
//   radial_unit          Phi/|Phi| on R^m minus the origin, f = 1/|Phi|
//   position             Phi on R^m, f = 1
//   hyperbolic_vertical  -x_m d_m on the half-space, f = 1
//   torqued_ux           u x d_u on I x_u R^k, f = x, omega = d log x
//   torqued_graph        F p(u) d_u, F over the fiber (expression), omega = d log F
//   shear_control        (u + x) d_u
//   fiber_shear          d_u + y d_x on I x_p R^k, k >= 2; not torse-forming
//   constant             constant components `params`
VectorField axis_catalog(const std::string& name, const std::vector<double>& params, const AmbientSpec& spec,
                         const std::string& expression = {});

std::vector<std::string> axis_catalog_names();

}  // namespace tfa
