#pragma once

// Named parametric hypersurfaces. Each entry fixes the ambient kind it lives
// in; the ambient spec itself (warp, base interval) comes from the caller.
//
//   wapr_surface [theta]         (s, t) -> (sin(theta) s, cot(theta) log s, t) in I x_u R^2
//   constant_slope [theta]       s sin(theta) (cos a cos t, cos a sin t, sin a), a = cot(theta) log s, in R^3
//   hyperbolic_cone [k]          (rho cos t, rho sin t, k rho) in the upper half-space H^3
//   rot4_spiral                  (p zeta(v, w), q), p = e^u cos u, q = e^u sin u, in R^4
//   rot4_hyperbolic [theta]      (cos(theta) u zeta(v, w), sin(theta) u) in H^4
//   fiber_slice [u0]             {u = u0} in a warped product
//   vertical_plane [x0]          {x = x0} in I x_p R^3
//   cylinder_over_levelset       I x S^2, S^2 the unit sphere of R^3, in I x_p R^3
//   spherical_slice [r0]         {r = r0} in I x_p R^3 with spherical fiber coordinates
//   graph_sec [theta]            (theta sec r, r, rho, phi) in I x_p R^3 with spherical fiber coordinates
//   sphere [r]                   round sphere of radius r about the origin of R^m
//   plane                        {x_m = 0} in R^m
//
// zeta(v, w) = (cos v cos w, cos v sin w, sin v).

#include <string>
#include <vector>

#include "tfa/hypersurface.hpp"

namespace tfa {

struct SurfaceInfo {
  std::string name;
  std::vector<std::string> params;  // family parameters
  std::string ambient;              // required ambient kind
  std::string summary;
};

Immersion make_surface(const std::string& name, const std::vector<double>& params, const AmbientSpec& ambient);

// Parametrization given as one expression per ambient coordinate.
Immersion make_inline_surface(const std::string& name, const std::vector<std::string>& coords,
                              const std::vector<std::string>& param_names,
                              std::vector<std::pair<double, double>> box, const AmbientSpec& ambient);

const std::vector<SurfaceInfo>& surface_catalog();

}  // namespace tfa
