#include "tfa/surfaces.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "tfa/expr.hpp"
#include "tfa/vfield.hpp"

namespace tfa {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

template <class V>
using scalar_of = typename std::decay_t<V>::value_type;

void expect_params(const std::string& name, const std::vector<double>& params, std::size_t count) {
  if (params.size() != count) {
    fail(ErrorKind::invalid_input, "surface '" + name + "' takes " + std::to_string(count) + " parameter(s), got " +
                                       std::to_string(params.size()));
  }
}

void expect_ambient(const std::string& name, const AmbientSpec& spec, std::initializer_list<AmbientKind> kinds,
                    int dim = 0) {
  bool ok = false;
  for (AmbientKind k : kinds) ok = ok || spec.kind == k;
  if (!ok) {
    std::string want;
    for (AmbientKind k : kinds) want += (want.empty() ? "" : " or ") + std::string(to_string(k));
    fail(ErrorKind::invalid_input, "surface '" + name + "' lives in " + want + ", not " + to_string(spec.kind));
  }
  if (dim != 0 && spec.dim != dim) {
    fail(ErrorKind::invalid_input,
         "surface '" + name + "' needs ambient dimension " + std::to_string(dim) + ", got " + std::to_string(spec.dim));
  }
}

void expect_fiber(const std::string& name, const AmbientSpec& spec, FiberKind fiber) {
  if (spec.fiber != fiber) {
    fail(ErrorKind::invalid_input, "surface '" + name + "' needs fiber " + std::string(to_string(fiber)));
  }
}

template <class S>
Vec<S> zeta(const S& v, const S& w) {
  return {cos(v) * cos(w), cos(v) * sin(w), sin(v)};
}

Immersion finish(Immersion imm, SmoothMap normal, const Vec<double>& q_ref) {
  imm.reference_normal = std::move(normal);
  orient_by_reference(imm, q_ref);
  return imm;
}

Immersion wapr_surface(const std::vector<double>& prm, const AmbientSpec& spec) {
  expect_params("wapr_surface", prm, 1);
  expect_ambient("wapr_surface", spec, {AmbientKind::warped_product}, 3);
  expect_fiber("wapr_surface", spec, FiberKind::flat_cartesian);
  const double th = prm[0];
  if (!(std::sin(th) > 0.0)) fail(ErrorKind::invalid_input, "wapr_surface: need sin(theta) > 0");
  const double st = std::sin(th), ct = std::cos(th) / std::sin(th), c = std::cos(th);
  SmoothMap map(2, 3, [st, ct](const auto& q) {
    using S = scalar_of<decltype(q)>;
    return Vec<S>{st * q[0], ct * log(q[0]), q[1]};
  });
  SmoothMap normal(2, 3, [c](const auto& q) {
    using S = scalar_of<decltype(q)>;
    return Vec<S>{S(c), -1.0 / q[0], S(0.0)};
  });
  Immersion imm = make_immersion("wapr_surface", spec, map, {{0.0, kInf}, {-kInf, kInf}}, {"s", "t"});
  return finish(std::move(imm), normal, {1.0 / st + 0.5, 0.0});
}

Immersion constant_slope(const std::vector<double>& prm, const AmbientSpec& spec) {
  expect_params("constant_slope", prm, 1);
  expect_ambient("constant_slope", spec, {AmbientKind::euclidean, AmbientKind::euclidean_punctured}, 3);
  const double th = prm[0];
  if (!(std::sin(th) > 0.0)) fail(ErrorKind::invalid_input, "constant_slope: need sin(theta) > 0");
  const double st = std::sin(th), c = std::cos(th), ct = c / st;
  SmoothMap map(2, 3, [st, ct](const auto& q) {
    using S = scalar_of<decltype(q)>;
    const S a = ct * log(q[0]);
    const S r = st * q[0];
    return Vec<S>{r * cos(a) * cos(q[1]), r * cos(a) * sin(q[1]), r * sin(a)};
  });
  // cos(theta) P - sin(theta) dP/da, P the radial unit vector
  SmoothMap normal(2, 3, [st, ct, c](const auto& q) {
    using S = scalar_of<decltype(q)>;
    const S a = ct * log(q[0]);
    return Vec<S>{c * cos(a) * cos(q[1]) + st * sin(a) * cos(q[1]), c * cos(a) * sin(q[1]) + st * sin(a) * sin(q[1]),
                  c * sin(a) - st * cos(a)};
  });
  Immersion imm = make_immersion("constant_slope", spec, map, {{0.0, kInf}, {-kInf, kInf}}, {"s", "t"});
  return finish(std::move(imm), normal, {1.0, 0.0});
}

Immersion hyperbolic_cone(const std::vector<double>& prm, const AmbientSpec& spec) {
  expect_params("hyperbolic_cone", prm, 1);
  expect_ambient("hyperbolic_cone", spec, {AmbientKind::hyperbolic_half_space}, 3);
  const double k = prm[0];
  if (!(k > 0.0)) fail(ErrorKind::invalid_input, "hyperbolic_cone: need k > 0");
  SmoothMap map(2, 3, [k](const auto& q) {
    using S = scalar_of<decltype(q)>;
    return Vec<S>{q[0] * cos(q[1]), q[0] * sin(q[1]), k * q[0]};
  });
  SmoothMap normal(2, 3, [k](const auto& q) {
    using S = scalar_of<decltype(q)>;
    return Vec<S>{-k * cos(q[1]), -k * sin(q[1]), S(1.0)};
  });
  Immersion imm = make_immersion("hyperbolic_cone", spec, map, {{0.0, kInf}, {-kInf, kInf}}, {"rho", "t"});
  return finish(std::move(imm), normal, {1.0, 0.0});
}

Immersion rot4_spiral(const std::vector<double>& prm, const AmbientSpec& spec) {
  expect_params("rot4_spiral", prm, 0);
  expect_ambient("rot4_spiral", spec, {AmbientKind::euclidean, AmbientKind::euclidean_punctured}, 4);
  SmoothMap map(3, 4, [](const auto& q) {
    using S = scalar_of<decltype(q)>;
    const S p = exp(q[0]) * cos(q[0]);
    const Vec<S> z = zeta(q[1], q[2]);
    return Vec<S>{p * z[0], p * z[1], p * z[2], exp(q[0]) * sin(q[0])};
  });
  // (-q' zeta, p')
  SmoothMap normal(3, 4, [](const auto& q) {
    using S = scalar_of<decltype(q)>;
    const S dp = exp(q[0]) * (cos(q[0]) - sin(q[0]));
    const S dq = exp(q[0]) * (sin(q[0]) + cos(q[0]));
    const Vec<S> z = zeta(q[1], q[2]);
    return Vec<S>{-dq * z[0], -dq * z[1], -dq * z[2], dp};
  });
  Immersion imm =
      make_immersion("rot4_spiral", spec, map, {{-kPi / 2, kPi / 2}, {-kPi / 2, kPi / 2}, {-kInf, kInf}}, {"u", "v", "w"});
  return finish(std::move(imm), normal, {0.0, 0.0, 0.0});
}

Immersion rot4_hyperbolic(const std::vector<double>& prm, const AmbientSpec& spec) {
  expect_params("rot4_hyperbolic", prm, 1);
  expect_ambient("rot4_hyperbolic", spec, {AmbientKind::hyperbolic_half_space}, 4);
  const double th = prm[0];
  const double c = std::cos(th), s = std::sin(th);
  if (!(c > 0.0 && s > 0.0)) fail(ErrorKind::invalid_input, "rot4_hyperbolic: need 0 < theta < pi/2");
  SmoothMap map(3, 4, [c, s](const auto& q) {
    using S = scalar_of<decltype(q)>;
    const Vec<S> z = zeta(q[1], q[2]);
    return Vec<S>{c * q[0] * z[0], c * q[0] * z[1], c * q[0] * z[2], s * q[0]};
  });
  // (q' zeta, -p')
  SmoothMap normal(3, 4, [c, s](const auto& q) {
    using S = scalar_of<decltype(q)>;
    const Vec<S> z = zeta(q[1], q[2]);
    return Vec<S>{s * z[0], s * z[1], s * z[2], S(-c)};
  });
  Immersion imm =
      make_immersion("rot4_hyperbolic", spec, map, {{0.0, kInf}, {-kPi / 2, kPi / 2}, {-kInf, kInf}}, {"u", "v", "w"});
  return finish(std::move(imm), normal, {1.0, 0.0, 0.0});
}

// Open parameter box and a reference point for the fiber coordinates.
void fiber_box(const AmbientSpec& spec, std::vector<std::pair<double, double>>& box, Vec<double>& ref,
               std::vector<std::string>& names) {
  const int k = spec.dim - 1;
  switch (spec.fiber) {
    case FiberKind::flat_cartesian:
      for (int i = 0; i < k; ++i) {
        box.push_back({-kInf, kInf});
        ref.push_back(0.5);
      }
      break;
    case FiberKind::flat_spherical:
      box.push_back({0.0, kInf});
      box.push_back({0.0, kPi});
      box.push_back({-kInf, kInf});
      ref.insert(ref.end(), {1.0, 1.0, 0.5});
      break;
    case FiberKind::round_sphere:
      for (int i = 0; i + 1 < k; ++i) {
        box.push_back({0.0, kPi});
        ref.push_back(1.0);
      }
      box.push_back({-kInf, kInf});
      ref.push_back(0.5);
      break;
  }
  const std::vector<std::string> all = chart_coordinate_names(spec);
  names.insert(names.end(), all.begin() + 1, all.end());
}

double base_reference(const AmbientSpec& spec) {
  if (std::isfinite(spec.u_max)) return 0.5 * (spec.u_min + spec.u_max);
  return spec.u_min + 1.0;
}

Immersion fiber_slice(const std::vector<double>& prm, const AmbientSpec& spec) {
  expect_params("fiber_slice", prm, 1);
  expect_ambient("fiber_slice", spec, {AmbientKind::warped_product});
  const double u0 = prm[0];
  if (!(u0 > spec.u_min && u0 < spec.u_max)) fail(ErrorKind::domain, "fiber_slice: u0 outside the base interval");
  const int m = spec.dim;
  SmoothMap map(m - 1, m, [u0](const auto& q) {
    using S = scalar_of<decltype(q)>;
    Vec<S> x{S(u0)};
    x.insert(x.end(), q.begin(), q.end());
    return x;
  });
  SmoothMap normal(m - 1, m, [m](const auto& q) {
    using S = scalar_of<decltype(q)>;
    Vec<S> x(static_cast<std::size_t>(m), S(0.0));
    x[0] = S(1.0);
    (void)q;
    return x;
  });
  std::vector<std::pair<double, double>> box;
  Vec<double> ref;
  std::vector<std::string> names;
  fiber_box(spec, box, ref, names);
  Immersion imm = make_immersion("fiber_slice", spec, map, box, names);
  return finish(std::move(imm), normal, ref);
}

Immersion vertical_plane(const std::vector<double>& prm, const AmbientSpec& spec) {
  expect_params("vertical_plane", prm, 1);
  expect_ambient("vertical_plane", spec, {AmbientKind::warped_product}, 4);
  expect_fiber("vertical_plane", spec, FiberKind::flat_cartesian);
  const double x0 = prm[0];
  const WarpFunction p = spec.warp;
  SmoothMap map(3, 4, [x0](const auto& q) {
    using S = scalar_of<decltype(q)>;
    return Vec<S>{q[0], S(x0), q[1], q[2]};
  });
  // (1/p(u)) d_x
  SmoothMap normal(3, 4, [p](const auto& q) {
    using S = scalar_of<decltype(q)>;
    return Vec<S>{S(0.0), 1.0 / p(q[0]), S(0.0), S(0.0)};
  });
  Immersion imm = make_immersion("vertical_plane", spec, map, {{spec.u_min, spec.u_max}, {-kInf, kInf}, {-kInf, kInf}},
                                 {"u", "y", "z"});
  return finish(std::move(imm), normal, {base_reference(spec), 0.0, 0.0});
}

Immersion cylinder_over_levelset(const std::vector<double>& prm, const AmbientSpec& spec) {
  expect_params("cylinder_over_levelset", prm, 0);
  expect_ambient("cylinder_over_levelset", spec, {AmbientKind::warped_product}, 4);
  expect_fiber("cylinder_over_levelset", spec, FiberKind::flat_cartesian);
  const WarpFunction p = spec.warp;
  SmoothMap map(3, 4, [](const auto& q) {
    using S = scalar_of<decltype(q)>;
    const Vec<S> z = zeta(q[1], q[2]);
    return Vec<S>{q[0], z[0], z[1], z[2]};
  });
  // grad F / |grad F| for F = |y|^2, which on F = 1 is y / p(u)
  SmoothMap normal(3, 4, [p](const auto& q) {
    using S = scalar_of<decltype(q)>;
    const Vec<S> z = zeta(q[1], q[2]);
    const S pu = p(q[0]);
    return Vec<S>{S(0.0), z[0] / pu, z[1] / pu, z[2] / pu};
  });
  Immersion imm = make_immersion("cylinder_over_levelset", spec, map,
                                 {{spec.u_min, spec.u_max}, {-kPi / 2, kPi / 2}, {-kInf, kInf}}, {"u", "a", "b"});
  return finish(std::move(imm), normal, {base_reference(spec), 0.0, 0.0});
}

Immersion spherical_slice(const std::vector<double>& prm, const AmbientSpec& spec) {
  expect_params("spherical_slice", prm, 1);
  expect_ambient("spherical_slice", spec, {AmbientKind::warped_product}, 4);
  expect_fiber("spherical_slice", spec, FiberKind::flat_spherical);
  const double r0 = prm[0];
  if (!(r0 > 0.0)) fail(ErrorKind::invalid_input, "spherical_slice: need r0 > 0");
  const WarpFunction p = spec.warp;
  SmoothMap map(3, 4, [r0](const auto& q) {
    using S = scalar_of<decltype(q)>;
    return Vec<S>{q[0], S(r0), q[1], q[2]};
  });
  SmoothMap normal(3, 4, [p](const auto& q) {
    using S = scalar_of<decltype(q)>;
    return Vec<S>{S(0.0), 1.0 / p(q[0]), S(0.0), S(0.0)};
  });
  Immersion imm = make_immersion("spherical_slice", spec, map, {{spec.u_min, spec.u_max}, {0.0, kPi}, {-kInf, kInf}},
                                 {"u", "rho", "phi"});
  return finish(std::move(imm), normal, {base_reference(spec), 1.0, 0.0});
}

Immersion graph_sec(const std::vector<double>& prm, const AmbientSpec& spec) {
  expect_params("graph_sec", prm, 1);
  expect_ambient("graph_sec", spec, {AmbientKind::warped_product}, 4);
  expect_fiber("graph_sec", spec, FiberKind::flat_spherical);
  const double th = prm[0];
  if (!(th > 0.0)) fail(ErrorKind::invalid_input, "graph_sec: need theta > 0");
  const WarpFunction p = spec.warp;
  SmoothMap map(3, 4, [th](const auto& q) {
    using S = scalar_of<decltype(q)>;
    return Vec<S>{th / cos(q[0]), q[0], q[1], q[2]};
  });
  // d_u - (h'(r) / p(u)^2) d_r with h = theta sec r
  SmoothMap normal(3, 4, [th, p](const auto& q) {
    using S = scalar_of<decltype(q)>;
    const S c = cos(q[0]);
    const S pu = p(th / c);
    return Vec<S>{S(1.0), -(th * sin(q[0]) / (c * c)) / (pu * pu), S(0.0), S(0.0)};
  });
  Immersion imm =
      make_immersion("graph_sec", spec, map, {{0.0, kPi / 2}, {0.0, kPi}, {-kInf, kInf}}, {"r", "rho", "phi"});
  return finish(std::move(imm), normal, {0.5, 1.0, 0.0});
}

Immersion sphere(const std::vector<double>& prm, const AmbientSpec& spec) {
  expect_params("sphere", prm, 1);
  expect_ambient("sphere", spec, {AmbientKind::euclidean, AmbientKind::euclidean_punctured});
  const double r = prm[0];
  if (!(r > 0.0)) fail(ErrorKind::invalid_input, "sphere: need r > 0");
  const int m = spec.dim;
  // x_1 = r cos a_1, ..., x_{m-1} = r sin a_1 ... sin a_{m-2} cos a_{m-1}, x_m = r sin a_1 ... sin a_{m-1}
  SmoothMap map(m - 1, m, [r, m](const auto& q) {
    using S = scalar_of<decltype(q)>;
    Vec<S> x(static_cast<std::size_t>(m));
    S acc(r);
    for (int i = 0; i + 1 < m; ++i) {
      x[i] = acc * cos(q[i]);
      acc = acc * sin(q[i]);
    }
    x[m - 1] = acc;
    return x;
  });
  SmoothMap normal(m - 1, m, [map](const auto& q) { return map(q); });
  std::vector<std::pair<double, double>> box;
  Vec<double> ref;
  std::vector<std::string> names;
  for (int i = 0; i + 1 < m; ++i) {
    box.push_back(i + 2 < m ? std::pair{0.0, kPi} : std::pair{-kInf, kInf});
    ref.push_back(1.0);
    names.push_back("a" + std::to_string(i + 1));
  }
  Immersion imm = make_immersion("sphere", spec, map, box, names);
  return finish(std::move(imm), normal, ref);
}

Immersion plane(const std::vector<double>& prm, const AmbientSpec& spec) {
  expect_params("plane", prm, 0);
  expect_ambient("plane", spec, {AmbientKind::euclidean, AmbientKind::euclidean_punctured});
  const int m = spec.dim;
  SmoothMap map(m - 1, m, [](const auto& q) {
    using S = scalar_of<decltype(q)>;
    Vec<S> x(q.begin(), q.end());
    x.push_back(S(0.0));
    return x;
  });
  SmoothMap normal(m - 1, m, [m](const auto& q) {
    using S = scalar_of<decltype(q)>;
    Vec<S> x(static_cast<std::size_t>(m), S(0.0));
    x[m - 1] = S(1.0);
    (void)q;
    return x;
  });
  std::vector<std::pair<double, double>> box(static_cast<std::size_t>(m - 1), {-kInf, kInf});
  Vec<double> ref(static_cast<std::size_t>(m - 1), 0.5);
  std::vector<std::string> names = chart_coordinate_names(spec);
  names.pop_back();
  Immersion imm = make_immersion("plane", spec, map, box, names);
  return finish(std::move(imm), normal, ref);
}

}  // namespace

const std::vector<SurfaceInfo>& surface_catalog() {
  static const std::vector<SurfaceInfo> cat = {
      {"wapr_surface", {"theta"}, "warped_product", "(sin(theta) s, cot(theta) log s, t) in I x_u R^2"},
      {"constant_slope", {"theta"}, "euclidean", "constant angle with the position vector in R^3"},
      {"hyperbolic_cone", {"k"}, "hyperbolic_half_space", "z = k sqrt(x^2 + y^2) in H^3"},
      {"rot4_spiral", {}, "euclidean", "(e^u cos u zeta, e^u sin u) in R^4"},
      {"rot4_hyperbolic", {"theta"}, "hyperbolic_half_space", "(cos(theta) u zeta, sin(theta) u) in H^4"},
      {"fiber_slice", {"u0"}, "warped_product", "{u = u0}"},
      {"vertical_plane", {"x0"}, "warped_product", "{x = x0} in I x_p R^3"},
      {"cylinder_over_levelset", {}, "warped_product", "I x S^2 in I x_p R^3"},
      {"spherical_slice", {"r0"}, "warped_product", "{r = r0}, spherical fiber coordinates"},
      {"graph_sec", {"theta"}, "warped_product", "u = theta sec r, spherical fiber coordinates"},
      {"sphere", {"r"}, "euclidean", "round sphere about the origin"},
      {"plane", {}, "euclidean", "{x_m = 0}"},
  };
  return cat;
}

Immersion make_surface(const std::string& name, const std::vector<double>& params, const AmbientSpec& ambient) {
  if (name == "wapr_surface") return wapr_surface(params, ambient);
  if (name == "constant_slope") return constant_slope(params, ambient);
  if (name == "hyperbolic_cone") return hyperbolic_cone(params, ambient);
  if (name == "rot4_spiral") return rot4_spiral(params, ambient);
  if (name == "rot4_hyperbolic") return rot4_hyperbolic(params, ambient);
  if (name == "fiber_slice") return fiber_slice(params, ambient);
  if (name == "vertical_plane") return vertical_plane(params, ambient);
  if (name == "cylinder_over_levelset") return cylinder_over_levelset(params, ambient);
  if (name == "spherical_slice") return spherical_slice(params, ambient);
  if (name == "graph_sec") return graph_sec(params, ambient);
  if (name == "sphere") return sphere(params, ambient);
  if (name == "plane") return plane(params, ambient);
  fail(ErrorKind::unknown_name, "unknown surface '" + name + "'");
}

Immersion make_inline_surface(const std::string& name, const std::vector<std::string>& coords,
                              const std::vector<std::string>& param_names,
                              std::vector<std::pair<double, double>> box, const AmbientSpec& ambient) {
  if (static_cast<int>(coords.size()) != ambient.dim) {
    fail(ErrorKind::dimension, "inline surface '" + name + "': " + std::to_string(coords.size()) +
                                   " coordinate expressions for ambient dimension " + std::to_string(ambient.dim));
  }
  if (box.empty()) box.assign(param_names.size(), {-kInf, kInf});
  return make_immersion(name, ambient, compile_expressions(coords, param_names), std::move(box), param_names);
}

}  // namespace tfa
