#include "tfa/vfield.hpp"

#include <algorithm>
#include <cmath>

#include "tfa/expr.hpp"

namespace tfa {

const char* to_string(AxisTag tag) {
  switch (tag) {
    case AxisTag::not_torse_forming: return "not_torse_forming";
    case AxisTag::torse_forming_proper: return "torse_forming_proper";
    case AxisTag::anti_torqued: return "anti_torqued";
    case AxisTag::torqued: return "torqued";
    case AxisTag::concircular: return "concircular";
  }
  return "?";
}

MatD covariant_jacobian(const MetricField& metric, const VectorField& v, const Coords& p) {
  const int m = metric.dim();
  const ChristoffelSymbols gam = christoffel(metric, p);
  auto [val, jac] = value_and_jacobian([&v](const auto& x) { return v.eval(x); }, p.values);
  MatD d(m, m);
  for (int k = 0; k < m; ++k) {
    for (int i = 0; i < m; ++i) {
      double s = jac[k * m + i];
      for (int j = 0; j < m; ++j) s += gam(k, i, j) * val[j];
      d(k, i) = s;
    }
  }
  return d;
}

Vec<double> covariant_derivative(const MetricField& metric, const VectorField& v, const Coords& p,
                                 const Vec<double>& x) {
  return covariant_jacobian(metric, v, p) * x;
}

TorseFormingFit fit_torse_forming(const MetricField& metric, const VectorField& v, const Coords& p,
                                  double zero_tol) {
  const int m = metric.dim();
  const MatD g = metric.eval(p);
  const MatD ginv = spd_inverse(g);
  const Vec<double> vp = v.at(p.values);
  const double vnorm = norm_g(g, vp);
  if (!(vnorm > zero_tol)) fail(ErrorKind::zero_field, "axis vanishes at the fit point");
  const MatD d = covariant_jacobian(metric, v, p);

  // Blocks of an (1,1) tensor: block i is the vector image of e_i.
  using Blocks = std::vector<Vec<double>>;
  auto tensor_inner = [&](const Blocks& a, const Blocks& b) {
    double s = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        if (ginv(i, j) != 0.0) s += ginv(i, j) * inner(g, a[i], b[j]);
    return s;
  };
  std::vector<Blocks> cols;
  {
    Blocks id(m, Vec<double>(m, 0.0));
    for (int i = 0; i < m; ++i) id[i][i] = 1.0;
    cols.push_back(id);
    for (int k = 0; k < m; ++k) {
      Blocks c(m, Vec<double>(m, 0.0));
      c[k] = vp;
      cols.push_back(c);
    }
  }
  Blocks rhs(m);
  for (int i = 0; i < m; ++i) rhs[i] = d.col(i);

  const int n = m + 1;
  MatD normal(n, n);
  Vec<double> b(n);
  for (int r = 0; r < n; ++r) {
    for (int c = r; c < n; ++c) {
      normal(r, c) = tensor_inner(cols[r], cols[c]);
      normal(c, r) = normal(r, c);
    }
    b[r] = tensor_inner(cols[r], rhs);
  }
  const SolveResult sol = solve_linear(normal, b, 1e-12, "torse-forming fit");

  TorseFormingFit fit;
  fit.f = sol.x[0];
  fit.omega.assign(sol.x.begin() + 1, sol.x.end());
  fit.generative = ginv * fit.omega;
  Blocks res(m);
  for (int i = 0; i < m; ++i) {
    res[i] = rhs[i];
    res[i][i] -= fit.f;
    for (int k = 0; k < m; ++k) res[i][k] -= fit.omega[i] * vp[k];
  }
  fit.residual = std::sqrt(std::max(0.0, tensor_inner(res, res)));
  const double dnorm = std::sqrt(std::max(0.0, tensor_inner(rhs, rhs)));
  fit.relative_residual = dnorm > 0.0 ? fit.residual / dnorm : fit.residual;
  return fit;
}

AxisClass classify_axis(const MetricField& metric, const VectorField& v, const Coords& p,
                        const TorseFormingFit& fit, const ClassifyTolerances& tol) {
  AxisClass out;
  out.tolerances = tol;
  if (fit.relative_residual > tol.residual) {
    out.tag = AxisTag::not_torse_forming;
    return out;
  }
  const MatD g = metric.eval(p);
  const MatD ginv = spd_inverse(g);
  const Vec<double> vp = v.at(p.values);
  const Vec<double> nu = g * vp;
  const double vnorm = norm_g(g, vp);
  const double wnorm = norm_g(ginv, fit.omega);
  const double scale = std::max({1.0, std::abs(fit.f) * vnorm, wnorm});
  out.f_vanishes = std::abs(fit.f) <= tol.form * scale;

  if (wnorm < tol.form * scale) {
    out.tag = AxisTag::concircular;
    return out;
  }
  Vec<double> anti = fit.omega;
  for (int i = 0; i < metric.dim(); ++i) anti[i] += fit.f * nu[i];
  if (norm_g(ginv, anti) < tol.form * scale) {
    out.tag = AxisTag::anti_torqued;
    return out;
  }
  if (std::abs(dot(fit.omega, vp)) < tol.form * wnorm * vnorm) {
    out.tag = AxisTag::torqued;
    return out;
  }
  out.tag = AxisTag::torse_forming_proper;
  return out;
}

std::vector<std::string> chart_coordinate_names(const AmbientSpec& spec) {
  static const char* cart[] = {"x", "y", "z", "w"};
  std::vector<std::string> names;
  auto cartesian = [&](int count) {
    for (int i = 0; i < count; ++i)
      names.push_back(count <= 4 ? cart[i] : "x" + std::to_string(i + 1));
  };
  if (spec.kind != AmbientKind::warped_product) {
    cartesian(spec.dim);
    return names;
  }
  names.push_back("u");
  switch (spec.fiber) {
    case FiberKind::flat_cartesian: cartesian(spec.dim - 1); break;
    case FiberKind::flat_spherical: names.insert(names.end(), {"r", "rho", "phi"}); break;
    case FiberKind::round_sphere:
      for (int i = 1; i < spec.dim; ++i) names.push_back("psi" + std::to_string(i));
      break;
  }
  return names;
}

namespace {

template <class F>
SmoothMap field(int m, F f) {
  return SmoothMap(m, m, f);
}

template <class F>
SmoothMap scalar(int m, F f) {
  return SmoothMap(m, 1, f);
}

#define TFA_SCALAR_TYPE(x) typename std::decay_t<decltype(x)>::value_type

void require_kind(const AmbientSpec& spec, std::initializer_list<AmbientKind> kinds, const std::string& axis) {
  for (AmbientKind k : kinds)
    if (spec.kind == k) return;
  fail(ErrorKind::invalid_input, "axis '" + axis + "' is not defined on a " + to_string(spec.kind) + " ambient");
}

}  // namespace

std::vector<std::string> axis_catalog_names() {
  return {"base_concircular", "constant",     "fiber_shear", "hyperbolic_vertical", "position",
          "radial_unit",      "shear_control", "torqued_graph", "torqued_ux",       "warped_base_unit"};
}

VectorField axis_catalog(const std::string& name, const std::vector<double>& params, const AmbientSpec& spec,
                         const std::string& expression) {
  const int m = spec.dim;
  VectorField v;
  v.name = name;
  v.dim = m;
  const WarpFunction warp = spec.warp;

  if (name == "warped_base_unit") {
    require_kind(spec, {AmbientKind::warped_product}, name);
    v.eval = field(m, [m](const auto& x) {
      using S = TFA_SCALAR_TYPE(x);
      Vec<S> out(m, S(0.0));
      out[0] = S(1.0);
      return out;
    });
    // f = (log p)'; the u-derivative of p is taken with a private dual seed.
    auto f_of = [warp](const auto& u) {
      using S = std::decay_t<decltype(u)>;
      const Dual<S> pd = warp(Dual<S>(u, S(1.0)));
      return pd.d / pd.v;
    };
    v.conformal_scalar = scalar(m, [f_of](const auto& x) {
      using S = TFA_SCALAR_TYPE(x);
      return Vec<S>{f_of(x[0])};
    });
    v.generating_form = field(m, [m, f_of](const auto& x) {
      using S = TFA_SCALAR_TYPE(x);
      Vec<S> out(m, S(0.0));
      out[0] = -f_of(x[0]);
      return out;
    });
    return v;
  }
  if (name == "base_concircular") {
    require_kind(spec, {AmbientKind::warped_product}, name);
    v.eval = field(m, [m, warp](const auto& x) {
      using S = TFA_SCALAR_TYPE(x);
      Vec<S> out(m, S(0.0));
      out[0] = warp(x[0]);
      return out;
    });
    v.conformal_scalar = scalar(m, [warp](const auto& x) {
      using S = TFA_SCALAR_TYPE(x);
      return Vec<S>{warp(Dual<S>(x[0], S(1.0))).d};
    });
    v.generating_form = field(m, [m](const auto& x) {
      using S = TFA_SCALAR_TYPE(x);
      return Vec<S>(m, S(0.0));
    });
    return v;
  }
  if (name == "radial_unit" || name == "position") {
    require_kind(spec, {AmbientKind::euclidean, AmbientKind::euclidean_punctured}, name);
    const bool unit = name == "radial_unit";
    v.eval = field(m, [unit](const auto& x) {
      using S = TFA_SCALAR_TYPE(x);
      Vec<S> out(x);
      if (unit) {
        const S r = sqrt(dot(x, x));
        for (S& e : out) e = e / r;
      }
      return out;
    });
    v.conformal_scalar = scalar(m, [unit](const auto& x) {
      using S = TFA_SCALAR_TYPE(x);
      return Vec<S>{unit ? S(1.0) / sqrt(dot(x, x)) : S(1.0)};
    });
    v.generating_form = field(m, [unit](const auto& x) {
      using S = TFA_SCALAR_TYPE(x);
      Vec<S> out(x.size(), S(0.0));
      if (unit) {
        // omega = -f nu = -Phi / |Phi|^2
        const S r2 = dot(x, x);
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = -x[i] / r2;
      }
      return out;
    });
    return v;
  }
  if (name == "hyperbolic_vertical") {
    require_kind(spec, {AmbientKind::hyperbolic_half_space}, name);
    v.eval = field(m, [m](const auto& x) {
      using S = TFA_SCALAR_TYPE(x);
      Vec<S> out(m, S(0.0));
      out[m - 1] = -x[m - 1];
      return out;
    });
    v.conformal_scalar = scalar(m, [](const auto& x) {
      using S = TFA_SCALAR_TYPE(x);
      return Vec<S>{S(1.0)};
    });
    v.generating_form = field(m, [m](const auto& x) {
      using S = TFA_SCALAR_TYPE(x);
      // omega = -nu, nu = g V = -(1/x_m) dx_m
      Vec<S> out(m, S(0.0));
      out[m - 1] = S(1.0) / x[m - 1];
      return out;
    });
    return v;
  }
  if (name == "torqued_ux" || name == "torqued_graph") {
    require_kind(spec, {AmbientKind::warped_product}, name);
    std::string text = expression;
    if (name == "torqued_ux") {
      if (spec.fiber != FiberKind::flat_cartesian) fail(ErrorKind::invalid_input, "torqued_ux needs a cartesian fiber");
      text = "x";
    } else if (text.empty()) {
      // F = |y|^2 over the fiber coordinates
      const auto names = chart_coordinate_names(spec);
      for (std::size_t i = 1; i < names.size(); ++i) text += (i > 1 ? " + " : "") + names[i] + "^2";
    }
    const Expression fexpr = Expression::parse(text, chart_coordinate_names(spec));
    v.name = name == "torqued_graph" ? name + "[" + text + "]" : name;
    v.eval = field(m, [m, fexpr, warp](const auto& x) {
      using S = TFA_SCALAR_TYPE(x);
      Vec<S> out(m, S(0.0));
      out[0] = fexpr.eval(x) * warp(x[0]);
      return out;
    });
    v.conformal_scalar = scalar(m, [fexpr, warp](const auto& x) {
      using S = TFA_SCALAR_TYPE(x);
      return Vec<S>{fexpr.eval(x) * warp(Dual<S>(x[0], S(1.0))).d};
    });
    v.generating_form = field(m, [m, fexpr](const auto& x) {
      using S = TFA_SCALAR_TYPE(x);
      Vec<S> out(m, S(0.0));
      const S fv = fexpr.eval(x);
      for (int i = 1; i < m; ++i) out[i] = fexpr.eval(seed(x, i)).d / fv;
      return out;
    });
    return v;
  }
  if (name == "shear_control") {
    require_kind(spec, {AmbientKind::warped_product}, name);
    v.eval = field(m, [m](const auto& x) {
      using S = TFA_SCALAR_TYPE(x);
      Vec<S> out(m, S(0.0));
      out[0] = x[0] + x[1];
      return out;
    });
    return v;
  }
  if (name == "fiber_shear") {
    require_kind(spec, {AmbientKind::warped_product}, name);
    if (spec.fiber != FiberKind::flat_cartesian || m < 3) {
      fail(ErrorKind::invalid_input, "fiber_shear needs a cartesian fiber of dimension >= 2");
    }
    v.eval = field(m, [m](const auto& x) {
      using S = TFA_SCALAR_TYPE(x);
      Vec<S> out(m, S(0.0));
      out[0] = S(1.0);
      out[1] = x[2];
      return out;
    });
    return v;
  }
  if (name == "constant") {
    if (static_cast<int>(params.size()) != m) {
      fail(ErrorKind::invalid_input, "constant axis needs " + std::to_string(m) + " components");
    }
    v.eval = field(m, [params](const auto& x) {
      using S = TFA_SCALAR_TYPE(x);
      (void)x;
      return lift<S>(params);
    });
    return v;
  }
  fail(ErrorKind::unknown_name, "unknown axis '" + name + "'");
}

}  // namespace tfa
