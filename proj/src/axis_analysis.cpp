#include "tfa/axis_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "tfa/expr.hpp"

namespace tfa {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <class S>
struct DecompT {
  detail::FrameT<S> frame;
  Mat<S> G;
  Vec<S> V;
  S normal_component;
  S alpha;
  Vec<S> t;  // unit tangential direction, parameter coordinates
};

template <class S>
DecompT<S> decomp_t(const Immersion& imm, const VectorField& v, const Vec<S>& q) {
  DecompT<S> d;
  d.frame = detail::frame_t(imm, q);
  d.G = transpose(d.frame.jac) * (d.frame.g * d.frame.jac);
  d.V = v.eval(d.frame.x);
  d.normal_component = inner(d.frame.g, d.V, d.frame.normal);
  d.t = detail::tangent_coords(d.frame.jac, d.frame.g, d.G, d.V);
  d.alpha = sqrt(inner(d.G, d.t, d.t));
  if (primal(d.alpha) > 0.0) {
    for (S& e : d.t) e = e / d.alpha;
  }
  return d;
}


// Derivatives of a D1 decomposition along parameter i.
struct DecompDerivs {
  std::vector<double> dalpha;       // d_i alpha
  std::vector<Vec<double>> dt;      // d_i t
  std::vector<Vec<double>> dT;      // d_i (J t), ambient
  std::vector<MatD> dG;             // d_i G
};

DecompDerivs decomp_derivs(const Immersion& imm, const VectorField& v, const Vec<double>& q) {
  const int n = imm.n;
  DecompDerivs out;
  for (int i = 0; i < n; ++i) {
    const DecompT<D1> d = decomp_t(imm, v, seed(q, i));
    out.dalpha.push_back(d.alpha.d);
    out.dt.push_back(tangents_of(d.t));
    const Vec<D1> T = d.frame.jac * d.t;
    out.dT.push_back(tangents_of(T));
    MatD g(n, n);
    for (std::size_t e = 0; e < g.a.size(); ++e) g.a[e] = d.G.a[e].d;
    out.dG.push_back(g);
  }
  return out;
}

Vec<double> unit_vec(int n, int i) {
  Vec<double> e(n, 0.0);
  e[i] = 1.0;
  return e;
}

// (nabla_X t)^k = X^i (d_i t^k + Gamma^k_ij t^j), induced connection.
Vec<double> intrinsic_derivative(const ChristoffelSymbols& gn, const std::vector<Vec<double>>& dt, const Vec<double>& t,
                                 const Vec<double>& x) {
  const int n = gn.m;
  Vec<double> out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    if (x[i] == 0.0) continue;
    const Vec<double> c = gn.contract(unit_vec(n, i), t);
    for (int k = 0; k < n; ++k) out[k] += x[i] * (dt[i][k] + c[k]);
  }
  return out;
}

AxisDecomposition to_public(const DecompT<double>& d, double tol) {
  AxisDecomposition out;
  out.normal_component = d.normal_component;
  out.alpha = d.alpha;
  out.norm = std::sqrt(inner(d.frame.g, d.V, d.V));
  out.unit = std::abs(out.norm - 1.0) < 1e-8;
  out.T_defined = d.alpha >= tol;
  if (out.T_defined) {
    out.t = d.t;
    out.T = d.frame.jac * d.t;
  }
  if (out.unit) out.theta = std::acos(std::clamp(d.normal_component, -1.0, 1.0));
  // V - alpha T - <V,U> U, with alpha T = J t_raw
  Vec<double> rest = d.V;
  const Vec<double> tang = d.frame.jac * d.t;
  for (std::size_t k = 0; k < rest.size(); ++k) {
    rest[k] -= (d.alpha > 0.0 ? d.alpha * tang[k] : 0.0) + d.normal_component * d.frame.normal[k];
  }
  out.reassembly = norm_g(d.frame.g, rest);
  return out;
}

void require_T(const Immersion& imm, double alpha, double tol) {
  if (alpha < tol) {
    fail(ErrorKind::vanishing_tangential,
         imm.name + ": tangential part of the axis vanishes (alpha = " + std::to_string(alpha) + ")");
  }
}

TorseFormingFit fit_at(const Immersion& imm, const VectorField& v, const Vec<double>& x) {
  return fit_torse_forming(imm.ambient, v, Coords(x));
}

struct Reducer {
  std::vector<std::string> labels;
  std::vector<double> max;

  explicit Reducer(std::vector<std::string> l) : labels(std::move(l)), max(labels.size(), 0.0) {}
  void add(const Vec<double>& row) {
    for (std::size_t i = 0; i < max.size(); ++i) {
      const double v = std::abs(row[i]);
      if (std::isnan(v) || v > max[i]) max[i] = v;
    }
  }
};

}  // namespace

bool IdentityReport::pass() const {
  return std::all_of(entries.begin(), entries.end(), [](const IdentityEntry& e) { return e.pass(); });
}

const IdentityEntry& IdentityReport::entry(const std::string& label) const {
  for (const IdentityEntry& e : entries) {
    if (e.label == label) return e;
  }
  fail(ErrorKind::invalid_input, battery + ": no entry '" + label + "'");
}

double IdentityReport::info_value(const std::string& label) const {
  for (const auto& [k, v] : info) {
    if (k == label) return v;
  }
  fail(ErrorKind::invalid_input, battery + ": no info '" + label + "'");
}

std::vector<Vec<double>> Grid::points() const {
  std::vector<Vec<double>> pts{{}};
  for (const GridAxis& a : axes) {
    if (a.count < 1) fail(ErrorKind::invalid_input, "grid axis with no points");
    std::vector<Vec<double>> next;
    for (const Vec<double>& p : pts) {
      for (int k = 0; k < a.count; ++k) {
        Vec<double> q = p;
        q.push_back(a.count == 1 ? a.min : a.min + (a.max - a.min) * k / (a.count - 1));
        next.push_back(std::move(q));
      }
    }
    pts = std::move(next);
  }
  if (axes.empty()) fail(ErrorKind::invalid_input, "empty grid");
  return pts;
}

std::vector<Vec<double>> evaluate_grid(const std::vector<Vec<double>>& points, int threads,
                                       const std::function<Vec<double>(const Vec<double>&)>& fn) {
  std::vector<Vec<double>> out(points.size());
  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(points.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < points.size(); ++i) out[i] = fn(points[i]);
    return out;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = static_cast<std::size_t>(w); i < points.size(); i += static_cast<std::size_t>(workers)) {
          out[i] = fn(points[i]);
        }
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (std::thread& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

AxisDecomposition decompose_axis(const Immersion& imm, const VectorField& v, const Vec<double>& q, bool require,
                                 double tol) {
  imm.require(q);
  const DecompT<double> d = decomp_t(imm, v, q);
  if (require) require_T(imm, d.alpha, tol);
  return to_public(d, tol);
}

GenerativeDecomposition decompose_generative(const Immersion& imm, const Vec<double>& generative,
                                             const Vec<double>& q, double tol) {
  const detail::FrameT<double> f = detail::frame_t(imm, q);
  const MatD G = transpose(f.jac) * (f.g * f.jac);
  GenerativeDecomposition out;
  out.gamma = inner(f.g, generative, f.normal);
  out.w_tangent = detail::tangent_coords(f.jac, f.g, G, generative);
  out.beta = std::sqrt(std::max(0.0, inner(G, out.w_tangent, out.w_tangent)));
  out.T2_defined = out.beta >= tol;
  if (out.T2_defined) {
    out.t2 = scaled(out.w_tangent, 1.0 / out.beta);
    out.T2 = f.jac * out.t2;
  }
  Vec<double> rest = generative;
  const Vec<double> wt = f.jac * out.w_tangent;
  for (std::size_t k = 0; k < rest.size(); ++k) rest[k] -= wt[k] + out.gamma * f.normal[k];
  out.reassembly = norm_g(f.g, rest);
  return out;
}

IdentityReport constant_angle_report(const Immersion& imm, const VectorField& v, const Grid& grid,
                                     const BatteryOptions& opt) {
  const auto pts = grid.points();
  const auto rows = evaluate_grid(pts, opt.threads, [&](const Vec<double>& q) {
    const AxisDecomposition d = decompose_axis(imm, v, q);
    return Vec<double>{d.normal_component, d.reassembly, d.unit ? 1.0 : 0.0};
  });
  double mean = 0.0, lo = rows[0][0], hi = rows[0][0], reassembly = 0.0;
  bool unit = true;
  for (const auto& r : rows) {
    mean += r[0];
    lo = std::min(lo, r[0]);
    hi = std::max(hi, r[0]);
    reassembly = std::max(reassembly, r[1]);
    unit = unit && r[2] > 0.5;
  }
  mean /= static_cast<double>(rows.size());
  double dev = 0.0, var = 0.0;
  for (const auto& r : rows) {
    dev = std::max(dev, std::abs(r[0] - mean));
    var += (r[0] - mean) * (r[0] - mean);
  }
  IdentityReport rep;
  rep.battery = "constant_angle";
  rep.points = static_cast<int>(rows.size());
  rep.entries.push_back({"deviation", dev, opt.tol});
  rep.entries.push_back({"reassembly", reassembly, 1e-8});
  rep.info = {{"mean", mean}, {"min", lo}, {"max", hi}, {"stddev", std::sqrt(var / rows.size())}};
  if (unit) rep.info.push_back({"theta", std::acos(std::clamp(mean, -1.0, 1.0))});
  return rep;
}

AntiTorquedPoint anti_torqued_point(const Immersion& imm, const VectorField& v, const Vec<double>& q) {
  imm.require(q);
  const int n = imm.n;
  const DecompT<double> d = decomp_t(imm, v, q);
  require_T(imm, d.alpha, 1e-10);
  const TorseFormingFit fit = fit_at(imm, v, d.frame.x);
  const ShapeReport sh = shape_operator(imm, q);
  const ChristoffelSymbols gn = induced_christoffel(imm, q);
  const DecompDerivs dd = decomp_derivs(imm, v, q);
  const MatD& G = d.G;
  const Vec<double>& t = d.t;

  AntiTorquedPoint p;
  p.f = fit.f;
  p.cos_theta = d.normal_component;
  p.sin_theta = d.alpha;
  p.unit = std::abs(inner(d.frame.g, d.V, d.V) - 1.0);
  const Vec<double> at = sh.shape_matrix * t;
  p.shape_T = inner(G, at, t);
  for (int i = 0; i < n; ++i) {
    const Vec<double> e = unit_vec(n, i);
    const Vec<double> nab = intrinsic_derivative(gn, dd.dt, t, e);
    const Vec<double> ae = sh.shape_matrix * e;
    const double xt = inner(G, e, t);
    Vec<double> r(n);
    for (int k = 0; k < n; ++k) {
      r[k] = p.sin_theta * nab[k] - p.cos_theta * ae[k] - p.f * e[k] + p.f * p.sin_theta * p.sin_theta * xt * t[k];
    }
    p.r31 = std::max(p.r31, norm_g(G, r));
    p.r32 = std::max(p.r32, std::abs(inner(G, ae, t) + p.f * p.cos_theta * xt));
  }
  Vec<double> r33(n);
  for (int k = 0; k < n; ++k) r33[k] = at[k] + p.f * p.cos_theta * t[k];
  p.r33 = norm_g(G, r33);
  p.r34 = norm_g(G, intrinsic_derivative(gn, dd.dt, t, t));
  return p;
}

IdentityReport verify_anti_torqued_identities(const Immersion& imm, const VectorField& v, const Grid& grid,
                                              const BatteryOptions& opt) {
  const auto pts = grid.points();
  const auto rows = evaluate_grid(pts, opt.threads, [&](const Vec<double>& q) {
    imm.require(q);
    const Vec<double> x = imm.map(q);
    const TorseFormingFit fit = fit_at(imm, v, x);
    const AxisClass cls = classify_axis(imm.ambient, v, Coords(x), fit, opt.classify);
    if (cls.tag != AxisTag::anti_torqued) {
      fail(ErrorKind::invalid_input, "axis '" + v.name + "' is " + to_string(cls.tag) + ", not anti_torqued");
    }
    const AntiTorquedPoint p = anti_torqued_point(imm, v, q);
    return Vec<double>{p.r31, p.r32, p.r33, p.r34, p.unit, p.f, p.shape_T};
  });
  Reducer red({"eq_3_1", "eq_3_2", "eq_3_3", "eq_3_4", "unit"});
  double fmin = rows[0][5], fmax = rows[0][5];
  for (const auto& r : rows) {
    red.add(r);
    fmin = std::min(fmin, r[5]);
    fmax = std::max(fmax, r[5]);
  }
  IdentityReport rep;
  rep.battery = "anti_torqued";
  rep.points = static_cast<int>(rows.size());
  rep.entries = {{"tangential_derivative", red.max[0], 1e-7},
                 {"shape_against_T", red.max[1], 1e-7},
                 {"shape_of_T", red.max[2], 1e-7},
                 {"T_geodesic", red.max[3], 1e-7},
                 {"unit_axis", red.max[4], 1e-8}};
  rep.info = {{"f_min", fmin}, {"f_max", fmax}, {"orientation", static_cast<double>(imm.orientation)}};
  return rep;
}

IdentityReport verify_tw_condition(const SmoothMap& lambda, const SmoothMap& kappa2, const SmoothMap& f, double theta,
                                   const std::vector<double>& s_grid, double tol) {
  const double st = std::sin(theta), ct = std::cos(theta);
  if (std::abs(st) < 1e-8) {
    fail(ErrorKind::ruled_regime, "sin(theta) vanishes; use check_ruled for this configuration");
  }
  IdentityReport rep;
  rep.battery = "tw_condition";
  double worst = 0.0;
  for (double s : s_grid) {
    const D1 lam = lambda(Vec<D1>{D1(s, 1.0)})[0];
    if (!(lam.v > 0.0)) fail(ErrorKind::domain, "warping function not positive at s = " + std::to_string(s));
    const double lhs = lam.d / lam.v;
    const double rhs = (ct * kappa2(Vec<double>{s})[0] + f(Vec<double>{s})[0]) / st;
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  rep.points = static_cast<int>(s_grid.size());
  rep.entries.push_back({"tw", worst, tol});
  return rep;
}

IdentityReport tw_from_surface(const Immersion& imm, const VectorField& v, const Grid& grid,
                               const BatteryOptions& opt) {
  if (imm.n != 2) fail(ErrorKind::dimension, "tw_from_surface needs a surface (n = 2)");
  const bool space_form = imm.ambient_spec.kind != AmbientKind::warped_product;
  const auto pts = grid.points();
  const auto rows = evaluate_grid(pts, opt.threads, [&](const Vec<double>& q) {
    imm.require(q);
    const DecompT<double> d = decomp_t(imm, v, q);
    require_T(imm, d.alpha, 1e-10);
    const double st = d.alpha, ct = d.normal_component;
    if (std::abs(st) < 1e-8) fail(ErrorKind::ruled_regime, imm.name + ": sin(theta) vanishes");
    const TorseFormingFit fit = fit_at(imm, v, d.frame.x);
    const ShapeReport sh = shape_operator(imm, q);
    const Mat<D1> gd = detail::induced_metric_t(imm, seed(q, 0));
    const double gtt = gd(1, 1).v;
    const double log_lambda_s = gd(1, 1).d / (2.0 * gtt);
    const double k1 = sh.second_fundamental_form(0, 0) / d.G(0, 0);
    const double k2 = sh.second_fundamental_form(1, 1) / gtt;
    const double tw = log_lambda_s - (ct * k2 + fit.f) / st;
    Vec<double> dt = d.t;
    dt[0] -= 1.0;
    Vec<double> row{tw, d.G(0, 0) - 1.0, norm_g(d.G, dt), d.G(0, 1), 0.0, 0.0};
    if (space_form) {
      // d_s kappa2 by central differences along the arclength parameter
      const double h = std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, std::abs(q[0]));
      Vec<double> qp = q, qm = q;
      qp[0] += h;
      qm[0] -= h;
      auto kappa2_at = [&imm](const Vec<double>& x) {
        const ShapeReport r = shape_operator(imm, x);
        return r.second_fundamental_form(1, 1) / frame_at(imm, x).induced_metric(1, 1);
      };
      const double dk2 = (kappa2_at(qp) - kappa2_at(qm)) / (qp[0] - qm[0]);
      row[4] = k1 + ct * fit.f;
      row[5] = dk2 + (ct * fit.f + k2) * (ct * k2 + fit.f) / st;
    }
    return row;
  });
  Reducer red({"tw", "arclength", "alignment", "orthogonal", "kappa1", "kappa2_evolution"});
  for (const auto& r : rows) red.add(r);
  IdentityReport rep;
  rep.battery = "tw_condition";
  rep.points = static_cast<int>(rows.size());
  rep.entries = {{"tw", red.max[0], opt.tol},
                 {"arclength", red.max[1], 1e-9},
                 {"alignment", red.max[2], 1e-9},
                 {"orthogonal", red.max[3], 1e-9}};
  if (space_form) {
    rep.entries.push_back({"kappa1", red.max[4], 1e-7});
    rep.entries.push_back({"kappa2_evolution", red.max[5], 1e-6});
  }
  return rep;
}

IdentityReport verify_space_form_odes(const SmoothMap& kappa1, const SmoothMap& kappa2, const SmoothMap& f,
                                      double theta, const std::vector<double>& s_grid, double tol) {
  const double st = std::sin(theta), ct = std::cos(theta);
  if (std::abs(ct) < 1e-12) fail(ErrorKind::invalid_input, "the principal-curvature equations need cos(theta) != 0");
  if (std::abs(st) < 1e-12) fail(ErrorKind::ruled_regime, "sin(theta) vanishes");
  double r35 = 0.0, r36 = 0.0;
  for (double s : s_grid) {
    const double fs = f(Vec<double>{s})[0];
    const D1 k2 = kappa2(Vec<D1>{D1(s, 1.0)})[0];
    r35 = std::max(r35, std::abs(kappa1(Vec<double>{s})[0] + ct * fs));
    r36 = std::max(r36, std::abs(k2.d + (ct * fs + k2.v) * (ct * k2.v + fs) / st));
  }
  IdentityReport rep;
  rep.battery = "space_form_odes";
  rep.points = static_cast<int>(s_grid.size());
  rep.entries = {{"kappa1", r35, tol}, {"kappa2_evolution", r36, tol}};
  return rep;
}

IdentityReport minimal_case_check(double theta, double c, const std::vector<double>& s_grid, double tol) {
  const double ct = std::cos(theta), cot = ct / std::sin(theta);
  SmoothMap f(1, 1, [cot, c](const auto& s) {
    using S = typename std::decay_t<decltype(s)>::value_type;
    return Vec<S>{1.0 / (2.0 * cot * s[0] + c)};
  });
  SmoothMap k2(1, 1, [f, ct](const auto& s) {
    auto out = f(s);
    out[0] = ct * out[0];
    return out;
  });
  SmoothMap k1(1, 1, [k2](const auto& s) {
    auto out = k2(s);
    out[0] = -out[0];
    return out;
  });
  IdentityReport rep = verify_space_form_odes(k1, k2, f, theta, s_grid, tol);
  rep.battery = "minimal_case";
  return rep;
}

TorquedPoint torqued_point(const Immersion& imm, const VectorField& v, const Vec<double>& q) {
  imm.require(q);
  const int n = imm.n;
  const DecompT<double> d = decomp_t(imm, v, q);
  require_T(imm, d.alpha, 1e-10);
  const TorseFormingFit fit = fit_at(imm, v, d.frame.x);
  const GenerativeDecomposition gd = decompose_generative(imm, fit.generative, q);
  const ShapeReport sh = shape_operator(imm, q);
  const ChristoffelSymbols gn = induced_christoffel(imm, q);
  const DecompDerivs dd = decomp_derivs(imm, v, q);
  const MatD& G = d.G;
  const Vec<double>& t = d.t;

  TorquedPoint p;
  p.alpha = d.alpha;
  p.vartheta = d.normal_component;
  p.f = fit.f;
  p.beta = gd.beta;
  p.gamma = gd.gamma;
  p.beta_T1 = inner(G, gd.w_tangent, t);
  p.omega_norm = std::sqrt(std::max(0.0, inner(d.frame.g, fit.generative, fit.generative)));
  p.pairing = p.alpha * p.beta_T1 + p.vartheta * p.gamma;
  for (int i = 0; i < n; ++i) {
    const Vec<double> e = unit_vec(n, i);
    const Vec<double> nab = intrinsic_derivative(gn, dd.dt, t, e);
    const Vec<double> ae = sh.shape_matrix * e;
    const double wx = inner(G, e, gd.w_tangent);  // omega(X) = beta <X, T2>
    Vec<double> r(n);
    for (int k = 0; k < n; ++k) {
      r[k] = p.f * e[k] + (p.alpha * wx - dd.dalpha[i]) * t[k] - p.alpha * nab[k] + p.vartheta * ae[k];
    }
    p.t1 = std::max(p.t1, norm_g(G, r));
    p.t2 = std::max(p.t2, std::abs(p.vartheta * wx - p.alpha * inner(G, ae, t)));
  }
  p.shape_T1 = norm_g(G, sh.shape_matrix * t);
  double t_alpha = 0.0;
  for (int i = 0; i < n; ++i) t_alpha += t[i] * dd.dalpha[i];
  p.f_minus_T1_alpha = p.f - t_alpha;
  p.geodesic_T1 = norm_g(G, intrinsic_derivative(gn, dd.dt, t, t));
  return p;
}

IdentityReport verify_torqued_identities(const Immersion& imm, const VectorField& v, const Grid& grid,
                                         const BatteryOptions& opt) {
  const auto pts = grid.points();
  const auto rows = evaluate_grid(pts, opt.threads, [&](const Vec<double>& q) {
    imm.require(q);
    const Vec<double> x = imm.map(q);
    const TorseFormingFit fit = fit_at(imm, v, x);
    const AxisClass cls = classify_axis(imm.ambient, v, Coords(x), fit, opt.classify);
    if (cls.tag != AxisTag::torqued && cls.tag != AxisTag::concircular) {
      fail(ErrorKind::invalid_input, "axis '" + v.name + "' is " + to_string(cls.tag) + ", not torqued or concircular");
    }
    const TorquedPoint p = torqued_point(imm, v, q);
    return Vec<double>{p.t1,    p.t2,     p.shape_T1,   p.f_minus_T1_alpha, p.geodesic_T1, p.pairing,
                       p.alpha, p.vartheta, p.beta_T1, p.gamma,            p.omega_norm};
  });
  double amin = rows[0][6], amax = rows[0][6], vmin = rows[0][7], vmax = rows[0][7];
  double max_beta = 0.0, min_gamma = std::numeric_limits<double>::infinity(), max_omega = 0.0;
  double t1 = 0.0, t2 = 0.0, shape = 0.0, fma = 0.0, geo = 0.0, pairing = 0.0;
  for (const auto& r : rows) {
    t1 = std::max(t1, r[0]);
    t2 = std::max(t2, r[1]);
    shape = std::max(shape, r[2]);
    fma = std::max(fma, std::abs(r[3]));
    geo = std::max(geo, r[4]);
    pairing = std::max(pairing, std::abs(r[5]));
    amin = std::min(amin, r[6]);
    amax = std::max(amax, r[6]);
    vmin = std::min(vmin, r[7]);
    vmax = std::max(vmax, r[7]);
    max_beta = std::max(max_beta, std::abs(r[8]));
    min_gamma = std::min(min_gamma, std::abs(r[9]));
    max_omega = std::max(max_omega, r[10]);
  }
  const bool reduced = std::max(std::abs(vmin), std::abs(vmax)) < opt.tol;
  IdentityReport rep;
  rep.battery = "torqued";
  rep.points = static_cast<int>(rows.size());
  rep.entries = {{"tangential_derivative", t1, 1e-6},
                 {"normal_derivative", t2, 1e-6},
                 {"normal_component_constant", vmax - vmin, opt.tol},
                 {"pairing", pairing, opt.tol},
                 {"alpha_range", amax - amin, 0.1, true}};
  if (reduced) {
    rep.entries.push_back({"shape_of_T1", shape, 1e-6});
    rep.entries.push_back({"f_minus_T1_alpha", fma, 1e-7});
    rep.entries.push_back({"T1_geodesic", geo, 1e-7});
    rep.entries.push_back({"beta_along_T1", max_beta, opt.tol});
  }
  rep.info = {{"alpha_min", amin}, {"alpha_max", amax}, {"normal_component", 0.5 * (vmin + vmax)},
              {"min_abs_gamma", min_gamma}, {"max_omega", max_omega}};
  if (max_omega > opt.tol) rep.entries.push_back({"min_abs_gamma", min_gamma, opt.tol, true});
  return rep;
}

IdentityReport check_ruled(const Immersion& imm, const VectorField& v, const Grid& grid, const BatteryOptions& opt) {
  const auto pts = grid.points();
  const auto rows = evaluate_grid(pts, opt.threads, [&](const Vec<double>& q) {
    imm.require(q);
    const DecompT<double> d = decomp_t(imm, v, q);
    require_T(imm, d.alpha, 1e-10);
    const DecompDerivs dd = decomp_derivs(imm, v, q);
    const Vec<double> T = d.frame.jac * d.t;
    const ChristoffelSymbols g0 = christoffel(imm.ambient, Coords(d.frame.x));
    Vec<double> acc = g0.contract(T, T);
    for (int i = 0; i < imm.n; ++i) {
      for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += d.t[i] * dd.dT[i][k];
    }
    return Vec<double>{norm_g(d.frame.g, acc)};
  });
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max(worst, r[0]);
  IdentityReport rep;
  rep.battery = "ruled";
  rep.points = static_cast<int>(rows.size());
  rep.entries = {{"ambient_geodesic", worst, 1e-7}};
  return rep;
}

UmbilicPoint umbilic_point(const Immersion& imm, const VectorField& v, const Vec<double>& q,
                           const std::optional<ProductStructure>& product) {
  const int n = imm.n;
  if (n < 3) fail(ErrorKind::dimension, "the umbilic restriction needs intrinsic dimension >= 3");
  imm.require(q);
  const DecompT<double> d = decomp_t(imm, v, q);
  require_T(imm, d.alpha, 1e-10);
  const MatD& G = d.G;
  const Vec<double>& t = d.t;
  const ShapeReport sh = shape_operator(imm, q);
  const ChristoffelSymbols gn = induced_christoffel(imm, q);
  const DecompDerivs dd = decomp_derivs(imm, v, q);
  const TorseFormingFit fit = fit_at(imm, v, d.frame.x);

  // G-orthonormal basis of D = t^perp by Gram-Schmidt over the coordinate vectors
  std::vector<Vec<double>> basis{t};
  for (int i = 0; i < n && static_cast<int>(basis.size()) < n; ++i) {
    Vec<double> e = unit_vec(n, i);
    for (const Vec<double>& b : basis) e = axpy(e, -inner(G, e, b), b);
    const double len = norm_g(G, e);
    if (len > 1e-6) basis.push_back(scaled(e, 1.0 / len));
  }
  basis.erase(basis.begin());

  UmbilicPoint p;
  double trace = 0.0;
  for (const Vec<double>& b : basis) trace += inner(G, sh.shape_matrix * b, b);
  p.delta = trace / (n - 1);
  double mu = 0.0;
  for (const Vec<double>& b : basis) {
    p.off_multiple = std::max(p.off_multiple, norm_g(G, axpy(sh.shape_matrix * b, -p.delta, b)));
    mu += inner(G, intrinsic_derivative(gn, dd.dt, t, b), b);
  }
  p.mu = mu / (n - 1);
  for (const Vec<double>& b : basis) {
    p.leaf_umbilic = std::max(p.leaf_umbilic, norm_g(G, axpy(intrinsic_derivative(gn, dd.dt, t, b), -p.mu, b)));
  }

  // X_a = e_a - <e_a, t> t spans D; [X_a, X_b] must stay in D.
  std::vector<Vec<double>> X(n);
  std::vector<std::vector<Vec<double>>> dX(n, std::vector<Vec<double>>(n));  // dX[a][j] = d_j X_a
  for (int a = 0; a < n; ++a) {
    X[a] = axpy(unit_vec(n, a), -inner(G, unit_vec(n, a), t), t);
    for (int j = 0; j < n; ++j) {
      // d_j <e_a, t>_G = (d_j G t)_a + (G d_j t)_a
      const double dc = (dd.dG[j] * t)[a] + (G * dd.dt[j])[a];
      const double c = (G * t)[a];
      Vec<double> dx(n);
      for (int k = 0; k < n; ++k) dx[k] = -(dc * t[k] + c * dd.dt[j][k]);
      dX[a][j] = dx;
    }
  }
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      Vec<double> br(n, 0.0);
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) br[k] += X[a][j] * dX[b][j][k] - X[b][j] * dX[a][j][k];
      }
      p.frobenius = std::max(p.frobenius, std::abs(inner(G, br, t)));
    }
  }

  const double st = d.alpha, ct = d.normal_component;
  p.cot_delta_plus = ct / st * p.delta + fit.f / st;
  p.cot_delta_minus = ct / st * p.delta - fit.f / st;
  p.log_lambda_prime = kNaN;
  if (product) {
    const D1 s = product->s_of_q(seed(q, 0))[0];
    const D1 lam = product->lambda_of_s(Vec<D1>{D1(s.v, 1.0)})[0];
    if (!(lam.v > 0.0)) fail(ErrorKind::domain, "declared warping function is not positive");
    p.log_lambda_prime = lam.d / lam.v;
  }
  return p;
}

IdentityReport check_umbilic_restriction(const Immersion& imm, const VectorField& v, const Grid& grid,
                                         const std::optional<ProductStructure>& product, const BatteryOptions& opt) {
  if (imm.n < 3) fail(ErrorKind::dimension, "the umbilic restriction needs intrinsic dimension >= 3");
  const auto pts = grid.points();
  const auto rows = evaluate_grid(pts, opt.threads, [&](const Vec<double>& q) {
    const UmbilicPoint p = umbilic_point(imm, v, q, product);
    const double lp = product ? p.log_lambda_prime - p.cot_delta_plus : 0.0;
    const double lm = product ? p.log_lambda_prime - p.cot_delta_minus : 0.0;
    return Vec<double>{p.off_multiple, p.frobenius, p.leaf_umbilic, lp, lm, p.delta, p.mu - p.cot_delta_plus};
  });
  Reducer red({"off_multiple", "frobenius", "leaf_umbilic", "log_lambda", "log_lambda_minus", "delta", "mu"});
  double dmin = rows[0][5], dmax = rows[0][5];
  for (const auto& r : rows) {
    red.add(r);
    dmin = std::min(dmin, r[5]);
    dmax = std::max(dmax, r[5]);
  }
  IdentityReport rep;
  rep.battery = "umbilic_restriction";
  rep.points = static_cast<int>(rows.size());
  rep.entries = {{"off_multiple", red.max[0], 1e-7},
                 {"frobenius", red.max[1], 1e-7},
                 {"leaf_umbilic", red.max[2], 1e-7},
                 {"leaf_expansion", red.max[6], 1e-7}};
  if (product) rep.entries.push_back({"log_lambda", red.max[3], 1e-7});
  rep.info = {{"delta_min", dmin}, {"delta_max", dmax}};
  if (product) rep.info.push_back({"log_lambda_with_minus_sign", red.max[4]});
  return rep;
}

double induced_metric_residual(const Immersion& imm, const SmoothMap& target, const std::vector<Vec<double>>& points) {
  double worst = 0.0;
  for (const Vec<double>& q : points) {
    const MatD G = frame_at(imm, q).induced_metric;
    const Vec<double> want = target(q);
    if (want.size() != G.a.size()) fail(ErrorKind::dimension, "metric target has the wrong number of entries");
    for (std::size_t e = 0; e < want.size(); ++e) worst = std::max(worst, std::abs(G.a[e] - want[e]));
  }
  return worst;
}

}  // namespace tfa
