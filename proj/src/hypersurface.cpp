#include "tfa/hypersurface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tfa {

bool Immersion::in_domain(const Vec<double>& q) const {
  if (static_cast<int>(q.size()) != n) return false;
  for (int i = 0; i < n; ++i) {
    if (!(q[i] > param_box[i].first && q[i] < param_box[i].second)) return false;
  }
  if (exclusion && exclusion(q)) return false;
  return ambient.contains(map(q));
}

void Immersion::require(const Vec<double>& q) const {
  if (static_cast<int>(q.size()) != n) {
    fail(ErrorKind::dimension, name + ": expected " + std::to_string(n) + " parameters, got " +
                                   std::to_string(q.size()));
  }
  for (int i = 0; i < n; ++i) {
    if (!(q[i] > param_box[i].first && q[i] < param_box[i].second)) {
      fail(ErrorKind::domain, name + ": parameter " + std::to_string(i) + " = " + std::to_string(q[i]) +
                                  " outside (" + std::to_string(param_box[i].first) + ", " +
                                  std::to_string(param_box[i].second) + ")");
    }
  }
  if (exclusion && exclusion(q)) fail(ErrorKind::domain, name + ": parameter point excluded");
  ambient.require(map(q));
}

Immersion make_immersion(std::string name, const AmbientSpec& ambient, SmoothMap map,
                         std::vector<std::pair<double, double>> box, std::vector<std::string> param_names) {
  Immersion imm;
  imm.name = std::move(name);
  imm.ambient_spec = ambient;
  imm.ambient = build_ambient(ambient);
  imm.n = map.in_dim();
  if (map.out_dim() != imm.n + 1 || imm.ambient.dim() != imm.n + 1) {
    fail(ErrorKind::dimension, imm.name + ": a hypersurface needs n parameters in an (n+1)-dimensional ambient");
  }
  if (static_cast<int>(box.size()) != imm.n) fail(ErrorKind::dimension, imm.name + ": parameter box size");
  imm.map = std::move(map);
  imm.param_box = std::move(box);
  if (param_names.empty()) {
    for (int i = 0; i < imm.n; ++i) param_names.push_back("q" + std::to_string(i + 1));
  }
  imm.param_names = std::move(param_names);
  return imm;
}

void orient_by_reference(Immersion& imm, const Vec<double>& q) {
  if (!imm.reference_normal) return;
  imm.orientation = 1;
  const detail::FrameT<double> f = detail::frame_t(imm, q);
  const double s = inner(f.g, f.normal, (*imm.reference_normal)(q));
  if (s == 0.0) fail(ErrorKind::numerical, imm.name + ": reference normal is tangent");
  imm.orientation = s > 0.0 ? 1 : -1;
}

namespace {

void check_immersive(const Immersion& imm, const MatD& jac) {
  double scale = 0.0;
  for (double v : jac.a) scale = std::max(scale, std::abs(v));
  if (scale == 0.0 || smallest_singular_value(jac) <= 1e-10 * scale) {
    fail(ErrorKind::degenerate_immersion, imm.name + ": differential is not injective");
  }
}

}  // namespace

SurfaceFrame frame_at(const Immersion& imm, const Vec<double>& q) {
  imm.require(q);
  SurfaceFrame out;
  out.jacobian = detail::jacobian_t(imm.map, q);
  check_immersive(imm, out.jacobian);
  const detail::FrameT<double> f = detail::frame_t(imm, q);
  out.point = f.x;
  out.ambient_metric = f.g;
  out.induced_metric = transpose(f.jac) * (f.g * f.jac);
  out.normal = f.normal;
  out.orientation_sign = imm.orientation;
  return out;
}

ChristoffelSymbols induced_christoffel(const Immersion& imm, const Vec<double>& q) {
  auto metric_of = [&imm](const Vec<D1>& x) { return detail::induced_metric_t(imm, x).a; };
  return ChristoffelSymbols{imm.n, christoffel_t(metric_of, q, imm.n)};
}

MatD normal_derivatives(const Immersion& imm, const Vec<double>& q) {
  const int n = imm.n;
  const int m = n + 1;
  const SurfaceFrame fr = frame_at(imm, q);
  const ChristoffelSymbols gamma = christoffel(imm.ambient, Coords(fr.point));
  MatD out(m, n);
  for (int i = 0; i < n; ++i) {
    const detail::FrameT<D1> fd = detail::frame_t(imm, seed(q, i));
    const Vec<double> du = tangents_of(fd.normal);
    const Vec<double> corr = gamma.contract(fr.jacobian.col(i), fr.normal);
    for (int k = 0; k < m; ++k) out(k, i) = du[k] + corr[k];
  }
  return out;
}

ShapeReport shape_operator(const Immersion& imm, const Vec<double>& q) {
  const int n = imm.n;
  const SurfaceFrame fr = frame_at(imm, q);
  const MatD dn = normal_derivatives(imm, q);
  ShapeReport rep;
  rep.shape_matrix = MatD(n, n);
  for (int i = 0; i < n; ++i) {
    Vec<double> a = dn.col(i);
    for (double& v : a) v = -v;
    rep.normal_leak = std::max(rep.normal_leak, std::abs(inner(fr.ambient_metric, a, fr.normal)));
    const Vec<double> t = detail::tangent_coords(fr.jacobian, fr.ambient_metric, fr.induced_metric, a);
    for (int j = 0; j < n; ++j) rep.shape_matrix(j, i) = t[j];
  }
  const MatD& gi = fr.induced_metric;
  rep.second_fundamental_form = gi * rep.shape_matrix;
  MatD& b = rep.second_fundamental_form;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) rep.self_adjoint_residual = std::max(rep.self_adjoint_residual, std::abs(b(i, j) - b(j, i)));
  }
  // Symmetric problem C = L^{-1} B L^{-T} with G = L L^T; directions L^{-T} y.
  const MatD l = cholesky(gi);
  MatD linv(n, n);
  for (int c = 0; c < n; ++c) {
    Vec<double> e(n, 0.0);
    e[c] = 1.0;
    // forward substitution L x = e
    Vec<double> x(n, 0.0);
    for (int r = 0; r < n; ++r) {
      double s = e[r];
      for (int k = 0; k < r; ++k) s -= l(r, k) * x[k];
      x[r] = s / l(r, r);
    }
    for (int r = 0; r < n; ++r) linv(r, c) = x[r];
  }
  MatD bs(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) bs(i, j) = 0.5 * (b(i, j) + b(j, i));
  }
  MatD c = linv * (bs * transpose(linv));
  const EigenPairs eig = jacobi_eigen(c);
  rep.principal_curvatures = eig.values;
  rep.principal_directions = transpose(linv) * eig.vectors;
  double trace = 0.0;
  for (double k : eig.values) trace += k;
  rep.mean_curvature = trace / n;
  return rep;
}

Vec<double> apply_shape(const ShapeReport& rep, const Vec<double>& t) { return rep.shape_matrix * t; }

namespace {

// d_i S (all of the shape matrix) by central differences along parameter i.
MatD shape_partial(const Immersion& imm, const Vec<double>& q, int i) {
  const double h = std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, std::abs(q[i]));
  Vec<double> qp = q, qm = q;
  qp[i] += h;
  qm[i] -= h;
  const MatD sp = shape_operator(imm, qp).shape_matrix;
  const MatD sm = shape_operator(imm, qm).shape_matrix;
  MatD d(imm.n, imm.n);
  for (std::size_t e = 0; e < d.a.size(); ++e) d.a[e] = (sp.a[e] - sm.a[e]) / (qp[i] - qm[i]);
  return d;
}

// (nabla_{e_i} A) e_j in parameter coordinates.
Vec<double> covariant_shape(const Immersion& imm, const ChristoffelSymbols& gn, const MatD& s, const MatD& ds_i,
                            int i, int j) {
  const int n = imm.n;
  Vec<double> out(n, 0.0);
  for (int k = 0; k < n; ++k) {
    double v = ds_i(k, j);
    for (int l = 0; l < n; ++l) v += gn(k, i, l) * s(l, j) - s(k, l) * gn(l, i, j);
    out[k] = v;
  }
  return out;
}

}  // namespace

double codazzi_residual(const Immersion& imm, const Vec<double>& q, int i, int j) {
  const int n = imm.n;
  if (i < 0 || j < 0 || i >= n || j >= n) fail(ErrorKind::dimension, "codazzi_residual: index out of range");
  const SurfaceFrame fr = frame_at(imm, q);
  const MatD s = shape_operator(imm, q).shape_matrix;
  const ChristoffelSymbols gn = induced_christoffel(imm, q);
  const MatD dsi = shape_partial(imm, q, i);
  const MatD dsj = shape_partial(imm, q, j);
  const Vec<double> lhs_i = covariant_shape(imm, gn, s, dsj, j, i);  // (nabla_{e_j} A) e_i
  const Vec<double> lhs_j = covariant_shape(imm, gn, s, dsi, i, j);  // (nabla_{e_i} A) e_j
  const RiemannTensor r = riemann(imm.ambient, Coords(fr.point));
  const Vec<double> ru = r.apply(fr.jacobian.col(i), fr.jacobian.col(j), fr.normal);
  const Vec<double> rt = detail::tangent_coords(fr.jacobian, fr.ambient_metric, fr.induced_metric, ru);
  Vec<double> diff(n);
  for (int k = 0; k < n; ++k) diff[k] = rt[k] - (lhs_i[k] - lhs_j[k]);
  return norm_g(fr.induced_metric, diff);
}

double gauss_formula_residual(const Immersion& imm, const Vec<double>& q) {
  const int n = imm.n;
  const int m = n + 1;
  const SurfaceFrame fr = frame_at(imm, q);
  const MatD b = shape_operator(imm, q).second_fundamental_form;
  const ChristoffelSymbols g0 = christoffel(imm.ambient, Coords(fr.point));
  const ChristoffelSymbols gn = induced_christoffel(imm, q);
  const Vec<double> hess = hessian(imm.map, q);  // ((r*n + a)*n + b)
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Vec<double> w = g0.contract(fr.jacobian.col(i), fr.jacobian.col(j));
      for (int r = 0; r < m; ++r) {
        double v = w[r] + hess[(r * n + i) * n + j];
        for (int k = 0; k < n; ++k) v -= fr.jacobian(r, k) * gn(k, i, j);
        v -= b(j, i) * fr.normal[r];
        w[r] = v;
      }
      worst = std::max(worst, norm_g(fr.ambient_metric, w));
    }
  }
  return worst;
}

}  // namespace tfa
