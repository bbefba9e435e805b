#include "tfa/ambient.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tfa {

const char* to_string(AmbientKind kind) {
  switch (kind) {
    case AmbientKind::euclidean: return "euclidean";
    case AmbientKind::euclidean_punctured: return "euclidean_punctured";
    case AmbientKind::hyperbolic_half_space: return "hyperbolic_half_space";
    case AmbientKind::warped_product: return "warped_product";
  }
  return "?";
}

const char* to_string(FiberKind kind) {
  switch (kind) {
    case FiberKind::flat_cartesian: return "flat_cartesian";
    case FiberKind::flat_spherical: return "flat_spherical";
    case FiberKind::round_sphere: return "round_sphere";
  }
  return "?";
}

AmbientKind parse_ambient_kind(const std::string& name) {
  for (AmbientKind k : {AmbientKind::euclidean, AmbientKind::euclidean_punctured,
                        AmbientKind::hyperbolic_half_space, AmbientKind::warped_product}) {
    if (name == to_string(k)) return k;
  }
  fail(ErrorKind::unknown_name, "unknown ambient kind '" + name + "'");
}

FiberKind parse_fiber_kind(const std::string& name) {
  for (FiberKind k : {FiberKind::flat_cartesian, FiberKind::flat_spherical, FiberKind::round_sphere}) {
    if (name == to_string(k)) return k;
  }
  fail(ErrorKind::unknown_name, "unknown fiber kind '" + name + "'");
}

WarpFunction WarpFunction::constant(double c) {
  WarpFunction w(Kind::constant);
  w.params_ = {c};
  return w;
}

WarpFunction WarpFunction::spline(std::vector<double> knots, std::vector<double> values) {
  const std::size_t n = knots.size();
  if (n < 2 || values.size() != n) fail(ErrorKind::invalid_input, "spline warp needs >= 2 matching knots/values");
  for (std::size_t i = 1; i < n; ++i)
    if (!(knots[i] > knots[i - 1])) fail(ErrorKind::invalid_input, "spline knots must be strictly increasing");

  // Natural spline second derivatives by the Thomas algorithm.
  std::vector<double> h(n - 1), m(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) h[i] = knots[i + 1] - knots[i];
  if (n > 2) {
    std::vector<double> diag(n - 2), rhs(n - 2);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      diag[i - 1] = 2.0 * (h[i - 1] + h[i]);
      rhs[i - 1] = 6.0 * ((values[i + 1] - values[i]) / h[i] - (values[i] - values[i - 1]) / h[i - 1]);
    }
    for (std::size_t i = 1; i < n - 2; ++i) {
      const double f = h[i] / diag[i - 1];
      diag[i] -= f * h[i];
      rhs[i] -= f * rhs[i - 1];
    }
    for (std::size_t i = n - 2; i-- > 0;) {
      double r = rhs[i];
      if (i + 1 < n - 2) r -= h[i + 1] * m[i + 2];
      m[i + 1] = r / diag[i];
    }
  }
  WarpFunction w(Kind::spline);
  w.params_.insert(w.params_.end(), knots.begin(), knots.end());
  w.params_.insert(w.params_.end(), values.begin(), values.end());
  w.knots_ = knots;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    w.a_.push_back(values[i]);
    w.b_.push_back((values[i + 1] - values[i]) / h[i] - h[i] * (2.0 * m[i] + m[i + 1]) / 6.0);
    w.c_.push_back(m[i] / 2.0);
    w.d_.push_back((m[i + 1] - m[i]) / (6.0 * h[i]));
  }
  return w;
}

WarpFunction WarpFunction::from_name(const std::string& name, const std::vector<double>& params) {
  if (name == "u") return identity();
  if (name == "exp") return exponential();
  if (name == "constant") {
    if (params.size() != 1) fail(ErrorKind::invalid_input, "constant warp takes one parameter");
    return constant(params[0]);
  }
  if (name == "spline") {
    if (params.size() % 2 != 0) fail(ErrorKind::invalid_input, "spline warp params are knots followed by values");
    const auto half = static_cast<std::ptrdiff_t>(params.size() / 2);
    return spline({params.begin(), params.begin() + half}, {params.begin() + half, params.end()});
  }
  fail(ErrorKind::unknown_name, "unknown warp function '" + name + "'");
}

std::string WarpFunction::name() const {
  switch (kind_) {
    case Kind::identity: return "u";
    case Kind::exponential: return "exp";
    case Kind::constant: return "constant";
    case Kind::spline: return "spline";
  }
  return "?";
}

namespace {

int fiber_dim(const AmbientSpec& spec) { return spec.dim - 1; }

// Fiber metric diagonal in fiber coordinates y.
template <class S>
Vec<S> fiber_diagonal(FiberKind fiber, const Vec<S>& y) {
  const std::size_t k = y.size();
  Vec<S> d(k, S(1.0));
  switch (fiber) {
    case FiberKind::flat_cartesian:
      break;
    case FiberKind::flat_spherical: {
      const S r2 = y[0] * y[0];
      const S s = sin(y[1]);
      d[1] = r2;
      d[2] = r2 * s * s;
      break;
    }
    case FiberKind::round_sphere: {
      S acc(1.0);
      for (std::size_t i = 1; i < k; ++i) {
        const S s = sin(y[i - 1]);
        acc = acc * s * s;
        d[i] = acc;
      }
      break;
    }
  }
  return d;
}

bool fiber_contains(FiberKind fiber, const Vec<double>& y) {
  switch (fiber) {
    case FiberKind::flat_cartesian: return true;
    case FiberKind::flat_spherical: return y[0] > 0.0 && y[1] > 0.0 && y[1] < std::numbers::pi;
    case FiberKind::round_sphere:
      for (std::size_t i = 0; i + 1 < y.size(); ++i)
        if (!(y[i] > 0.0 && y[i] < std::numbers::pi)) return false;
      return true;
  }
  return false;
}

void check_spec(const AmbientSpec& spec) {
  if (spec.dim < 2) fail(ErrorKind::invalid_input, "ambient dimension must be >= 2");
  if (spec.kind != AmbientKind::warped_product) return;
  if (spec.fiber == FiberKind::flat_spherical && spec.dim != 4) {
    fail(ErrorKind::invalid_input, "flat_spherical fiber requires ambient dimension 4");
  }
  if (!(spec.u_max > spec.u_min)) fail(ErrorKind::invalid_input, "empty base interval");
  double lo = std::max(spec.u_min, -50.0);
  double hi = std::min(spec.u_max, 50.0);
  if (spec.warp.kind() == WarpFunction::Kind::spline) {
    lo = std::max(lo, spec.warp.knots().front());
    hi = std::min(hi, spec.warp.knots().back());
  }
  if (!(hi > lo)) fail(ErrorKind::invalid_input, "base interval does not meet the warp's support");
  constexpr int kSamples = 257;
  for (int i = 1; i < kSamples; ++i) {
    const double u = lo + (hi - lo) * i / kSamples;
    const double p = spec.warp(u);
    if (!(p > 0.0)) {
      fail(ErrorKind::invalid_input,
           "warp function is not positive at u = " + std::to_string(u) + " (p = " + std::to_string(p) + ")");
    }
  }
}

}  // namespace

MetricField build_fiber(const AmbientSpec& spec) {
  if (spec.kind != AmbientKind::warped_product) fail(ErrorKind::invalid_input, "only warped products have a fiber");
  const int k = fiber_dim(spec);
  const FiberKind fiber = spec.fiber;
  SmoothMap g(k, k * k, [k, fiber](const auto& y) {
    using S = typename std::decay_t<decltype(y)>::value_type;
    Vec<S> out(static_cast<std::size_t>(k * k), S(0.0));
    const Vec<S> d = fiber_diagonal(fiber, y);
    for (int i = 0; i < k; ++i) out[i * k + i] = d[i];
    return out;
  });
  return MetricField(k, std::move(g), [fiber](const Vec<double>& y) { return fiber_contains(fiber, y); },
                     std::string("fiber:") + to_string(fiber));
}

MetricField build_ambient(const AmbientSpec& spec) {
  check_spec(spec);
  const int m = spec.dim;
  switch (spec.kind) {
    case AmbientKind::euclidean:
    case AmbientKind::euclidean_punctured: {
      SmoothMap g(m, m * m, [m](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::value_type;
        Vec<S> out(static_cast<std::size_t>(m * m), S(0.0));
        for (int i = 0; i < m; ++i) out[i * m + i] = S(1.0);
        return out;
      });
      if (spec.kind == AmbientKind::euclidean) {
        return MetricField(m, std::move(g), nullptr, "euclidean");
      }
      return MetricField(
          m, std::move(g), [](const Vec<double>& x) { return norm2(x) > 1e-12; }, "euclidean_punctured");
    }
    case AmbientKind::hyperbolic_half_space: {
      SmoothMap g(m, m * m, [m](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::value_type;
        Vec<S> out(static_cast<std::size_t>(m * m), S(0.0));
        const S c = 1.0 / (x[m - 1] * x[m - 1]);
        for (int i = 0; i < m; ++i) out[i * m + i] = c;
        return out;
      });
      return MetricField(
          m, std::move(g), [m](const Vec<double>& x) { return x[m - 1] > 0.0; }, "hyperbolic_half_space");
    }
    case AmbientKind::warped_product: {
      const WarpFunction warp = spec.warp;
      const FiberKind fiber = spec.fiber;
      double lo = spec.u_min, hi = spec.u_max;
      if (warp.kind() == WarpFunction::Kind::spline) {
        lo = std::max(lo, warp.knots().front());
        hi = std::min(hi, warp.knots().back());
      }
      SmoothMap g(m, m * m, [m, warp, fiber](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::value_type;
        Vec<S> out(static_cast<std::size_t>(m * m), S(0.0));
        const S p = warp(x[0]);
        const Vec<S> d = fiber_diagonal(fiber, Vec<S>(x.begin() + 1, x.end()));
        out[0] = S(1.0);
        for (int i = 1; i < m; ++i) out[i * m + i] = p * p * d[i - 1];
        return out;
      });
      auto domain = [lo, hi, warp, fiber](const Vec<double>& x) {
        if (!(x[0] > lo && x[0] < hi)) return false;
        if (!(warp(x[0]) > 0.0)) return false;
        return fiber_contains(fiber, Vec<double>(x.begin() + 1, x.end()));
      };
      return MetricField(m, std::move(g), std::move(domain), "warped_product");
    }
  }
  fail(ErrorKind::unknown_name, "unknown ambient kind");
}

double WarpReport::max() const { return std::max({base_base, mixed, fiber_tangential, fiber_normal}); }

WarpReport verify_warp_connection(const AmbientSpec& spec, const std::vector<Coords>& samples) {
  if (spec.kind != AmbientKind::warped_product) {
    fail(ErrorKind::invalid_input, "warped-product connection check needs a warped_product ambient");
  }
  const MetricField metric = build_ambient(spec);
  const MetricField fiber = build_fiber(spec);
  const int m = spec.dim;
  WarpReport rep;
  for (const Coords& p : samples) {
    const ChristoffelSymbols gam = christoffel(metric, p);
    const Vec<double> y(p.values.begin() + 1, p.values.end());
    const ChristoffelSymbols gam_f = christoffel(fiber, Coords(y));
    const MatD gf = fiber.eval(Coords(y));
    const D1 pd = spec.warp(D1(p[0], 1.0));
    const double lam = pd.v, dlam = pd.d;

    // (i) nabla_{d_u} d_u is the lift of the (flat) base connection: zero.
    for (int c = 0; c < m; ++c) rep.base_base = std::max(rep.base_base, std::abs(gam(c, 0, 0)));
    // (ii) nabla_{d_u} d_a = nabla_{d_a} d_u = (d_u log lambda) d_a
    for (int a = 1; a < m; ++a) {
      for (int c = 0; c < m; ++c) {
        const double expect = (c == a) ? dlam / lam : 0.0;
        rep.mixed = std::max({rep.mixed, std::abs(gam(c, 0, a) - expect), std::abs(gam(c, a, 0) - expect)});
      }
    }
    for (int a = 1; a < m; ++a) {
      for (int b = 1; b < m; ++b) {
        // (iii) fiber components equal the fiber's own connection
        for (int c = 1; c < m; ++c) {
          rep.fiber_tangential =
              std::max(rep.fiber_tangential, std::abs(gam(c, a, b) - gam_f(c - 1, a - 1, b - 1)));
        }
        // (iv) normal part is -(<d_a, d_b>/lambda) grad lambda, grad lambda = lambda' d_u
        const double gab = lam * lam * gf(a - 1, b - 1);
        rep.fiber_normal = std::max(rep.fiber_normal, std::abs(gam(0, a, b) + gab / lam * dlam));
      }
    }
    ++rep.samples;
  }
  return rep;
}

std::vector<double> sample_domain_point(const AmbientSpec& spec, std::mt19937_64& rng) {
  auto uni = [&rng](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
  const int m = spec.dim;
  std::vector<double> x(m);
  switch (spec.kind) {
    case AmbientKind::euclidean:
      for (double& v : x) v = uni(-2.0, 2.0);
      break;
    case AmbientKind::euclidean_punctured:
      do {
        for (double& v : x) v = uni(-2.0, 2.0);
      } while (norm2(x) < 0.1);
      break;
    case AmbientKind::hyperbolic_half_space:
      for (double& v : x) v = uni(-2.0, 2.0);
      x[m - 1] = uni(0.2, 3.0);
      break;
    case AmbientKind::warped_product: {
      double lo = std::max(spec.u_min, -2.0), hi = std::min(spec.u_max, 3.0);
      if (spec.warp.kind() == WarpFunction::Kind::spline) {
        lo = std::max(lo, spec.warp.knots().front());
        hi = std::min(hi, spec.warp.knots().back());
      }
      const double pad = 0.05 * (hi - lo);
      if (spec.u_min >= 0.0) lo = std::max(lo, 0.2);
      x[0] = uni(lo + pad, hi - pad);
      switch (spec.fiber) {
        case FiberKind::flat_cartesian:
          for (int i = 1; i < m; ++i) x[i] = uni(-2.0, 2.0);
          break;
        case FiberKind::flat_spherical:
          x[1] = uni(0.2, 2.0);
          x[2] = uni(0.2, std::numbers::pi - 0.2);
          x[3] = uni(-std::numbers::pi, std::numbers::pi);
          break;
        case FiberKind::round_sphere:
          for (int i = 1; i < m; ++i) x[i] = uni(0.2, std::numbers::pi - 0.2);
          if (m > 1) x[m - 1] = uni(-std::numbers::pi, std::numbers::pi);
          break;
      }
      break;
    }
  }
  return x;
}

}  // namespace tfa
