#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "tfa/ambient.hpp"
#include "tfa/metric.hpp"

using namespace tfa;

namespace {

AmbientSpec euclid(int m) { return {AmbientKind::euclidean, m}; }
AmbientSpec hyperbolic(int m) { return {AmbientKind::hyperbolic_half_space, m}; }
AmbientSpec warped(int m, WarpFunction w = WarpFunction::identity()) {
  AmbientSpec s{AmbientKind::warped_product, m, w};
  if (w.kind() == WarpFunction::Kind::exponential || w.kind() == WarpFunction::Kind::constant) {
    s.u_min = -std::numeric_limits<double>::infinity();
  }
  return s;
}

std::vector<AmbientSpec> catalog() {
  return {euclid(3),
          euclid(4),
          {AmbientKind::euclidean_punctured, 3},
          hyperbolic(2),
          hyperbolic(3),
          hyperbolic(4),
          warped(3),
          warped(4),
          warped(4, WarpFunction::exponential()),
          warped(3, WarpFunction::constant(1.0)),
          warped(3, WarpFunction::spline({0.5, 1.0, 2.0, 3.0}, {0.8, 1.0, 1.7, 2.1})),
          [] {
            AmbientSpec s = warped(4);
            s.fiber = FiberKind::flat_spherical;
            return s;
          }(),
          [] {
            AmbientSpec s = warped(3);
            s.fiber = FiberKind::round_sphere;
            return s;
          }()};
}

}  // namespace

TEST_CASE("christoffel symbols: closed-form examples") {
  SUBCASE("euclidean R^3 is flat") {
    const auto g = christoffel(build_ambient(euclid(3)), {0.3, -1.0, 2.0});
    for (double v : g.gamma) CHECK(v == 0.0);
  }
  SUBCASE("hyperbolic half-plane at (0,1)") {
    const auto g = christoffel(build_ambient(hyperbolic(2)), {0.0, 1.0});
    CHECK(g(1, 0, 0) == doctest::Approx(1.0));
    CHECK(g(0, 0, 1) == doctest::Approx(-1.0));
    CHECK(g(0, 1, 0) == doctest::Approx(-1.0));
    CHECK(g(1, 1, 1) == doctest::Approx(-1.0));
    CHECK(g(0, 0, 0) == doctest::Approx(0.0));
  }
  SUBCASE("warped du^2 + u^2 dx^2 at u = 2") {
    const auto g = christoffel(build_ambient(warped(2)), {2.0, 0.4});
    CHECK(g(1, 0, 1) == doctest::Approx(0.5));
    CHECK(g(0, 1, 1) == doctest::Approx(-2.0));
  }
}

TEST_CASE("christoffel errors") {
  CHECK_THROWS_AS(christoffel(build_ambient(hyperbolic(3)), {0.0, 0.0, -1.0}), Error);
  try {
    christoffel(build_ambient(hyperbolic(3)), {0.0, 0.0, -1.0});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::domain);
  }
  // a metric that degenerates at x = 0
  MetricField degenerate(2, SmoothMap(2, 4, [](const auto& x) {
                           using S = typename std::decay_t<decltype(x)>::value_type;
                           return Vec<S>{x[0] * x[0], S(0.0), S(0.0), S(1.0)};
                         }),
                         nullptr);
  try {
    christoffel(degenerate, {0.0, 1.0});
    FAIL("expected non-invertible metric");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::non_invertible_metric);
  }
}

TEST_CASE("catalog metrics: symmetry, positivity, compatibility, FD agreement") {
  std::mt19937_64 rng(1234);
  for (const AmbientSpec& spec : catalog()) {
    const MetricField metric = build_ambient(spec);
    CAPTURE(to_string(spec.kind));
    CAPTURE(spec.dim);
    for (int trial = 0; trial < 100; ++trial) {
      const auto p = sample_domain_point(spec, rng);
      REQUIRE(metric.contains(p));
      const MatD g = metric.eval(p);
      for (int i = 0; i < g.rows; ++i)
        for (int j = 0; j < g.rows; ++j) CHECK(g(i, j) == g(j, i));
      CHECK_NOTHROW(cholesky(g));
      CHECK(metric_compatibility_residual(metric, p) < 1e-8);

      const oracle::Fn gf = [&](const std::vector<double>& x) { return metric.components()(x); };
      for (int k = 0; k < metric.dim(); ++k) {
        const auto fd = oracle::central_difference(gf, p, k);
        const Vec<D1> ad = metric.components()(seed(p, k));
        for (std::size_t e = 0; e < fd.size(); ++e) CHECK(oracle::rel_err(ad[e].d, fd[e]) < 1e-5);
      }
    }
  }
}

TEST_CASE("riemann tensor: antisymmetry and first Bianchi identity") {
  std::mt19937_64 rng(99);
  for (const AmbientSpec& spec : catalog()) {
    const MetricField metric = build_ambient(spec);
    const int m = metric.dim();
    for (int trial = 0; trial < 10; ++trial) {
      const auto p = sample_domain_point(spec, rng);
      const RiemannTensor r = riemann(metric, p);
      double bianchi = 0.0;
      for (int l = 0; l < m; ++l)
        for (int k = 0; k < m; ++k)
          for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
              CHECK(r(l, k, i, j) == -r(l, k, j, i));
              // R^l_{kij} + R^l_{ijk} + R^l_{jki} = 0
              bianchi = std::max(bianchi, std::abs(r(l, k, i, j) + r(l, i, j, k) + r(l, j, k, i)));
            }
      CHECK(bianchi < 1e-8);
    }
  }
}

TEST_CASE("curvature and sectional curvature") {
  SUBCASE("flat space") {
    const MetricField e4 = build_ambient(euclid(4));
    const auto r = curvature(e4, {0.1, 0.2, 0.3, 0.4}, {1, 0, 2, 0}, {0, 1, 0, 3}, {1, 1, 1, 1});
    for (double v : r) CHECK(v == 0.0);
  }
  SUBCASE("X = Y gives zero") {
    const MetricField h3 = build_ambient(hyperbolic(3));
    const auto r = curvature(h3, {0.1, 0.2, 1.3}, {1, 2, 3}, {1, 2, 3}, {0.5, -1, 2});
    for (double v : r) CHECK(std::abs(v) < 1e-14);
  }
  SUBCASE("H^3 plane (d1, d2) at (0,0,1)") {
    CHECK(sectional_curvature(build_ambient(hyperbolic(3)), {0, 0, 1}, {1, 0, 0}, {0, 1, 0}) ==
          doctest::Approx(-1.0));
  }
  SUBCASE("warped I x_u R^3, fiber plane at u = 2") {
    CHECK(sectional_curvature(build_ambient(warped(4)), {2.0, 0.1, 0.2, 0.3}, {0, 1, 0, 0}, {0, 0, 1, 0}) ==
          doctest::Approx(-0.25));
  }
  SUBCASE("degenerate plane") {
    try {
      sectional_curvature(build_ambient(euclid(3)), {0, 0, 0}, {1, 2, 3}, {2, 4, 6});
      FAIL("expected degenerate plane");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::degenerate_plane);
    }
  }
}

TEST_CASE("space forms have constant sectional curvature, basis independent") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  for (auto [spec, c] : {std::pair{euclid(3), 0.0}, std::pair{euclid(4), 0.0}, std::pair{hyperbolic(3), -1.0},
                         std::pair{hyperbolic(4), -1.0}}) {
    const MetricField metric = build_ambient(spec);
    for (int trial = 0; trial < 50; ++trial) {
      const auto p = sample_domain_point(spec, rng);
      Vec<double> u(spec.dim), v(spec.dim);
      for (double& x : u) x = normal(rng);
      for (double& x : v) x = normal(rng);
      const double k = sectional_curvature(metric, p, u, v);
      CHECK(std::abs(k - c) < 1e-7);
      // change of basis of the same plane
      const double a = normal(rng), b = normal(rng), cc = normal(rng), d = normal(rng) + 3.0;
      Vec<double> u2(spec.dim), v2(spec.dim);
      for (int i = 0; i < spec.dim; ++i) {
        u2[i] = a * u[i] + b * v[i];
        v2[i] = cc * u[i] + d * v[i];
      }
      if (std::abs(a * d - b * cc) > 0.1) CHECK(std::abs(sectional_curvature(metric, p, u2, v2) - k) < 1e-7);
    }
  }
}
