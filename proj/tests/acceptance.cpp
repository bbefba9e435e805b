// Acceptance run: one PASS/FAIL line per criterion.
//
// Exit status is 0 when every criterion lands where the deviation record says
// it should: green ones pass, and the ones recorded red still fail for the
// recorded reason. Any other outcome (including a recorded-red criterion that
// starts passing) exits 1.

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "tfa/axis_analysis.hpp"
#include "tfa/reconstruct.hpp"
#include "tfa/surfaces.hpp"

using namespace tfa;

namespace {

constexpr double kPi = std::numbers::pi;

struct Result {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    detail << (detail.tellp() > 0 ? "; " : "") << (ok ? "" : "[x] ") << what;
  }
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

AmbientSpec warped(int m, WarpFunction w = WarpFunction::identity(), FiberKind fiber = FiberKind::flat_cartesian) {
  AmbientSpec s{AmbientKind::warped_product, m, w};
  s.fiber = fiber;
  if (w.kind() != WarpFunction::Kind::identity) s.u_min = -3.0;
  return s;
}

int cli_exit(const std::string& args) {
  const std::string cmd = std::string(TFA_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

// 1. warped-product connection identities
void criterion1(Result& r) {
  std::mt19937_64 rng(101);
  const std::pair<const char*, WarpFunction> warps[] = {
      {"u", WarpFunction::identity()}, {"e^u", WarpFunction::exponential()}, {"1", WarpFunction::constant(1.0)}};
  for (const auto& [label, w] : warps) {
    const AmbientSpec s = warped(4, w);
    std::vector<Coords> pts;
    for (int i = 0; i < 200; ++i) pts.emplace_back(sample_domain_point(s, rng));
    const WarpReport rep = verify_warp_connection(s, pts);
    r.require(rep.max() < 1e-8 && rep.samples == 200, std::string("p = ") + label + ": max " + sci(rep.max()));
  }
}

// 2. axis classification against closed forms, 100 random points each
void criterion2(Result& r) {
  std::mt19937_64 rng(202);
  struct Case {
    const char* label;
    std::string axis;
    AmbientSpec spec;
    AxisTag tag;
    std::function<double(const Vec<double>&)> f;
    std::function<Vec<double>(const Vec<double>&)> omega;  // empty: not compared
  };
  const std::vector<Case> cases = {
      {"d_u, p = u", "warped_base_unit", warped(3), AxisTag::anti_torqued, [](const Vec<double>& x) { return 1.0 / x[0]; },
       {}},
      {"d_u, p = e^u", "warped_base_unit", warped(3, WarpFunction::exponential()), AxisTag::anti_torqued,
       [](const Vec<double>&) { return 1.0; }, {}},
      {"Phi/|Phi|", "radial_unit", {AmbientKind::euclidean_punctured, 3}, AxisTag::anti_torqued,
       [](const Vec<double>& x) { return 1.0 / std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]); }, {}},
      {"-x_m d_m", "hyperbolic_vertical", {AmbientKind::hyperbolic_half_space, 3}, AxisTag::anti_torqued,
       [](const Vec<double>&) { return 1.0; }, {}},
      {"u d_u", "base_concircular", warped(3), AxisTag::concircular, [](const Vec<double>&) { return 1.0; },
       [](const Vec<double>&) { return Vec<double>{0.0, 0.0, 0.0}; }},
      {"u x d_u", "torqued_ux", warped(4), AxisTag::torqued, [](const Vec<double>& x) { return x[1]; },
       [](const Vec<double>& x) { return Vec<double>{0.0, 1.0 / x[1], 0.0, 0.0}; }},
  };
  for (const Case& c : cases) {
    const MetricField g = build_ambient(c.spec);
    const VectorField v = axis_catalog(c.axis, {}, c.spec);
    double worst = 0.0;
    int wrong = 0;
    for (int i = 0; i < 100; ++i) {
      Vec<double> x = sample_domain_point(c.spec, rng);
      if (c.axis == "torqued_ux" && std::abs(x[1]) < 0.05) x[1] = 0.5;  // omega = dx/x needs x != 0
      const TorseFormingFit fit = fit_torse_forming(g, v, Coords(x));
      wrong += classify_axis(g, v, Coords(x), fit).tag != c.tag;
      worst = std::max(worst, std::abs(fit.f - c.f(x)));
      if (c.omega) {
        const Vec<double> om = c.omega(x);
        for (std::size_t k = 0; k < om.size(); ++k) worst = std::max(worst, std::abs(fit.omega[k] - om[k]));
      }
    }
    r.require(wrong == 0 && worst < 1e-7, std::string(c.label) + " " + to_string(c.tag) + " err " + sci(worst));
  }
}

// 3. wapr surface, theta = pi/4
void criterion3(Result& r) {
  const double th = kPi / 4;
  const AmbientSpec s = warped(3);
  const Immersion imm = make_surface("wapr_surface", {th}, s);
  const VectorField v = axis_catalog("warped_base_unit", {}, s);
  const Grid grid{{{0.5, 3.0, 11}, {-1.0, 1.0, 5}}};
  const IdentityReport ca = constant_angle_report(imm, v, grid);
  r.require(ca.entry("deviation").value < 1e-9, "<U,V> deviation " + sci(ca.entry("deviation").value));
  double kerr = 0.0, lerr = 0.0;
  for (const Vec<double>& q : grid.points()) {
    const ShapeReport sh = shape_operator(imm, q);
    for (double k : sh.principal_curvatures) kerr = std::max(kerr, std::abs(k + std::cos(th) / std::sin(th) / q[0]));
    lerr = std::max(lerr, std::abs(std::sqrt(frame_at(imm, q).induced_metric(1, 1)) - std::sin(th) * q[0]));
  }
  r.require(kerr < 1e-7, "kappa = -cot(theta)/s err " + sci(kerr));
  const double k2 = shape_operator(imm, {2.0, 0.0}).principal_curvatures[1];
  r.require(std::abs(k2 + 0.5) < 1e-7, "kappa(2) = " + sci(k2));
  r.require(lerr < 1e-9, "lambda = sin(theta) s err " + sci(lerr));
  const double tw = tw_from_surface(imm, v, grid).entry("tw").value;
  r.require(tw < 1e-9, "tw residual " + sci(tw));
}

// 4. constant-slope surface, theta = pi/4, s in [1, 2]
void criterion4(Result& r) {
  const double th = kPi / 4, c = std::cos(th) / std::sin(th);
  const AmbientSpec s{AmbientKind::euclidean_punctured, 3};
  const Immersion imm = make_surface("constant_slope", {th}, s);
  const VectorField v = axis_catalog("radial_unit", {}, s);
  const Grid grid{{{1.0, 2.0, 21}, {-2.0, 2.0, 5}}};
  double e1 = 0.0, e2 = 0.0;
  for (const Vec<double>& q : grid.points()) {
    const ShapeReport sh = shape_operator(imm, q);
    const MatD& B = sh.second_fundamental_form;
    const MatD G = frame_at(imm, q).induced_metric;  // diagonal chart: s along T, t along D
    e1 = std::max(e1, std::abs(B(0, 0) / G(0, 0) + c / q[0]));
    e2 = std::max(e2, std::abs(B(1, 1) / G(1, 1) + (c + std::tan(c * std::log(q[0]))) / q[0]));
  }
  r.require(e1 < 1e-6, "kappa1 err " + sci(e1));
  r.require(e2 < 1e-6, "kappa2 err " + sci(e2));
  const IdentityReport tw = tw_from_surface(imm, v, grid);
  r.require(tw.entry("kappa1").value < 1e-6, "kappa1 equation " + sci(tw.entry("kappa1").value));
  r.require(tw.entry("kappa2_evolution").value < 1e-6,
            "kappa2 evolution " + sci(tw.entry("kappa2_evolution").value));
}

// 5. hyperbolic cone, k = 1
void criterion5(Result& r) {
  const AmbientSpec s{AmbientKind::hyperbolic_half_space, 3};
  const Immersion imm = make_surface("hyperbolic_cone", {1.0}, s);
  const VectorField v = axis_catalog("hyperbolic_vertical", {}, s);
  const Grid grid{{{0.2, 3.0, 9}, {-2.0, 2.0, 7}}};
  double ang = 0.0, kap = 0.0, rhs = 0.0;
  for (const Vec<double>& q : grid.points()) {
    const AxisDecomposition d = decompose_axis(imm, v, q, true);
    ang = std::max(ang, std::abs(d.normal_component + 1.0 / std::sqrt(2.0)));
    const ShapeReport sh = shape_operator(imm, q);
    kap = std::max({kap, std::abs(sh.principal_curvatures[0] - std::sqrt(2.0)),
                    std::abs(sh.principal_curvatures[1] - 1.0 / std::sqrt(2.0))});
    // kappa2 along the unit direction orthogonal to T
    const MatD G = frame_at(imm, q).induced_metric;
    Vec<double> e = axpy(Vec<double>{0.0, 1.0}, -inner(G, Vec<double>{0.0, 1.0}, d.t), d.t);
    e = scaled(e, 1.0 / norm_g(G, e));
    const double k2 = inner(G, sh.shape_matrix * e, e);
    const double f = fit_torse_forming(imm.ambient, v, Coords(imm.map(q))).f;
    const double ct = d.normal_component, st = d.alpha;
    rhs = std::max(rhs, std::abs((ct * f + k2) * (ct * k2 + f) / st));
  }
  r.require(ang < 1e-8, "<U,V> + 1/sqrt2 " + sci(ang));
  r.require(kap < 1e-7, "curvatures {sqrt2, 1/sqrt2} err " + sci(kap));
  r.require(rhs < 1e-8, "kappa2 evolution right side " + sci(rhs));
}

// 6. rotational hypersurface in R^4
void criterion6(Result& r) {
  const AmbientSpec s{AmbientKind::euclidean_punctured, 4};
  const Immersion imm = make_surface("rot4_spiral", {}, s);
  const VectorField v = axis_catalog("radial_unit", {}, s);
  const Grid grid{{{-1.0, 1.2, 7}, {-1.0, 1.0, 5}, {-2.0, 2.0, 5}}};
  const IdentityReport ca = constant_angle_report(imm, v, grid);
  const double ang = std::max(std::abs(ca.info_value("min") - std::cos(3 * kPi / 4)),
                              std::abs(ca.info_value("max") - std::cos(3 * kPi / 4)));
  r.require(ang < 1e-8, "angle 3pi/4, cos err " + sci(ang));
  double at = 0.0, delta_printed = 0.0, delta_scaled = 0.0, off = 0.0;
  for (double u : {0.0, 0.5, 1.0}) {
    const Vec<double> q{u, 0.2, 0.3};
    at = std::max(at, std::abs(anti_torqued_point(imm, v, q).shape_T - std::exp(-u) / std::sqrt(2.0)));
    const UmbilicPoint p = umbilic_point(imm, v, q);
    off = std::max(off, p.off_multiple);
    const double printed = (std::sin(u) + std::cos(u)) / std::sqrt(2.0);
    delta_printed = std::max(delta_printed, std::abs(p.delta - printed));
    delta_scaled = std::max(delta_scaled, std::abs(p.delta - printed / (std::exp(u) * std::cos(u))));
  }
  r.require(at < 1e-7, "A(T) = e^{-u}/sqrt2 err " + sci(at));
  r.require(off < 1e-7, "A on D is a multiple of Id (" + sci(off) + ")");
  r.require(delta_printed < 1e-6, "delta = (sin u + cos u)/sqrt2 err " + sci(delta_printed) +
                                      " (measured delta equals it divided by p(u) = e^u cos u, err " +
                                      sci(delta_scaled) + ")");
  const SmoothMap target(3, 9, [](const auto& q) {
    using S = std::decay_t<decltype(q[0])>;
    const S sv = std::sqrt(2.0) * exp(q[0]);
    const S lam = (sv / std::sqrt(2.0)) * cos(log(sv / std::sqrt(2.0)));
    const S ds = std::sqrt(2.0) * exp(q[0]);  // ds/du
    Vec<S> g(9, S(0.0));
    g[0] = ds * ds;
    g[4] = lam * lam;
    g[8] = lam * lam * cos(q[1]) * cos(q[1]);
    return g;
  });
  const double met = induced_metric_residual(imm, target, grid.points());
  r.require(met < 1e-7, "metric ds^2 + lambda^2 g_S2 err " + sci(met));
}

// 7. hyperbolic rotational hypersurface
void criterion7(Result& r) {
  const double th = 0.6, st = std::sin(th), ct = std::cos(th);
  const AmbientSpec s{AmbientKind::hyperbolic_half_space, 4};
  const Immersion imm = make_surface("rot4_hyperbolic", {th}, s);
  const VectorField v = axis_catalog("hyperbolic_vertical", {}, s);
  const Grid grid{{{0.2, 3.0, 7}, {-1.0, 1.0, 5}, {-2.0, 2.0, 5}}};
  const IdentityReport ca = constant_angle_report(imm, v, grid);
  const double ang = std::max(std::abs(ca.info_value("min") - ct), std::abs(ca.info_value("max") - ct));
  r.require(ang < 1e-8, "<U,V> = cos(theta) err " + sci(ang));
  double printed = 0.0, constant = 0.0;
  for (const Vec<double>& q : grid.points()) {
    const UmbilicPoint p = umbilic_point(imm, v, q);
    const double qq = st * q[0];  // last coordinate
    printed = std::max(printed, std::abs(p.delta - (st * qq + ct)));
    constant = std::max(constant, std::abs(p.delta + 1.0 / ct));
  }
  r.require(printed < 1e-6, "delta = sin(theta) q + cos(theta) err " + sci(printed) +
                                " (measured delta = -1/cos(theta), constant, err " + sci(constant) + ")");
  const SmoothMap target(3, 9, [st, ct](const auto& q) {
    using S = std::decay_t<decltype(q[0])>;
    const double cot2 = (ct / st) * (ct / st);
    Vec<S> g(9, S(0.0));
    g[0] = 1.0 / ((st * q[0]) * (st * q[0]));  // (ds/du)^2, s = csc(theta) log u
    g[4] = S(cot2);
    g[8] = cot2 * cos(q[1]) * cos(q[1]);
    return g;
  });
  const double met = induced_metric_residual(imm, target, grid.points());
  r.require(met < 1e-7, "metric ds^2 + cot^2 g_S2 err " + sci(met));
}

// 8. torqued hypersurfaces
void criterion8(Result& r) {
  const AmbientSpec c4 = warped(4);
  const Immersion cyl = make_surface("cylinder_over_levelset", {}, c4);
  const IdentityReport tq =
      verify_torqued_identities(cyl, axis_catalog("torqued_ux", {}, c4), Grid{{{0.5, 3.0, 6}, {-1.0, 1.0, 5}, {0.1, 1.4, 5}}});
  r.require(tq.entry("f_minus_T1_alpha").value < 1e-7, "cylinder f = alpha' err " + sci(tq.entry("f_minus_T1_alpha").value));
  r.require(tq.entry("alpha_range").value > 0.1, "alpha range " + sci(tq.entry("alpha_range").value));
  r.require(tq.entry("pairing").value < 1e-8, "alpha beta + vartheta gamma " + sci(tq.entry("pairing").value));

  const AmbientSpec sp = warped(4, WarpFunction::identity(), FiberKind::flat_spherical);
  const VectorField ud = axis_catalog("base_concircular", {}, sp);
  const double slice =
      check_ruled(make_surface("spherical_slice", {1.3}, sp), ud, Grid{{{0.5, 3.0, 6}, {0.3, 2.8, 5}, {-2.0, 2.0, 5}}})
          .entry("ambient_geodesic")
          .value;
  const double graph =
      check_ruled(make_surface("graph_sec", {0.7}, sp), ud, Grid{{{0.1, 1.2, 6}, {0.3, 2.8, 5}, {-2.0, 2.0, 5}}})
          .entry("ambient_geodesic")
          .value;
  r.require(slice < 1e-7, "slice r = r0: nabla_T T " + sci(slice));
  r.require(graph < 1e-7, "graph u = theta sec r: nabla_T T " + sci(graph));
}

// 9. numerical substrate
void criterion9(Result& r) {
  std::mt19937_64 rng(909);
  std::vector<AmbientSpec> specs = {{AmbientKind::euclidean, 3},
                                    {AmbientKind::euclidean_punctured, 4},
                                    {AmbientKind::hyperbolic_half_space, 3},
                                    {AmbientKind::hyperbolic_half_space, 4},
                                    warped(3),
                                    warped(4, WarpFunction::exponential()),
                                    warped(4, WarpFunction::constant(1.5)),
                                    warped(4, WarpFunction::identity(), FiberKind::flat_spherical),
                                    warped(4, WarpFunction::exponential(), FiberKind::round_sphere)};
  double worst = 0.0;
  for (const AmbientSpec& s : specs) {
    const MetricField g = build_ambient(s);
    const int m = s.dim;
    for (int i = 0; i < 20; ++i) {
      const Vec<double> x = sample_domain_point(s, rng);
      const ChristoffelSymbols dual = christoffel(g, Coords(x));
      // finite-difference Christoffels from metric values only
      std::vector<MatD> dg;
      for (int k = 0; k < m; ++k) {
        const Vec<double> d = oracle::central_difference([&g](const Vec<double>& y) { return g.eval(Coords(y)).a; }, x, k);
        MatD mk(m, m);
        mk.a = d;
        dg.push_back(mk);
      }
      const MatD ginv = spd_inverse(g.eval(Coords(x)));
      for (int k = 0; k < m; ++k) {
        for (int a = 0; a < m; ++a) {
          for (int b = 0; b < m; ++b) {
            double sum = 0.0;
            for (int l = 0; l < m; ++l) sum += 0.5 * ginv(k, l) * (dg[a](b, l) + dg[b](a, l) - dg[l](a, b));
            worst = std::max(worst, oracle::rel_err(dual(k, a, b), sum));
          }
        }
      }
    }
  }
  r.require(worst < 1e-5, "dual vs finite-difference Christoffels " + sci(worst));

  const auto f = [](double s) { return 1.0 / (s * std::sin(kPi / 4)); };
  const auto exact = [](double s) { return -(1.0 + std::tan(std::log(s))) / s; };
  const OrderEstimate est =
      estimate_order([&](int n) { return evolve_kappa2(f, kPi / 4, exact(1.0), 1.0, 2.0, n); }, exact, {8, 16, 32, 64});
  r.require(est.order >= 3.5, "RK4 order " + sci(est.order));

  double kerr = 0.0;
  const std::pair<AmbientSpec, double> forms[] = {{{AmbientKind::euclidean, 3}, 0.0},
                                                  {{AmbientKind::euclidean, 4}, 0.0},
                                                  {{AmbientKind::hyperbolic_half_space, 3}, -1.0},
                                                  {{AmbientKind::hyperbolic_half_space, 4}, -1.0}};
  std::normal_distribution<double> nd;
  for (const auto& [s, k] : forms) {
    const MetricField g = build_ambient(s);
    for (int i = 0; i < 20; ++i) {
      const Vec<double> x = sample_domain_point(s, rng);
      Vec<double> u(s.dim), w(s.dim);
      for (int j = 0; j < s.dim; ++j) {
        u[j] = nd(rng);
        w[j] = nd(rng);
      }
      kerr = std::max(kerr, std::abs(sectional_curvature(g, Coords(x), u, w) - k));
    }
  }
  r.require(kerr < 1e-7, "space-form sectional curvature err " + sci(kerr));
}

// 10. negative controls through the CLI
void criterion10(Result& r) {
  const std::string dir = TFA_SCENARIO_DIR;
  const int perturbed = cli_exit("run " + dir + "/negative/perturbed_wapr.json");
  r.require(perturbed != 0, "perturbed surface fails constant_angle, exit " + std::to_string(perturbed));

  const AmbientSpec s = warped(4);
  const MetricField g = build_ambient(s);
  const VectorField v = axis_catalog("shear_control", {}, s);
  const Coords p{1.2, 0.4, 0.3, -0.5};
  const TorseFormingFit fit = fit_torse_forming(g, v, p);
  const AxisTag tag = classify_axis(g, v, p, fit).tag;
  const int shear = cli_exit("run " + dir + "/negative/shear_control.json");
  r.require(shear != 0, "shear scenario exit " + std::to_string(shear));
  r.require(tag == AxisTag::not_torse_forming,
            std::string("(u + x) d_u classifies as ") + to_string(tag) + " (fit residual " + sci(fit.residual) +
                "; it is ((u + x)/u) u d_u, a function multiple of a concircular field)");

  const VectorField fs = axis_catalog("fiber_shear", {}, s);
  const AxisTag fs_tag = classify_axis(g, fs, p, fit_torse_forming(g, fs, p)).tag;
  r.detail << "; control d_u + y d_x classifies as " << to_string(fs_tag);
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* title;
    void (*run)(Result&);
  };
  const Entry entries[] = {
      {1, "warped-product connection", criterion1}, {2, "axis classification", criterion2},
      {3, "wapr surface", criterion3},              {4, "constant-slope surface", criterion4},
      {5, "hyperbolic cone", criterion5},           {6, "rotational hypersurface in R^4", criterion6},
      {7, "rotational hypersurface in H^4", criterion7}, {8, "torqued hypersurfaces", criterion8},
      {9, "numerical substrate", criterion9},       {10, "negative controls", criterion10},
  };
  // Criteria whose printed values were measured not to hold; see README.
  const std::set<int> recorded_red = {6, 7, 10};

  int unexpected = 0, green = 0;
  for (const Entry& e : entries) {
    Result r;
    try {
      e.run(r);
    } catch (const std::exception& ex) {
      r.require(false, std::string("error: ") + ex.what());
    }
    green += r.pass;
    const bool expected = r.pass == !recorded_red.count(e.id);
    unexpected += !expected;
    std::printf("%s %2d %-32s %s%s\n", r.pass ? "PASS" : "FAIL", e.id, e.title, r.detail.str().c_str(),
                expected ? "" : "  <-- differs from the recorded outcome");
  }
  std::printf("%d/10 criteria pass; %d outcome(s) differ from the record\n", green, unexpected);
  return unexpected == 0 ? 0 : 1;
}
