#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>

#include "tfa/expr.hpp"
#include "tfa/scenario.hpp"

namespace tfa {

namespace {

std::string number_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
  return buf;
}

// Expressions over the surface parameters, n -> k.
SmoothMap param_exprs(const std::vector<Json>& items, const std::vector<std::string>& names) {
  std::vector<Expression> ex;
  for (const Json& j : items) ex.push_back(Expression::parse(number_text(j), names));
  const int n = static_cast<int>(names.size());
  return SmoothMap(n, static_cast<int>(ex.size()), [ex](const auto& q) {
    using S = std::decay_t<decltype(q[0])>;
    Vec<S> out;
    for (const Expression& e : ex) out.push_back(e.eval(q));
    return out;
  });
}

double constant_expr(const Json& v) { return Expression::parse(number_text(v), {}).eval(Vec<double>{}); }

const Json& need_target(const Scenario& sc, const std::string& check, const char* key) {
  if (!sc.targets.contains(key)) {
    fail(ErrorKind::parse, "scenario.targets: check '" + check + "' needs '" + key + "'");
  }
  return sc.targets.at(key);
}

struct Context {
  const Scenario& sc;
  const Immersion& imm;
  const VectorField& v;
  const Grid& grid;
  BatteryOptions bopt;
  Json details = Json::object();
};

IdentityReport check_classify(Context& c) {
  const std::string expected = need_target(c.sc, "classify", "axis_class").get<std::string>();
  const auto pts = c.grid.points();
  std::optional<SmoothMap> fexpr;
  if (c.sc.targets.contains("conformal_scalar")) {
    fexpr = param_exprs({c.sc.targets.at("conformal_scalar")}, chart_coordinate_names(c.sc.ambient));
  }
  const auto rows = evaluate_grid(pts, c.bopt.threads, [&](const Vec<double>& q) {
    c.imm.require(q);
    const Vec<double> x = c.imm.map(q);
    const TorseFormingFit fit = fit_torse_forming(c.imm.ambient, c.v, Coords(x));
    const AxisClass cls = classify_axis(c.imm.ambient, c.v, Coords(x), fit, c.bopt.classify);
    const double ferr = fexpr ? std::abs(fit.f - (*fexpr)(x)[0]) : 0.0;
    return Vec<double>{static_cast<double>(cls.tag), fit.relative_residual, ferr};
  });
  std::map<std::string, int> counts;
  int mismatches = 0;
  double worst_rel = 0.0, worst_f = 0.0;
  for (const auto& r : rows) {
    const std::string tag = to_string(static_cast<AxisTag>(static_cast<int>(r[0])));
    ++counts[tag];
    mismatches += tag != expected;
    worst_rel = std::max(worst_rel, r[1]);
    worst_f = std::max(worst_f, r[2]);
  }
  IdentityReport rep;
  rep.battery = "classify";
  rep.points = static_cast<int>(rows.size());
  rep.entries.push_back({"class_mismatches", static_cast<double>(mismatches), 0.5});
  if (fexpr) rep.entries.push_back({"conformal_scalar", worst_f, 1e-7});
  rep.info = {{"max_relative_fit_residual", worst_rel}};
  c.details["expected_class"] = expected;
  c.details["classes"] = counts;
  return rep;
}

IdentityReport check_principal(Context& c) {
  const Json& t = need_target(c.sc, "principal_curvatures", "principal_curvatures");
  const SmoothMap target = param_exprs(std::vector<Json>(t.begin(), t.end()), c.imm.param_names);
  if (target.out_dim() != c.imm.n) {
    fail(ErrorKind::parse, "scenario.targets.principal_curvatures: expected " + std::to_string(c.imm.n) + " entries");
  }
  const auto pts = c.grid.points();
  const auto rows = evaluate_grid(pts, c.bopt.threads, [&](const Vec<double>& q) {
    c.imm.require(q);
    Vec<double> k = shape_operator(c.imm, q).principal_curvatures;
    Vec<double> want = target(q);
    std::sort(want.begin(), want.end(), std::greater<>());
    double err = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) err = std::max(err, std::abs(k[i] - want[i]));
    k.push_back(err);
    return k;
  });
  double err = 0.0;
  for (const auto& r : rows) err = std::max(err, r.back());
  IdentityReport rep;
  rep.battery = "principal_curvatures";
  rep.points = static_cast<int>(rows.size());
  rep.entries.push_back({"max_error", err, 1e-7});
  c.details["kappa_at_first_point"] = std::vector<double>(rows[0].begin(), rows[0].end() - 1);
  return rep;
}

IdentityReport check_shape_of_T(Context& c) {
  const SmoothMap target = param_exprs({need_target(c.sc, "shape_of_T", "shape_T")}, c.imm.param_names);
  const auto pts = c.grid.points();
  const auto rows = evaluate_grid(pts, c.bopt.threads, [&](const Vec<double>& q) {
    const AxisDecomposition d = decompose_axis(c.imm, c.v, q, true);
    const SurfaceFrame fr = frame_at(c.imm, q);
    const Vec<double> at = shape_operator(c.imm, q).shape_matrix * d.t;
    const double lam = inner(fr.induced_metric, at, d.t);
    return Vec<double>{norm_g(fr.induced_metric, axpy(at, -lam, d.t)), std::abs(lam - target(q)[0]), lam};
  });
  double eig = 0.0, val = 0.0;
  for (const auto& r : rows) {
    eig = std::max(eig, r[0]);
    val = std::max(val, r[1]);
  }
  IdentityReport rep;
  rep.battery = "shape_of_T";
  rep.points = static_cast<int>(rows.size());
  rep.entries = {{"eigenvector", eig, 1e-7}, {"eigenvalue", val, 1e-7}};
  rep.info = {{"eigenvalue_at_first_point", rows[0][2]}};
  return rep;
}

IdentityReport check_umbilic(Context& c) {
  std::optional<ProductStructure> prod;
  if (c.sc.targets.contains("product")) {
    const Json& p = c.sc.targets.at("product");
    prod = ProductStructure{param_exprs({p.at("s")}, c.imm.param_names), param_exprs({p.at("lambda")}, {"s"})};
  }
  IdentityReport rep = check_umbilic_restriction(c.imm, c.v, c.grid, prod, c.bopt);
  if (c.sc.targets.contains("delta")) {
    const SmoothMap target = param_exprs({c.sc.targets.at("delta")}, c.imm.param_names);
    const auto rows = evaluate_grid(c.grid.points(), c.bopt.threads, [&](const Vec<double>& q) {
      const UmbilicPoint p = umbilic_point(c.imm, c.v, q);
      return Vec<double>{std::abs(p.delta - target(q)[0]), p.delta, target(q)[0]};
    });
    double err = 0.0;
    for (const auto& r : rows) err = std::max(err, r[0]);
    rep.entries.push_back({"delta_target", err, 1e-6});
    Json samples = Json::array();
    for (std::size_t i = 0; i < rows.size() && samples.size() < 3; i += std::max<std::size_t>(1, rows.size() / 3)) {
      samples.push_back(Json{{"delta", rows[i][1]}, {"target", rows[i][2]}});
    }
    c.details["delta_samples"] = samples;
  }
  return rep;
}

IdentityReport check_metric(Context& c) {
  const Json& m = need_target(c.sc, "induced_metric", "metric");
  const int n = c.imm.n;
  std::vector<Json> entries;
  if (m.contains("diag")) {
    const Json& d = m.at("diag");
    if (static_cast<int>(d.size()) != n) fail(ErrorKind::parse, "scenario.targets.metric.diag: expected n entries");
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) entries.push_back(i == j ? d[static_cast<std::size_t>(i)] : Json(0.0));
    }
  } else {
    const Json& f = m.at("full");
    if (static_cast<int>(f.size()) != n * n) fail(ErrorKind::parse, "scenario.targets.metric.full: expected n*n entries");
    entries.assign(f.begin(), f.end());
  }
  const SmoothMap target = param_exprs(entries, c.imm.param_names);
  IdentityReport rep;
  rep.battery = "induced_metric";
  const auto pts = c.grid.points();
  rep.points = static_cast<int>(pts.size());
  rep.entries.push_back({"metric", induced_metric_residual(c.imm, target, pts), 1e-7});
  return rep;
}

IdentityReport check_codazzi(Context& c) {
  const int n = c.imm.n;
  const auto rows = evaluate_grid(c.grid.points(), c.bopt.threads, [&](const Vec<double>& q) {
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) worst = std::max(worst, codazzi_residual(c.imm, q, i, j));
    }
    return Vec<double>{worst, gauss_formula_residual(c.imm, q)};
  });
  double cod = 0.0, gauss = 0.0;
  for (const auto& r : rows) {
    cod = std::max(cod, r[0]);
    gauss = std::max(gauss, r[1]);
  }
  IdentityReport rep;
  rep.battery = "codazzi";
  rep.points = static_cast<int>(rows.size());
  rep.entries = {{"codazzi", cod, 1e-6}, {"gauss_formula", gauss, 1e-6}};
  return rep;
}

IdentityReport run_check(const std::string& name, Context& c) {
  if (name == "constant_angle") {
    IdentityReport rep = constant_angle_report(c.imm, c.v, c.grid, c.bopt);
    rep.entries.front().tolerance = 1e-9;
    if (c.sc.targets.contains("cos_theta")) {
      const double want = constant_expr(c.sc.targets.at("cos_theta"));
      rep.entries.push_back({"target_cos_theta", std::max(std::abs(rep.info_value("min") - want),
                                                           std::abs(rep.info_value("max") - want)),
                             1e-8});
    }
    return rep;
  }
  if (name == "anti_torqued_identities") return verify_anti_torqued_identities(c.imm, c.v, c.grid, c.bopt);
  if (name == "tw") {
    IdentityReport rep = tw_from_surface(c.imm, c.v, c.grid, c.bopt);
    for (IdentityEntry& e : rep.entries) {
      if (e.label == "tw") e.tolerance = 1e-9;
    }
    return rep;
  }
  if (name == "torqued_identities") return verify_torqued_identities(c.imm, c.v, c.grid, c.bopt);
  if (name == "ruled") return check_ruled(c.imm, c.v, c.grid, c.bopt);
  if (name == "umbilic_restriction") return check_umbilic(c);
  if (name == "classify") return check_classify(c);
  if (name == "principal_curvatures") return check_principal(c);
  if (name == "shape_of_T") return check_shape_of_T(c);
  if (name == "induced_metric") return check_metric(c);
  if (name == "codazzi") return check_codazzi(c);
  fail(ErrorKind::unknown_name, "unknown check '" + name + "'");
}

bool check_level_error(ErrorKind k) {
  return k == ErrorKind::invalid_input || k == ErrorKind::vanishing_tangential || k == ErrorKind::ruled_regime ||
         k == ErrorKind::dimension;
}

void apply_tolerances(IdentityReport& rep, const std::string& check, const Scenario& sc, const RunOptions& opt) {
  for (IdentityEntry& e : rep.entries) {
    if (e.lower_bound) continue;
    if (auto it = sc.tolerances.find(check); it != sc.tolerances.end()) e.tolerance = it->second;
    if (auto it = sc.tolerances.find(check + "." + e.label); it != sc.tolerances.end()) e.tolerance = it->second;
    if (opt.tol) e.tolerance = *opt.tol;
  }
}

double round12(double x) {
  if (!std::isfinite(x) || x == 0.0) return x;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

void round_numbers(Json& j) {
  if (j.is_number_float()) {
    j = round12(j.get<double>());
  } else if (j.is_structured()) {
    for (auto& v : j) round_numbers(v);
  }
}

Json entry_json(const IdentityEntry& e) {
  return Json{{"label", e.label},
              {"value", e.value},
              {"tolerance", e.tolerance},
              {"bound", e.lower_bound ? "lower" : "upper"},
              {"pass", e.pass()}};
}

void require_grid_in_domain(const Immersion& imm, const Grid& grid) {
  if (static_cast<int>(grid.axes.size()) != imm.n) {
    fail(ErrorKind::parse, "scenario.grid: expected " + std::to_string(imm.n) + " axes for surface '" + imm.name + "'");
  }
  for (int i = 0; i < imm.n; ++i) {
    const auto [a, b] = imm.param_box[static_cast<std::size_t>(i)];
    const GridAxis& g = grid.axes[static_cast<std::size_t>(i)];
    if (!(g.min > a && g.max < b)) {
      fail(ErrorKind::domain, "grid axis " + std::to_string(i) + " [" + std::to_string(g.min) + ", " +
                                  std::to_string(g.max) + "] leaves the parameter domain of '" + imm.name + "'");
    }
  }
  for (const Vec<double>& q : grid.points()) imm.require(q);
}

}  // namespace

Immersion build_surface(const Scenario& sc, const RunOptions& opt) {
  Immersion imm = sc.inline_surface
                      ? make_inline_surface("inline", sc.inline_surface->coords, sc.inline_surface->params,
                                            sc.inline_surface->box, sc.ambient)
                      : make_surface(sc.surface_name, sc.surface_params, sc.ambient);
  if (opt.flip_normal) imm.orientation = -imm.orientation;
  return imm;
}

Grid scaled_grid(const Grid& grid, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) fail(ErrorKind::invalid_input, "grid scale must be positive");
  Grid out = grid;
  for (GridAxis& a : out.axes) {
    if (a.count >= 2) a.count = std::max(2, static_cast<int>(std::lround(a.count * scale)));
  }
  return out;
}

Json run_scenario(const Scenario& sc, const RunOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  build_ambient(sc.ambient);
  const Immersion imm = build_surface(sc, opt);
  const VectorField v = axis_catalog(sc.axis_name, sc.axis_params, sc.ambient, sc.axis_expression);
  const Grid grid = scaled_grid(sc.grid, opt.grid_scale);
  require_grid_in_domain(imm, grid);

  Json report;
  report["engine"] = Json{{"name", "tfa"}, {"version", kEngineVersion}};
  report["scenario"] = sc.document;
  report["options"] = Json{{"tol", opt.tol ? Json(*opt.tol) : Json(nullptr)},
                           {"grid_scale", opt.grid_scale},
                           {"flip_normal", opt.flip_normal}};
  report["orientation"] = imm.orientation;
  Json checks = Json::array();
  bool all = true;
  for (const std::string& name : sc.checks) {
    Context c{sc, imm, v, grid, {}, Json::object()};
    c.bopt.threads = opt.threads;
    if (opt.tol) c.bopt.tol = *opt.tol;
    Json cj;
    cj["check"] = name;
    try {
      IdentityReport rep = run_check(name, c);
      apply_tolerances(rep, name, sc, opt);
      cj["pass"] = rep.pass();
      cj["points"] = rep.points;
      Json entries = Json::array();
      for (const IdentityEntry& e : rep.entries) entries.push_back(entry_json(e));
      cj["entries"] = entries;
      Json info = Json::object();
      for (const auto& [k, val] : rep.info) info[k] = val;
      cj["info"] = info;
      if (!c.details.empty()) cj["details"] = c.details;
    } catch (const Error& e) {
      if (!check_level_error(e.kind())) throw;
      cj["pass"] = false;
      cj["error"] = Json{{"kind", to_string(e.kind())}, {"message", e.what()}};
    }
    all = all && cj["pass"].get<bool>();
    checks.push_back(cj);
  }
  report["checks"] = checks;
  report["pass"] = all;
  if (opt.timing) {
    report["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return report;
}

bool report_pass(const Json& report) { return report.at("pass").get<bool>(); }

std::string dump_report(const Json& report) {
  Json copy = report;
  round_numbers(copy);
  return copy.dump(2) + "\n";
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::parse:
    case ErrorKind::invalid_input: return 2;
    case ErrorKind::unknown_name: return 3;
    case ErrorKind::domain: return 4;
    case ErrorKind::io: return 6;
    default: return 5;
  }
}

ExportSummary export_surface(const Scenario& sc, const RunOptions& opt, const std::string& path) {
  const Immersion imm = build_surface(sc, opt);
  const Grid grid = scaled_grid(sc.grid, opt.grid_scale);
  for (const GridAxis& a : grid.axes) {
    if (a.count < 2) fail(ErrorKind::invalid_input, "export needs at least 2 samples per grid axis");
  }
  require_grid_in_domain(imm, grid);
  const auto pts = grid.points();
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::io, "cannot write '" + path + "'");
  char buf[64];
  auto num = [&buf](double x) {
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::string(buf);
  };
  ExportSummary s;
  const int m = imm.n + 1;
  if (m <= 3 && imm.n == 2) {
    s.mesh = true;
    const int nu = grid.axes[0].count, nv = grid.axes[1].count;
    for (const Vec<double>& q : pts) {
      const Vec<double> x = imm.map(q);
      out << "v " << num(x[0]) << ' ' << num(x[1]) << ' ' << num(x[2]) << '\n';
    }
    // points() runs the last axis fastest: index(i, j) = i * nv + j, 1-based in the file
    for (int i = 0; i + 1 < nu; ++i) {
      for (int j = 0; j + 1 < nv; ++j) {
        const int a = i * nv + j + 1, b = (i + 1) * nv + j + 1, cc = (i + 1) * nv + j + 2, d = i * nv + j + 2;
        out << "f " << a << ' ' << b << ' ' << cc << '\n' << "f " << a << ' ' << cc << ' ' << d << '\n';
        s.triangles += 2;
      }
    }
    s.vertices = pts.size();
  } else {
    for (const std::string& p : imm.param_names) out << p << ',';
    for (int k = 0; k < m; ++k) out << "x" << k + 1 << (k + 1 < m ? "," : "\n");
    for (const Vec<double>& q : pts) {
      for (double v : q) out << num(v) << ',';
      const Vec<double> x = imm.map(q);
      for (int k = 0; k < m; ++k) out << num(x[k]) << (k + 1 < m ? "," : "\n");
    }
    s.vertices = pts.size();
  }
  if (!out) fail(ErrorKind::io, "write to '" + path + "' failed");
  return s;
}

std::map<std::string, std::vector<std::string>> list_catalog(const std::string& category) {
  std::map<std::string, std::vector<std::string>> all;
  for (AmbientKind k : {AmbientKind::euclidean, AmbientKind::euclidean_punctured, AmbientKind::hyperbolic_half_space,
                        AmbientKind::warped_product}) {
    all["ambients"].push_back(to_string(k));
  }
  all["axes"] = axis_catalog_names();
  for (const SurfaceInfo& s : surface_catalog()) all["surfaces"].push_back(s.name);
  all["checks"] = check_names();
  for (auto& [k, v] : all) std::sort(v.begin(), v.end());
  if (category.empty()) return all;
  std::map<std::string, std::vector<std::string>> one;
  if (auto it = all.find(category); it != all.end()) one.insert(*it);
  return one;
}

}  // namespace tfa
