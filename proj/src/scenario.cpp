#include "tfa/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace tfa {

namespace {

[[noreturn]] void schema_fail(const std::string& path, const std::string& what) {
  fail(ErrorKind::parse, path + ": " + what);
}

void allow_keys(const Json& obj, const std::string& path, std::initializer_list<const char*> keys) {
  for (const auto& [k, v] : obj.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&k](const char* a) { return k == a; })) {
      schema_fail(path, "unexpected key '" + k + "'");
    }
  }
}

const Json& require_key(const Json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) schema_fail(path, std::string("missing required key '") + key + "'");
  return obj.at(key);
}

const Json& require_object(const Json& j, const std::string& path) {
  if (!j.is_object()) schema_fail(path, "expected an object");
  return j;
}

std::string as_string(const Json& j, const std::string& path) {
  if (!j.is_string()) schema_fail(path, "expected a string");
  return j.get<std::string>();
}

double as_number(const Json& j, const std::string& path) {
  if (!j.is_number()) schema_fail(path, "expected a number");
  return j.get<double>();
}

int as_int(const Json& j, const std::string& path, int min) {
  if (!j.is_number_integer()) schema_fail(path, "expected an integer");
  const auto v = j.get<long long>();
  if (v < min || v > 100000) schema_fail(path, "expected an integer >= " + std::to_string(min));
  return static_cast<int>(v);
}

std::vector<double> as_numbers(const Json& j, const std::string& path) {
  if (!j.is_array()) schema_fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<std::string> as_strings(const Json& j, const std::string& path) {
  if (!j.is_array()) schema_fail(path, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_string(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::pair<double, double> as_interval(const Json& j, const std::string& path) {
  const std::vector<double> v = as_numbers(j, path);
  if (v.size() != 2 || !(v[0] < v[1])) schema_fail(path, "expected [min, max] with min < max");
  return {v[0], v[1]};
}

AmbientSpec parse_ambient(const Json& j, const std::string& path) {
  require_object(j, path);
  allow_keys(j, path, {"kind", "dim", "warp", "fiber", "base_interval"});
  AmbientSpec s;
  s.kind = parse_ambient_kind(as_string(require_key(j, path, "kind"), path + ".kind"));
  s.dim = as_int(require_key(j, path, "dim"), path + ".dim", 2);
  if (j.contains("warp")) {
    const Json& w = j.at("warp");
    if (w.is_string()) {
      s.warp = WarpFunction::from_name(w.get<std::string>(), {});
    } else {
      require_object(w, path + ".warp");
      allow_keys(w, path + ".warp", {"name", "params"});
      const std::string name = as_string(require_key(w, path + ".warp", "name"), path + ".warp.name");
      const std::vector<double> prm = w.contains("params") ? as_numbers(w.at("params"), path + ".warp.params")
                                                           : std::vector<double>{};
      s.warp = WarpFunction::from_name(name, prm);
    }
  }
  if (j.contains("fiber")) s.fiber = parse_fiber_kind(as_string(j.at("fiber"), path + ".fiber"));
  if (j.contains("base_interval")) {
    const auto [a, b] = as_interval(j.at("base_interval"), path + ".base_interval");
    s.u_min = a;
    s.u_max = b;
  } else if (s.warp.kind() != WarpFunction::Kind::identity) {
    s.u_min = -std::numeric_limits<double>::infinity();
  }
  if (s.kind != AmbientKind::warped_product && (j.contains("warp") || j.contains("fiber") || j.contains("base_interval"))) {
    schema_fail(path, "warp, fiber and base_interval apply to warped_product only");
  }
  return s;
}

void parse_surface(const Json& j, const std::string& path, Scenario& sc) {
  require_object(j, path);
  if (j.contains("inline")) {
    allow_keys(j, path, {"inline"});
    const std::string ip = path + ".inline";
    const Json& in = require_object(j.at("inline"), ip);
    allow_keys(in, ip, {"coords", "params", "box"});
    InlineSurfaceSpec s;
    s.coords = as_strings(require_key(in, ip, "coords"), ip + ".coords");
    s.params = as_strings(require_key(in, ip, "params"), ip + ".params");
    if (in.contains("box")) {
      const Json& box = in.at("box");
      if (!box.is_array()) schema_fail(ip + ".box", "expected an array of intervals");
      for (std::size_t i = 0; i < box.size(); ++i) s.box.push_back(as_interval(box[i], ip + ".box[" + std::to_string(i) + "]"));
      if (s.box.size() != s.params.size()) schema_fail(ip + ".box", "one interval per parameter");
    }
    if (s.params.empty()) schema_fail(ip + ".params", "at least one parameter");
    sc.surface_name = "inline";
    sc.inline_surface = std::move(s);
    return;
  }
  allow_keys(j, path, {"name", "params"});
  sc.surface_name = as_string(require_key(j, path, "name"), path + ".name");
  if (j.contains("params")) sc.surface_params = as_numbers(j.at("params"), path + ".params");
}

void parse_targets(const Json& j, const std::string& path) {
  require_object(j, path);
  allow_keys(j, path, {"cos_theta", "axis_class", "conformal_scalar", "principal_curvatures", "shape_T", "delta",
                       "product", "metric"});
  auto expr_like = [&path](const Json& v, const std::string& key) {
    if (!v.is_string() && !v.is_number()) schema_fail(path + "." + key, "expected a number or an expression string");
  };
  for (const char* k : {"cos_theta", "conformal_scalar", "shape_T", "delta"}) {
    if (j.contains(k)) expr_like(j.at(k), k);
  }
  if (j.contains("axis_class")) {
    const std::string c = as_string(j.at("axis_class"), path + ".axis_class");
    bool known = false;
    for (AxisTag t : {AxisTag::not_torse_forming, AxisTag::torse_forming_proper, AxisTag::anti_torqued, AxisTag::torqued,
                      AxisTag::concircular}) {
      known = known || c == to_string(t);
    }
    if (!known) schema_fail(path + ".axis_class", "unknown axis class '" + c + "'");
  }
  if (j.contains("principal_curvatures")) {
    const Json& a = j.at("principal_curvatures");
    if (!a.is_array() || a.empty()) schema_fail(path + ".principal_curvatures", "expected a non-empty array");
    for (const Json& v : a) expr_like(v, "principal_curvatures");
  }
  if (j.contains("product")) {
    const Json& p = require_object(j.at("product"), path + ".product");
    allow_keys(p, path + ".product", {"s", "lambda"});
    as_string(require_key(p, path + ".product", "s"), path + ".product.s");
    as_string(require_key(p, path + ".product", "lambda"), path + ".product.lambda");
  }
  if (j.contains("metric")) {
    const Json& m = require_object(j.at("metric"), path + ".metric");
    allow_keys(m, path + ".metric", {"diag", "full"});
    if (m.size() != 1) schema_fail(path + ".metric", "exactly one of 'diag' or 'full'");
    for (const Json& v : m.begin().value()) {
      if (!v.is_string() && !v.is_number()) schema_fail(path + ".metric", "entries must be numbers or expressions");
    }
  }
}

std::string line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

}  // namespace

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = {"anti_torqued_identities", "classify",     "codazzi",
                                                 "constant_angle",          "induced_metric", "principal_curvatures",
                                                 "ruled",                   "shape_of_T",   "torqued_identities",
                                                 "tw",                      "umbilic_restriction"};
  return names;
}

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::string msg = e.what();
    const auto pos = msg.find("parse error");
    if (pos != std::string::npos) msg = msg.substr(pos);
    fail(ErrorKind::parse, origin + ":" + line_column(text, e.byte) + ": " + msg);
  }
  const std::string root = "scenario";
  require_object(doc, root);
  allow_keys(doc, root,
             {"schema_version", "name", "description", "ambient", "axis", "surface", "grid", "checks", "tolerances",
              "targets"});
  const int version = as_int(require_key(doc, root, "schema_version"), root + ".schema_version", 1);
  if (version != kSchemaVersion) {
    schema_fail(root + ".schema_version", "unsupported version " + std::to_string(version));
  }
  Scenario sc;
  sc.document = doc;
  sc.name = as_string(require_key(doc, root, "name"), root + ".name");
  if (doc.contains("description")) as_string(doc.at("description"), root + ".description");
  sc.ambient = parse_ambient(require_key(doc, root, "ambient"), root + ".ambient");

  const std::string ap = root + ".axis";
  const Json& axis = require_object(require_key(doc, root, "axis"), ap);
  allow_keys(axis, ap, {"name", "params", "expression"});
  sc.axis_name = as_string(require_key(axis, ap, "name"), ap + ".name");
  if (axis.contains("params")) sc.axis_params = as_numbers(axis.at("params"), ap + ".params");
  if (axis.contains("expression")) sc.axis_expression = as_string(axis.at("expression"), ap + ".expression");

  parse_surface(require_key(doc, root, "surface"), root + ".surface", sc);

  const Json& grid = require_key(doc, root, "grid");
  if (!grid.is_array() || grid.empty()) schema_fail(root + ".grid", "expected a non-empty array");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const std::string gp = root + ".grid[" + std::to_string(i) + "]";
    require_object(grid[i], gp);
    allow_keys(grid[i], gp, {"min", "max", "count"});
    GridAxis a;
    a.min = as_number(require_key(grid[i], gp, "min"), gp + ".min");
    a.max = as_number(require_key(grid[i], gp, "max"), gp + ".max");
    a.count = as_int(require_key(grid[i], gp, "count"), gp + ".count", 2);
    if (!(a.min <= a.max)) schema_fail(gp, "min must not exceed max");
    sc.grid.axes.push_back(a);
  }

  const Json& checks = require_key(doc, root, "checks");
  sc.checks = as_strings(checks, root + ".checks");
  if (sc.checks.empty()) schema_fail(root + ".checks", "at least one check");
  std::set<std::string> seen;
  for (const std::string& c : sc.checks) {
    const auto& known = check_names();
    if (std::find(known.begin(), known.end(), c) == known.end()) fail(ErrorKind::unknown_name, "unknown check '" + c + "'");
    if (!seen.insert(c).second) schema_fail(root + ".checks", "duplicate check '" + c + "'");
  }

  if (doc.contains("tolerances")) {
    const Json& t = require_object(doc.at("tolerances"), root + ".tolerances");
    for (const auto& [k, v] : t.items()) {
      const double x = as_number(v, root + ".tolerances." + k);
      if (!(x > 0.0)) schema_fail(root + ".tolerances." + k, "must be positive");
      sc.tolerances[k] = x;
    }
  }
  if (doc.contains("targets")) {
    parse_targets(doc.at("targets"), root + ".targets");
    sc.targets = doc.at("targets");
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path);
}

}  // namespace tfa
