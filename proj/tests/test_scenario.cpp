#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "tfa/scenario.hpp"

using namespace tfa;

namespace {

const char* kWapr = R"json({
  "schema_version": 1,
  "name": "t",
  "ambient": {"kind": "warped_product", "dim": 3},
  "axis": {"name": "warped_base_unit"},
  "surface": {"name": "wapr_surface", "params": [0.7853981633974483]},
  "grid": [{"min": 0.5, "max": 3.0, "count": 4}, {"min": -1.0, "max": 1.0, "count": 3}],
  "checks": ["constant_angle", "principal_curvatures"],
  "targets": {"cos_theta": "cos(pi/4)", "principal_curvatures": ["-1/s", "-1/s"]}
})json";

Json with(const std::string& pointer, const Json& value) {
  Json j = Json::parse(kWapr);
  j[Json::json_pointer(pointer)] = value;
  return j;
}

ErrorKind parse_error_kind(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::numerical;
}

ErrorKind run_error_kind(const Json& doc) {
  try {
    run_scenario(parse_scenario(doc.dump()));
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::numerical;
}

}  // namespace

TEST_CASE("syntax errors report line and column") {
  const std::string text = "{\n  \"schema_version\": 1,\n  \"name\": oops\n}";
  try {
    parse_scenario(text, "doc.json");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::parse);
    CHECK(std::string(e.what()).rfind("doc.json:3:", 0) == 0);
    CHECK(exit_code_for(e.kind()) == 2);
  }
}

TEST_CASE("schema violations") {
  Json missing = Json::parse(kWapr);
  missing.erase("ambient");
  CHECK(parse_error_kind(missing.dump()) == ErrorKind::parse);
  CHECK(parse_error_kind(with("/schema_version", 2).dump()) == ErrorKind::parse);
  CHECK(parse_error_kind(with("/grid/0/count", 1).dump()) == ErrorKind::parse);
  CHECK(parse_error_kind(with("/grid/0/count", 2.5).dump()) == ErrorKind::parse);
  CHECK(parse_error_kind(with("/extra", 1).dump()) == ErrorKind::parse);
  CHECK(parse_error_kind(with("/checks", Json::array()).dump()) == ErrorKind::parse);
  CHECK(parse_error_kind(with("/tolerances", Json{{"constant_angle", -1.0}}).dump()) == ErrorKind::parse);
  CHECK(parse_error_kind(with("/checks/0", "warp_speed").dump()) == ErrorKind::unknown_name);
  CHECK(parse_error_kind(with("/ambient/kind", "lorentzian").dump()) == ErrorKind::unknown_name);
  // euclidean ambients take no warp
  CHECK(parse_error_kind(with("/ambient", Json{{"kind", "euclidean"}, {"dim", 3}, {"warp", "u"}}).dump()) ==
        ErrorKind::parse);
}

TEST_CASE("run errors map to distinct exit codes") {
  CHECK(run_error_kind(with("/axis/name", "helix")) == ErrorKind::unknown_name);
  CHECK(run_error_kind(with("/surface/name", "torus")) == ErrorKind::unknown_name);
  CHECK(run_error_kind(with("/grid/0/min", -1.0)) == ErrorKind::domain);
  CHECK(run_error_kind(with("/grid", Json::parse(R"([{"min": 1, "max": 2, "count": 2}])"))) == ErrorKind::parse);
  Json no_target = Json::parse(kWapr);
  no_target["targets"].erase("principal_curvatures");
  CHECK(run_error_kind(no_target) == ErrorKind::parse);
  std::set<int> codes;
  for (ErrorKind k : {ErrorKind::parse, ErrorKind::unknown_name, ErrorKind::domain, ErrorKind::numerical}) {
    codes.insert(exit_code_for(k));
  }
  CHECK(codes.size() == 4);
  CHECK(codes.count(kExitPass) == 0);
  CHECK(codes.count(kExitCheckFailure) == 0);
}

TEST_CASE("report structure and pass flag") {
  const Json r = run_scenario(parse_scenario(kWapr));
  CHECK(report_pass(r));
  CHECK(r["checks"].size() == 2);
  CHECK(r["checks"][0]["check"] == "constant_angle");
  CHECK(r["engine"]["version"] == kEngineVersion);
  CHECK_FALSE(r.contains("wall_time_s"));
  RunOptions timed;
  timed.timing = true;
  CHECK(run_scenario(parse_scenario(kWapr), timed).contains("wall_time_s"));

  // keys keep document order
  std::vector<std::string> keys;
  for (const auto& [k, v] : r.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"engine", "scenario", "options", "orientation", "checks", "pass"});
}

TEST_CASE("reports are byte-identical across runs and thread counts") {
  const Scenario sc = parse_scenario(kWapr);
  RunOptions four;
  four.threads = 4;
  CHECK(dump_report(run_scenario(sc)) == dump_report(run_scenario(sc)));
  CHECK(dump_report(run_scenario(sc)) == dump_report(run_scenario(sc, four)));
}

TEST_CASE("12 significant digits") {
  Json r;
  r["x"] = 0.1234567890123456;
  r["nested"] = Json::array({std::acos(-1.0)});
  const std::string s = dump_report(r);
  CHECK(s.find("0.123456789012") != std::string::npos);
  CHECK(s.find("0.1234567890123") == std::string::npos);
  CHECK(s.find("3.14159265359") != std::string::npos);
}

TEST_CASE("overall pass is the conjunction of checks") {
  Json doc = with("/targets/cos_theta", "0.5");
  const Json r = run_scenario(parse_scenario(doc.dump()));
  CHECK_FALSE(report_pass(r));
  CHECK_FALSE(r["checks"][0]["pass"].get<bool>());
  CHECK(r["checks"][1]["pass"].get<bool>());
}

TEST_CASE("tolerance overrides") {
  Json doc = with("/targets/cos_theta", "cos(pi/4) + 1e-5");
  CHECK_FALSE(report_pass(run_scenario(parse_scenario(doc.dump()))));
  doc["tolerances"] = Json{{"constant_angle.target_cos_theta", 1e-4}};
  CHECK(report_pass(run_scenario(parse_scenario(doc.dump()))));
  RunOptions strict;
  strict.tol = 1e-30;
  CHECK_FALSE(report_pass(run_scenario(parse_scenario(doc.dump()), strict)));
}

TEST_CASE("flip-normal and grid scale") {
  const Scenario sc = parse_scenario(kWapr);
  RunOptions flip;
  flip.flip_normal = true;
  const Json a = run_scenario(sc);
  const Json b = run_scenario(sc, flip);
  CHECK(a["orientation"].get<int>() == -b["orientation"].get<int>());
  // the angle flips with the normal, so the cos(pi/4) target no longer holds
  CHECK_FALSE(report_pass(b));

  RunOptions dense;
  dense.grid_scale = 2.0;
  CHECK(run_scenario(sc, dense)["checks"][0]["points"] == 8 * 6);
  CHECK(scaled_grid(sc.grid, 0.01).axes[0].count == 2);
}

TEST_CASE("check-level errors fail the check, not the run") {
  Json doc = with("/checks", Json::array({"torqued_identities"}));
  const Json r = run_scenario(parse_scenario(doc.dump()));
  CHECK_FALSE(report_pass(r));
  CHECK(r["checks"][0]["error"]["kind"] == "invalid_input");
}

TEST_CASE("inline surfaces") {
  Json doc = Json::parse(kWapr);
  doc["surface"] = Json::parse(R"json({"inline": {"coords": ["sin(pi/4)*s", "log(s)", "t"], "params": ["s", "t"],
                                                   "box": [[0, 100], [-10, 10]]}})json");
  const Json r = run_scenario(parse_scenario(doc.dump()));
  CHECK(r["checks"][0]["pass"].get<bool>());
}

TEST_CASE("export") {
  SUBCASE("mesh for surfaces in 3-dimensional charts") {
    Json doc = Json::parse(kWapr);
    doc["ambient"] = Json{{"kind", "euclidean_punctured"}, {"dim", 3}};
    doc["axis"]["name"] = "radial_unit";
    doc["surface"]["name"] = "constant_slope";
    doc["grid"] = Json::parse(R"([{"min": 1, "max": 2, "count": 32}, {"min": -3, "max": 3, "count": 64}])");
    const std::string path = "export_test.obj";
    const ExportSummary s = export_surface(parse_scenario(doc.dump()), {}, path);
    CHECK(s.mesh);
    CHECK(s.vertices == 2048);
    CHECK(s.triangles == 2 * 31 * 63);
    std::ifstream in(path);
    std::string line;
    std::size_t v = 0, f = 0;
    int max_index = 0;
    while (std::getline(in, line)) {
      if (line.rfind("v ", 0) == 0) ++v;
      if (line.rfind("f ", 0) == 0) {
        ++f;
        std::istringstream ls(line.substr(2));
        int a, b, c;
        ls >> a >> b >> c;
        max_index = std::max({max_index, a, b, c});
      }
    }
    CHECK(v == 2048);
    CHECK(f == 2 * 31 * 63);
    CHECK(max_index == 2048);
    std::remove(path.c_str());
  }
  SUBCASE("CSV for larger charts") {
    Json doc = Json::parse(kWapr);
    doc["ambient"] = Json{{"kind", "euclidean_punctured"}, {"dim", 4}};
    doc["axis"]["name"] = "radial_unit";
    doc["surface"] = Json{{"name", "rot4_spiral"}};
    doc["grid"] = Json::parse(R"([{"min": 0, "max": 1, "count": 3}, {"min": 0, "max": 1, "count": 2}, {"min": 0, "max": 1, "count": 2}])");
    const std::string path = "export_test.csv";
    const ExportSummary s = export_surface(parse_scenario(doc.dump()), {}, path);
    CHECK_FALSE(s.mesh);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "u,v,w,x1,x2,x3,x4");
    std::remove(path.c_str());
  }
  SUBCASE("unwritable path") {
    try {
      export_surface(parse_scenario(kWapr), {}, "/nonexistent-dir/x.obj");
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::io);
    }
  }
}

TEST_CASE("catalog listing") {
  const auto all = list_catalog();
  CHECK(all.size() == 4);
  const auto& s = all.at("surfaces");
  CHECK(std::is_sorted(s.begin(), s.end()));
  for (const char* name : {"hyperbolic_cone", "constant_slope"}) {
    CHECK(std::find(s.begin(), s.end(), name) != s.end());
  }
  const auto& a = all.at("axes");
  CHECK(std::find(a.begin(), a.end(), "radial_unit") != a.end());
  CHECK(list_catalog("axes").size() == 1);
  CHECK(list_catalog("planets").empty());
}
