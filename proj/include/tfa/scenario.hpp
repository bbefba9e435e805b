#pragma once

// Scenario documents (JSON) -> batteries -> JSON report.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tfa/axis_analysis.hpp"
#include "tfa/surfaces.hpp"

namespace tfa {

using Json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;
constexpr const char* kEngineVersion = "0.1.0";

struct InlineSurfaceSpec {
  std::vector<std::string> coords;
  std::vector<std::string> params;
  std::vector<std::pair<double, double>> box;
};

struct Scenario {
  Json document;
  std::string name;
  AmbientSpec ambient;
  std::string axis_name;
  std::vector<double> axis_params;
  std::string axis_expression;
  std::string surface_name;
  std::vector<double> surface_params;
  std::optional<InlineSurfaceSpec> inline_surface;
  Grid grid;
  std::vector<std::string> checks;
  std::map<std::string, double> tolerances;  // keyed "check" or "check.entry"
  Json targets = Json::object();
};

// Parse and validate. Syntax errors carry line:column; structural errors
// carry the JSON path. Both are ErrorKind::parse.
Scenario parse_scenario(const std::string& text, const std::string& origin = "<input>");
Scenario load_scenario(const std::string& path);

const std::vector<std::string>& check_names();

struct RunOptions {
  std::optional<double> tol;  // replaces every upper-bound tolerance
  double grid_scale = 1.0;
  bool flip_normal = false;
  int threads = 1;
  bool timing = false;
};

Immersion build_surface(const Scenario& sc, const RunOptions& opt = {});
Grid scaled_grid(const Grid& grid, double scale);

Json run_scenario(const Scenario& sc, const RunOptions& opt = {});
bool report_pass(const Json& report);

// Fixed key order, residuals rounded to 12 significant digits.
std::string dump_report(const Json& report);

// 0 pass, 1 check failure, 2 parse/schema, 3 unknown name, 4 domain, 5 numerical, 6 io.
int exit_code_for(ErrorKind kind);
constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 1;

struct ExportSummary {
  bool mesh = false;  // false: CSV point cloud
  std::size_t vertices = 0;
  std::size_t triangles = 0;
};

ExportSummary export_surface(const Scenario& sc, const RunOptions& opt, const std::string& path);

// Sorted names per category: ambients, axes, surfaces, checks. Empty category
// selects everything; an unknown category yields an empty map.
std::map<std::string, std::vector<std::string>> list_catalog(const std::string& category = {});

}  // namespace tfa
