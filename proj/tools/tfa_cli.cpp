// Command-line entry point: run / export / list / paper-suite.

#include <algorithm>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "tfa/scenario.hpp"

#ifndef TFA_SCENARIO_DIR
#define TFA_SCENARIO_DIR "scenarios"
#endif

namespace fs = std::filesystem;
using namespace tfa;

namespace {

int report_error(const Error& e) {
  std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
  return exit_code_for(e.kind());
}

int run_one(const std::string& path, const RunOptions& opt, std::ostream* out) {
  const Scenario sc = load_scenario(path);
  const Json report = run_scenario(sc, opt);
  if (out) *out << dump_report(report);
  return report_pass(report) ? kExitPass : kExitCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for hypersurfaces with torse-forming axes"};
  app.require_subcommand(1);

  RunOptions opt;
  double tol = 0.0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--tol", tol, "Replace every upper-bound tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--grid-scale", opt.grid_scale, "Multiply grid counts")->check(CLI::PositiveNumber);
    sub->add_flag("--flip-normal", opt.flip_normal, "Reverse the unit normal");
    sub->add_option("--threads", opt.threads, "Worker threads per battery")->check(CLI::Range(1, 256));
    sub->add_flag("--timing", opt.timing, "Include wall time in the report");
  };

  std::string config, out_path, report_path, category, suite_dir = TFA_SCENARIO_DIR;
  CLI::App* run = app.add_subcommand("run", "Run a scenario and print its JSON report");
  run->add_option("config", config, "Scenario file")->required();
  run->add_option("--report", report_path, "Write the report here instead of stdout");
  add_common(run);

  CLI::App* exp = app.add_subcommand("export", "Write a mesh (OBJ) or CSV point cloud of the surface");
  exp->add_option("config", config, "Scenario file")->required();
  exp->add_option("--out", out_path, "Output path")->required();
  add_common(exp);

  CLI::App* list = app.add_subcommand("list", "List ambients, axes, surfaces and checks");
  list->add_option("category", category, "ambients | axes | surfaces | checks");

  CLI::App* suite = app.add_subcommand("paper-suite", "Run every bundled scenario");
  suite->add_option("--dir", suite_dir, "Scenario directory");
  add_common(suite);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  if (tol > 0.0) opt.tol = tol;

  try {
    if (*run) {
      if (report_path.empty()) return run_one(config, opt, &std::cout);
      std::ofstream f(report_path, std::ios::binary);
      if (!f) throw Error(ErrorKind::io, "cannot write '" + report_path + "'");
      return run_one(config, opt, &f);
    }
    if (*exp) {
      const ExportSummary s = export_surface(load_scenario(config), opt, out_path);
      std::cout << (s.mesh ? "mesh" : "csv") << ' ' << out_path << ": " << s.vertices << (s.mesh ? " vertices" : " samples");
      if (s.mesh) std::cout << ", " << s.triangles << " triangles";
      std::cout << '\n';
      return 0;
    }
    if (*list) {
      const auto cat = list_catalog(category);
      if (cat.empty()) std::cerr << "warning: unknown category '" << category << "'\n";
      for (const auto& [k, names] : cat) {
        std::cout << k << ":\n";
        for (const std::string& n : names) std::cout << "  " << n << '\n';
      }
      return 0;
    }
    if (*suite) {
      std::vector<fs::path> files;
      for (const auto& e : fs::directory_iterator(suite_dir)) {
        if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
      }
      std::sort(files.begin(), files.end());
      if (files.empty()) throw Error(ErrorKind::io, "no scenarios in '" + suite_dir + "'");
      int worst = 0;
      for (const fs::path& p : files) {
        int code;
        try {
          code = run_one(p.string(), opt, nullptr);
        } catch (const Error& e) {
          code = report_error(e);
        }
        std::cout << (code == 0 ? "PASS " : "FAIL ") << p.filename().string() << " (exit " << code << ")\n";
        worst = std::max(worst, code);
      }
      return worst == 0 ? 0 : kExitCheckFailure;
    }
  } catch (const Error& e) {
    return report_error(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 5;
  }
  return 0;
}
