#pragma once

// An axis V along a hypersurface: V = alpha T + (normal component) U, and
// residual batteries for the identities that tie V to the shape operator.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tfa/hypersurface.hpp"
#include "tfa/vfield.hpp"

namespace tfa {

struct AxisDecomposition {
  double normal_component = 0.0;  // <V, U>
  double alpha = 0.0;             // |V^T|
  bool T_defined = false;
  Vec<double> T;        // unit tangential direction, ambient components
  Vec<double> t;        // same, parameter coordinates
  double norm = 0.0;    // |V|
  bool unit = false;    // |V| = 1 to tolerance
  double theta = 0.0;   // acos(normal_component), unit axes only
  double reassembly = 0.0;
};

struct GenerativeDecomposition {
  double beta = 0.0;   // |W^T|
  double gamma = 0.0;  // <W, U>
  bool T2_defined = false;
  Vec<double> T2;
  Vec<double> t2;
  Vec<double> w_tangent;  // W^T in parameter coordinates
  double reassembly = 0.0;
};

// T is required: throws vanishing_tangential when alpha < tol.
AxisDecomposition decompose_axis(const Immersion& imm, const VectorField& v, const Vec<double>& q,
                                 bool require_T = false, double tol = 1e-10);

GenerativeDecomposition decompose_generative(const Immersion& imm, const Vec<double>& generative,
                                             const Vec<double>& q, double tol = 1e-10);

struct IdentityEntry {
  std::string label;
  double value = 0.0;      // max over the grid
  double tolerance = 0.0;
  bool lower_bound = false;  // pass iff value > tolerance
  bool pass() const { return lower_bound ? value > tolerance : value < tolerance; }
};

struct IdentityReport {
  std::string battery;
  std::vector<IdentityEntry> entries;
  std::vector<std::pair<std::string, double>> info;  // diagnostics, not pass/fail
  int points = 0;

  bool pass() const;
  const IdentityEntry& entry(const std::string& label) const;
  double info_value(const std::string& label) const;
};

// Rectilinear parameter grid; axis i has `count` points from min to max.
struct GridAxis {
  double min = 0.0;
  double max = 0.0;
  int count = 1;
};

struct Grid {
  std::vector<GridAxis> axes;
  std::vector<Vec<double>> points() const;
};

// Per-point evaluation over the grid on `threads` workers; results keep grid order.
std::vector<Vec<double>> evaluate_grid(const std::vector<Vec<double>>& points, int threads,
                                       const std::function<Vec<double>(const Vec<double>&)>& fn);

struct BatteryOptions {
  double tol = 1e-8;
  int threads = 1;
  ClassifyTolerances classify;
};

IdentityReport constant_angle_report(const Immersion& imm, const VectorField& v, const Grid& grid,
                                     const BatteryOptions& opt = {});

// Quantities of the anti-torqued identities at a single point.
struct AntiTorquedPoint {
  double f = 0.0;
  double cos_theta = 0.0;
  double sin_theta = 0.0;
  double shape_T = 0.0;  // <A T, T>
  double r31 = 0.0, r32 = 0.0, r33 = 0.0, r34 = 0.0;
  double unit = 0.0;     // | |V|^2 - 1 |
};

AntiTorquedPoint anti_torqued_point(const Immersion& imm, const VectorField& v, const Vec<double>& q);

IdentityReport verify_anti_torqued_identities(const Immersion& imm, const VectorField& v, const Grid& grid,
                                              const BatteryOptions& opt = {});

// Scalar data as functions of the arclength s (1 -> 1 maps).
IdentityReport verify_tw_condition(const SmoothMap& lambda, const SmoothMap& kappa2, const SmoothMap& f, double theta,
                                   const std::vector<double>& s_grid, double tol = 1e-8);

// Surface version for n = 2: parameter 0 must be the arclength along T.
IdentityReport tw_from_surface(const Immersion& imm, const VectorField& v, const Grid& grid,
                               const BatteryOptions& opt = {});

IdentityReport verify_space_form_odes(const SmoothMap& kappa1, const SmoothMap& kappa2, const SmoothMap& f,
                                      double theta, const std::vector<double>& s_grid, double tol = 1e-7);

// f = 1/(2 cot(theta) s + c), kappa2 = cos(theta) f, kappa1 = -kappa2.
IdentityReport minimal_case_check(double theta, double c, const std::vector<double>& s_grid, double tol = 1e-9);

struct TorquedPoint {
  double alpha = 0.0;
  double vartheta = 0.0;
  double f = 0.0;
  double beta = 0.0;           // |W^T|
  double beta_T1 = 0.0;        // <W, T1>
  double gamma = 0.0;
  double omega_norm = 0.0;
  double t1 = 0.0, t2 = 0.0;   // residuals of the two identities over X = e_i
  double shape_T1 = 0.0;       // |A T1|
  double f_minus_T1_alpha = 0.0;
  double geodesic_T1 = 0.0;    // |nabla_{T1} T1| (induced connection)
  double pairing = 0.0;        // alpha <W, T1> + vartheta gamma
};

TorquedPoint torqued_point(const Immersion& imm, const VectorField& v, const Vec<double>& q);

IdentityReport verify_torqued_identities(const Immersion& imm, const VectorField& v, const Grid& grid,
                                         const BatteryOptions& opt = {});

IdentityReport check_ruled(const Immersion& imm, const VectorField& v, const Grid& grid,
                           const BatteryOptions& opt = {});

// Declared product structure for the umbilic check: s(q) (n -> 1) and lambda(s) (1 -> 1).
struct ProductStructure {
  SmoothMap s_of_q;
  SmoothMap lambda_of_s;
};

struct UmbilicPoint {
  double delta = 0.0;
  double off_multiple = 0.0;
  double mu = 0.0;             // <nabla_X T, X> / |X|^2 on D
  double leaf_umbilic = 0.0;   // |nabla_X T - mu X| on D
  double frobenius = 0.0;
  double log_lambda_prime = 0.0;  // NaN without a declared structure
  double cot_delta_plus = 0.0;    // cot(theta) delta + f / sin(theta)
  double cot_delta_minus = 0.0;   // cot(theta) delta - f / sin(theta)
};

UmbilicPoint umbilic_point(const Immersion& imm, const VectorField& v, const Vec<double>& q,
                           const std::optional<ProductStructure>& product = std::nullopt);

IdentityReport check_umbilic_restriction(const Immersion& imm, const VectorField& v, const Grid& grid,
                                         const std::optional<ProductStructure>& product = std::nullopt,
                                         const BatteryOptions& opt = {});

// max |G(q) - target(q)| where target maps parameters to the n*n matrix.
double induced_metric_residual(const Immersion& imm, const SmoothMap& target, const std::vector<Vec<double>>& points);

}  // namespace tfa
