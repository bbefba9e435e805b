#pragma once

// Fixed-step RK4 reconstruction of lambda(s) and kappa2(s) from their ODEs.

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "tfa/error.hpp"

namespace tfa {

using ScalarFn = std::function<double(double)>;

struct OdeGrid {
  double s0 = 0.0;
  double s1 = 0.0;
  int steps = 0;
  std::vector<std::pair<double, double>> values;  // (s, y), steps + 1 samples

  double at(double s) const;  // linear interpolation, clamped at the ends
  void write_csv(std::ostream& os, const std::string& value_name = "value") const;
};

// Thrown when |y| passes the blow-up threshold; location refined by bisection.
class BlowUpError : public Error {
 public:
  BlowUpError(double location, const std::string& what) : Error(ErrorKind::blow_up, what), location_(location) {}
  double location() const noexcept { return location_; }

 private:
  double location_;
};

constexpr int kMinOdeSteps = 8;
constexpr double kBlowUpThreshold = 1e6;
constexpr double kBlowUpResolution = 1e-3;

// lambda = lambda0 exp(int sigma), integrated in log space.
OdeGrid integrate_log_lambda(const ScalarFn& sigma, double s0, double lambda0, double s1, int steps);

// d kappa2 / ds = -(cos(theta) f + kappa2)(cos(theta) kappa2 + f) / sin(theta)
OdeGrid evolve_kappa2(const ScalarFn& f, double theta, double kappa2_0, double s0, double s1, int steps);

// One RK4 run per step count; max error against `exact` for each.
struct OrderEstimate {
  std::vector<int> steps;
  std::vector<double> errors;
  double order = 0.0;  // log2 of the smallest successive error ratio
};

OrderEstimate estimate_order(const std::function<OdeGrid(int)>& solve, const ScalarFn& exact,
                             const std::vector<int>& steps);

}  // namespace tfa
