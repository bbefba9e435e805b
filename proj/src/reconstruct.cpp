#include "tfa/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace tfa {

namespace {

using Rhs = std::function<double(double, double)>;

void check_grid(double s0, double s1, int steps) {
  if (!std::isfinite(s0) || !std::isfinite(s1) || s0 == s1) {
    fail(ErrorKind::invalid_input, "integration interval must be finite and non-empty");
  }
  if (steps < kMinOdeSteps) {
    fail(ErrorKind::invalid_input, "need at least " + std::to_string(kMinOdeSteps) + " steps, got " + std::to_string(steps));
  }
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

double rk4_step(const Rhs& rhs, double s, double y, double h) {
  const double k1 = rhs(s, y);
  const double k2 = rhs(s + 0.5 * h, y + 0.5 * h * k1);
  const double k3 = rhs(s + 0.5 * h, y + 0.5 * h * k2);
  const double k4 = rhs(s + h, y + h * k3);
  return y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

bool blown(double y) { return !std::isfinite(y) || std::abs(y) > kBlowUpThreshold; }

// [lo, hi] brackets the first crossing; narrow it with finer sub-integration.
double locate_blow_up(const Rhs& rhs, double lo, double y_lo, double hi) {
  while (std::abs(hi - lo) > kBlowUpResolution) {
    const double mid = 0.5 * (lo + hi);
    const int sub = 16;
    const double h = (mid - lo) / sub;
    double y = y_lo;
    bool crossed = false;
    for (int k = 0; k < sub && !crossed; ++k) {
      y = rk4_step(rhs, lo + k * h, y, h);
      crossed = blown(y);
    }
    if (crossed) {
      hi = mid;
    } else {
      lo = mid;
      y_lo = y;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double OdeGrid::at(double s) const {
  if (values.empty()) fail(ErrorKind::invalid_input, "empty ODE grid");
  const bool up = s1 > s0;
  auto it = std::lower_bound(values.begin(), values.end(), s, [up](const auto& p, double x) {
    return up ? p.first < x : p.first > x;
  });
  if (it == values.begin()) return it->second;
  if (it == values.end()) return values.back().second;
  const auto& [sa, ya] = *(it - 1);
  const auto& [sb, yb] = *it;
  return ya + (yb - ya) * (s - sa) / (sb - sa);
}

void OdeGrid::write_csv(std::ostream& os, const std::string& value_name) const {
  os << "s," << value_name << '\n';
  for (const auto& [s, y] : values) os << fmt(s) << ',' << fmt(y) << '\n';
}

OdeGrid integrate_log_lambda(const ScalarFn& sigma, double s0, double lambda0, double s1, int steps) {
  check_grid(s0, s1, steps);
  if (!(lambda0 > 0.0) || !std::isfinite(lambda0)) fail(ErrorKind::invalid_input, "lambda0 must be positive");
  const Rhs rhs = [&sigma](double s, double) {
    const double v = sigma(s);
    if (!std::isfinite(v)) fail(ErrorKind::numerical, "non-finite sigma at s = " + fmt(s));
    return v;
  };
  OdeGrid g{s0, s1, steps, {}};
  const double h = (s1 - s0) / steps;
  double logl = std::log(lambda0);
  g.values.emplace_back(s0, lambda0);
  for (int k = 0; k < steps; ++k) {
    const double s = s0 + k * h;
    logl = rk4_step(rhs, s, logl, h);
    g.values.emplace_back(k + 1 == steps ? s1 : s + h, std::exp(logl));
  }
  return g;
}

OdeGrid evolve_kappa2(const ScalarFn& f, double theta, double kappa2_0, double s0, double s1, int steps) {
  check_grid(s0, s1, steps);
  const double st = std::sin(theta), ct = std::cos(theta);
  if (!std::isfinite(theta) || std::abs(st) < 1e-8) fail(ErrorKind::invalid_input, "need sin(theta) away from 0");
  const Rhs rhs = [&f, st, ct](double s, double k) {
    const double fs = f(s);
    if (!std::isfinite(fs)) fail(ErrorKind::numerical, "non-finite f at s = " + fmt(s));
    return -(ct * fs + k) * (ct * k + fs) / st;
  };
  OdeGrid g{s0, s1, steps, {}};
  const double h = (s1 - s0) / steps;
  double y = kappa2_0;
  g.values.emplace_back(s0, y);
  for (int k = 0; k < steps; ++k) {
    const double s = s0 + k * h;
    const double next = rk4_step(rhs, s, y, h);
    if (blown(next)) {
      const double where = locate_blow_up(rhs, s, y, s + h);
      throw BlowUpError(where, "kappa2 blows up near s = " + fmt(where));
    }
    y = next;
    g.values.emplace_back(k + 1 == steps ? s1 : s + h, y);
  }
  return g;
}

OrderEstimate estimate_order(const std::function<OdeGrid(int)>& solve, const ScalarFn& exact,
                             const std::vector<int>& steps) {
  if (steps.size() < 2) fail(ErrorKind::invalid_input, "order estimate needs two or more step counts");
  OrderEstimate out;
  out.steps = steps;
  for (int n : steps) {
    const OdeGrid g = solve(n);
    double err = 0.0;
    for (const auto& [s, y] : g.values) err = std::max(err, std::abs(y - exact(s)));
    out.errors.push_back(err);
  }
  out.order = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < steps.size(); ++i) {
    const double refine = static_cast<double>(steps[i]) / steps[i - 1];
    out.order = std::min(out.order, std::log(out.errors[i - 1] / out.errors[i]) / std::log(refine));
  }
  return out;
}

}  // namespace tfa
