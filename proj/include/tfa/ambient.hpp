#pragma once

#include <limits>
#include <random>
#include <string>
#include <vector>

#include "tfa/metric.hpp"

namespace tfa {

enum class AmbientKind { euclidean, euclidean_punctured, hyperbolic_half_space, warped_product };
enum class FiberKind { flat_cartesian, flat_spherical, round_sphere };

const char* to_string(AmbientKind kind);
const char* to_string(FiberKind kind);
AmbientKind parse_ambient_kind(const std::string& name);
FiberKind parse_fiber_kind(const std::string& name);

// Warping function p(u) from a closed-form registry. Evaluates on any dual
// scalar so that metric derivatives stay exact.
class WarpFunction {
 public:
  enum class Kind { identity, exponential, constant, spline };

  static WarpFunction identity() { return WarpFunction(Kind::identity); }
  static WarpFunction exponential() { return WarpFunction(Kind::exponential); }
  static WarpFunction constant(double c);
  // Natural cubic spline through (knots[i], values[i]); knots strictly increasing.
  static WarpFunction spline(std::vector<double> knots, std::vector<double> values);
  static WarpFunction from_name(const std::string& name, const std::vector<double>& params);

  Kind kind() const { return kind_; }
  std::string name() const;
  const std::vector<double>& params() const { return params_; }
  const std::vector<double>& knots() const { return knots_; }

  template <class S>
  S operator()(const S& u) const {
    switch (kind_) {
      case Kind::identity: return u;
      case Kind::exponential: return exp(u);
      case Kind::constant: return S(params_[0]);
      case Kind::spline: {
        const double x = primal(u);
        std::size_t k = 0;
        while (k + 2 < knots_.size() && x > knots_[k + 1]) ++k;
        const S t = u - knots_[k];
        return S(a_[k]) + t * (S(b_[k]) + t * (S(c_[k]) + t * S(d_[k])));
      }
    }
    return S(0.0);
  }

 private:
  explicit WarpFunction(Kind k) : kind_(k) {}
  Kind kind_;
  std::vector<double> params_;
  std::vector<double> knots_, a_, b_, c_, d_;
};

struct AmbientSpec {
  AmbientKind kind = AmbientKind::euclidean;
  int dim = 3;
  WarpFunction warp = WarpFunction::identity();
  FiberKind fiber = FiberKind::flat_cartesian;
  // Open base interval for warped products.
  double u_min = 0.0;
  double u_max = std::numeric_limits<double>::infinity();
};

// Throws invalid_input for violated spec invariants and for a warp that is
// not strictly positive on the base interval.
MetricField build_ambient(const AmbientSpec& spec);

// Metric of the fiber alone, in the fiber coordinates.
MetricField build_fiber(const AmbientSpec& spec);

struct WarpReport {
  // Residuals of the four warped-product connection identities:
  // (i) base-base, (ii) mixed, (iii) fiber tangential, (iv) fiber normal.
  double base_base = 0.0;
  double mixed = 0.0;
  double fiber_tangential = 0.0;
  double fiber_normal = 0.0;
  int samples = 0;

  double max() const;
};

WarpReport verify_warp_connection(const AmbientSpec& spec, const std::vector<Coords>& samples);

// A random point well inside the chart domain.
std::vector<double> sample_domain_point(const AmbientSpec& spec, std::mt19937_64& rng);

}  // namespace tfa
