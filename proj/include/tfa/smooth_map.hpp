#pragma once

// A map R^in -> R^out that can be evaluated on double, D1 and D2 scalars, so
// that first and second derivatives come from the same closed form.

#include <functional>
#include <utility>
#include <vector>

#include "tfa/dual.hpp"

namespace tfa {

template <class S>
using Vec = std::vector<S>;

class SmoothMap {
 public:
  SmoothMap() = default;

  // `f` must be a generic callable: f(const Vec<S>&) -> Vec<S> for S in
  // {double, D1, D2}.
  template <class F>
  SmoothMap(int in, int out, F f)
      : in_(in),
        out_(out),
        f0_([f](const Vec<double>& x) { return f(x); }),
        f1_([f](const Vec<D1>& x) { return f(x); }),
        f2_([f](const Vec<D2>& x) { return f(x); }) {}

  int in_dim() const { return in_; }
  int out_dim() const { return out_; }
  explicit operator bool() const { return static_cast<bool>(f0_); }

  template <class S>
  Vec<S> operator()(const Vec<S>& x) const {
    if constexpr (std::is_same_v<S, double>) {
      return f0_(x);
    } else if constexpr (std::is_same_v<S, D1>) {
      return f1_(x);
    } else {
      static_assert(std::is_same_v<S, D2>, "SmoothMap supports double, D1, D2");
      return f2_(x);
    }
  }

 private:
  int in_ = 0;
  int out_ = 0;
  std::function<Vec<double>(const Vec<double>&)> f0_;
  std::function<Vec<D1>(const Vec<D1>&)> f1_;
  std::function<Vec<D2>(const Vec<D2>&)> f2_;
};

// x lifted to Dual<S> with unit tangent along coordinate k (k < 0: no seed).
template <class S>
Vec<Dual<S>> seed(const Vec<S>& x, int k) {
  Vec<Dual<S>> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = Dual<S>(x[i], S(static_cast<int>(i) == k ? 1.0 : 0.0));
  }
  return out;
}

// x lifted to Dual<S> with tangent `dir`.
template <class S>
Vec<Dual<S>> seed_dir(const Vec<S>& x, const Vec<double>& dir) {
  Vec<Dual<S>> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = Dual<S>(x[i], S(dir[i]));
  return out;
}

template <class S>
Vec<S> values_of(const Vec<Dual<S>>& x) {
  Vec<S> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i].v;
  return out;
}

template <class S>
Vec<S> tangents_of(const Vec<Dual<S>>& x) {
  Vec<S> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i].d;
  return out;
}

inline Vec<double> to_double(const Vec<double>& x) { return x; }
template <class S>
Vec<double> to_double(const Vec<S>& x) {
  Vec<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = primal(x[i]);
  return out;
}

template <class S>
Vec<S> lift(const Vec<double>& x) {
  return Vec<S>(x.begin(), x.end());
}

// Row-major Jacobian J[r * in + c] = d f_r / d x_c of any generic callable.
template <class F>
std::pair<Vec<double>, Vec<double>> value_and_jacobian(F&& f, const Vec<double>& x) {
  const int in = static_cast<int>(x.size());
  Vec<double> value;
  Vec<double> jac;
  int out = 0;
  for (int c = 0; c < in; ++c) {
    Vec<D1> y = f(seed(x, c));
    if (c == 0) {
      out = static_cast<int>(y.size());
      value = values_of(y);
      jac.assign(static_cast<std::size_t>(out * in), 0.0);
    }
    for (int r = 0; r < out; ++r) jac[r * in + c] = y[r].d;
  }
  if (in == 0) value = to_double(f(Vec<D1>{}));
  return {std::move(value), std::move(jac)};
}

// Second derivatives H[(r * in + a) * in + b] = d^2 f_r / dx_a dx_b.
inline Vec<double> hessian(const SmoothMap& f, const Vec<double>& x) {
  const int in = f.in_dim();
  const int out = f.out_dim();
  Vec<double> h(static_cast<std::size_t>(out * in * in), 0.0);
  for (int a = 0; a < in; ++a) {
    for (int b = a; b < in; ++b) {
      Vec<D2> xs(x.size());
      for (int i = 0; i < in; ++i) {
        xs[i] = D2(D1(x[i], i == a ? 1.0 : 0.0), D1(i == b ? 1.0 : 0.0, 0.0));
      }
      Vec<D2> y = f(xs);
      for (int r = 0; r < out; ++r) {
        h[(r * in + a) * in + b] = y[r].d.d;
        h[(r * in + b) * in + a] = y[r].d.d;
      }
    }
  }
  return h;
}

}  // namespace tfa
