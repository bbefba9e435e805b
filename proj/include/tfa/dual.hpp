#pragma once

// Forward-mode dual scalars. Nesting Dual<Dual<double>> carries mixed second
// derivatives: with x = Dual<D1>(D1(x0, a), D1(b, 0)) the result r has
//   r.v.v = f, r.v.d = f'.a, r.d.v = f'.b, r.d.d = a^T f'' b.

#include <cmath>
#include <ostream>
#include <type_traits>

namespace tfa {

template <class T>
struct Dual {
  T v{};
  T d{};

  constexpr Dual() = default;
  constexpr Dual(double c) : v(c), d(0.0) {}  // NOLINT: implicit by intent
  constexpr Dual(const T& value, const T& tangent) : v(value), d(tangent) {}
  constexpr Dual(const T& value)  // NOLINT
    requires(!std::is_same_v<T, double>)
      : v(value), d(0.0) {}

  Dual& operator+=(const Dual& o) {
    v += o.v;
    d += o.d;
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    d -= o.d;
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    d = d * o.v + v * o.d;
    v *= o.v;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    T inv = T(1.0) / o.v;
    d = (d - v * inv * o.d) * inv;
    v *= inv;
    return *this;
  }
};

using D1 = Dual<double>;
using D2 = Dual<D1>;

template <class T> struct is_dual : std::false_type {};
template <class T> struct is_dual<Dual<T>> : std::true_type {};

inline double primal(double x) { return x; }
template <class T>
double primal(const Dual<T>& x) {
  return primal(x.v);
}

template <class T> Dual<T> operator+(Dual<T> a, const Dual<T>& b) { return a += b; }
template <class T> Dual<T> operator-(Dual<T> a, const Dual<T>& b) { return a -= b; }
template <class T> Dual<T> operator*(Dual<T> a, const Dual<T>& b) { return a *= b; }
template <class T> Dual<T> operator/(Dual<T> a, const Dual<T>& b) { return a /= b; }
template <class T> Dual<T> operator-(const Dual<T>& a) { return {-a.v, -a.d}; }
template <class T> Dual<T> operator+(const Dual<T>& a) { return a; }

// Mixed arithmetic with plain doubles.
template <class T> Dual<T> operator+(Dual<T> a, double b) { a.v += b; return a; }
template <class T> Dual<T> operator+(double b, Dual<T> a) { a.v += b; return a; }
template <class T> Dual<T> operator-(Dual<T> a, double b) { a.v -= b; return a; }
template <class T> Dual<T> operator-(double b, const Dual<T>& a) { return {b - a.v, -a.d}; }
template <class T> Dual<T> operator*(const Dual<T>& a, double b) { return {a.v * b, a.d * b}; }
template <class T> Dual<T> operator*(double b, const Dual<T>& a) { return {a.v * b, a.d * b}; }
template <class T> Dual<T> operator/(const Dual<T>& a, double b) { return {a.v / b, a.d / b}; }
template <class T> Dual<T> operator/(double b, const Dual<T>& a) { return Dual<T>(b) / a; }

template <class T> bool operator<(const Dual<T>& a, const Dual<T>& b) { return primal(a) < primal(b); }
template <class T> bool operator>(const Dual<T>& a, const Dual<T>& b) { return primal(a) > primal(b); }
template <class T> bool operator<(const Dual<T>& a, double b) { return primal(a) < b; }
template <class T> bool operator>(const Dual<T>& a, double b) { return primal(a) > b; }
template <class T> bool operator<=(const Dual<T>& a, double b) { return primal(a) <= b; }
template <class T> bool operator>=(const Dual<T>& a, double b) { return primal(a) >= b; }

using std::abs;
using std::acos;
using std::asin;
using std::atan;
using std::cos;
using std::cosh;
using std::exp;
using std::log;
using std::pow;
using std::sin;
using std::sinh;
using std::sqrt;
using std::tan;
using std::tanh;

template <class T> Dual<T> sin(const Dual<T>& a) { return {sin(a.v), a.d * cos(a.v)}; }
template <class T> Dual<T> cos(const Dual<T>& a) { return {cos(a.v), -(a.d * sin(a.v))}; }
template <class T> Dual<T> tan(const Dual<T>& a) {
  T t = tan(a.v);
  return {t, a.d * (T(1.0) + t * t)};
}
template <class T> Dual<T> exp(const Dual<T>& a) {
  T e = exp(a.v);
  return {e, a.d * e};
}
template <class T> Dual<T> log(const Dual<T>& a) { return {log(a.v), a.d / a.v}; }
template <class T> Dual<T> sqrt(const Dual<T>& a) {
  T r = sqrt(a.v);
  return {r, a.d / (2.0 * r)};
}
template <class T> Dual<T> sinh(const Dual<T>& a) { return {sinh(a.v), a.d * cosh(a.v)}; }
template <class T> Dual<T> cosh(const Dual<T>& a) { return {cosh(a.v), a.d * sinh(a.v)}; }
template <class T> Dual<T> tanh(const Dual<T>& a) {
  T t = tanh(a.v);
  return {t, a.d * (T(1.0) - t * t)};
}
template <class T> Dual<T> atan(const Dual<T>& a) { return {atan(a.v), a.d / (T(1.0) + a.v * a.v)}; }
template <class T> Dual<T> asin(const Dual<T>& a) { return {asin(a.v), a.d / sqrt(T(1.0) - a.v * a.v)}; }
template <class T> Dual<T> acos(const Dual<T>& a) { return {acos(a.v), -(a.d / sqrt(T(1.0) - a.v * a.v))}; }
template <class T> Dual<T> abs(const Dual<T>& a) { return primal(a) < 0.0 ? -a : a; }

template <class T> Dual<T> pow(const Dual<T>& a, double p) {
  if (p == 0.0) return Dual<T>(1.0);
  T base = pow(a.v, p - 1.0);
  return {base * a.v, a.d * (p * base)};
}
template <class T> Dual<T> pow(const Dual<T>& a, const Dual<T>& p) { return exp(p * log(a)); }
template <class T> Dual<T> pow(double a, const Dual<T>& p) { return exp(p * std::log(a)); }

template <class T>
std::ostream& operator<<(std::ostream& os, const Dual<T>& a) {
  return os << '(' << a.v << " + " << a.d << "e)";
}

}  // namespace tfa
