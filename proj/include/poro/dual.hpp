#pragma once

#include <array>
#include <cmath>

namespace poro {

// Forward-mode dual number carrying N partial derivatives.
//
// Element kernels are written once against a generic scalar; instantiating
// them with Dual<N> (N = element DoF count) yields the exact residual
// derivative rows in a single pass. Arithmetic follows the usual rules:
// value ops on v, directional derivative ops on d.
template <int N>
struct Dual {
  double v = 0.0;
  std::array<double, N> d{};

  Dual() = default;
  Dual(double value) : v(value) {}  // NOLINT: implicit from constants

  static Dual seeded(double value, int slot) {
    Dual x(value);
    x.d[slot] = 1.0;
    return x;
  }

  Dual& operator+=(const Dual& o) {
    v += o.v;
    for (int i = 0; i < N; ++i) d[i] += o.d[i];
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    for (int i = 0; i < N; ++i) d[i] -= o.d[i];
    return *this;
  }
  Dual& operator*=(const Dual& o) { return *this = *this * o; }
  Dual& operator/=(const Dual& o) { return *this = *this / o; }

  friend Dual operator+(const Dual& a, const Dual& b) {
    Dual r(a.v + b.v);
    for (int i = 0; i < N; ++i) r.d[i] = a.d[i] + b.d[i];
    return r;
  }
  friend Dual operator-(const Dual& a, const Dual& b) {
    Dual r(a.v - b.v);
    for (int i = 0; i < N; ++i) r.d[i] = a.d[i] - b.d[i];
    return r;
  }
  friend Dual operator-(const Dual& a) {
    Dual r(-a.v);
    for (int i = 0; i < N; ++i) r.d[i] = -a.d[i];
    return r;
  }
  friend Dual operator*(const Dual& a, const Dual& b) {
    Dual r(a.v * b.v);
    for (int i = 0; i < N; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
    return r;
  }
  friend Dual operator*(const Dual& a, double s) {
    Dual r(a.v * s);
    for (int i = 0; i < N; ++i) r.d[i] = a.d[i] * s;
    return r;
  }
  friend Dual operator*(double s, const Dual& a) { return a * s; }
  friend Dual operator/(const Dual& a, const Dual& b) {
    const double inv = 1.0 / b.v;
    Dual r(a.v * inv);
    for (int i = 0; i < N; ++i) r.d[i] = (a.d[i] - r.v * b.d[i]) * inv;
    return r;
  }
  friend Dual operator/(double s, const Dual& b) { return Dual(s) / b; }
  friend Dual operator/(const Dual& a, double s) { return a * (1.0 / s); }

  friend bool operator<(const Dual& a, const Dual& b) { return a.v < b.v; }
  friend bool operator>(const Dual& a, const Dual& b) { return a.v > b.v; }
  friend bool operator<=(const Dual& a, const Dual& b) { return a.v <= b.v; }
  friend bool operator>=(const Dual& a, const Dual& b) { return a.v >= b.v; }
};

template <int N>
Dual<N> exp(const Dual<N>& a) {
  const double e = std::exp(a.v);
  Dual<N> r(e);
  for (int i = 0; i < N; ++i) r.d[i] = e * a.d[i];
  return r;
}

template <int N>
Dual<N> log(const Dual<N>& a) {
  Dual<N> r(std::log(a.v));
  const double inv = 1.0 / a.v;
  for (int i = 0; i < N; ++i) r.d[i] = inv * a.d[i];
  return r;
}

template <int N>
Dual<N> sqrt(const Dual<N>& a) {
  const double s = std::sqrt(a.v);
  Dual<N> r(s);
  const double h = 0.5 / s;
  for (int i = 0; i < N; ++i) r.d[i] = h * a.d[i];
  return r;
}

template <int N>
Dual<N> pow(const Dual<N>& a, double p) {
  const double f = std::pow(a.v, p);
  Dual<N> r(f);
  const double g = p * std::pow(a.v, p - 1.0);
  for (int i = 0; i < N; ++i) r.d[i] = g * a.d[i];
  return r;
}

// Generic accessors so kernels can ask for the plain value of either scalar.
inline double value(double x) { return x; }
template <int N>
double value(const Dual<N>& x) {
  return x.v;
}

inline bool is_finite(double x) { return std::isfinite(x); }
template <int N>
bool is_finite(const Dual<N>& x) {
  if (!std::isfinite(x.v)) return false;
  for (int i = 0; i < N; ++i)
    if (!std::isfinite(x.d[i])) return false;
  return true;
}

}  // namespace poro
