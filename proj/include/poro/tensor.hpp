#pragma once

#include <array>
#include <cmath>

namespace poro {

// Fixed-size dense vector/matrix over an arbitrary scalar (double or Dual<N>).
// Only what the kernels need: products, det/inverse for 2x2 and 3x3,
// transpose, double contraction.

template <class T, int N>
struct Vec {
  std::array<T, N> a{};
  T& operator[](int i) { return a[i]; }
  const T& operator[](int i) const { return a[i]; }

  friend Vec operator+(const Vec& x, const Vec& y) {
    Vec r;
    for (int i = 0; i < N; ++i) r[i] = x[i] + y[i];
    return r;
  }
  friend Vec operator-(const Vec& x, const Vec& y) {
    Vec r;
    for (int i = 0; i < N; ++i) r[i] = x[i] - y[i];
    return r;
  }
  template <class S>
  friend Vec operator*(const S& s, const Vec& x) {
    Vec r;
    for (int i = 0; i < N; ++i) r[i] = s * x[i];
    return r;
  }
};

template <class T, int N>
T dot(const Vec<T, N>& x, const Vec<T, N>& y) {
  T s = x[0] * y[0];
  for (int i = 1; i < N; ++i) s += x[i] * y[i];
  return s;
}

template <class T, int N>
struct Mat {
  std::array<T, N * N> a{};  // row-major
  T& operator()(int i, int j) { return a[i * N + j]; }
  const T& operator()(int i, int j) const { return a[i * N + j]; }

  static Mat identity() {
    Mat m;
    for (int i = 0; i < N; ++i) m(i, i) = T(1.0);
    return m;
  }

  friend Mat operator+(const Mat& x, const Mat& y) {
    Mat r;
    for (int i = 0; i < N * N; ++i) r.a[i] = x.a[i] + y.a[i];
    return r;
  }
  friend Mat operator-(const Mat& x, const Mat& y) {
    Mat r;
    for (int i = 0; i < N * N; ++i) r.a[i] = x.a[i] - y.a[i];
    return r;
  }
  template <class S>
  friend Mat operator*(const S& s, const Mat& x) {
    Mat r;
    for (int i = 0; i < N * N; ++i) r.a[i] = s * x.a[i];
    return r;
  }
  friend Mat operator*(const Mat& x, const Mat& y) {
    Mat r;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        T s = x(i, 0) * y(0, j);
        for (int k = 1; k < N; ++k) s += x(i, k) * y(k, j);
        r(i, j) = s;
      }
    return r;
  }
  friend Vec<T, N> operator*(const Mat& m, const Vec<T, N>& v) {
    Vec<T, N> r;
    for (int i = 0; i < N; ++i) {
      T s = m(i, 0) * v[0];
      for (int k = 1; k < N; ++k) s += m(i, k) * v[k];
      r[i] = s;
    }
    return r;
  }
};

template <class T, int N>
Mat<T, N> transpose(const Mat<T, N>& m) {
  Mat<T, N> r;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) r(i, j) = m(j, i);
  return r;
}

template <class T, int N>
T trace(const Mat<T, N>& m) {
  T s = m(0, 0);
  for (int i = 1; i < N; ++i) s += m(i, i);
  return s;
}

template <class T, int N>
T ddot(const Mat<T, N>& x, const Mat<T, N>& y) {
  T s = x.a[0] * y.a[0];
  for (int i = 1; i < N * N; ++i) s += x.a[i] * y.a[i];
  return s;
}

template <class T>
T det(const Mat<T, 2>& m) {
  return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
}

template <class T>
T det(const Mat<T, 3>& m) {
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

template <class T>
Mat<T, 2> inverse(const Mat<T, 2>& m) {
  const T idet = 1.0 / det(m);
  Mat<T, 2> r;
  r(0, 0) = idet * m(1, 1);
  r(0, 1) = -1.0 * idet * m(0, 1);
  r(1, 0) = -1.0 * idet * m(1, 0);
  r(1, 1) = idet * m(0, 0);
  return r;
}

template <class T>
Mat<T, 3> inverse(const Mat<T, 3>& m) {
  const T idet = 1.0 / det(m);
  Mat<T, 3> r;
  r(0, 0) = idet * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1));
  r(0, 1) = idet * (m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2));
  r(0, 2) = idet * (m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1));
  r(1, 0) = idet * (m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2));
  r(1, 1) = idet * (m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0));
  r(1, 2) = idet * (m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2));
  r(2, 0) = idet * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
  r(2, 1) = idet * (m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1));
  r(2, 2) = idet * (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0));
  return r;
}

// Plane-strain embedding: 2x2 block plus unit out-of-plane stretch.
template <class T>
Mat<T, 3> embed3(const Mat<T, 2>& m) {
  Mat<T, 3> r;
  r(0, 0) = m(0, 0);
  r(0, 1) = m(0, 1);
  r(1, 0) = m(1, 0);
  r(1, 1) = m(1, 1);
  r(2, 2) = T(1.0);
  return r;
}

}  // namespace poro
