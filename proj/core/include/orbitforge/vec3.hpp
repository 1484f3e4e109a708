#pragma once

// Small fixed-size vector and matrix templates. They are generic over the
// scalar so the same Lorenz and Runge-Kutta code runs on doubles and on
// intervals.

#include <array>
#include <cmath>
#include <cstddef>

namespace orbitforge {

template <class T>
struct Vec3 {
  T x{};
  T y{};
  T z{};

  constexpr T& operator[](std::size_t i) { return i == 0 ? x : (i == 1 ? y : z); }
  constexpr const T& operator[](std::size_t i) const { return i == 0 ? x : (i == 1 ? y : z); }

  constexpr Vec3& operator+=(const Vec3& o) {
    x = x + o.x;
    y = y + o.y;
    z = z + o.z;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    x = x - o.x;
    y = y - o.y;
    z = z - o.z;
    return *this;
  }

  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

template <class T>
constexpr Vec3<T> operator+(const Vec3<T>& a, const Vec3<T>& b) {
  return {a.x + b.x, a.y + b.y, a.z + b.z};
}
template <class T>
constexpr Vec3<T> operator-(const Vec3<T>& a, const Vec3<T>& b) {
  return {a.x - b.x, a.y - b.y, a.z - b.z};
}
template <class T>
constexpr Vec3<T> operator-(const Vec3<T>& a) {
  return {-a.x, -a.y, -a.z};
}
template <class T, class S>
constexpr Vec3<T> operator*(const S& s, const Vec3<T>& a) {
  return {s * a.x, s * a.y, s * a.z};
}
template <class T, class S>
constexpr Vec3<T> operator*(const Vec3<T>& a, const S& s) {
  return {a.x * s, a.y * s, a.z * s};
}
template <class T, class S>
constexpr Vec3<T> operator/(const Vec3<T>& a, const S& s) {
  return {a.x / s, a.y / s, a.z / s};
}

template <class T>
constexpr T dot(const Vec3<T>& a, const Vec3<T>& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

template <class T>
constexpr Vec3<T> cross(const Vec3<T>& a, const Vec3<T>& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

// Scalar triple product [a, b, c] = a . (b x c).
template <class T>
constexpr T triple(const Vec3<T>& a, const Vec3<T>& b, const Vec3<T>& c) {
  return dot(a, cross(b, c));
}

inline double norm(const Vec3<double>& a) { return std::hypot(a.x, a.y, a.z); }
inline double distance(const Vec3<double>& a, const Vec3<double>& b) { return norm(a - b); }
inline double max_abs(const Vec3<double>& a) {
  return std::fmax(std::fabs(a.x), std::fmax(std::fabs(a.y), std::fabs(a.z)));
}

// Row-major 3x3 matrix.
template <class T>
struct Mat3 {
  std::array<T, 9> a{};

  constexpr T& operator()(std::size_t i, std::size_t j) { return a[3 * i + j]; }
  constexpr const T& operator()(std::size_t i, std::size_t j) const { return a[3 * i + j]; }

  static constexpr Mat3 identity() {
    Mat3 m;
    m(0, 0) = T(1.0);
    m(1, 1) = T(1.0);
    m(2, 2) = T(1.0);
    return m;
  }

  constexpr Vec3<T> column(std::size_t j) const { return {(*this)(0, j), (*this)(1, j), (*this)(2, j)}; }
  constexpr void set_column(std::size_t j, const Vec3<T>& v) {
    (*this)(0, j) = v.x;
    (*this)(1, j) = v.y;
    (*this)(2, j) = v.z;
  }

  friend constexpr bool operator==(const Mat3&, const Mat3&) = default;
};

template <class T>
constexpr Vec3<T> operator*(const Mat3<T>& m, const Vec3<T>& v) {
  return {m(0, 0) * v.x + m(0, 1) * v.y + m(0, 2) * v.z, m(1, 0) * v.x + m(1, 1) * v.y + m(1, 2) * v.z,
          m(2, 0) * v.x + m(2, 1) * v.y + m(2, 2) * v.z};
}

template <class T>
constexpr Mat3<T> operator*(const Mat3<T>& m, const Mat3<T>& n) {
  Mat3<T> r;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) r(i, j) = m(i, 0) * n(0, j) + m(i, 1) * n(1, j) + m(i, 2) * n(2, j);
  return r;
}

template <class T>
constexpr Mat3<T> operator+(const Mat3<T>& m, const Mat3<T>& n) {
  Mat3<T> r;
  for (std::size_t k = 0; k < 9; ++k) r.a[k] = m.a[k] + n.a[k];
  return r;
}

template <class T>
constexpr Mat3<T> operator-(const Mat3<T>& m, const Mat3<T>& n) {
  Mat3<T> r;
  for (std::size_t k = 0; k < 9; ++k) r.a[k] = m.a[k] - n.a[k];
  return r;
}

template <class T, class S>
constexpr Mat3<T> operator*(const S& s, const Mat3<T>& m) {
  Mat3<T> r;
  for (std::size_t k = 0; k < 9; ++k) r.a[k] = s * m.a[k];
  return r;
}

template <class T>
constexpr Mat3<T> transpose(const Mat3<T>& m) {
  Mat3<T> r;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) r(i, j) = m(j, i);
  return r;
}

template <class T>
constexpr T determinant(const Mat3<T>& m) {
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

using State3 = Vec3<double>;
using Matrix3 = Mat3<double>;

}  // namespace orbitforge
