#pragma once

// Outward-rounded interval arithmetic.
//
// Two rounding realizations share one interval template. NudgeRounding
// computes in round-to-nearest and moves each bound one ulp outward;
// DirectedRounding switches the FPU to round-down / round-up around each
// bound. The library's default `Interval` is chosen at build time by
// ORBITFORGE_DIRECTED_ROUNDING. Directed rounding needs -frounding-math so
// the compiler neither folds nor reorders floating-point work across mode
// switches; the asm barriers below pin operands and results in memory.

#include <algorithm>
#include <cfenv>
#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>
#include <vector>

#include "orbitforge/error.hpp"
#include "orbitforge/vec3.hpp"

namespace orbitforge {

struct NudgeRounding {
  static constexpr const char* name = "nudge";
  template <class F>
  static double down(F&& f) {
    return std::nextafter(f(), -std::numeric_limits<double>::infinity());
  }
  template <class F>
  static double up(F&& f) {
    return std::nextafter(f(), std::numeric_limits<double>::infinity());
  }
};

inline void fp_barrier(double& v) {
#if defined(__GNUC__) || defined(__clang__)
  asm volatile("" : "+m"(v));
#else
  volatile double sink = v;
  v = sink;
#endif
}

struct DirectedRounding {
  static constexpr const char* name = "directed";

  class Mode {
   public:
    explicit Mode(int mode) : saved_(std::fegetround()) { std::fesetround(mode); }
    ~Mode() { std::fesetround(saved_); }
    Mode(const Mode&) = delete;
    Mode& operator=(const Mode&) = delete;

   private:
    int saved_;
  };

  template <class F>
  static double down(F&& f) {
    Mode m(FE_DOWNWARD);
    double v = f();
    fp_barrier(v);
    return v;
  }
  template <class F>
  static double up(F&& f) {
    Mode m(FE_UPWARD);
    double v = f();
    fp_barrier(v);
    return v;
  }
};

template <class Rounding>
class BasicInterval {
 public:
  using rounding = Rounding;

  constexpr BasicInterval() = default;
  constexpr BasicInterval(double v) : lo_(v), hi_(v) {}  // NOLINT: point intervals convert implicitly
  BasicInterval(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!(lo <= hi)) throw Error(ErrorCode::InvalidArgument, "interval needs lo <= hi");
  }

  static BasicInterval hull(double a, double b) { return {std::min(a, b), std::max(a, b)}; }
  static BasicInterval symmetric(double r) { return {-r, r}; }

  constexpr double lo() const noexcept { return lo_; }
  constexpr double hi() const noexcept { return hi_; }
  double mid() const noexcept { return lo_ == hi_ ? lo_ : 0.5 * lo_ + 0.5 * hi_; }
  double width() const noexcept { return hi_ - lo_; }
  double rad() const noexcept { return 0.5 * width(); }
  double mag() const noexcept { return std::max(std::fabs(lo_), std::fabs(hi_)); }
  double mig() const noexcept { return contains(0.0) ? 0.0 : std::min(std::fabs(lo_), std::fabs(hi_)); }

  bool contains(double v) const noexcept { return lo_ <= v && v <= hi_; }
  bool contains_zero() const noexcept { return contains(0.0); }
  bool subset_of(const BasicInterval& o) const noexcept { return o.lo_ <= lo_ && hi_ <= o.hi_; }
  bool interior_of(const BasicInterval& o) const noexcept { return o.lo_ < lo_ && hi_ < o.hi_; }
  bool disjoint_from(const BasicInterval& o) const noexcept { return hi_ < o.lo_ || o.hi_ < lo_; }

  friend BasicInterval hull(const BasicInterval& a, const BasicInterval& b) {
    return {std::min(a.lo_, b.lo_), std::max(a.hi_, b.hi_)};
  }

  friend BasicInterval operator+(const BasicInterval& a, const BasicInterval& b) {
    BasicInterval r;
    r.lo_ = Rounding::down([&] { return pin(a.lo_) + pin(b.lo_); });
    r.hi_ = Rounding::up([&] { return pin(a.hi_) + pin(b.hi_); });
    return r;
  }
  friend BasicInterval operator-(const BasicInterval& a, const BasicInterval& b) {
    BasicInterval r;
    r.lo_ = Rounding::down([&] { return pin(a.lo_) - pin(b.hi_); });
    r.hi_ = Rounding::up([&] { return pin(a.hi_) - pin(b.lo_); });
    return r;
  }
  friend BasicInterval operator-(const BasicInterval& a) {
    BasicInterval r;
    r.lo_ = -a.hi_;
    r.hi_ = -a.lo_;
    return r;
  }
  friend BasicInterval operator*(const BasicInterval& a, const BasicInterval& b) {
    BasicInterval r;
    r.lo_ = Rounding::down([&] {
      const double al = pin(a.lo_), ah = pin(a.hi_), bl = pin(b.lo_), bh = pin(b.hi_);
      return std::min(std::min(al * bl, al * bh), std::min(ah * bl, ah * bh));
    });
    r.hi_ = Rounding::up([&] {
      const double al = pin(a.lo_), ah = pin(a.hi_), bl = pin(b.lo_), bh = pin(b.hi_);
      return std::max(std::max(al * bl, al * bh), std::max(ah * bl, ah * bh));
    });
    return r;
  }
  friend BasicInterval operator/(const BasicInterval& a, const BasicInterval& b) {
    if (b.contains_zero()) throw Error(ErrorCode::DivisionByZeroInterval, "divisor interval contains zero");
    BasicInterval r;
    r.lo_ = Rounding::down([&] {
      const double al = pin(a.lo_), ah = pin(a.hi_), bl = pin(b.lo_), bh = pin(b.hi_);
      return std::min(std::min(al / bl, al / bh), std::min(ah / bl, ah / bh));
    });
    r.hi_ = Rounding::up([&] {
      const double al = pin(a.lo_), ah = pin(a.hi_), bl = pin(b.lo_), bh = pin(b.hi_);
      return std::max(std::max(al / bl, al / bh), std::max(ah / bl, ah / bh));
    });
    return r;
  }
  friend BasicInterval sqrt(const BasicInterval& a) {
    if (a.lo_ < 0.0) throw Error(ErrorCode::InvalidArgument, "sqrt of an interval reaching below zero");
    BasicInterval r;
    r.lo_ = std::max(0.0, Rounding::down([&] { return std::sqrt(pin(a.lo_)); }));
    r.hi_ = Rounding::up([&] { return std::sqrt(pin(a.hi_)); });
    return r;
  }

  BasicInterval& operator+=(const BasicInterval& o) { return *this = *this + o; }
  BasicInterval& operator-=(const BasicInterval& o) { return *this = *this - o; }
  BasicInterval& operator*=(const BasicInterval& o) { return *this = *this * o; }

  // Mixed forms, so generic code can write `2.0 * x` and `p.r - s.z`.
  friend BasicInterval operator+(double a, const BasicInterval& b) { return BasicInterval(a) + b; }
  friend BasicInterval operator+(const BasicInterval& a, double b) { return a + BasicInterval(b); }
  friend BasicInterval operator-(double a, const BasicInterval& b) { return BasicInterval(a) - b; }
  friend BasicInterval operator-(const BasicInterval& a, double b) { return a - BasicInterval(b); }
  friend BasicInterval operator*(double a, const BasicInterval& b) { return BasicInterval(a) * b; }
  friend BasicInterval operator*(const BasicInterval& a, double b) { return a * BasicInterval(b); }
  friend BasicInterval operator/(const BasicInterval& a, double b) { return a / BasicInterval(b); }
  friend BasicInterval operator/(double a, const BasicInterval& b) { return BasicInterval(a) / b; }

  friend bool operator==(const BasicInterval&, const BasicInterval&) = default;

  friend std::ostream& operator<<(std::ostream& os, const BasicInterval& x) {
    return os << '[' << x.lo_ << ", " << x.hi_ << ']';
  }

 private:
  static double pin(double v) {
    fp_barrier(v);
    return v;
  }

  double lo_ = 0.0;
  double hi_ = 0.0;
};

#if defined(ORBITFORGE_DIRECTED_ROUNDING) && ORBITFORGE_DIRECTED_ROUNDING
using Interval = BasicInterval<DirectedRounding>;
#else
using Interval = BasicInterval<NudgeRounding>;
#endif

template <class I>
using BasicIntervalVector = std::vector<I>;
using IntervalVector = BasicIntervalVector<Interval>;

// Dense row-major interval matrix.
template <class I>
struct BasicIntervalMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<I> data;

  BasicIntervalMatrix() = default;
  BasicIntervalMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, I(0.0)) {}

  I& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const I& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  static BasicIntervalMatrix identity(std::size_t n) {
    BasicIntervalMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = I(1.0);
    return m;
  }
};
using IntervalMatrix = BasicIntervalMatrix<Interval>;

template <class I>
BasicIntervalVector<I> operator*(const BasicIntervalMatrix<I>& m, const BasicIntervalVector<I>& v) {
  if (m.cols != v.size()) throw Error(ErrorCode::InvalidArgument, "matrix-vector size mismatch");
  BasicIntervalVector<I> out(m.rows, I(0.0));
  for (std::size_t i = 0; i < m.rows; ++i) {
    I acc(0.0);
    for (std::size_t j = 0; j < m.cols; ++j) acc = acc + m(i, j) * v[j];
    out[i] = acc;
  }
  return out;
}

template <class I>
BasicIntervalMatrix<I> operator*(const BasicIntervalMatrix<I>& a, const BasicIntervalMatrix<I>& b) {
  if (a.cols != b.rows) throw Error(ErrorCode::InvalidArgument, "matrix-matrix size mismatch");
  BasicIntervalMatrix<I> out(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < b.cols; ++j) {
      I acc(0.0);
      for (std::size_t k = 0; k < a.cols; ++k) acc = acc + a(i, k) * b(k, j);
      out(i, j) = acc;
    }
  return out;
}

template <class I>
BasicIntervalMatrix<I> operator-(const BasicIntervalMatrix<I>& a, const BasicIntervalMatrix<I>& b) {
  if (a.rows != b.rows || a.cols != b.cols) throw Error(ErrorCode::InvalidArgument, "matrix size mismatch");
  BasicIntervalMatrix<I> out(a.rows, a.cols);
  for (std::size_t k = 0; k < a.data.size(); ++k) out.data[k] = a.data[k] - b.data[k];
  return out;
}

template <class I>
BasicIntervalVector<I> operator+(const BasicIntervalVector<I>& a, const BasicIntervalVector<I>& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::InvalidArgument, "vector size mismatch");
  BasicIntervalVector<I> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

template <class I>
BasicIntervalVector<I> operator-(const BasicIntervalVector<I>& a, const BasicIntervalVector<I>& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::InvalidArgument, "vector size mismatch");
  BasicIntervalVector<I> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

template <class I>
double max_width(const BasicIntervalVector<I>& v) {
  double w = 0.0;
  for (const I& x : v) w = std::max(w, x.width());
  return w;
}

template <class I>
Vec3<I> to_interval(const Vec3<double>& v) {
  return {I(v.x), I(v.y), I(v.z)};
}

template <class I>
Mat3<I> to_interval(const Mat3<double>& m) {
  Mat3<I> r;
  for (std::size_t k = 0; k < 9; ++k) r.a[k] = I(m.a[k]);
  return r;
}

template <class I>
Vec3<double> midpoint(const Vec3<I>& v) {
  return {v.x.mid(), v.y.mid(), v.z.mid()};
}

template <class I>
Mat3<double> midpoint(const Mat3<I>& m) {
  Mat3<double> r;
  for (std::size_t k = 0; k < 9; ++k) r.a[k] = m.a[k].mid();
  return r;
}

template <class I>
double max_width(const Vec3<I>& v) {
  return std::max({v.x.width(), v.y.width(), v.z.width()});
}

template <class I>
double max_width(const Mat3<I>& m) {
  double w = 0.0;
  for (const I& x : m.a) w = std::max(w, x.width());
  return w;
}

}  // namespace orbitforge
