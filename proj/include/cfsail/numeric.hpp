#pragma once

// Exact integer and rational scalar types plus small fixed-size vector and
// matrix templates shared by every module.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

namespace cfsail {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using i128 = __int128;

inline int sign(const BigInt& x) { return x.sign(); }
inline int sign(const Rational& x) { return x.sign(); }
inline int sign(i128 x) { return (x > 0) - (x < 0); }
inline int sign(long long x) { return (x > 0) - (x < 0); }

inline BigInt abs(const BigInt& x) { return x.sign() < 0 ? BigInt(-x) : x; }
inline i128 abs(i128 x) { return x < 0 ? -x : x; }

inline BigInt gcd(const BigInt& a, const BigInt& b) {
  return boost::multiprecision::gcd(abs(a), abs(b));
}
inline i128 gcd(i128 a, i128 b) {
  a = abs(a);
  b = abs(b);
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

/// Floor division for any sign of divisor.
inline BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if ((a % b != 0) && ((a.sign() < 0) != (b.sign() < 0))) q -= 1;
  return q;
}
inline BigInt ceil_div(const BigInt& a, const BigInt& b) { return -floor_div(-a, b); }

/// Representative of a modulo |m| in [0, |m|).
inline BigInt mod_floor(const BigInt& a, const BigInt& m) {
  BigInt mm = abs(m);
  BigInt r = a % mm;
  if (r.sign() < 0) r += mm;
  return r;
}
inline i128 mod_floor(i128 a, i128 m) {
  i128 mm = abs(m);
  i128 r = a % mm;
  if (r < 0) r += mm;
  return r;
}

/// num / den for any nonzero den (the two-argument constructor rejects
/// negative denominators for unbounded integers).
inline Rational make_rational(const BigInt& num, const BigInt& den) {
  if (den.sign() < 0) return Rational(BigInt(-num), BigInt(-den));
  return Rational(num, den);
}

inline BigInt floor(const Rational& r) {
  return floor_div(boost::multiprecision::numerator(r), boost::multiprecision::denominator(r));
}
inline BigInt ceil(const Rational& r) {
  return ceil_div(boost::multiprecision::numerator(r), boost::multiprecision::denominator(r));
}

/// Extended gcd: returns g = gcd(a, b) >= 0 with s*a + t*b = g.
template <class T>
T ext_gcd(const T& a, const T& b, T& s, T& t) {
  T old_r = a, r = b, old_s = 1, s_ = 0, old_t = 0, t_ = 1;
  while (r != 0) {
    T q = old_r / r;
    T tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s_;
    old_s = s_;
    s_ = tmp;
    tmp = old_t - q * t_;
    old_t = t_;
    t_ = tmp;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  s = old_s;
  t = old_t;
  return old_r;
}

inline std::string to_string(const BigInt& x) { return x.str(); }
inline std::string to_string(const Rational& x) {
  auto num = boost::multiprecision::numerator(x);
  auto den = boost::multiprecision::denominator(x);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}
inline std::string to_string(i128 x) {
  if (x == 0) return "0";
  bool neg = x < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(x + 1)) + 1 : static_cast<unsigned __int128>(x);
  std::string s;
  while (u > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  return {s.rbegin(), s.rend()};
}

inline BigInt to_big(i128 x) {
  bool neg = x < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(x + 1)) + 1 : static_cast<unsigned __int128>(x);
  BigInt r = static_cast<std::uint64_t>(u >> 64);
  r <<= 64;
  r += static_cast<std::uint64_t>(u & ~std::uint64_t{0});
  return neg ? BigInt(-r) : r;
}
inline const BigInt& to_big(const BigInt& x) { return x; }

/// Caller must ensure |x| < 2^126.
inline i128 to_i128(const BigInt& x) {
  BigInt a = abs(x);
  auto lo = static_cast<std::uint64_t>(a & BigInt(~std::uint64_t{0}));
  auto hi = static_cast<std::uint64_t>(a >> 64);
  i128 r = (static_cast<i128>(hi) << 64) | static_cast<i128>(lo);
  return x.sign() < 0 ? -r : r;
}

inline long double to_ld(const BigInt& x) { return x.convert_to<long double>(); }
inline long double to_ld(const Rational& x) { return x.convert_to<long double>(); }
inline long double to_ld(i128 x) { return static_cast<long double>(x); }

inline std::size_t bit_length(const BigInt& x) {
  return x.is_zero() ? 0 : boost::multiprecision::msb(abs(x)) + 1;
}

// ---------------------------------------------------------------------------
// Point3

template <class T>
struct Point3 {
  std::array<T, 3> c{};

  Point3() = default;
  Point3(T x, T y, T z) : c{std::move(x), std::move(y), std::move(z)} {}

  T& operator[](std::size_t i) { return c[i]; }
  const T& operator[](std::size_t i) const { return c[i]; }

  bool is_zero() const { return c[0] == 0 && c[1] == 0 && c[2] == 0; }

  friend bool operator==(const Point3& a, const Point3& b) {
    return a.c[0] == b.c[0] && a.c[1] == b.c[1] && a.c[2] == b.c[2];
  }
  friend bool operator!=(const Point3& a, const Point3& b) { return !(a == b); }
  friend bool operator<(const Point3& a, const Point3& b) {
    for (std::size_t i = 0; i < 3; ++i) {
      if (a.c[i] < b.c[i]) return true;
      if (b.c[i] < a.c[i]) return false;
    }
    return false;
  }
  friend Point3 operator+(const Point3& a, const Point3& b) {
    return {a.c[0] + b.c[0], a.c[1] + b.c[1], a.c[2] + b.c[2]};
  }
  friend Point3 operator-(const Point3& a, const Point3& b) {
    return {a.c[0] - b.c[0], a.c[1] - b.c[1], a.c[2] - b.c[2]};
  }
  friend Point3 operator-(const Point3& a) { return {-a.c[0], -a.c[1], -a.c[2]}; }
  friend Point3 operator*(const T& k, const Point3& a) { return {k * a.c[0], k * a.c[1], k * a.c[2]}; }
};

using Vec3 = Point3<BigInt>;
using Vec3i = Point3<i128>;

template <class T>
T dot(const Point3<T>& a, const Point3<T>& b) {
  return a.c[0] * b.c[0] + a.c[1] * b.c[1] + a.c[2] * b.c[2];
}
template <class T>
Point3<T> cross(const Point3<T>& a, const Point3<T>& b) {
  return {a.c[1] * b.c[2] - a.c[2] * b.c[1], a.c[2] * b.c[0] - a.c[0] * b.c[2],
          a.c[0] * b.c[1] - a.c[1] * b.c[0]};
}
/// det(b - a, c - a, d - a)
template <class T>
T orient3d(const Point3<T>& a, const Point3<T>& b, const Point3<T>& c, const Point3<T>& d) {
  return dot(cross(b - a, c - a), d - a);
}
template <class T>
T content(const Point3<T>& v) {
  return gcd(gcd(v.c[0], v.c[1]), v.c[2]);
}
/// v divided by the gcd of its coordinates (zero stays zero).
template <class T>
Point3<T> primitive(const Point3<T>& v) {
  T g = content(v);
  if (g == 0) return v;
  return {v.c[0] / g, v.c[1] / g, v.c[2] / g};
}

inline Vec3 to_big(const Vec3i& v) { return {to_big(v[0]), to_big(v[1]), to_big(v[2])}; }
inline const Vec3& to_big(const Vec3& v) { return v; }
inline Vec3i to_i128(const Vec3& v) { return {to_i128(v[0]), to_i128(v[1]), to_i128(v[2])}; }

inline std::string to_string(const Vec3& v) {
  return "(" + v[0].str() + "," + v[1].str() + "," + v[2].str() + ")";
}
inline std::ostream& operator<<(std::ostream& os, const Vec3& v) { return os << to_string(v); }

inline BigInt max_abs(const Vec3& v) {
  BigInt m = abs(v[0]);
  if (abs(v[1]) > m) m = abs(v[1]);
  if (abs(v[2]) > m) m = abs(v[2]);
  return m;
}

struct Vec3Hash {
  std::size_t operator()(const Vec3& v) const {
    std::size_t h = 1469598103934665603ull;
    for (const auto& x : v.c) {
      h ^= boost::multiprecision::hash_value(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

// ---------------------------------------------------------------------------
// Mat3

template <class T>
struct Mat3 {
  std::array<std::array<T, 3>, 3> a{};

  static Mat3 identity() {
    Mat3 m;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m.a[i][j] = (i == j) ? 1 : 0;
    return m;
  }
  static Mat3 zero() {
    Mat3 m;
    for (auto& r : m.a)
      for (auto& x : r) x = 0;
    return m;
  }

  std::array<T, 3>& operator[](std::size_t i) { return a[i]; }
  const std::array<T, 3>& operator[](std::size_t i) const { return a[i]; }

  friend bool operator==(const Mat3& x, const Mat3& y) { return x.a == y.a; }
  friend bool operator!=(const Mat3& x, const Mat3& y) { return !(x == y); }

  friend Mat3 operator*(const Mat3& x, const Mat3& y) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.a[i][j] = x.a[i][0] * y.a[0][j] + x.a[i][1] * y.a[1][j] + x.a[i][2] * y.a[2][j];
    return r;
  }
  friend Mat3 operator+(const Mat3& x, const Mat3& y) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.a[i][j] = x.a[i][j] + y.a[i][j];
    return r;
  }
  friend Mat3 operator-(const Mat3& x, const Mat3& y) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.a[i][j] = x.a[i][j] - y.a[i][j];
    return r;
  }
  friend Mat3 operator-(const Mat3& x) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.a[i][j] = -x.a[i][j];
    return r;
  }
  friend Mat3 operator*(const T& k, const Mat3& x) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.a[i][j] = k * x.a[i][j];
    return r;
  }
  friend Point3<T> operator*(const Mat3& m, const Point3<T>& v) {
    return {m.a[0][0] * v[0] + m.a[0][1] * v[1] + m.a[0][2] * v[2],
            m.a[1][0] * v[0] + m.a[1][1] * v[1] + m.a[1][2] * v[2],
            m.a[2][0] * v[0] + m.a[2][1] * v[1] + m.a[2][2] * v[2]};
  }

  T trace() const { return a[0][0] + a[1][1] + a[2][2]; }

  T det() const {
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  }

  /// Classical adjugate: adj(M) * M = det(M) * I.
  Mat3 adjugate() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
        r.a[i][j] = a[r0][c0] * a[r1][c1] - a[r0][c1] * a[r1][c0];
      }
    }
    return r;
  }

  Mat3 transpose() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.a[i][j] = a[j][i];
    return r;
  }

  Point3<T> column(int j) const { return {a[0][j], a[1][j], a[2][j]}; }
  Point3<T> row(int i) const { return {a[i][0], a[i][1], a[i][2]}; }

  static Mat3 from_columns(const Point3<T>& p, const Point3<T>& q, const Point3<T>& r) {
    Mat3 m;
    for (int i = 0; i < 3; ++i) {
      m.a[i][0] = p[i];
      m.a[i][1] = q[i];
      m.a[i][2] = r[i];
    }
    return m;
  }
};

using Mat3Z = Mat3<BigInt>;

inline BigInt max_abs(const Mat3Z& m) {
  BigInt r = 0;
  for (const auto& row : m.a)
    for (const auto& x : row)
      if (abs(x) > r) r = abs(x);
  return r;
}

inline std::string to_string(const Mat3Z& m) {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < 3; ++i) {
    if (i) os << ",";
    os << "[" << m.a[i][0] << "," << m.a[i][1] << "," << m.a[i][2] << "]";
  }
  os << "]";
  return os.str();
}

/// Row-major comma list "a,b,c,d,e,f,g,h,i".
inline std::string to_flat_string(const Mat3Z& m) {
  std::ostringstream os;
  for (int i = 0; i < 9; ++i) {
    if (i) os << ",";
    os << m.a[i / 3][i % 3];
  }
  return os.str();
}

}  // namespace cfsail
