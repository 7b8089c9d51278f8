#pragma once

// Brute-force reference computations used by the test suites. Everything here
// works on plain machine integers or floating point and shares no code with
// the library.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <random>
#include <set>
#include <tuple>
#include <vector>

namespace oracle {

using I3 = std::array<long long, 3>;
using M3 = std::array<std::array<long long, 3>, 3>;

inline long long det3(const M3& a) {
  return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
         a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

inline M3 mul(const M3& x, const M3& y) {
  M3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) r[i][j] += x[i][k] * y[k][j];
  return r;
}

inline I3 apply(const M3& m, const I3& v) {
  I3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i] += m[i][j] * v[j];
  return r;
}

inline M3 identity() { return {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}; }

inline M3 frobenius(long long m, long long n) { return {{{0, 1, 0}, {0, 0, 1}, {1, -m, -n}}}; }

/// Inverse of a determinant-one matrix from cofactors.
inline M3 inverse_det1(const M3& a) {
  M3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      r[i][j] = a[r0][c0] * a[r1][c1] - a[r0][c1] * a[r1][c0];
    }
  return r;
}

/// Coefficients (c2, c1, c0) of det(xI - M) from traces of powers.
inline I3 char_poly(const M3& a) {
  long long t1 = a[0][0] + a[1][1] + a[2][2];
  M3 a2 = mul(a, a);
  long long t2 = a2[0][0] + a2[1][1] + a2[2][2];
  return {-t1, (t1 * t1 - t2) / 2, -det3(a)};
}

/// Number of distinct real roots of x^3 + c2 x^2 + c1 x + c0, from signs at
/// the critical points (the cubic is monotone between them).
inline int real_root_count(long long c2, long long c1, long long c0) {
  auto p = [&](long double x) { return ((x + c2) * x + c1) * x + c0; };
  long double bound = 2 + std::max({std::llabs(c2), std::llabs(c1), std::llabs(c0)});
  long double d = 4.0L * c2 * c2 - 12.0L * c1;  // discriminant of 3x^2 + 2 c2 x + c1
  std::vector<long double> xs{-bound};
  if (d > 0) {
    long double s = std::sqrt(d);
    xs.push_back((-2.0L * c2 - s) / 6);
    xs.push_back((-2.0L * c2 + s) / 6);
  }
  xs.push_back(bound);
  std::vector<long double> v;
  for (long double x : xs) {
    long double y = p(x);
    v.push_back(std::fabs(y) < 1e-9L ? 0 : y);
  }
  int count = 0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i)
    if ((v[i] < 0 && v[i + 1] > 0) || (v[i] > 0 && v[i + 1] < 0)) ++count;
  for (std::size_t i = 1; i + 1 < v.size(); ++i)
    if (v[i] == 0) ++count;
  return count;
}

/// Real roots by bisection between critical points, ascending.
inline std::vector<long double> real_roots(long double c2, long double c1, long double c0) {
  auto p = [&](long double x) { return ((x + c2) * x + c1) * x + c0; };
  long double bound = 2 + std::max({std::fabs(c2), std::fabs(c1), std::fabs(c0)});
  long double d = 4 * c2 * c2 - 12 * c1;
  std::vector<long double> xs{-bound};
  if (d > 0) {
    long double s = std::sqrt(d);
    xs.push_back((-2 * c2 - s) / 6);
    xs.push_back((-2 * c2 + s) / 6);
  }
  xs.push_back(bound);
  std::vector<long double> out;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    long double lo = xs[i], hi = xs[i + 1];
    long double pl = p(lo), ph = p(hi);
    if ((pl < 0) == (ph < 0)) continue;
    for (int it = 0; it < 200; ++it) {
      long double mid = (lo + hi) / 2;
      if ((p(mid) < 0) == (pl < 0))
        lo = mid;
      else
        hi = mid;
    }
    out.push_back((lo + hi) / 2);
  }
  return out;
}

/// Lattice points on the closed segment pq, by testing every rational step
/// k/L with L the largest coordinate difference.
inline long long segment_points(const I3& p, const I3& q) {
  I3 d{q[0] - p[0], q[1] - p[1], q[2] - p[2]};
  long long l = std::max({std::llabs(d[0]), std::llabs(d[1]), std::llabs(d[2])});
  if (l == 0) return 1;
  long long count = 0;
  for (long long k = 0; k <= l; ++k)
    if ((d[0] * k) % l == 0 && (d[1] * k) % l == 0 && (d[2] * k) % l == 0) ++count;
  return count;
}

inline I3 cross(const I3& a, const I3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline long long dot(const I3& a, const I3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline I3 sub(const I3& a, const I3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

/// Index of Zu + Zv in the lattice of its plane: the number of lattice points
/// in the half-open parallelogram {s u + t v : 0 <= s, t < 1}.
inline long long coset_count(const I3& u, const I3& v) {
  I3 n = cross(u, v);
  long long nn = dot(n, n);
  if (nn == 0) return 0;
  I3 lo{}, hi{};
  for (int i = 0; i < 3; ++i) {
    long long c[4] = {0, u[i], v[i], u[i] + v[i]};
    lo[i] = *std::min_element(c, c + 4);
    hi[i] = *std::max_element(c, c + 4);
  }
  long long count = 0;
  for (long long x = lo[0]; x <= hi[0]; ++x)
    for (long long y = lo[1]; y <= hi[1]; ++y)
      for (long long z = lo[2]; z <= hi[2]; ++z) {
        I3 p{x, y, z};
        if (dot(p, n) != 0) continue;
        // p = s u + t v with s = ((p x v) . n) / |n|^2, t = ((u x p) . n) / |n|^2
        long long s = dot(cross(p, v), n), t = dot(cross(u, p), n);
        if (s >= 0 && s < nn && t >= 0 && t < nn) ++count;
      }
  return count;
}

/// Closed-hull membership for a full-dimensional point set: p lies in the
/// hull iff it is on the inner side of every supporting plane through three
/// of the points.
struct HullOracle {
  std::vector<std::pair<I3, long long>> planes;  // n . x >= level for the hull

  explicit HullOracle(const std::vector<I3>& pts) {
    std::size_t k = pts.size();
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = a + 1; b < k; ++b)
        for (std::size_t c = b + 1; c < k; ++c) {
          I3 n = cross(sub(pts[b], pts[a]), sub(pts[c], pts[a]));
          if (n == I3{0, 0, 0}) continue;
          long long level = dot(n, pts[a]);
          bool pos = true, neg = true;
          for (const auto& p : pts) {
            long long s = dot(n, p) - level;
            pos = pos && s >= 0;
            neg = neg && s <= 0;
          }
          if (pos) planes.push_back({n, level});
          if (neg) planes.push_back({I3{-n[0], -n[1], -n[2]}, -level});
        }
  }
  bool contains(const I3& p) const {
    for (const auto& [n, level] : planes)
      if (dot(n, p) < level) return false;
    return true;
  }
  /// Number of distinct supporting planes (facets after coplanar merging).
  std::size_t facet_count() const {
    std::set<std::pair<I3, long long>> s;
    for (auto [n, level] : planes) {
      long long g = std::gcd(std::gcd(std::llabs(n[0]), std::llabs(n[1])), std::llabs(n[2]));
      s.insert({I3{n[0] / g, n[1] / g, n[2] / g}, level / g});
    }
    return s.size();
  }
};

inline std::vector<I3> box_filter(const std::vector<I3>& pts) {
  HullOracle h(pts);
  I3 lo = pts[0], hi = pts[0];
  for (const auto& p : pts)
    for (int i = 0; i < 3; ++i) {
      lo[i] = std::min(lo[i], p[i]);
      hi[i] = std::max(hi[i], p[i]);
    }
  std::vector<I3> out;
  for (long long x = lo[0]; x <= hi[0]; ++x)
    for (long long y = lo[1]; y <= hi[1]; ++y)
      for (long long z = lo[2]; z <= hi[2]; ++z)
        if (h.contains({x, y, z})) out.push_back({x, y, z});
  return out;
}

/// det(alpha I + beta A_{m,n}^{-1}) assembled as a matrix.
inline long long alpha_beta_matrix_det(long long alpha, long long beta, long long m, long long n) {
  M3 ai = inverse_det1(frobenius(m, n));
  M3 u{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) u[i][j] = beta * ai[i][j] + (i == j ? alpha : 0);
  return det3(u);
}

/// Numeric left eigenvectors w (w M = lambda w) for each real eigenvalue.
struct Spectrum {
  std::vector<long double> lambda;
  std::vector<std::array<long double, 3>> left;

  explicit Spectrum(const M3& m) {
    I3 c = char_poly(m);
    lambda = real_roots(c[0], c[1], c[2]);
    for (long double l : lambda) {
      // rows of (M^T - l I); the null vector is the cross product of two rows
      long double r[3][3];
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r[i][j] = m[j][i] - (i == j ? l : 0);
      std::array<long double, 3> best{};
      long double bn = -1;
      for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b) {
          std::array<long double, 3> w{r[a][1] * r[b][2] - r[a][2] * r[b][1], r[a][2] * r[b][0] - r[a][0] * r[b][2],
                                       r[a][0] * r[b][1] - r[a][1] * r[b][0]};
          long double nn = w[0] * w[0] + w[1] * w[1] + w[2] * w[2];
          if (nn > bn) {
            bn = nn;
            best = w;
          }
        }
      long double s = std::sqrt(bn);
      for (auto& x : best) x /= s;
      left.push_back(best);
    }
  }
  std::array<int, 3> signs(const I3& v) const {
    std::array<int, 3> s{};
    for (std::size_t k = 0; k < left.size() && k < 3; ++k) {
      long double t = left[k][0] * v[0] + left[k][1] * v[1] + left[k][2] * v[2];
      s[k] = t > 0 ? 1 : (t < 0 ? -1 : 0);
    }
    return s;
  }
};

/// Random matrix of determinant one as a product of elementary transvections
/// and signed permutations.
inline M3 random_unimodular(std::mt19937_64& rng, int steps = 6, int max_coeff = 2) {
  M3 m = identity();
  std::uniform_int_distribution<int> idx(0, 2), coef(-max_coeff, max_coeff), coin(0, 3);
  for (int s = 0; s < steps; ++s) {
    M3 e = identity();
    int i = idx(rng), j = idx(rng);
    if (coin(rng) == 0) {
      // a rotation by a quarter turn in one coordinate plane
      int k = (i + 1) % 3;
      e[i][i] = 0;
      e[k][k] = 0;
      e[i][k] = -1;
      e[k][i] = 1;
    } else if (i != j) {
      e[i][j] = coef(rng);
    }
    m = mul(m, e);
  }
  return m;
}

}  // namespace oracle
