#pragma once

// Lattice geometry in Z^3: integer lengths, areas, distances and angles,
// exact convex hulls, plane lattices and lattice point enumeration.

#include <algorithm>
#include <map>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include "cfsail/errors.hpp"
#include "cfsail/numeric.hpp"

namespace cfsail {

struct LatticeSegment {
  Vec3 p, q;
};

/// Number of lattice points on the closed segment minus one.
inline BigInt integer_length(const Vec3& p, const Vec3& q) { return content(q - p); }
inline BigInt integer_length(const LatticeSegment& s) { return integer_length(s.p, s.q); }

/// Index of the edge-generated sublattice in the lattice of the triangle's plane.
inline BigInt integer_area_triangle(const Vec3& a, const Vec3& b, const Vec3& c) {
  return content(cross(b - a, c - a));
}

/// Ratio S(u, v) / (|u| |v|) of integer area to the product of integer lengths.
inline Rational integer_angle(const Vec3& u, const Vec3& v) {
  if (u.is_zero() || v.is_zero()) throw Error(ErrorKind::ZeroRay, "integer angle of a zero vector");
  return Rational(content(cross(u, v)), BigInt(content(u) * content(v)));
}

// ---------------------------------------------------------------------------
// Integer linear algebra helpers

/// Two vectors forming a basis of the lattice {x in Z^3 : n . x = 0}.
inline std::array<Vec3, 2> plane_lattice_basis(const Vec3& normal) {
  if (normal.is_zero()) throw Error(ErrorKind::Dependent, "zero normal");
  // column operations on the row vector n, tracking the unimodular matrix U
  std::array<BigInt, 3> row{normal[0], normal[1], normal[2]};
  Mat3Z u = Mat3Z::identity();
  auto combine = [&](int i, int j) {
    // make row[j] zero using columns i and j
    if (row[j] == 0) return;
    BigInt s, t;
    BigInt g = ext_gcd(row[i], row[j], s, t);
    BigInt ai = row[i] / g, aj = row[j] / g;
    for (int r = 0; r < 3; ++r) {
      BigInt ci = u[r][i], cj = u[r][j];
      u[r][i] = s * ci + t * cj;
      u[r][j] = -aj * ci + ai * cj;
    }
    row[i] = g;
    row[j] = 0;
  };
  combine(0, 1);
  combine(0, 2);
  if (row[0] == 0) {
    // only possible when the first entries were zero; pick a nonzero column
    for (int k = 1; k < 3; ++k) {
      if (row[k] != 0) {
        std::swap(row[0], row[k]);
        for (int r = 0; r < 3; ++r) std::swap(u[r][0], u[r][k]);
      }
    }
  }
  return {u.column(1), u.column(2)};
}

/// Lower-triangular Hermite basis H of the column lattice of M (M U = H, U
/// unimodular) with positive diagonal; requires det M != 0.
inline Mat3Z hermite_lower(const Mat3Z& m) {
  Mat3Z h = m;
  auto colop = [&](int i, int j, int row) {
    if (h[row][j] == 0) return;
    BigInt s, t;
    BigInt g = ext_gcd(h[row][i], h[row][j], s, t);
    BigInt ai = h[row][i] / g, aj = h[row][j] / g;
    for (int r = 0; r < 3; ++r) {
      BigInt ci = h[r][i], cj = h[r][j];
      h[r][i] = s * ci + t * cj;
      h[r][j] = -aj * ci + ai * cj;
    }
  };
  for (int k = 0; k < 3; ++k) {
    for (int j = k + 1; j < 3; ++j) colop(k, j, k);
    if (h[k][k] == 0) throw Error(ErrorKind::Dependent, "singular lattice basis");
    if (h[k][k] < 0)
      for (int r = 0; r < 3; ++r) h[r][k] = -h[r][k];
  }
  // reduce entries left of the diagonal
  for (int k = 1; k < 3; ++k) {
    for (int j = 0; j < k; ++j) {
      BigInt q = floor_div(h[k][j], h[k][k]);
      if (q != 0)
        for (int r = 0; r < 3; ++r) h[r][j] -= q * h[r][k];
    }
  }
  return h;
}

/// Coordinates (a, b) of a lattice vector w = a e1 + b e2; w must lie in the span.
inline std::pair<BigInt, BigInt> plane_coordinates(const Vec3& w, const Vec3& e1, const Vec3& e2) {
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      BigInt d = e1[i] * e2[j] - e1[j] * e2[i];
      if (d == 0) continue;
      BigInt a = w[i] * e2[j] - w[j] * e2[i];
      BigInt b = e1[i] * w[j] - e1[j] * w[i];
      if (a % d != 0 || b % d != 0) throw Error(ErrorKind::InvalidInput, "vector not in the plane lattice");
      return {a / d, b / d};
    }
  }
  throw Error(ErrorKind::Dependent, "plane basis is degenerate");
}

/// Index of Zu + Zv in the lattice of the plane spanned by u and v.
inline BigInt sublattice_index(const Vec3& u, const Vec3& v) {
  Vec3 n = cross(u, v);
  if (n.is_zero()) throw Error(ErrorKind::Dependent, "vectors are parallel");
  auto basis = plane_lattice_basis(primitive(n));
  auto [a, b] = plane_coordinates(u, basis[0], basis[1]);
  auto [c, d] = plane_coordinates(v, basis[0], basis[1]);
  return abs(BigInt(a * d - b * c));
}

// ---------------------------------------------------------------------------
// Polygons

/// Convex lattice polygon; the cycle is counterclockwise when viewed from the
/// side opposite to `normal`, i.e. cross(v1 - v0, v2 - v1) . normal < 0.
struct LatticePolygon {
  std::vector<Vec3> vertices;
  Vec3 normal;  // primitive
  BigInt level;  // normal . v for every vertex
};

/// Sum of fan triangle areas: twice the Euclidean area in units of the
/// plane's fundamental parallelogram.
inline BigInt integer_area(const LatticePolygon& poly) {
  BigInt s = 0;
  for (std::size_t i = 1; i + 1 < poly.vertices.size(); ++i)
    s += integer_area_triangle(poly.vertices[0], poly.vertices[i], poly.vertices[i + 1]);
  return s;
}

inline BigInt integer_distance_origin(const LatticePolygon& poly) { return abs(poly.level); }

/// Plane through three non-collinear points: primitive normal and level.
inline std::pair<Vec3, BigInt> plane_through(const Vec3& a, const Vec3& b, const Vec3& c) {
  Vec3 n = primitive(cross(b - a, c - a));
  if (n.is_zero()) throw Error(ErrorKind::Dependent, "collinear points");
  return {n, dot(n, a)};
}

inline BigInt integer_distance_origin(const Vec3& a, const Vec3& b, const Vec3& c) {
  return abs(plane_through(a, b, c).second);
}

// ---------------------------------------------------------------------------
// Convex hull

struct HullFacet {
  Vec3 normal;   // primitive, inward: normal . p >= level for all input points
  BigInt level;
  std::vector<Vec3> vertices;  // counterclockwise seen from outside
};

namespace detail {

/// 2D convex hull (monotone chain, collinear points dropped) of points lying
/// in a plane with normal n; returned counterclockwise seen from the side that
/// n points away from.
template <class T>
std::vector<Point3<T>> planar_hull(std::vector<Point3<T>> pts, const Point3<T>& n) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  int k = 0;
  for (int i = 1; i < 3; ++i)
    if (abs(n[i]) > abs(n[k])) k = i;
  int i0 = (k + 1) % 3, i1 = (k + 2) % 3;
  auto cr = [&](const Point3<T>& o, const Point3<T>& a, const Point3<T>& b) {
    return (a[i0] - o[i0]) * (b[i1] - o[i1]) - (a[i1] - o[i1]) * (b[i0] - o[i0]);
  };
  auto key_less = [&](const Point3<T>& a, const Point3<T>& b) {
    return std::tie(a[i0], a[i1]) < std::tie(b[i0], b[i1]);
  };
  std::sort(pts.begin(), pts.end(), key_less);
  std::vector<Point3<T>> h(2 * pts.size());
  std::size_t m = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (m >= 2 && cr(h[m - 2], h[m - 1], pts[i]) <= 0) --m;
    h[m++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = m + 1; i-- > 0;) {
    while (m >= t && cr(h[m - 2], h[m - 1], pts[i]) <= 0) --m;
    h[m++] = pts[i];
  }
  h.resize(m - 1);
  if (h.size() >= 3 && dot(cross(h[1] - h[0], h[2] - h[1]), n) > 0) std::reverse(h.begin(), h.end());
  return h;
}

template <class T>
struct HullBuilder {
  const std::vector<Point3<T>>& pts;

  // Rotate the supporting plane containing the line a + t d (inward normal nrm,
  // u an in-plane direction pointing away from the points) and return the
  // index of the first point hit. u is kept in BigInt since it can exceed
  // the headroom of the fast path.
  std::size_t pivot(const Point3<T>& a, const Point3<T>& d, const Point3<T>& nrm, const Vec3& u) const {
    Point3<T> b = a + d;
    std::size_t best = pts.size();
    int su = 0;
    T zero = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto& r = pts[i];
      Point3<T> w = r - a;
      if (cross(d, w).is_zero()) continue;
      T h = dot(nrm, w);
      if (h < zero || (h == zero && sign(dot(u, to_big(w))) <= 0)) continue;
      if (best != pts.size()) {
        int sr = sign(orient3d(a, b, pts[best], r));
        if (sr == 0 || sr != su) continue;
      }
      best = i;
      su = sign(dot(cross(to_big(d), to_big(Point3<T>(r - a))), u));
    }
    return best;
  }

  // Supporting plane through line a + t d and point q, oriented inward.
  std::pair<Point3<T>, T> plane(const Point3<T>& a, const Point3<T>& d, const Point3<T>& q, const Vec3& u) const {
    Point3<T> n = primitive(cross(d, q - a));
    if (sign(dot(to_big(n), u)) > 0) n = -n;
    return {n, dot(n, a)};
  }

  std::vector<Point3<T>> on_plane(const Point3<T>& n, const T& level) const {
    std::vector<Point3<T>> s;
    for (const auto& p : pts)
      if (dot(n, p) == level) s.push_back(p);
    return s;
  }

  static bool collinear(const std::vector<Point3<T>>& s) {
    for (std::size_t i = 2; i < s.size(); ++i)
      if (!cross(s[1] - s[0], s[i] - s[0]).is_zero()) return false;
    return true;
  }

  // Given a supporting plane (n, level) whose contact set s is collinear and
  // contains a, find a facet.
  std::pair<Point3<T>, T> close_facet(Point3<T> n, T level, std::vector<Point3<T>> s) const {
    for (int round = 0; round < 3; ++round) {
      if (s.size() >= 3 && !collinear(s)) return {n, level};
      Point3<T> a = s[0], d;
      if (s.size() >= 2) {
        d = s[1] - s[0];
      } else {
        // any direction in the plane
        Point3<T> e[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
        for (const auto& x : e) {
          d = cross(n, x);
          if (!d.is_zero()) break;
        }
      }
      Vec3 u = cross(to_big(d), to_big(n));
      std::size_t qi = pivot(a, d, n, u);
      if (qi == pts.size()) throw Error(ErrorKind::DegenerateSpan, "points do not span 3-space");
      auto pl = plane(a, d, pts[qi], u);
      n = pl.first;
      level = pl.second;
      s = on_plane(n, level);
    }
    if (s.size() >= 3 && !collinear(s)) return {n, level};
    throw Error(ErrorKind::DegenerateSpan, "failed to locate an initial facet");
  }
};

template <class T>
bool spans_space(const std::vector<Point3<T>>& pts) {
  if (pts.size() < 4) return false;
  const auto& p0 = pts[0];
  std::size_t i1 = 1;
  while (i1 < pts.size() && pts[i1] == p0) ++i1;
  if (i1 == pts.size()) return false;
  Point3<T> d1 = pts[i1] - p0;
  std::size_t i2 = i1 + 1;
  while (i2 < pts.size() && cross(d1, pts[i2] - p0).is_zero()) ++i2;
  if (i2 >= pts.size()) return false;
  Point3<T> n = cross(d1, pts[i2] - p0);
  for (const auto& p : pts)
    if (dot(n, p - p0) != 0) return true;
  return false;
}

template <class T>
std::vector<std::tuple<Point3<T>, T, std::vector<Point3<T>>>> hull_impl(std::vector<Point3<T>> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (!spans_space(pts)) throw Error(ErrorKind::DegenerateSpan, "points do not span 3-space");
  HullBuilder<T> hb{pts};

  // initial supporting plane x = min x
  Point3<T> n0{1, 0, 0};
  T level0 = pts[0][0];
  auto first = hb.close_facet(n0, level0, hb.on_plane(n0, level0));

  std::vector<std::tuple<Point3<T>, T, std::vector<Point3<T>>>> facets;
  std::set<std::pair<Point3<T>, T>> seen;
  auto add = [&](const Point3<T>& n, const T& level) {
    if (!seen.insert({n, level}).second) return;
    facets.emplace_back(n, level, planar_hull(hb.on_plane(n, level), n));
  };
  add(first.first, first.second);
  for (std::size_t f = 0; f < facets.size(); ++f) {
    auto [n, level, cyc] = facets[f];
    // some vertex off the current edge is needed to orient u
    for (std::size_t i = 0; i < cyc.size(); ++i) {
      const auto& a = cyc[i];
      const auto& b = cyc[(i + 1) % cyc.size()];
      const auto& c = cyc[(i + 2) % cyc.size()];
      Point3<T> d = b - a;
      Vec3 u = cross(to_big(d), to_big(n));
      if (sign(dot(u, to_big(Point3<T>(c - a)))) > 0) u = -u;
      std::size_t qi = hb.pivot(a, d, n, u);
      if (qi == pts.size()) throw Error(ErrorKind::DegenerateSpan, "hull is open along an edge");
      auto pl = hb.plane(a, d, pts[qi], u);
      add(pl.first, pl.second);
    }
  }
  return facets;
}

inline bool fits_i128(const std::vector<Vec3>& pts) {
  // orientation determinants need roughly 3 * bits + 3 of headroom
  for (const auto& p : pts)
    for (const auto& x : p.c)
      if (bit_length(x) > 38) return false;
  return true;
}

}  // namespace detail

/// Facets of the convex hull; coplanar facets are merged into one polygon and
/// collinear boundary points are dropped from vertex cycles.
inline std::vector<HullFacet> convex_hull_3d(const std::vector<Vec3>& points) {
  std::vector<HullFacet> out;
  if (detail::fits_i128(points)) {
    std::vector<Vec3i> p;
    p.reserve(points.size());
    for (const auto& x : points) p.push_back(to_i128(x));
    for (auto& [n, level, cyc] : detail::hull_impl(std::move(p))) {
      HullFacet f{to_big(n), to_big(level), {}};
      for (const auto& v : cyc) f.vertices.push_back(to_big(v));
      out.push_back(std::move(f));
    }
  } else {
    for (auto& [n, level, cyc] : detail::hull_impl(points)) out.push_back(HullFacet{n, level, cyc});
  }
  std::sort(out.begin(), out.end(), [](const HullFacet& a, const HullFacet& b) {
    return std::tie(a.normal, a.level) < std::tie(b.normal, b.level);
  });
  return out;
}

// ---------------------------------------------------------------------------
// Lattice points

/// Integer points of the closed simplex conv{0, p, q, r} (p, q, r independent),
/// enumerated through coset representatives of Z^3 / <p, q, r>.
inline std::vector<Vec3> lattice_points_in_simplex(const Vec3& p, const Vec3& q, const Vec3& r,
                                                   std::size_t limit = 50'000'000) {
  Mat3Z m = Mat3Z::from_columns(p, q, r);
  BigInt det = m.det();
  if (det == 0) throw Error(ErrorKind::DegenerateSpan, "simplex is flat");
  BigInt ad = abs(det);
  if (ad > BigInt(limit)) throw Error(ErrorKind::LimitExceeded, "simplex volume " + ad.str() + " too large");
  Mat3Z adj = BigInt(sign(det)) * m.adjugate();
  Mat3Z h = hermite_lower(m);
  std::vector<Vec3> out{Vec3(0, 0, 0), p, q, r};
  bool small = bit_length(max_abs(adj)) + bit_length(ad) + 4 < 120 && bit_length(max_abs(m)) + bit_length(ad) + 4 < 120;
  if (small) {
    i128 D = to_i128(ad);
    i128 a[3][3], mm[3][3];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        a[i][j] = to_i128(adj[i][j]);
        mm[i][j] = to_i128(m[i][j]);
      }
    i128 h0 = to_i128(h[0][0]), h1 = to_i128(h[1][1]), h2 = to_i128(h[2][2]);
    for (i128 x0 = 0; x0 < h0; ++x0)
      for (i128 x1 = 0; x1 < h1; ++x1)
        for (i128 x2 = 0; x2 < h2; ++x2) {
          if (x0 == 0 && x1 == 0 && x2 == 0) continue;
          i128 f[3];
          i128 s = 0;
          for (int i = 0; i < 3; ++i) {
            f[i] = mod_floor(a[i][0] * x0 + a[i][1] * x1 + a[i][2] * x2, D);
            s += f[i];
          }
          if (s > D) continue;
          Vec3i pt;
          for (int i = 0; i < 3; ++i) pt[i] = (mm[i][0] * f[0] + mm[i][1] * f[1] + mm[i][2] * f[2]) / D;
          out.push_back(to_big(pt));
        }
  } else {
    for (BigInt x0 = 0; x0 < h[0][0]; ++x0)
      for (BigInt x1 = 0; x1 < h[1][1]; ++x1)
        for (BigInt x2 = 0; x2 < h[2][2]; ++x2) {
          if (x0 == 0 && x1 == 0 && x2 == 0) continue;
          Vec3 x(x0, x1, x2);
          Vec3 l = adj * x;
          BigInt s = 0;
          for (int i = 0; i < 3; ++i) {
            l[i] = mod_floor(l[i], ad);
            s += l[i];
          }
          if (s > ad) continue;
          Vec3 pt = m * l;
          for (int i = 0; i < 3; ++i) pt[i] /= ad;
          out.push_back(pt);
        }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

using RVec3 = Point3<Rational>;

/// Integer points of the closed convex hull of rational points, by a bounding
/// box scan filtered with exact halfspace tests. Lower-dimensional inputs
/// (polygons, segments, single points) are supported.
inline std::vector<Vec3> lattice_points_in_polytope(const std::vector<RVec3>& vertices) {
  if (vertices.empty()) throw Error(ErrorKind::Unbounded, "no vertices given");
  BigInt den = 1;
  for (const auto& v : vertices)
    for (const auto& x : v.c) den = boost::multiprecision::lcm(den, BigInt(boost::multiprecision::denominator(x)));
  std::vector<Vec3> scaled;
  for (const auto& v : vertices) {
    Vec3 s;
    for (int i = 0; i < 3; ++i) s[i] = BigInt(boost::multiprecision::numerator(v[i]) * (den / boost::multiprecision::denominator(v[i])));
    scaled.push_back(s);
  }
  std::sort(scaled.begin(), scaled.end());
  scaled.erase(std::unique(scaled.begin(), scaled.end()), scaled.end());

  Vec3 lo, hi;
  for (int i = 0; i < 3; ++i) {
    BigInt mn = scaled[0][i], mx = scaled[0][i];
    for (const auto& s : scaled) {
      mn = std::min(mn, s[i]);
      mx = std::max(mx, s[i]);
    }
    lo[i] = ceil_div(mn, den);
    hi[i] = floor_div(mx, den);
  }

  // membership test in scaled coordinates
  std::function<bool(const Vec3&)> inside;
  std::vector<HullFacet> facets;
  if (detail::spans_space(scaled)) {
    facets = convex_hull_3d(scaled);
    inside = [&](const Vec3& x) {
      for (const auto& f : facets)
        if (dot(f.normal, x) < f.level) return false;
      return true;
    };
  } else if (scaled.size() == 1) {
    inside = [&](const Vec3& x) { return x == scaled[0]; };
  } else {
    const Vec3& p0 = scaled[0];
    Vec3 d1 = scaled.back() - p0;
    Vec3 n;
    for (const auto& s : scaled) {
      n = cross(d1, s - p0);
      if (!n.is_zero()) break;
    }
    if (n.is_zero()) {
      // segment: find the extreme points along d1
      BigInt tmin = 0, tmax = 0;
      for (const auto& s : scaled) {
        BigInt t = dot(s - p0, d1);
        tmin = std::min(tmin, t);
        tmax = std::max(tmax, t);
      }
      inside = [&, tmin, tmax, d1](const Vec3& x) {
        Vec3 w = x - p0;
        if (!cross(d1, w).is_zero()) return false;
        BigInt t = dot(w, d1);
        return t >= tmin && t <= tmax;
      };
    } else {
      n = primitive(n);
      auto poly = detail::planar_hull(scaled, n);
      BigInt level = dot(n, p0);
      inside = [&, n, level, poly](const Vec3& x) {
        if (dot(n, x) != level) return false;
        for (std::size_t i = 0; i < poly.size(); ++i) {
          const Vec3& a = poly[i];
          const Vec3& b = poly[(i + 1) % poly.size()];
          if (dot(cross(b - a, x - b), n) > 0) return false;
        }
        return true;
      };
    }
  }

  std::vector<Vec3> out;
  for (BigInt x = lo[0]; x <= hi[0]; ++x)
    for (BigInt y = lo[1]; y <= hi[1]; ++y)
      for (BigInt z = lo[2]; z <= hi[2]; ++z) {
        Vec3 p(x * den, y * den, z * den);
        if (inside(p)) out.emplace_back(x, y, z);
      }
  return out;
}

inline std::vector<Vec3> lattice_points_in_polytope(const std::vector<Vec3>& vertices) {
  std::vector<RVec3> r;
  for (const auto& v : vertices) r.push_back({Rational(v[0]), Rational(v[1]), Rational(v[2])});
  return lattice_points_in_polytope(r);
}

/// Lattice points of a closed polygon (vertices coplanar, convex order).
inline std::vector<Vec3> lattice_points_in_polygon(const LatticePolygon& poly) {
  return lattice_points_in_polytope(poly.vertices);
}

/// Affine lattice frame of a plane: points origin + x e1 + y e2 with integer
/// (x, y) are exactly the lattice points of the plane.
struct PlaneFrame {
  Vec3 origin, e1, e2;

  Vec3 point(const BigInt& x, const BigInt& y) const { return origin + x * e1 + y * e2; }
  std::pair<BigInt, BigInt> coords(const Vec3& p) const { return plane_coordinates(p - origin, e1, e2); }
};

/// Frame with a Gauss-reduced basis so that coordinate boxes stay tight.
inline PlaneFrame plane_frame(const Vec3& origin, const Vec3& normal) {
  auto b = plane_lattice_basis(primitive(normal));
  Vec3 e1 = b[0], e2 = b[1];
  for (int it = 0; it < 1000; ++it) {
    if (dot(e2, e2) < dot(e1, e1)) std::swap(e1, e2);
    BigInt n1 = dot(e1, e1);
    BigInt q = floor(Rational(make_rational(BigInt(2 * dot(e1, e2) + n1), BigInt(2 * n1))));
    if (q == 0) break;
    e2 = e2 - q * e1;
  }
  return {origin, e1, e2};
}

/// Lattice points of a convex polygon (vertices in cyclic order), boundary included.
inline std::vector<Vec3> polygon_lattice_points(const LatticePolygon& poly) {
  const auto& v = poly.vertices;
  if (v.empty()) return {};
  if (v.size() < 3) return lattice_points_in_polytope(v);
  PlaneFrame fr = plane_frame(v[0], poly.normal);
  std::vector<std::pair<BigInt, BigInt>> c;
  for (const auto& x : v) c.push_back(fr.coords(x));
  BigInt x0 = c[0].first, x1 = c[0].first, y0 = c[0].second, y1 = c[0].second;
  for (const auto& [x, y] : c) {
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  }
  // orientation of the 2D cycle
  BigInt area2 = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto& a = c[i];
    const auto& b = c[(i + 1) % c.size()];
    area2 += a.first * b.second - a.second * b.first;
  }
  int orient = sign(area2);
  std::vector<Vec3> out;
  for (BigInt x = x0; x <= x1; ++x)
    for (BigInt y = y0; y <= y1; ++y) {
      bool in = true;
      for (std::size_t i = 0; i < c.size() && in; ++i) {
        const auto& a = c[i];
        const auto& b = c[(i + 1) % c.size()];
        BigInt cr = (b.first - a.first) * (y - a.second) - (b.second - a.second) * (x - a.first);
        if (sign(cr) * orient < 0) in = false;
      }
      if (in) out.push_back(fr.point(x, y));
    }
  std::sort(out.begin(), out.end());
  return out;
}

/// Integer points in the relative interior of a segment.
inline std::vector<Vec3> interior_points(const Vec3& p, const Vec3& q) {
  BigInt g = content(q - p);
  std::vector<Vec3> out;
  if (g == 0) return out;
  Vec3 step = primitive(q - p);
  for (BigInt i = 1; i < g; ++i) out.push_back(p + i * step);
  return out;
}

}  // namespace cfsail
