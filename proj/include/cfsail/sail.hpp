#pragma once

// One sail of the two-dimensional continued fraction of a cubic operator and
// a fundamental domain for the action of its totally positive units.

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cfsail/errors.hpp"
#include "cfsail/exactnum.hpp"
#include "cfsail/lattice.hpp"
#include "cfsail/numeric.hpp"
#include "cfsail/units.hpp"

namespace cfsail {

struct OrthantSpec {
  std::array<int, 3> signs{};
  Vec3 witness;

  friend bool operator==(const OrthantSpec& a, const OrthantSpec& b) { return a.signs == b.signs; }
};

inline OrthantSpec select_orthant(const SpectralData& s, const Vec3& seed) {
  if (seed.is_zero()) throw Error(ErrorKind::SeedOutsideOrthant, "seed is the zero vector");
  OrthantSpec o;
  o.witness = seed;
  for (int k = 0; k < 3; ++k) {
    o.signs[k] = sign_at(s.forms[k], seed);
    if (o.signs[k] == 0) throw Error(ErrorKind::SeedOutsideOrthant, "seed lies on an eigenplane");
  }
  return o;
}

inline OrthantSpec select_orthant(const IntegerOperator3& a, const Vec3& seed) {
  return select_orthant(spectral_data(a.matrix()), seed);
}

struct SailFace {
  LatticePolygon polygon;  // counterclockwise seen from the origin
  BigInt area;
  BigInt distance;
  std::vector<BigInt> edge_lengths;  // edge i joins vertex i and vertex i+1

  std::size_t size() const { return polygon.vertices.size(); }
  const Vec3& vertex(std::size_t i) const { return polygon.vertices[i % polygon.vertices.size()]; }
};

inline SailFace make_sail_face(std::vector<Vec3> vertices, const Vec3& normal, const BigInt& level) {
  SailFace s;
  s.polygon.vertices = std::move(vertices);
  s.polygon.normal = normal;
  s.polygon.level = level;
  s.area = integer_area(s.polygon);
  s.distance = abs(level);
  for (std::size_t i = 0; i < s.size(); ++i) s.edge_lengths.push_back(integer_length(s.vertex(i), s.vertex(i + 1)));
  return s;
}

struct UnitWord {
  long long i = 0, j = 0;
  friend bool operator==(const UnitWord& a, const UnitWord& b) { return a.i == b.i && a.j == b.j; }
  friend bool operator<(const UnitWord& a, const UnitWord& b) { return std::tie(a.i, a.j) < std::tie(b.i, b.j); }
};

/// Side `side` of a face is carried by X^i Y^j onto side `partner_side` of
/// face `partner_face`, with the direction reversed.
struct SideLink {
  std::size_t partner_face = 0;
  std::size_t partner_side = 0;
  UnitWord word;
};

struct FundamentalDomain {
  Mat3Z a;
  SpectralData spectral;
  OrthantSpec orthant;
  UnitBasis basis;
  Vec3 seed;
  Vec3 seed_vertex;
  bool seed_is_vertex = false;
  int window_radius = 1;
  bool central_polytope_used = true;  // false when candidates came from the norm search
  std::size_t candidate_points = 0;    // orbit candidates after the cone filter
  std::vector<SailFace> faces;
  std::vector<std::vector<SideLink>> links;            // [face][side]
  std::vector<std::vector<std::size_t>> vertex_class;  // [face][corner]
  std::vector<std::vector<std::size_t>> edge_class;    // [face][side]
  std::vector<Vec3> vertex_reps;                       // one vertex per class
  std::size_t num_edge_classes = 0;

  std::size_t num_vertex_classes() const { return vertex_reps.size(); }
};

// ---------------------------------------------------------------------------
// Numeric frame of the orthant

namespace detail {

struct WordCache {
  Mat3Z x, y;
  std::map<UnitWord, Mat3Z> cache;

  const Mat3Z& get(const UnitWord& w) {
    auto it = cache.find(w);
    if (it != cache.end()) return it->second;
    Mat3Z m = mat_pow(x, BigInt(w.i)) * mat_pow(y, BigInt(w.j));
    return cache.emplace(w, std::move(m)).first->second;
  }
};

using Arr3 = std::array<long double, 3>;

struct LogFrame {
  std::array<Arr3, 3> forms{};  // oriented, positive on the orthant
  std::array<Arr3, 3> dual{};   // x = sum_k forms[k](x) dual[k]
  Arr3 lx{}, ly{};

  Arr3 values(const Vec3& v) const {
    Arr3 r{};
    long double x[3] = {to_ld(v[0]), to_ld(v[1]), to_ld(v[2])};
    for (int k = 0; k < 3; ++k) r[k] = forms[k][0] * x[0] + forms[k][1] * x[1] + forms[k][2] * x[2];
    return r;
  }
  Arr3 scales(const Vec3& v) const {
    Arr3 r{};
    long double x[3] = {to_ld(v[0]), to_ld(v[1]), to_ld(v[2])};
    for (int k = 0; k < 3; ++k)
      r[k] = std::fabs(forms[k][0] * x[0]) + std::fabs(forms[k][1] * x[1]) + std::fabs(forms[k][2] * x[2]);
    return r;
  }
  Arr3 position(const Vec3& v) const {
    Arr3 f = values(v);
    return {std::log(std::fabs(f[0])), std::log(std::fabs(f[1])), std::log(std::fabs(f[2]))};
  }
  /// Real (a, b) with position(w) - position(v) = a lx + b ly.
  std::pair<long double, long double> offset(const Arr3& pv, const Arr3& pw) const {
    return solve2(lx, ly, {pw[0] - pv[0], pw[1] - pv[1], pw[2] - pv[2]});
  }
  /// Coefficients w with n.x = sum_k w_k forms[k](x).
  Arr3 weights(const Vec3& n) const {
    Arr3 w{};
    long double nn[3] = {to_ld(n[0]), to_ld(n[1]), to_ld(n[2])};
    for (int k = 0; k < 3; ++k) w[k] = nn[0] * dual[k][0] + nn[1] * dual[k][1] + nn[2] * dual[k][2];
    return w;
  }
};

inline LogFrame make_log_frame(const SpectralData& s, const OrthantSpec& o, const UnitBasis& b) {
  LogFrame f;
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i) {
      f.forms[k][i] = o.signs[k] * s.left[k][i];
      f.dual[k][i] = o.signs[k] * s.right[k][i] / s.pairing[k];
    }
  f.lx = b.log_x;
  f.ly = b.log_y;
  return f;
}

/// Words near the real offset (a, b), nearest first.
inline std::vector<UnitWord> nearby_words(long double a, long double b, int spread = 1) {
  std::vector<UnitWord> w;
  if (!std::isfinite(a) || !std::isfinite(b)) return w;
  long long i0 = std::llround(a), j0 = std::llround(b);
  w.push_back({i0, j0});
  for (int di = -spread; di <= spread; ++di)
    for (int dj = -spread; dj <= spread; ++dj)
      if (di || dj) w.push_back({i0 + di, j0 + dj});
  return w;
}

/// Drop every point x for which some y has all oriented form values clearly
/// smaller: x - y then lies in the open cone and x is interior to the hull.
inline std::vector<Vec3> cone_minimal(const std::vector<Vec3>& pts, const LogFrame& fr) {
  struct Item {
    Arr3 lo, hi;
  };
  std::vector<Item> items;
  items.reserve(pts.size());
  for (const auto& p : pts) {
    Arr3 v = fr.values(p), s = fr.scales(p);
    Item it{};
    for (int k = 0; k < 3; ++k) {
      long double t = (s[k] + std::fabs(v[k])) * 1e-15L;
      it.lo[k] = v[k] - t;
      it.hi[k] = v[k] + t;
    }
    items.push_back(it);
  }
  std::vector<std::size_t> by_lo(items.size()), by_hi(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) by_lo[i] = by_hi[i] = i;
  std::sort(by_lo.begin(), by_lo.end(), [&](auto a, auto b) { return items[a].lo[0] < items[b].lo[0]; });
  std::sort(by_hi.begin(), by_hi.end(), [&](auto a, auto b) { return items[a].hi[0] < items[b].hi[0]; });
  // staircase of inserted (hi1, hi2): increasing keys, decreasing values
  std::map<long double, long double> stair;
  auto insert = [&](long double a, long double b) {
    auto it = stair.upper_bound(a);
    if (it != stair.begin() && std::prev(it)->second <= b) return;
    it = stair.lower_bound(a);
    while (it != stair.end() && it->second >= b) it = stair.erase(it);
    stair[a] = b;
  };
  std::vector<bool> dominated(items.size(), false);
  std::size_t h = 0;
  for (std::size_t q : by_lo) {
    const auto& x = items[q];
    while (h < by_hi.size() && items[by_hi[h]].hi[0] < x.lo[0]) {
      insert(items[by_hi[h]].hi[1], items[by_hi[h]].hi[2]);
      ++h;
    }
    auto it = stair.lower_bound(x.lo[1]);
    if (it != stair.begin() && std::prev(it)->second < x.lo[2]) dominated[q] = true;
  }
  std::vector<Vec3> out;
  for (std::size_t i = 0; i < items.size(); ++i)
    if (!dominated[i]) out.push_back(pts[i]);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Summed |det| of the tetrahedra on four of {0, P, XP, YP, XYP}.
inline BigInt central_polytope_weight(const Vec3& p, const Mat3Z& x, const Mat3Z& y) {
  Vec3 pts[5] = {Vec3(0, 0, 0), p, x * p, y * p, x * (y * p)};
  BigInt total = 0;
  for (int skip = 0; skip < 5; ++skip) {
    std::vector<Vec3> q;
    for (int i = 0; i < 5; ++i)
      if (i != skip) q.push_back(pts[i]);
    total += abs(orient3d(q[0], q[1], q[2], q[3]));
  }
  return total;
}

/// Lattice points of conv{0, P, XP, YP, XYP} as a union of the non-flat
/// tetrahedra on four of the five points.
inline std::vector<Vec3> central_polytope_points(const Vec3& p, const Mat3Z& x, const Mat3Z& y) {
  Vec3 pts[5] = {Vec3(0, 0, 0), p, x * p, y * p, x * (y * p)};
  std::set<Vec3> out;
  for (int skip = 0; skip < 5; ++skip) {
    std::vector<Vec3> q;
    for (int i = 0; i < 5; ++i)
      if (i != skip) q.push_back(pts[i]);
    Vec3 a = q[1] - q[0], b = q[2] - q[0], c = q[3] - q[0];
    if (dot(cross(a, b), c) == 0) continue;
    for (const auto& v : lattice_points_in_simplex(a, b, c)) out.insert(v + q[0]);
  }
  out.erase(Vec3(0, 0, 0));
  return {out.begin(), out.end()};
}

/// Integer points x with 0 < f_k(x) <= c_k for the three oriented forms.
/// LLL-reduces the lattice in scaled box coordinates and enumerates the ball
/// around the box centre.
inline std::vector<Vec3> box_points(const LogFrame& fr, const Arr3& c, std::size_t limit = 2'000'000) {
  // row k: 2 f_k / c_k, so the box maps to [0, 2]^3 around (1, 1, 1)
  long double m[3][3];
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i) m[k][i] = 2 * fr.forms[k][i] / c[k];
  long long b[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};  // b[j] is basis vector j
  auto image = [&](int j) {
    Arr3 v{};
    for (int k = 0; k < 3; ++k) v[k] = m[k][0] * b[j][0] + m[k][1] * b[j][1] + m[k][2] * b[j][2];
    return v;
  };
  auto dotv = [](const Arr3& x, const Arr3& y) { return x[0] * y[0] + x[1] * y[1] + x[2] * y[2]; };
  Arr3 q[3];
  long double r[3][3] = {};
  auto gram_schmidt = [&]() {
    for (int j = 0; j < 3; ++j) {
      Arr3 img = image(j), v = img;
      for (int i = 0; i < j; ++i) {
        r[i][j] = dotv(q[i], img);
        for (int k = 0; k < 3; ++k) v[k] -= r[i][j] * q[i][k];
      }
      r[j][j] = std::sqrt(dotv(v, v));
      for (int k = 0; k < 3; ++k) q[j][k] = v[k] / r[j][j];
    }
  };
  for (int iter = 0, j = 1; j < 3 && iter < 10000; ++iter) {
    gram_schmidt();
    for (int i = j - 1; i >= 0; --i) {
      long long t = std::llround(r[i][j] / r[i][i]);
      if (t != 0) {
        for (int k = 0; k < 3; ++k) b[j][k] -= t * b[i][k];
        gram_schmidt();
      }
    }
    if (r[j][j] * r[j][j] + r[j - 1][j] * r[j - 1][j] >= 0.99L * r[j - 1][j - 1] * r[j - 1][j - 1]) {
      ++j;
    } else {
      std::swap(b[j], b[j - 1]);
      j = std::max(j - 1, 1);
    }
  }
  gram_schmidt();
  Arr3 centre{1, 1, 1};
  Arr3 y{dotv(q[0], centre), dotv(q[1], centre), dotv(q[2], centre)};
  const long double rad2 = 3 * (1 + 1e-9L);
  auto range = [](long double mid, long double half) {
    return std::pair<long long, long long>{static_cast<long long>(std::ceil(mid - half)),
                                           static_cast<long long>(std::floor(mid + half))};
  };
  std::vector<Vec3> out;
  std::size_t visited = 0;
  auto [z2lo, z2hi] = range(y[2] / r[2][2], std::sqrt(rad2) / r[2][2]);
  for (long long z2 = z2lo; z2 <= z2hi; ++z2) {
    long double e2 = r[2][2] * z2 - y[2];
    long double rem2 = rad2 - e2 * e2;
    if (rem2 < 0) continue;
    auto [z1lo, z1hi] = range((y[1] - r[1][2] * z2) / r[1][1], std::sqrt(rem2) / r[1][1]);
    for (long long z1 = z1lo; z1 <= z1hi; ++z1) {
      long double e1 = r[1][1] * z1 + r[1][2] * z2 - y[1];
      long double rem1 = rem2 - e1 * e1;
      if (rem1 < 0) continue;
      auto [z0lo, z0hi] = range((y[0] - r[0][1] * z1 - r[0][2] * z2) / r[0][0], std::sqrt(rem1) / r[0][0]);
      for (long long z0 = z0lo; z0 <= z0hi; ++z0) {
        if (++visited > limit) throw Error(ErrorKind::LimitExceeded, "norm box enumeration too large");
        Vec3 x;
        for (int k = 0; k < 3; ++k) x[k] = BigInt(z0) * b[0][k] + BigInt(z1) * b[1][k] + BigInt(z2) * b[2][k];
        if (x.is_zero()) continue;
        Arr3 f = fr.values(x);
        bool ok = true;
        for (int k = 0; k < 3 && ok; ++k) ok = f[k] > 0 && f[k] <= c[k] * (1 + 1e-12L);
        if (ok) out.push_back(std::move(x));
      }
    }
  }
  return out;
}

/// Orthant points with norm at most norm_factor times the norm of p whose
/// log position falls in the unit-lattice parallelogram around p. The
/// parallelogram is cut into cells and each cell contributes one box.
inline std::vector<Vec3> norm_box_candidates(const LogFrame& fr, const Vec3& p, long double norm_factor) {
  Arr3 pp = fr.position(p);
  long double mean = (pp[0] + pp[1] + pp[2]) / 3;
  Arr3 tp{pp[0] - mean, pp[1] - mean, pp[2] - mean};
  long double log_bound = mean + std::log(norm_factor) / 3;
  auto span = [](const Arr3& v) { return std::max({std::fabs(v[0]), std::fabs(v[1]), std::fabs(v[2])}); };
  const long double cell = 0.5L;
  int gs = std::max(1, static_cast<int>(std::ceil(span(fr.lx) / cell)));
  int gu = std::max(1, static_cast<int>(std::ceil(span(fr.ly) / cell)));
  std::set<Vec3> out;
  out.insert(p);
  for (int a = 0; a < gs; ++a)
    for (int b = 0; b < gu; ++b) {
      Arr3 top{-1e300L, -1e300L, -1e300L};
      for (int ca = 0; ca <= 1; ++ca)
        for (int cb = 0; cb <= 1; ++cb) {
          long double s = -0.5L + static_cast<long double>(a + ca) / gs;
          long double u = -0.5L + static_cast<long double>(b + cb) / gu;
          for (int k = 0; k < 3; ++k) top[k] = std::max(top[k], tp[k] + s * fr.lx[k] + u * fr.ly[k]);
        }
      Arr3 c{};
      for (int k = 0; k < 3; ++k) c[k] = std::exp(log_bound + top[k]) * (1 + 1e-9L);
      for (auto& x : box_points(fr, c)) out.insert(std::move(x));
    }
  return {out.begin(), out.end()};
}

}  // namespace detail

/// All nonzero integer points of the union of X^i Y^j (conv{0, P, XP, YP, XYP})
/// over |i|, |j| <= radius.
inline std::vector<Vec3> enumerate_candidates(const UnitBasis& basis, const Vec3& p, int radius = 1) {
  auto central = detail::central_polytope_points(p, basis.x(), basis.y());
  detail::WordCache wc{basis.x(), basis.y(), {}};
  std::set<Vec3> out;
  for (int i = -radius; i <= radius; ++i)
    for (int j = -radius; j <= radius; ++j) {
      const Mat3Z& u = wc.get({i, j});
      for (const auto& v : central) out.insert(u * v);
    }
  return {out.begin(), out.end()};
}

struct SailOptions {
  int radius = 1;
  int max_radius = 6;
  // central polytopes whose summed tetrahedron determinant exceeds this are
  // replaced by the norm-bounded search
  long long central_polytope_limit = 20'000'000;
  long double norm_factor = 8;
  int max_repairs = 20;
  UnitSearchOptions units;
};

// ---------------------------------------------------------------------------
// Fundamental domain

namespace detail {

struct SailContext {
  const SpectralData& s;
  const OrthantSpec& orthant;
  const UnitBasis& basis;
  LogFrame frame;
  WordCache words;
  std::array<int, 3> edge_sign{};  // sign of the oriented form k on eigenvector k

  SailContext(const SpectralData& s_, const OrthantSpec& o, const UnitBasis& b)
      : s(s_), orthant(o), basis(b), frame(make_log_frame(s_, o, b)), words{b.x(), b.y(), {}} {
    for (int k = 0; k < 3; ++k) {
      const auto& f = s.forms[k];
      const auto& v = s.vectors[k];
      IntPoly q = f.coeffs[0] * v.coeffs[0] + f.coeffs[1] * v.coeffs[1] + f.coeffs[2] * v.coeffs[2];
      edge_sign[k] = orthant.signs[k] * sign_at_root(q, v.root);
    }
  }

  /// Whether n is positive on every edge of the closed orthant cone.
  bool normal_in_dual_cone(const Vec3& n) const {
    for (int k = 0; k < 3; ++k)
      if (sign_at(n, s.vectors[k]) * edge_sign[k] <= 0) return false;
    return true;
  }

  /// A word U with U v == w, if one exists near the log estimate.
  std::optional<UnitWord> word_between(const Vec3& v, const Vec3& w, int spread = 1) {
    auto [a, b] = frame.offset(frame.position(v), frame.position(w));
    for (const auto& word : nearby_words(a, b, spread))
      if (words.get(word) * v == w) return word;
    return std::nullopt;
  }

  /// Whether n.x >= level on the whole orbit of reps; on success on_plane
  /// receives every orbit point with n.x == level.
  bool supports_orbit(const Vec3& n, const BigInt& level, const std::vector<Vec3>& reps,
                      std::set<Vec3>& on_plane) {
    Arr3 w = frame.weights(n);
    long double lev = to_ld(level);
    for (const auto& m : reps) {
      // n.(U m) = sum_k w_k f_k(m) mu_k(U); every term must stay below level
      Arr3 f = frame.values(m);
      Arr3 c{};
      for (int k = 0; k < 3; ++k) {
        long double a = w[k] * f[k];
        if (!(a > 0)) return false;
        c[k] = std::log(lev / a) + 1e-9L;
      }
      if (c[0] + c[1] + c[2] < -1e-9L) continue;
      long double imin = 1e300L, imax = -1e300L;
      for (int k1 = 0; k1 < 3; ++k1)
        for (int k2 = k1 + 1; k2 < 3; ++k2) {
          long double d = frame.lx[k1] * frame.ly[k2] - frame.lx[k2] * frame.ly[k1];
          if (std::fabs(d) < 1e-300L) continue;
          long double i = (c[k1] * frame.ly[k2] - c[k2] * frame.ly[k1]) / d;
          imin = std::min(imin, i);
          imax = std::max(imax, i);
        }
      if (imin > imax) continue;
      for (long long i = static_cast<long long>(std::floor(imin - 1e-6L));
           i <= static_cast<long long>(std::ceil(imax + 1e-6L)); ++i) {
        long double jlo = -1e300L, jhi = 1e300L;
        bool empty = false;
        for (int k = 0; k < 3; ++k) {
          long double rhs = c[k] - i * frame.lx[k];
          if (frame.ly[k] > 1e-300L)
            jhi = std::min(jhi, rhs / frame.ly[k]);
          else if (frame.ly[k] < -1e-300L)
            jlo = std::max(jlo, rhs / frame.ly[k]);
          else if (rhs < 0)
            empty = true;
        }
        if (empty || jlo > jhi + 1e-6L) continue;
        for (long long j = static_cast<long long>(std::floor(jlo - 1e-6L));
             j <= static_cast<long long>(std::ceil(jhi + 1e-6L)); ++j) {
          Vec3 im = words.get({i, j}) * m;
          BigInt val = dot(n, im);
          if (val < level) return false;
          if (val == level) on_plane.insert(std::move(im));
        }
      }
    }
    return true;
  }
};

inline Vec3 face_sum(const SailFace& f) {
  Vec3 s(0, 0, 0);
  for (const auto& v : f.polygon.vertices) s = s + v;
  return s;
}

/// Word U with U f == g as vertex sets.
inline std::optional<UnitWord> face_word(SailContext& ctx, const SailFace& f, const SailFace& g) {
  if (f.size() != g.size() || f.polygon.level != g.polygon.level) return std::nullopt;
  auto w = ctx.word_between(face_sum(f), face_sum(g));
  if (!w) return std::nullopt;
  const Mat3Z& u = ctx.words.get(*w);
  std::vector<Vec3> img;
  for (const auto& v : f.polygon.vertices) img.push_back(u * v);
  std::vector<Vec3> gv = g.polygon.vertices;
  std::sort(img.begin(), img.end());
  std::sort(gv.begin(), gv.end());
  if (img != gv) return std::nullopt;
  return w;
}

/// Central sail faces: hull facets of the window that carry a point of reps,
/// face the origin and support the whole orbit.
inline std::vector<SailFace> central_faces(SailContext& ctx, const std::vector<Vec3>& reps, int radius) {
  std::set<Vec3> window;
  for (int i = -radius; i <= radius; ++i)
    for (int j = -radius; j <= radius; ++j) {
      const Mat3Z& u = ctx.words.get({i, j});
      for (const auto& v : reps) window.insert(u * v);
    }
  std::vector<Vec3> pts = cone_minimal({window.begin(), window.end()}, ctx.frame);
  std::set<Vec3> rep_set(reps.begin(), reps.end());
  std::vector<SailFace> out;
  for (const auto& f : convex_hull_3d(pts)) {
    if (f.level <= 0) continue;
    bool central = false;
    for (const auto& v : f.vertices)
      if (rep_set.count(v)) central = true;
    if (!central || !ctx.normal_in_dual_cone(f.normal)) continue;
    std::set<Vec3> on_plane;
    if (!ctx.supports_orbit(f.normal, f.level, reps, on_plane)) continue;
    auto poly = planar_hull(std::vector<Vec3>(on_plane.begin(), on_plane.end()), f.normal);
    out.push_back(make_sail_face(std::move(poly), f.normal, f.level));
  }
  return out;
}

/// Nonzero lattice points strictly between the origin and the face plane in
/// the cone over the face.
inline std::vector<Vec3> points_below(const SailFace& f) {
  std::vector<Vec3> out;
  for (std::size_t i = 1; i + 1 < f.size(); ++i)
    for (const auto& x : lattice_points_in_simplex(f.vertex(0), f.vertex(i), f.vertex(i + 1)))
      if (!x.is_zero() && dot(f.polygon.normal, x) < f.polygon.level) out.push_back(x);
  return out;
}

/// Representatives, side pairing, classes and the Euler check. Returns an
/// empty string on success, else the reason for failure.
inline std::string glue(SailContext& ctx, const std::vector<SailFace>& cf, const Vec3& p, FundamentalDomain& fd) {
  std::map<std::pair<Vec3, Vec3>, std::size_t> edge_owner;  // directed edge -> face
  for (std::size_t i = 0; i < cf.size(); ++i)
    for (std::size_t k = 0; k < cf[i].size(); ++k) edge_owner[{cf[i].vertex(k), cf[i].vertex(k + 1)}] = i;
  std::vector<std::size_t> order(cf.size());
  for (std::size_t i = 0; i < cf.size(); ++i) order[i] = i;
  auto key = [&](std::size_t i) { return std::make_pair(cf[i].polygon.normal, cf[i].polygon.level); };
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return key(x) < key(y); });

  // breadth-first over edge adjacency, starting at the faces through p
  std::deque<std::size_t> queue;
  std::vector<bool> visited(cf.size(), false);
  for (std::size_t i : order)
    for (const auto& v : cf[i].polygon.vertices)
      if (v == p && !visited[i]) {
        visited[i] = true;
        queue.push_back(i);
      }
  std::vector<std::size_t> reps;
  for (;;) {
    while (!queue.empty()) {
      std::size_t i = queue.front();
      queue.pop_front();
      bool known = false;
      for (std::size_t r : reps)
        if (face_word(ctx, cf[r], cf[i])) known = true;
      if (!known) reps.push_back(i);
      for (std::size_t k = 0; k < cf[i].size(); ++k) {
        auto it = edge_owner.find({cf[i].vertex(k + 1), cf[i].vertex(k)});
        if (it != edge_owner.end() && !visited[it->second]) {
          visited[it->second] = true;
          queue.push_back(it->second);
        }
      }
    }
    auto next = std::find_if(order.begin(), order.end(), [&](std::size_t i) { return !visited[i]; });
    if (next == order.end()) break;
    visited[*next] = true;
    queue.push_back(*next);
  }
  fd.faces.clear();
  for (std::size_t r : reps) fd.faces.push_back(cf[r]);

  fd.links.assign(fd.faces.size(), {});
  for (std::size_t f = 0; f < fd.faces.size(); ++f) {
    const auto& F = fd.faces[f];
    fd.links[f].resize(F.size());
    for (std::size_t k = 0; k < F.size(); ++k) {
      const Vec3 &a = F.vertex(k), &b = F.vertex(k + 1);
      int found = 0;
      for (std::size_t h = 0; h < fd.faces.size(); ++h) {
        const auto& G = fd.faces[h];
        for (std::size_t t = 0; t < G.size(); ++t) {
          if (h == f && t == k) continue;
          if (F.edge_lengths[k] != G.edge_lengths[t]) continue;
          auto w = ctx.word_between(a, G.vertex(t + 1));
          if (!w || ctx.words.get(*w) * b != G.vertex(t)) continue;
          if (found == 0) fd.links[f][k] = SideLink{h, t, *w};
          ++found;
        }
      }
      if (found != 1)
        return "side " + std::to_string(k) + " of face " + std::to_string(f) + " has " + std::to_string(found) +
               " partners";
    }
  }

  fd.edge_class.assign(fd.faces.size(), {});
  for (std::size_t f = 0; f < fd.faces.size(); ++f) fd.edge_class[f].assign(fd.faces[f].size(), SIZE_MAX);
  fd.num_edge_classes = 0;
  for (std::size_t f = 0; f < fd.faces.size(); ++f)
    for (std::size_t k = 0; k < fd.faces[f].size(); ++k) {
      if (fd.edge_class[f][k] != SIZE_MAX) continue;
      const auto& l = fd.links[f][k];
      fd.edge_class[f][k] = fd.num_edge_classes;
      fd.edge_class[l.partner_face][l.partner_side] = fd.num_edge_classes;
      ++fd.num_edge_classes;
    }

  fd.vertex_reps.clear();
  fd.vertex_class.assign(fd.faces.size(), {});
  for (std::size_t f = 0; f < fd.faces.size(); ++f)
    for (std::size_t k = 0; k < fd.faces[f].size(); ++k) {
      const Vec3& v = fd.faces[f].vertex(k);
      std::size_t cls = SIZE_MAX;
      for (std::size_t r = 0; r < fd.vertex_reps.size() && cls == SIZE_MAX; ++r)
        if (ctx.word_between(fd.vertex_reps[r], v)) cls = r;
      if (cls == SIZE_MAX) {
        cls = fd.vertex_reps.size();
        fd.vertex_reps.push_back(v);
      }
      fd.vertex_class[f].push_back(cls);
    }

  long long euler = static_cast<long long>(fd.vertex_reps.size()) - static_cast<long long>(fd.num_edge_classes) +
                    static_cast<long long>(fd.faces.size());
  if (euler != 0) return "Euler characteristic " + std::to_string(euler);
  return {};
}

inline FundamentalDomain build_from(const SpectralData& s, const OrthantSpec& orthant, const UnitBasis& basis,
                                    const Vec3& seed, const SailOptions& opt) {
  SailContext ctx(s, orthant, basis);
  FundamentalDomain fd;
  fd.a = s.a;
  fd.spectral = s;
  fd.orthant = orthant;
  fd.basis = basis;
  fd.seed = seed;

  auto candidates = [&](const Vec3& p) {
    if (central_polytope_weight(p, basis.x(), basis.y()) <= BigInt(opt.central_polytope_limit)) {
      fd.central_polytope_used = true;
      return cone_minimal(central_polytope_points(p, basis.x(), basis.y()), ctx.frame);
    }
    fd.central_polytope_used = false;
    return cone_minimal(norm_box_candidates(ctx.frame, p, opt.norm_factor), ctx.frame);
  };

  Vec3 p = seed;
  std::vector<Vec3> reps = candidates(p);
  bool seed_checked = false;
  std::string failure = "no sail faces";
  int radius = opt.radius;
  for (int repairs = 0; radius <= opt.max_radius && repairs <= opt.max_repairs;) {
    auto cf = central_faces(ctx, reps, radius);
    if (cf.empty()) {
      ++radius;
      continue;
    }
    if (!seed_checked) {
      seed_checked = true;
      bool is_vertex = false;
      for (const auto& f : cf)
        for (const auto& v : f.polygon.vertices)
          if (v == p) is_vertex = true;
      fd.seed_is_vertex = is_vertex;
      if (!is_vertex) {
        // the candidate sail vertex minimizing x + y + z, ties lexicographic
        std::set<Vec3> rs(reps.begin(), reps.end());
        std::optional<Vec3> best;
        for (const auto& f : cf)
          for (const auto& v : f.polygon.vertices) {
            if (!rs.count(v)) continue;
            if (!best) {
              best = v;
              continue;
            }
            BigInt a = v[0] + v[1] + v[2], b = (*best)[0] + (*best)[1] + (*best)[2];
            if (a < b || (a == b && v < *best)) best = v;
          }
        if (best) {
          p = *best;
          reps = candidates(p);
          continue;
        }
      }
    }
    fd.seed_vertex = p;
    fd.window_radius = radius;
    fd.candidate_points = reps.size();
    failure = glue(ctx, cf, p, fd);
    if (!failure.empty()) {
      ++radius;
      continue;
    }
    // certify that no lattice point lies under a representative face
    std::vector<Vec3> missing;
    for (const auto& f : fd.faces)
      for (auto& x : points_below(f)) missing.push_back(std::move(x));
    if (missing.empty()) return fd;
    reps.insert(reps.end(), missing.begin(), missing.end());
    reps = cone_minimal(reps, ctx.frame);
    failure = "lattice points below a face";
    ++repairs;
  }
  throw Error(ErrorKind::InconsistentGluing, failure);
}

}  // namespace detail

inline FundamentalDomain build_fundamental_domain(const SpectralData& s, const UnitBasis& basis,
                                                  const Vec3& seed = Vec3(0, 0, 1), const SailOptions& opt = {}) {
  OrthantSpec o = select_orthant(s, seed);
  return detail::build_from(s, o, basis, seed, opt);
}

inline FundamentalDomain build_fundamental_domain(const IntegerOperator3& a, const Vec3& seed = Vec3(0, 0, 1),
                                                  const SailOptions& opt = {}) {
  SpectralData s = spectral_data(a.matrix());
  OrthantSpec o = select_orthant(s, seed);
  UnitBasis b = find_positive_unit_basis(s, opt.units);
  return detail::build_from(s, o, b, seed, opt);
}

// ---------------------------------------------------------------------------
// Verification and lookup

struct IdentificationCheck {
  std::size_t face, side;
  std::size_t partner_face, partner_side;
  UnitWord word;
  bool ok;
};

struct IdentificationReport {
  std::vector<IdentificationCheck> checks;
  bool ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const IdentificationCheck& c) { return c.ok; });
  }
};

inline IdentificationReport verify_face_identifications(const FundamentalDomain& fd) {
  IdentificationReport r;
  detail::WordCache wc{fd.basis.x(), fd.basis.y(), {}};
  for (std::size_t f = 0; f < fd.faces.size(); ++f)
    for (std::size_t k = 0; k < fd.faces[f].size(); ++k) {
      const auto& l = fd.links[f][k];
      const Mat3Z& u = wc.get(l.word);
      const auto& F = fd.faces[f];
      const auto& G = fd.faces[l.partner_face];
      bool ok = u * F.vertex(k) == G.vertex(l.partner_side + 1) && u * F.vertex(k + 1) == G.vertex(l.partner_side);
      const auto& back = fd.links[l.partner_face][l.partner_side];
      ok = ok && back.partner_face == f && back.partner_side == k && back.word.i == -l.word.i &&
           back.word.j == -l.word.j;
      r.checks.push_back({f, k, l.partner_face, l.partner_side, l.word, ok});
    }
  return r;
}

struct PointLocation {
  std::size_t face;
  UnitWord word;
  Vec3 image;  // X^i Y^j p, inside the closed polygon of the face
};

/// Moves p onto a face of the domain by a unit word, if p lies on the sail.
inline std::optional<PointLocation> locate_point(const FundamentalDomain& fd, const Vec3& p) {
  if (p.is_zero()) return std::nullopt;
  auto frame = detail::make_log_frame(fd.spectral, fd.orthant, fd.basis);
  detail::WordCache wc{fd.basis.x(), fd.basis.y(), {}};
  auto pp = frame.position(p);
  for (std::size_t f = 0; f < fd.faces.size(); ++f) {
    const auto& F = fd.faces[f];
    for (const auto& v : F.polygon.vertices) {
      auto [a, b] = frame.offset(pp, frame.position(v));
      for (const auto& w : detail::nearby_words(a, b, 2)) {
        Vec3 q = wc.get(w) * p;
        if (dot(F.polygon.normal, q) != F.polygon.level) continue;
        bool inside = true;
        for (std::size_t k = 0; k < F.size() && inside; ++k)
          if (dot(cross(F.vertex(k + 1) - F.vertex(k), q - F.vertex(k + 1)), F.polygon.normal) > 0) inside = false;
        if (inside) return PointLocation{f, w, q};
      }
    }
  }
  return std::nullopt;
}

/// Word carrying p exactly onto target, searched near the log offset.
inline std::optional<UnitWord> unit_word_to(const FundamentalDomain& fd, const Vec3& p, const Vec3& target) {
  auto frame = detail::make_log_frame(fd.spectral, fd.orthant, fd.basis);
  detail::WordCache wc{fd.basis.x(), fd.basis.y(), {}};
  for (int k = 0; k < 3; ++k)
    if (sign_at(fd.spectral.forms[k], p) != fd.orthant.signs[k] ||
        sign_at(fd.spectral.forms[k], target) != fd.orthant.signs[k])
      return std::nullopt;
  auto [a, b] = frame.offset(frame.position(p), frame.position(target));
  for (const auto& w : detail::nearby_words(a, b, 2))
    if (wc.get(w) * p == target) return w;
  return std::nullopt;
}

struct EdgeLocation {
  std::size_t face, side;
  UnitWord word;  // X^i Y^j maps {p, q} onto the side
};

/// Finds a side of a domain face that is a unit image of the segment pq.
inline std::optional<EdgeLocation> locate_edge(const FundamentalDomain& fd, const Vec3& p, const Vec3& q) {
  for (std::size_t f = 0; f < fd.faces.size(); ++f) {
    const auto& F = fd.faces[f];
    for (std::size_t k = 0; k < F.size(); ++k) {
      const Vec3 &u = F.vertex(k), &v = F.vertex(k + 1);
      if (integer_length(u, v) != integer_length(p, q)) continue;
      for (const auto& [s, t] : {std::pair<const Vec3*, const Vec3*>{&u, &v}, {&v, &u}}) {
        auto w = unit_word_to(fd, p, *s);
        if (w && detail::WordCache{fd.basis.x(), fd.basis.y(), {}}.get(*w) * q == *t) return EdgeLocation{f, k, *w};
      }
    }
  }
  return std::nullopt;
}

struct FaceLocation {
  std::size_t face;
  UnitWord word;  // X^i Y^j maps the given points onto the face's vertices
};

/// Finds a domain face whose vertex set is a unit image of the given points.
inline std::optional<FaceLocation> locate_face(const FundamentalDomain& fd, const std::vector<Vec3>& pts) {
  if (pts.empty()) return std::nullopt;
  for (std::size_t f = 0; f < fd.faces.size(); ++f) {
    const auto& F = fd.faces[f];
    if (F.size() != pts.size()) continue;
    for (const auto& v : F.polygon.vertices) {
      auto w = unit_word_to(fd, pts[0], v);
      if (!w) continue;
      Mat3Z u = detail::WordCache{fd.basis.x(), fd.basis.y(), {}}.get(*w);
      bool all = std::all_of(pts.begin(), pts.end(), [&](const Vec3& p) {
        Vec3 q = u * p;
        return std::find(F.polygon.vertices.begin(), F.polygon.vertices.end(), q) != F.polygon.vertices.end();
      });
      if (all) return FaceLocation{f, *w};
    }
  }
  return std::nullopt;
}

/// Whether p is a vertex of the sail: some unit image of p is a domain vertex.
inline bool is_sail_vertex(const FundamentalDomain& fd, const Vec3& p) {
  for (const auto& F : fd.faces)
    for (const auto& v : F.polygon.vertices)
      if (unit_word_to(fd, p, v)) return true;
  return false;
}

}  // namespace cfsail
