#pragma once

// Quotient of a fundamental domain to a cell complex on the torus, with
// lattice invariants and a canonical code.

#include <algorithm>
#include <array>
#include <deque>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cfsail/errors.hpp"
#include "cfsail/lattice.hpp"
#include "cfsail/numeric.hpp"
#include "cfsail/sail.hpp"

namespace cfsail {

/// Lattice-affine normal form of a convex lattice polygon.
struct AffineFaceType {
  std::vector<std::pair<BigInt, BigInt>> vertices;  // normalized 2D cycle
  BigInt area;                                      // integer area
  BigInt boundary_points;
  BigInt interior_points;

  std::string code() const {
    std::ostringstream os;
    for (const auto& [x, y] : vertices) os << "(" << x << "," << y << ")";
    return os.str();
  }
  friend bool operator==(const AffineFaceType& a, const AffineFaceType& b) { return a.vertices == b.vertices; }
};

namespace detail {

using P2 = std::pair<BigInt, BigInt>;

/// Normal form of a counterclockwise or clockwise 2D cycle: start vertex at
/// the origin, first edge along the positive x-axis, the next vertex above
/// the axis with 0 <= x < y. Lexicographic minimum over starts and directions.
inline std::vector<P2> polygon_normal_form(const std::vector<P2>& c) {
  std::size_t n = c.size();
  std::vector<P2> best;
  for (int dir = -1; dir <= 1; dir += 2)
    for (std::size_t s = 0; s < n; ++s) {
      auto at = [&](std::size_t k) {
        std::size_t idx = dir > 0 ? (s + k) % n : (s + n - k % n) % n;
        return P2{c[idx].first - c[s].first, c[idx].second - c[s].second};
      };
      P2 e = at(1);
      BigInt a, b;
      BigInt g = ext_gcd(e.first, e.second, a, b);
      BigInt pa = e.first / g, pb = e.second / g;
      // rows (a, b) and (-pb, pa) send e to (g, 0)
      auto map = [&](const P2& v) {
        return P2{a * v.first + b * v.second, -pb * v.first + pa * v.second};
      };
      std::vector<P2> w;
      for (std::size_t k = 0; k < n; ++k) w.push_back(map(at(k)));
      if (n >= 3) {
        if (w[2].second < 0)
          for (auto& v : w) v.second = -v.second;
        BigInt y = w[2].second;
        BigInt t = -floor_div(w[2].first, y);  // x + t y lands in [0, y)
        for (auto& v : w) v.first += t * v.second;
      }
      if (best.empty() || w < best) best = std::move(w);
    }
  return best;
}

}  // namespace detail

inline AffineFaceType face_affine_type(const SailFace& face) {
  AffineFaceType t;
  PlaneFrame fr = plane_frame(face.vertex(0), face.polygon.normal);
  std::vector<detail::P2> c;
  for (const auto& v : face.polygon.vertices) c.push_back(fr.coords(v));
  t.vertices = detail::polygon_normal_form(c);
  t.area = face.area;
  t.boundary_points = 0;
  for (const auto& l : face.edge_lengths) t.boundary_points += l;
  // Pick: area = 2 I + B - 2 in integer-area units
  t.interior_points = (t.area - t.boundary_points + 2) / 2;
  return t;
}

/// Lattice points strictly inside a face polygon.
inline std::vector<Vec3> face_interior_points(const SailFace& face) {
  std::vector<Vec3> out;
  for (const auto& p : polygon_lattice_points(face.polygon)) {
    bool boundary = false;
    for (std::size_t k = 0; k < face.size() && !boundary; ++k)
      boundary = cross(face.vertex(k + 1) - face.vertex(k), p - face.vertex(k)).is_zero();
    if (!boundary) out.push_back(p);
  }
  return out;
}

using PlanePoint = std::array<double, 2>;

struct TorusSide {
  std::size_t edge;  // edge class
  BigInt length;
  std::size_t partner_face, partner_side;
};

struct TorusCorner {
  std::size_t vertex;  // vertex class
  Rational angle;      // integer angle between the two sides at the corner
};

struct TorusFace {
  BigInt area;
  BigInt distance;
  AffineFaceType type;
  std::vector<TorusSide> sides;      // side k runs from corner k to corner k+1
  std::vector<TorusCorner> corners;
  // drawing coordinates in the unit-lattice frame: X^i Y^j moves a point by (i, j)
  std::vector<PlanePoint> corner_xy;
  std::vector<PlanePoint> interior_xy;

  std::size_t degree() const { return sides.size(); }
};

struct TorusTriangulation {
  std::size_t num_vertices = 0, num_edges = 0;
  std::vector<TorusFace> faces;

  std::size_t num_faces() const { return faces.size(); }
  long long euler_characteristic() const {
    return static_cast<long long>(num_vertices) - static_cast<long long>(num_edges) +
           static_cast<long long>(faces.size());
  }
};

inline TorusTriangulation quotient(const FundamentalDomain& fd) {
  if (!verify_face_identifications(fd).ok())
    throw Error(ErrorKind::InconsistentGluing, "side identifications do not match");
  if (fd.num_vertex_classes() < 1) throw Error(ErrorKind::InconsistentGluing, "no vertex classes");
  TorusTriangulation t;
  t.num_vertices = fd.num_vertex_classes();
  t.num_edges = fd.num_edge_classes;
  auto frame = detail::make_log_frame(fd.spectral, fd.orthant, fd.basis);
  auto origin = frame.position(fd.seed_vertex);
  auto xy = [&](const Vec3& v) {
    auto [x, y] = frame.offset(origin, frame.position(v));
    return PlanePoint{static_cast<double>(x), static_cast<double>(y)};
  };
  for (std::size_t f = 0; f < fd.faces.size(); ++f) {
    const auto& F = fd.faces[f];
    TorusFace tf;
    tf.area = F.area;
    tf.distance = F.distance;
    tf.type = face_affine_type(F);
    std::size_t n = F.size();
    for (std::size_t k = 0; k < n; ++k) {
      const auto& l = fd.links[f][k];
      tf.sides.push_back({fd.edge_class[f][k], F.edge_lengths[k], l.partner_face, l.partner_side});
      const Vec3& v = F.vertex(k);
      tf.corners.push_back({fd.vertex_class[f][k], integer_angle(F.vertex(k + n - 1) - v, F.vertex(k + 1) - v)});
      tf.corner_xy.push_back(xy(v));
    }
    for (const auto& p : face_interior_points(F)) tf.interior_xy.push_back(xy(p));
    t.faces.push_back(std::move(tf));
  }
  if (t.euler_characteristic() != 0) throw Error(ErrorKind::InconsistentGluing, "Euler characteristic is not zero");
  return t;
}

enum class CodeMode { Full, Surface };

struct CanonicalCode {
  std::string text;
  friend bool operator==(const CanonicalCode& a, const CanonicalCode& b) { return a.text == b.text; }
  friend bool operator!=(const CanonicalCode& a, const CanonicalCode& b) { return a.text != b.text; }
};

namespace detail {

/// Breadth-first encoding from face f, side s, walking sides in direction dir.
inline std::string encode_from(const TorusTriangulation& t, std::size_t f0, std::size_t s0, int dir, CodeMode mode) {
  std::size_t nf = t.faces.size();
  std::vector<long long> label(nf, -1);
  std::vector<std::size_t> start(nf, 0);
  std::deque<std::size_t> queue;
  label[f0] = 0;
  start[f0] = s0;
  queue.push_back(f0);
  long long next = 1;
  std::ostringstream os;
  auto offset = [&](std::size_t face, std::size_t side) {
    long long d = static_cast<long long>(t.faces[face].degree());
    long long o = (static_cast<long long>(side) - static_cast<long long>(start[face])) * dir;
    return ((o % d) + d) % d;
  };
  while (!queue.empty()) {
    std::size_t f = queue.front();
    queue.pop_front();
    const auto& F = t.faces[f];
    std::size_t n = F.degree();
    os << "[" << n << ";" << F.area;
    if (mode == CodeMode::Full) os << ";" << F.distance;
    os << ";" << F.type.code();
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t side = dir > 0 ? (start[f] + k) % n : (start[f] + n - k) % n;
      std::size_t corner = dir > 0 ? side : (side + 1) % n;  // where the walked side begins
      const auto& S = F.sides[side];
      if (label[S.partner_face] < 0) {
        label[S.partner_face] = next++;
        start[S.partner_face] = S.partner_side;
        queue.push_back(S.partner_face);
      }
      os << "|" << S.length << "," << F.corners[corner].angle << "," << label[S.partner_face] << ","
         << offset(S.partner_face, S.partner_side);
    }
    os << "]";
  }
  return os.str();
}

}  // namespace detail

/// Minimum of the breadth-first encodings over all starting sides and both
/// walking directions.
inline CanonicalCode canonical_code(const TorusTriangulation& t, CodeMode mode = CodeMode::Full) {
  CanonicalCode best;
  bool have = false;
  for (std::size_t f = 0; f < t.faces.size(); ++f)
    for (std::size_t s = 0; s < t.faces[f].degree(); ++s)
      for (int dir = -1; dir <= 1; dir += 2) {
        std::string c = detail::encode_from(t, f, s, dir, mode);
        if (!have || c < best.text) {
          best.text = std::move(c);
          have = true;
        }
      }
  std::ostringstream head;
  head << "V" << t.num_vertices << "E" << t.num_edges << "F" << t.faces.size() << ":";
  best.text = head.str() + best.text;
  return best;
}

enum class Comparison { Equal, Distinct };

inline const char* to_string(Comparison c) { return c == Comparison::Equal ? "invariants agree" : "distinct"; }

/// Equal codes mean every computed invariant agrees; this is evidence for
/// equivalence of the continued fractions, not a proof.
inline Comparison compare(const TorusTriangulation& a, const TorusTriangulation& b, CodeMode mode = CodeMode::Full) {
  return canonical_code(a, mode) == canonical_code(b, mode) ? Comparison::Equal : Comparison::Distinct;
}

}  // namespace cfsail
