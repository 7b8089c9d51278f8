#pragma once

// Exact arithmetic for 3x3 unimodular integer operators: characteristic
// polynomials, real root isolation by Sturm sequences, left eigenforms with
// coefficients in Z[lambda], and certified sign evaluation at real roots.

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cfsail/errors.hpp"
#include "cfsail/numeric.hpp"

namespace cfsail {

// ---------------------------------------------------------------------------
// Integer polynomials (coefficients low to high degree)

struct IntPoly {
  std::vector<BigInt> c;

  IntPoly() = default;
  IntPoly(std::initializer_list<BigInt> init) : c(init) { trim(); }
  explicit IntPoly(std::vector<BigInt> v) : c(std::move(v)) { trim(); }

  void trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
  }
  bool is_zero() const { return c.empty(); }
  int degree() const { return static_cast<int>(c.size()) - 1; }
  BigInt coeff(std::size_t i) const { return i < c.size() ? c[i] : BigInt(0); }

  friend bool operator==(const IntPoly& a, const IntPoly& b) { return a.c == b.c; }

  friend IntPoly operator+(const IntPoly& a, const IntPoly& b) {
    std::vector<BigInt> r(std::max(a.c.size(), b.c.size()));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.coeff(i) + b.coeff(i);
    return IntPoly(std::move(r));
  }
  friend IntPoly operator-(const IntPoly& a, const IntPoly& b) {
    std::vector<BigInt> r(std::max(a.c.size(), b.c.size()));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.coeff(i) - b.coeff(i);
    return IntPoly(std::move(r));
  }
  friend IntPoly operator*(const IntPoly& a, const IntPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<BigInt> r(a.c.size() + b.c.size() - 1);
    for (std::size_t i = 0; i < a.c.size(); ++i)
      for (std::size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
    return IntPoly(std::move(r));
  }
  friend IntPoly operator*(const BigInt& k, const IntPoly& a) {
    std::vector<BigInt> r(a.c);
    for (auto& x : r) x *= k;
    return IntPoly(std::move(r));
  }

  template <class S>
  S eval(const S& x) const {
    S r = 0;
    for (std::size_t i = c.size(); i-- > 0;) r = r * x + S(c[i]);
    return r;
  }
  long double eval_ld(long double x) const {
    long double r = 0;
    for (std::size_t i = c.size(); i-- > 0;) r = r * x + to_ld(c[i]);
    return r;
  }

  std::string str(const std::string& var = "x") const;
};

inline std::string IntPoly::str(const std::string& var) const {
  if (is_zero()) return "0";
  std::string s;
  for (std::size_t i = c.size(); i-- > 0;) {
    if (c[i] == 0) continue;
    BigInt a = abs(c[i]);
    if (s.empty()) {
      if (c[i] < 0) s += "-";
    } else {
      s += (c[i] < 0) ? " - " : " + ";
    }
    if (i == 0 || a != 1) s += a.str();
    if (i >= 1) s += var;
    if (i >= 2) s += "^" + std::to_string(i);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Integer operators

/// A 3x3 integer matrix with determinant +1 or -1.
class IntegerOperator3 {
 public:
  explicit IntegerOperator3(Mat3Z m) : m_(std::move(m)) {
    BigInt d = m_.det();
    if (d != 1 && d != -1) throw Error(ErrorKind::InvalidOperator, "determinant " + d.str() + " is not +-1");
    det_ = static_cast<int>(d);
  }

  static IntegerOperator3 identity() { return IntegerOperator3(Mat3Z::identity()); }

  const Mat3Z& matrix() const { return m_; }
  int det() const { return det_; }
  const BigInt& operator()(int i, int j) const { return m_.a[i][j]; }

  IntegerOperator3 inverse() const { return IntegerOperator3(BigInt(det_) * m_.adjugate()); }
  IntegerOperator3 negated() const { return IntegerOperator3(-m_); }

  IntegerOperator3 pow(long long k) const {
    Mat3Z base = k < 0 ? inverse().m_ : m_;
    unsigned long long e = k < 0 ? static_cast<unsigned long long>(-k) : static_cast<unsigned long long>(k);
    Mat3Z r = Mat3Z::identity();
    while (e) {
      if (e & 1) r = r * base;
      base = base * base;
      e >>= 1;
    }
    return IntegerOperator3(std::move(r));
  }

  Vec3 apply(const Vec3& v) const { return m_ * v; }
  Vec3 operator()(const Vec3& v) const { return m_ * v; }

  bool commutes_with(const IntegerOperator3& o) const { return m_ * o.m_ == o.m_ * m_; }

  friend IntegerOperator3 operator*(const IntegerOperator3& a, const IntegerOperator3& b) {
    return IntegerOperator3(a.m_ * b.m_);
  }
  friend bool operator==(const IntegerOperator3& a, const IntegerOperator3& b) { return a.m_ == b.m_; }
  friend bool operator!=(const IntegerOperator3& a, const IntegerOperator3& b) { return !(a == b); }

 private:
  Mat3Z m_;
  int det_ = 1;
};

/// The companion-form operator with rows (0,1,0), (0,0,1), (1,-m,-n).
inline IntegerOperator3 frobenius(const BigInt& m, const BigInt& n) {
  Mat3Z a = Mat3Z::zero();
  a[0][1] = 1;
  a[1][2] = 1;
  a[2][0] = 1;
  a[2][1] = -m;
  a[2][2] = -n;
  return IntegerOperator3(std::move(a));
}

// ---------------------------------------------------------------------------
// Cubic polynomials

/// Monic cubic x^3 + c2 x^2 + c1 x + c0.
struct CubicPoly {
  BigInt c2, c1, c0;

  friend bool operator==(const CubicPoly& a, const CubicPoly& b) {
    return a.c2 == b.c2 && a.c1 == b.c1 && a.c0 == b.c0;
  }

  template <class S>
  S eval(const S& x) const {
    return ((x + S(c2)) * x + S(c1)) * x + S(c0);
  }

  IntPoly as_poly() const { return IntPoly({c0, c1, c2, BigInt(1)}); }

  /// 18bcd - 4b^3 d + b^2 c^2 - 4c^3 - 27d^2 for x^3 + b x^2 + c x + d.
  BigInt discriminant() const {
    const BigInt &b = c2, &c = c1, &d = c0;
    return 18 * b * c * d - 4 * b * b * b * d + b * b * c * c - 4 * c * c * c - 27 * d * d;
  }

  std::string str() const { return as_poly().str(); }
};

/// det(x I - M) as a monic cubic.
inline CubicPoly char_poly(const Mat3Z& m) {
  BigInt minors = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) + (m[0][0] * m[2][2] - m[0][2] * m[2][0]) +
                  (m[1][1] * m[2][2] - m[1][2] * m[2][1]);
  return {-m.trace(), minors, -m.det()};
}
inline CubicPoly char_poly(const IntegerOperator3& m) { return char_poly(m.matrix()); }

/// Integer roots of a monic cubic (every rational root of a monic integer
/// polynomial is an integer dividing the constant term).
inline std::vector<BigInt> integer_roots(const CubicPoly& p) {
  std::vector<BigInt> roots;
  auto test = [&](const BigInt& r) {
    if (p.eval(r) == 0 && std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
  };
  if (p.c0 == 0) {
    test(BigInt(0));
    // remaining roots are roots of x^2 + c2 x + c1
    CubicPoly q{BigInt(0), p.c2, p.c1};  // x * (x^2 + c2 x + c1)
    BigInt c = abs(p.c1);
    if (c == 0) {
      test(-p.c2);
    } else {
      for (BigInt d = 1; d * d <= c; ++d) {
        if (c % d != 0) continue;
        for (const BigInt& e : {d, BigInt(c / d)}) {
          test(e);
          test(BigInt(-e));
        }
      }
    }
    (void)q;
  } else {
    BigInt c = abs(p.c0);
    for (BigInt d = 1; d * d <= c; ++d) {
      if (c % d != 0) continue;
      for (const BigInt& e : {d, BigInt(c / d)}) {
        test(e);
        test(BigInt(-e));
      }
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

/// A cubic is irreducible over Q iff it has no rational root.
inline bool is_irreducible(const CubicPoly& p) { return integer_roots(p).empty(); }

/// n^2 m^2 - 4 m^3 + 4 n^3 - 18 m n - 27, the discriminant of char_poly(frobenius(m, n)).
inline BigInt discriminant_frobenius(const BigInt& m, const BigInt& n) {
  return n * n * m * m - 4 * m * m * m + 4 * n * n * n - 18 * m * n - 27;
}

/// Signed squarefree part of a nonzero integer.
inline BigInt squarefree_core(const BigInt& x) {
  if (x == 0) return 0;
  BigInt a = abs(x), core = 1;
  for (BigInt p = 2; p * p <= a; ++p) {
    int e = 0;
    while (a % p == 0) {
      a /= p;
      ++e;
    }
    if (e % 2) core *= p;
  }
  core *= a;
  return x.sign() < 0 ? BigInt(-core) : core;
}

// ---------------------------------------------------------------------------
// Sturm sequences over Q

namespace detail {

using RatPoly = std::vector<Rational>;

inline void trim(RatPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline RatPoly to_rat(const IntPoly& p) {
  RatPoly r;
  for (const auto& x : p.c) r.emplace_back(x);
  return r;
}

inline RatPoly derivative(const RatPoly& p) {
  RatPoly r;
  for (std::size_t i = 1; i < p.size(); ++i) r.push_back(p[i] * Rational(static_cast<long long>(i)));
  trim(r);
  return r;
}

inline RatPoly rem(RatPoly a, const RatPoly& b) {
  trim(a);
  while (a.size() >= b.size() && !a.empty()) {
    Rational f = a.back() / b.back();
    std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
    a.pop_back();
    trim(a);
  }
  return a;
}

inline RatPoly gcd(RatPoly a, RatPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    RatPoly r = rem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    Rational lead = a.back();
    for (auto& x : a) x /= lead;
  }
  return a;
}

inline int sign_eval(const RatPoly& p, const Rational& x) {
  Rational r = 0;
  for (std::size_t i = p.size(); i-- > 0;) r = r * x + p[i];
  return r.sign();
}

inline std::vector<RatPoly> sturm_chain(const RatPoly& p) {
  std::vector<RatPoly> chain{p, derivative(p)};
  while (!chain.back().empty()) {
    RatPoly r = rem(chain[chain.size() - 2], chain.back());
    for (auto& x : r) x = -x;
    if (r.empty()) break;
    chain.push_back(std::move(r));
  }
  if (chain.back().empty()) chain.pop_back();
  return chain;
}

inline int sign_changes(const std::vector<RatPoly>& chain, const Rational& x) {
  int changes = 0, last = 0;
  for (const auto& q : chain) {
    int s = sign_eval(q, x);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

/// Number of distinct roots of p in the half-open interval (a, b].
inline int count_roots(const std::vector<RatPoly>& chain, const Rational& a, const Rational& b) {
  return sign_changes(chain, a) - sign_changes(chain, b);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Root intervals

/// An open rational interval (lo, hi) holding exactly one real root of a
/// squarefree cubic, or a degenerate interval lo == hi at an exact rational
/// root. Refinement returns a new value; instances are never shared mutably.
class RealRootInterval {
 public:
  RealRootInterval(CubicPoly p, Rational lo, Rational hi) : p_(std::move(p)), lo_(std::move(lo)), hi_(std::move(hi)) {
    sign_lo_ = p_.eval(lo_).sign();
  }

  const CubicPoly& poly() const { return p_; }
  const Rational& lo() const { return lo_; }
  const Rational& hi() const { return hi_; }
  bool exact() const { return lo_ == hi_; }
  Rational width() const { return hi_ - lo_; }
  long double approx() const { return to_ld(Rational((lo_ + hi_) / 2)); }

  /// One bisection step in place.
  void bisect() {
    if (exact()) return;
    Rational mid = (lo_ + hi_) / 2;
    int s = p_.eval(mid).sign();
    if (s == 0) {
      lo_ = hi_ = mid;
    } else if (s == sign_lo_) {
      lo_ = std::move(mid);
    } else {
      hi_ = std::move(mid);
    }
  }

  RealRootInterval refined(int steps = 1) const {
    RealRootInterval r = *this;
    for (int i = 0; i < steps && !r.exact(); ++i) r.bisect();
    return r;
  }

  /// Refined until the width is at most 2^-bits.
  RealRootInterval refined_to_bits(int bits) const {
    RealRootInterval r = *this;
    Rational eps(BigInt(1), BigInt(BigInt(1) << bits));
    while (!r.exact() && r.width() > eps) r.bisect();
    return r;
  }

 private:
  CubicPoly p_;
  Rational lo_, hi_;
  int sign_lo_ = 0;
};

/// Isolating intervals for the distinct real roots of a squarefree cubic,
/// in increasing order.
inline std::vector<RealRootInterval> isolate_real_roots(const CubicPoly& p) {
  using namespace detail;
  RatPoly rp = to_rat(p.as_poly());
  auto chain = sturm_chain(rp);
  if (chain.back().size() > 1) throw Error(ErrorKind::NonSquarefree, "polynomial " + p.str() + " has a repeated root");

  BigInt bound = 1 + std::max({abs(p.c2), abs(p.c1), abs(p.c0)});
  std::vector<RealRootInterval> out;
  std::vector<std::pair<Rational, Rational>> stack{{Rational(-bound), Rational(bound)}};
  while (!stack.empty()) {
    auto [a, b] = stack.back();
    stack.pop_back();
    int n = count_roots(chain, a, b);
    if (n == 0) continue;
    if (n == 1) {
      out.emplace_back(p, a, b);
      continue;
    }
    // split at a point that is not a root
    Rational mid = (a + b) / 2;
    for (int k = 3; p.eval(mid) == 0; ++k) mid = a + (b - a) / k;
    stack.emplace_back(mid, b);
    stack.emplace_back(a, mid);
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.lo() < y.lo(); });
  return out;
}

/// Number of distinct real roots of any monic cubic.
inline int count_distinct_real_roots(const CubicPoly& p) {
  using namespace detail;
  RatPoly rp = to_rat(p.as_poly());
  RatPoly g = detail::gcd(rp, derivative(rp));
  RatPoly sq = rp;
  if (g.size() > 1) {
    // divide out the repeated factor
    RatPoly q(rp.size() - g.size() + 1);
    RatPoly r = rp;
    for (std::size_t i = q.size(); i-- > 0;) {
      q[i] = r[i + g.size() - 1] / g.back();
      for (std::size_t j = 0; j < g.size(); ++j) r[i + j] -= q[i] * g[j];
    }
    sq = q;
  }
  auto chain = sturm_chain(sq);
  BigInt bound = 2 + std::max({abs(p.c2), abs(p.c1), abs(p.c0)});
  return count_roots(chain, Rational(-bound), Rational(bound));
}

// ---------------------------------------------------------------------------
// Arithmetic in Z[lambda] / (chi)

/// Remainder of q modulo a monic cubic; degree of the result is at most 2.
inline IntPoly reduce_mod(const IntPoly& q, const CubicPoly& chi) {
  std::vector<BigInt> c = q.c;
  const BigInt lower[3] = {chi.c0, chi.c1, chi.c2};
  for (std::size_t d = c.size(); d-- > 3;) {
    BigInt f = c[d];
    if (f == 0) continue;
    c[d] = 0;
    for (int i = 0; i < 3; ++i) c[d - 3 + i] -= f * lower[i];
  }
  return IntPoly(std::move(c));
}

/// Exact sign of q(lambda) where lambda is the root isolated by `root`.
/// Bisects at most 64 times before running an exact zero test, then keeps
/// bisecting; for irreducible chi a nonzero remainder cannot vanish at lambda.
inline int sign_at_root(const IntPoly& q_in, const RealRootInterval& root) {
  IntPoly q = reduce_mod(q_in, root.poly());
  if (q.is_zero()) return 0;
  if (root.exact()) return q.eval(root.lo()).sign();

  auto range_sign = [&](const RealRootInterval& r) -> int {
    Rational lo = q.eval(r.lo()), hi = q.eval(r.hi());
    Rational mn = std::min(lo, hi), mx = std::max(lo, hi);
    if (q.degree() == 2) {
      Rational v = make_rational(BigInt(-q.c[1]), BigInt(2 * q.c[2]));
      if (v > r.lo() && v < r.hi()) {
        Rational qv = q.eval(v);
        mn = std::min(mn, qv);
        mx = std::max(mx, qv);
      }
    }
    if (mn > 0) return 1;
    if (mx < 0) return -1;
    return 0;
  };

  RealRootInterval r = root;
  for (int step = 0; step < 64; ++step) {
    if (int s = range_sign(r)) return s;
    r.bisect();
    if (r.exact()) return q.eval(r.lo()).sign();
  }
  // exact zero test: does gcd(q, chi) vanish at this root?
  {
    using namespace detail;
    RatPoly g = detail::gcd(to_rat(q), to_rat(root.poly().as_poly()));
    if (g.size() > 1) {
      auto chain = sturm_chain(g);
      int s_lo = sign_eval(g, r.lo()), s_hi = sign_eval(g, r.hi());
      if (s_lo == 0 || s_hi == 0 || count_roots(chain, r.lo(), r.hi()) > 0) return 0;
    }
  }
  for (;;) {
    if (int s = range_sign(r)) return s;
    r.bisect();
    if (r.exact()) return q.eval(r.lo()).sign();
  }
}

// ---------------------------------------------------------------------------
// Eigenforms

namespace detail {

/// Entries of adj(M - lambda I) as integer polynomials in lambda.
inline std::array<std::array<IntPoly, 3>, 3> adjugate_shifted(const Mat3Z& m) {
  std::array<std::array<IntPoly, 3>, 3> b;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) b[i][j] = (i == j) ? IntPoly({m[i][j], BigInt(-1)}) : IntPoly({m[i][j]});
  std::array<std::array<IntPoly, 3>, 3> adj;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      adj[i][j] = b[r0][c0] * b[r1][c1] - b[r0][c1] * b[r1][c0];
    }
  }
  return adj;
}

inline void normalize_content(std::array<IntPoly, 3>& v) {
  BigInt g = 0;
  for (const auto& p : v)
    for (const auto& x : p.c) g = gcd(g, x);
  if (g == 0) return;
  int s = 0;
  for (const auto& p : v) {
    for (const auto& x : p.c) {
      if (x != 0) {
        s = x.sign();
        break;
      }
    }
    if (s) break;
  }
  BigInt d = s < 0 ? BigInt(-g) : g;
  for (auto& p : v)
    for (auto& x : p.c) x /= d;
}

}  // namespace detail

/// A left eigencovector of an operator: row(lambda) . M = lambda * row(lambda),
/// with entries in Z[lambda] of degree <= 2 and coprime integer coefficients.
struct EigenForm {
  std::array<IntPoly, 3> coeffs;
  RealRootInterval root;

  /// form(v) as an element of Z[lambda].
  IntPoly apply(const Vec3& v) const {
    return v[0] * coeffs[0] + v[1] * coeffs[1] + v[2] * coeffs[2];
  }
  long double approx(const Vec3& v) const {
    long double l = root.approx();
    return to_ld(v[0]) * coeffs[0].eval_ld(l) + to_ld(v[1]) * coeffs[1].eval_ld(l) +
           to_ld(v[2]) * coeffs[2].eval_ld(l);
  }
  std::array<long double, 3> approx_coeffs() const {
    long double l = root.approx();
    return {coeffs[0].eval_ld(l), coeffs[1].eval_ld(l), coeffs[2].eval_ld(l)};
  }
};

/// A right eigenvector with entries in Z[lambda].
struct EigenVector {
  std::array<IntPoly, 3> coeffs;
  RealRootInterval root;
};

inline void require_cubic_totally_real(const CubicPoly& chi) {
  if (!is_irreducible(chi)) throw Error(ErrorKind::Reducible, "characteristic polynomial " + chi.str() + " is reducible");
  if (chi.discriminant() <= 0)
    throw Error(ErrorKind::NotTotallyReal, "characteristic polynomial " + chi.str() + " has complex roots");
}

/// Roots refined far enough that typical sign queries resolve immediately.
inline std::vector<RealRootInterval> refined_roots(const CubicPoly& chi) {
  auto roots = isolate_real_roots(chi);
  for (auto& r : roots) r = r.refined_to_bits(96);
  return roots;
}

/// One left eigenform per real root (ascending), from rows of adj(M - lambda I).
inline std::vector<EigenForm> eigen_forms(const Mat3Z& m) {
  CubicPoly chi = char_poly(m);
  require_cubic_totally_real(chi);
  auto adj = detail::adjugate_shifted(m);
  std::vector<EigenForm> out;
  for (auto& root : refined_roots(chi)) {
    for (int i = 0; i < 3; ++i) {
      std::array<IntPoly, 3> row{reduce_mod(adj[i][0], chi), reduce_mod(adj[i][1], chi), reduce_mod(adj[i][2], chi)};
      if (row[0].is_zero() && row[1].is_zero() && row[2].is_zero()) continue;
      detail::normalize_content(row);
      out.push_back(EigenForm{row, root});
      break;
    }
  }
  return out;
}
inline std::vector<EigenForm> eigen_forms(const IntegerOperator3& m) { return eigen_forms(m.matrix()); }

/// One right eigenvector per real root (ascending), from columns of adj(M - lambda I).
inline std::vector<EigenVector> eigen_vectors(const Mat3Z& m) {
  CubicPoly chi = char_poly(m);
  require_cubic_totally_real(chi);
  auto adj = detail::adjugate_shifted(m);
  std::vector<EigenVector> out;
  for (auto& root : refined_roots(chi)) {
    for (int j = 0; j < 3; ++j) {
      std::array<IntPoly, 3> col{reduce_mod(adj[0][j], chi), reduce_mod(adj[1][j], chi), reduce_mod(adj[2][j], chi)};
      if (col[0].is_zero() && col[1].is_zero() && col[2].is_zero()) continue;
      detail::normalize_content(col);
      out.push_back(EigenVector{col, root});
      break;
    }
  }
  return out;
}

/// Symbolic check that row . M - lambda * row vanishes modulo chi.
inline bool is_left_eigenform(const EigenForm& f, const Mat3Z& m) {
  const CubicPoly& chi = f.root.poly();
  IntPoly lambda({BigInt(0), BigInt(1)});
  for (int j = 0; j < 3; ++j) {
    IntPoly s = m[0][j] * f.coeffs[0] + m[1][j] * f.coeffs[1] + m[2][j] * f.coeffs[2] - lambda * f.coeffs[j];
    if (!reduce_mod(s, chi).is_zero()) return false;
  }
  return true;
}

/// Exact sign of form(v).
inline int sign_at(const EigenForm& form, const Vec3& v) {
  if (v.is_zero()) return 0;
  return sign_at_root(form.apply(v), form.root);
}

/// Exact sign of u . vec(lambda).
inline int sign_at(const Vec3& u, const EigenVector& vec) {
  IntPoly q = u[0] * vec.coeffs[0] + u[1] * vec.coeffs[1] + u[2] * vec.coeffs[2];
  return sign_at_root(q, vec.root);
}

}  // namespace cfsail
