#pragma once

// Units commuting with a cubic operator: the alpha/beta determinant identity,
// total positivity, and a search for a basis of the totally positive units
// with certified logarithm bounds.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cfsail/errors.hpp"
#include "cfsail/exactnum.hpp"
#include "cfsail/numeric.hpp"

namespace cfsail {

/// det(alpha I + beta A_{m,n}^{-1}) = alpha^3 + alpha^2 beta m - alpha beta^2 n + beta^3.
inline BigInt alpha_beta_det(const BigInt& alpha, const BigInt& beta, const BigInt& m, const BigInt& n) {
  return alpha * alpha * alpha + alpha * alpha * beta * m - alpha * beta * beta * n + beta * beta * beta;
}

/// Whether some (m, n) makes alpha I + beta A_{m,n}^{-1} unimodular.
inline bool unit_pair_exists(const BigInt& alpha, const BigInt& beta) {
  if (alpha == 0 || beta == 0) throw Error(ErrorKind::InvalidInput, "alpha and beta must be nonzero");
  BigInt a3 = alpha * alpha * alpha, b3 = beta * beta * beta;
  bool minus = (a3 - 1) % beta == 0 && (b3 - 1) % alpha == 0;
  bool plus = (a3 + 1) % beta == 0 && (b3 + 1) % alpha == 0;
  return minus || plus;
}

/// All eigenvalues positive. Requires a characteristic polynomial with only
/// real roots; with real roots, positivity is equivalent to strictly
/// alternating coefficient signs.
inline bool is_totally_positive(const Mat3Z& u) {
  CubicPoly chi = char_poly(u);
  if (chi.discriminant() < 0) throw Error(ErrorKind::NotTotallyReal, "operator has complex eigenvalues");
  return chi.c2 < 0 && chi.c1 > 0 && chi.c0 < 0;
}
inline bool is_totally_positive(const IntegerOperator3& u) { return is_totally_positive(u.matrix()); }

struct UnitReport {
  bool commutes = false;
  bool unimodular = false;
  bool integral = true;
  bool totally_real = false;
  bool totally_positive = false;

  bool ok() const { return commutes && unimodular && integral && totally_positive; }
  std::string str() const {
    auto b = [](bool x) { return x ? "yes" : "no"; };
    return std::string("commutes=") + b(commutes) + " unimodular=" + b(unimodular) + " integral=" + b(integral) +
           " totally_positive=" + b(totally_positive);
  }
};

inline UnitReport verify_unit(const Mat3Z& u, const Mat3Z& a) {
  UnitReport r;
  r.commutes = u * a == a * u;
  BigInt d = u.det();
  r.unimodular = d == 1 || d == -1;
  CubicPoly chi = char_poly(u);
  r.totally_real = chi.discriminant() >= 0;
  r.totally_positive = r.totally_real && is_totally_positive(u);
  return r;
}
inline UnitReport verify_unit(const IntegerOperator3& u, const IntegerOperator3& a) {
  return verify_unit(u.matrix(), a.matrix());
}

// ---------------------------------------------------------------------------
// Spectral data

/// Numeric and exact eigen data of a cubic operator with three real roots.
struct SpectralData {
  Mat3Z a;
  std::vector<EigenForm> forms;      // left, ascending roots
  std::vector<EigenVector> vectors;  // right, same order
  std::array<long double, 3> lambda{};
  std::array<std::array<long double, 3>, 3> left{}, right{};
  std::array<long double, 3> pairing{};

  /// Eigenvalue of a commuting operator u on each eigenline.
  std::array<long double, 3> eigenvalues(const Mat3Z& u) const {
    std::array<long double, 3> mu{};
    long double ul[3][3];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) ul[i][j] = to_ld(u[i][j]);
    for (int k = 0; k < 3; ++k) {
      long double s = 0;
      for (int i = 0; i < 3; ++i) {
        long double t = 0;
        for (int j = 0; j < 3; ++j) t += ul[i][j] * right[k][j];
        s += left[k][i] * t;
      }
      mu[k] = s / pairing[k];
    }
    return mu;
  }

  std::array<long double, 3> logs(const Mat3Z& u) const {
    auto mu = eigenvalues(u);
    return {std::log(std::fabs(mu[0])), std::log(std::fabs(mu[1])), std::log(std::fabs(mu[2]))};
  }

  /// Exact signs of the eigenvalues of a commuting operator.
  std::array<int, 3> eigen_signs(const Mat3Z& u) const {
    std::array<int, 3> s{};
    for (int k = 0; k < 3; ++k) {
      const auto& v = vectors[k];
      for (int j = 0; j < 3; ++j) {
        int sv = sign_at_root(v.coeffs[j], v.root);
        if (sv == 0) continue;
        IntPoly uv = u[j][0] * v.coeffs[0] + u[j][1] * v.coeffs[1] + u[j][2] * v.coeffs[2];
        s[k] = sign_at_root(uv, v.root) * sv;
        break;
      }
    }
    return s;
  }

  /// Rational enclosure of the eigenvalue of u on eigenline k.
  std::pair<Rational, Rational> eigenvalue_bounds(const Mat3Z& u, int k) const;
};

namespace detail {

/// Range of a polynomial of degree <= 2 on [lo, hi].
inline std::pair<Rational, Rational> quad_range(const IntPoly& q, const Rational& lo, const Rational& hi) {
  Rational a = q.eval(lo), b = q.eval(hi);
  Rational mn = std::min(a, b), mx = std::max(a, b);
  if (q.degree() == 2) {
    Rational v = make_rational(BigInt(-q.c[1]), BigInt(2 * q.c[2]));
    if (v > lo && v < hi) {
      Rational qv = q.eval(v);
      mn = std::min(mn, qv);
      mx = std::max(mx, qv);
    }
  }
  return {mn, mx};
}

}  // namespace detail

inline std::pair<Rational, Rational> SpectralData::eigenvalue_bounds(const Mat3Z& u, int k) const {
  const auto& v = vectors[k];
  for (int j = 0; j < 3; ++j) {
    IntPoly den = reduce_mod(v.coeffs[j], v.root.poly());
    if (den.is_zero()) continue;
    IntPoly num = reduce_mod(u[j][0] * v.coeffs[0] + u[j][1] * v.coeffs[1] + u[j][2] * v.coeffs[2], v.root.poly());
    // refine until the denominator range excludes zero
    RealRootInterval r = v.root;
    for (;;) {
      auto [dl, dh] = detail::quad_range(den, r.lo(), r.hi());
      if (dl > 0 || dh < 0) {
        auto [nl, nh] = detail::quad_range(num, r.lo(), r.hi());
        Rational c[4] = {nl / dl, nl / dh, nh / dl, nh / dh};
        return {*std::min_element(c, c + 4), *std::max_element(c, c + 4)};
      }
      r.bisect();
    }
  }
  throw Error(ErrorKind::Dependent, "zero eigenvector");
}

inline SpectralData spectral_data(const Mat3Z& a) {
  SpectralData s;
  s.a = a;
  s.forms = eigen_forms(a);
  s.vectors = eigen_vectors(a);
  for (int k = 0; k < 3; ++k) {
    s.lambda[k] = s.forms[k].root.approx();
    s.left[k] = s.forms[k].approx_coeffs();
    long double l = s.vectors[k].root.approx();
    for (int j = 0; j < 3; ++j) s.right[k][j] = s.vectors[k].coeffs[j].eval_ld(l);
    s.pairing[k] = s.left[k][0] * s.right[k][0] + s.left[k][1] * s.right[k][1] + s.left[k][2] * s.right[k][2];
  }
  return s;
}

// ---------------------------------------------------------------------------
// Integer linear algebra

namespace detail {

using IntMatrix = std::vector<std::vector<BigInt>>;

/// Basis of the integer kernel {x : M x = 0} via unimodular column reduction.
inline std::vector<std::vector<BigInt>> integer_kernel(IntMatrix m) {
  std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  IntMatrix u(cols, std::vector<BigInt>(cols));
  for (std::size_t i = 0; i < cols; ++i) u[i][i] = 1;
  auto colop = [&](std::size_t i, std::size_t j, const BigInt& s, const BigInt& t, const BigInt& p, const BigInt& q) {
    // (col_i, col_j) <- (s col_i + t col_j, p col_i + q col_j)
    for (auto* mat : {&m, &u}) {
      for (auto& row : *mat) {
        BigInt ci = row[i], cj = row[j];
        row[i] = s * ci + t * cj;
        row[j] = p * ci + q * cj;
      }
    }
  };
  std::size_t piv = 0;
  for (std::size_t r = 0; r < rows && piv < cols; ++r) {
    for (std::size_t j = piv + 1; j < cols; ++j) {
      if (m[r][j] == 0) continue;
      if (m[r][piv] == 0) {
        colop(piv, j, 0, 1, 1, 0);
        continue;
      }
      BigInt s, t;
      BigInt g = ext_gcd(m[r][piv], m[r][j], s, t);
      BigInt a = m[r][piv] / g, b = m[r][j] / g;
      colop(piv, j, s, t, -b, a);
    }
    if (m[r][piv] != 0) ++piv;
  }
  std::vector<std::vector<BigInt>> kernel;
  for (std::size_t j = piv; j < cols; ++j) {
    std::vector<BigInt> v(cols);
    for (std::size_t i = 0; i < cols; ++i) v[i] = u[i][j];
    kernel.push_back(std::move(v));
  }
  return kernel;
}

/// LLL reduction (delta = 3/4) of linearly independent integer vectors.
inline void lll_reduce(std::vector<std::vector<BigInt>>& b) {
  std::size_t n = b.size();
  if (n < 2) return;
  auto dotv = [](const std::vector<BigInt>& x, const std::vector<BigInt>& y) {
    BigInt s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
  };
  auto gso = [&](std::vector<std::vector<Rational>>& mu, std::vector<Rational>& bn) {
    std::vector<std::vector<Rational>> bs(n);
    mu.assign(n, std::vector<Rational>(n));
    bn.assign(n, Rational(0));
    for (std::size_t i = 0; i < n; ++i) {
      bs[i].assign(b[i].begin(), b[i].end());
      for (std::size_t j = 0; j < i; ++j) {
        Rational d = 0;
        for (std::size_t t = 0; t < b[i].size(); ++t) d += Rational(b[i][t]) * bs[j][t];
        mu[i][j] = d / bn[j];
        for (std::size_t t = 0; t < b[i].size(); ++t) bs[i][t] -= mu[i][j] * bs[j][t];
      }
      for (const auto& x : bs[i]) bn[i] += x * x;
    }
  };
  std::vector<std::vector<Rational>> mu;
  std::vector<Rational> bn;
  gso(mu, bn);
  std::size_t k = 1;
  int guard = 0;
  while (k < n && guard++ < 100000) {
    for (std::size_t j = k; j-- > 0;) {
      Rational m = mu[k][j];
      BigInt q = floor(Rational(m + Rational(1, 2)));
      if (q != 0) {
        for (std::size_t t = 0; t < b[k].size(); ++t) b[k][t] -= q * b[j][t];
        gso(mu, bn);
      }
    }
    if (bn[k] >= (Rational(3, 4) - mu[k][k - 1] * mu[k][k - 1]) * bn[k - 1]) {
      ++k;
    } else {
      std::swap(b[k], b[k - 1]);
      gso(mu, bn);
      k = std::max<std::size_t>(k - 1, 1);
    }
  }
  (void)dotv;
}

inline Mat3Z mat_from_flat(const std::vector<BigInt>& v) {
  Mat3Z m;
  for (int i = 0; i < 9; ++i) m[i / 3][i % 3] = v[i];
  return m;
}

inline Mat3Z inverse_unimodular(const Mat3Z& m) {
  BigInt d = m.det();
  return d * m.adjugate();  // d = +-1
}

inline Mat3Z mat_pow(const Mat3Z& m, const BigInt& k) {
  Mat3Z base = k < 0 ? inverse_unimodular(m) : m;
  BigInt e = abs(k);
  Mat3Z r = Mat3Z::identity();
  while (e > 0) {
    if ((e & 1) != 0) r = r * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return r;
}

}  // namespace detail

/// Integer basis of the centralizer {X in M_3(Z) : XA = AX}, LLL-reduced.
inline std::vector<Mat3Z> centralizer_basis(const Mat3Z& a) {
  detail::IntMatrix k(9, std::vector<BigInt>(9));
  for (int col = 0; col < 9; ++col) {
    Mat3Z e = Mat3Z::zero();
    e[col / 3][col % 3] = 1;
    Mat3Z c = e * a - a * e;
    for (int r = 0; r < 9; ++r) k[r][col] = c[r / 3][r % 3];
  }
  auto ker = detail::integer_kernel(k);
  detail::lll_reduce(ker);
  std::vector<Mat3Z> out;
  for (const auto& v : ker) out.push_back(detail::mat_from_flat(v));
  return out;
}

/// Rational (e0, e1, e2) with u = e0 I + e1 A^-1 + e2 A^-2, if u is such a polynomial.
inline std::optional<std::array<Rational, 3>> inverse_poly_expression(const Mat3Z& u, const Mat3Z& a) {
  Mat3Z ai = detail::inverse_unimodular(a);
  Mat3Z b[3] = {Mat3Z::identity(), ai, ai * ai};
  // pick three entries where the basis matrices are independent
  for (int p = 0; p < 9; ++p)
    for (int q = p + 1; q < 9; ++q)
      for (int r = q + 1; r < 9; ++r) {
        Mat3<Rational> m;
        int idx[3] = {p, q, r};
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) m[i][j] = Rational(b[j][idx[i] / 3][idx[i] % 3]);
        Rational d = m.det();
        if (d == 0) continue;
        Mat3<Rational> inv = m.adjugate();
        Point3<Rational> rhs{Rational(u[p / 3][p % 3]), Rational(u[q / 3][q % 3]), Rational(u[r / 3][r % 3])};
        Point3<Rational> e = inv * rhs;
        std::array<Rational, 3> ex{e[0] / d, e[1] / d, e[2] / d};
        for (int t = 0; t < 9; ++t) {
          Rational s = 0;
          for (int j = 0; j < 3; ++j) s += ex[j] * Rational(b[j][t / 3][t % 3]);
          if (s != Rational(u[t / 3][t % 3])) return std::nullopt;
        }
        return ex;
      }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Unit basis

struct UnitOperator {
  IntegerOperator3 matrix = IntegerOperator3::identity();
  std::array<Rational, 3> expression{};  // coefficients of I, A^-1, A^-2
  bool totally_positive = false;
};

struct LogBounds {
  std::array<long double, 3> lo{}, hi{};
};

struct UnitBasis {
  UnitOperator X, Y;
  std::array<long double, 3> log_x{}, log_y{};
  LogBounds log_x_bounds, log_y_bounds;
  bool independence_certified = false;
  std::size_t units_found = 0;       // det +-1 elements met by the search
  int budget = 0;
  std::vector<int> saturated_primes;  // primes p checked for p-th roots
  std::string maximality_note;

  Mat3Z x() const { return X.matrix.matrix(); }
  Mat3Z y() const { return Y.matrix.matrix(); }
};

struct UnitSearchOptions {
  int budget = 60;
  int max_norm = 12;                 // norms used for quotient units
  std::size_t max_per_norm = 300;
  std::vector<int> saturation_primes{2, 3, 5, 7};
};

namespace detail {

struct LogElem {
  Mat3Z m;
  std::array<long double, 3> l{};
};

inline long double norm2(const std::array<long double, 3>& l) { return l[0] * l[0] + l[1] * l[1] + l[2] * l[2]; }

inline long double det2(const std::array<long double, 3>& x, const std::array<long double, 3>& y) {
  return x[0] * y[1] - x[1] * y[0];
}

/// Real coordinates of l in the basis (b1, b2) using the first two log coordinates.
inline std::pair<long double, long double> solve2(const std::array<long double, 3>& b1,
                                                  const std::array<long double, 3>& b2,
                                                  const std::array<long double, 3>& l) {
  long double d = det2(b1, b2);
  return {(l[0] * b2[1] - l[1] * b2[0]) / d, (b1[0] * l[1] - b1[1] * l[0]) / d};
}

struct Gen {
  Mat3Z m;
  BigInt c0, c1;
};

/// Reduce generators of a rank-2 lattice (integer coordinates in a common
/// frame) to a basis with the same matrix operations applied to the group
/// elements; dependent leftovers must reduce to the identity.
inline std::pair<Mat3Z, Mat3Z> reduce_generators(std::vector<Gen> g) {
  auto sub = [](Gen& x, const Gen& y, const BigInt& q) {
    x.m = x.m * mat_pow(y.m, -q);
    x.c0 -= q * y.c0;
    x.c1 -= q * y.c1;
  };
  auto eliminate = [&](std::size_t start, bool first) -> std::size_t {
    auto coord = [&](const Gen& x) -> const BigInt& { return first ? x.c0 : x.c1; };
    for (;;) {
      std::size_t best = g.size();
      for (std::size_t i = start; i < g.size(); ++i)
        if (coord(g[i]) != 0 && (best == g.size() || abs(coord(g[i])) < abs(coord(g[best])))) best = i;
      if (best == g.size()) return g.size();
      bool done = true;
      for (std::size_t i = start; i < g.size(); ++i) {
        if (i == best || coord(g[i]) == 0) continue;
        BigInt q = coord(g[i]) / coord(g[best]);
        sub(g[i], g[best], q);
        if (coord(g[i]) != 0) done = false;
      }
      if (done) {
        std::swap(g[start], g[best]);
        return start;
      }
    }
  };
  if (eliminate(0, true) != 0) throw Error(ErrorKind::Dependent, "generators do not span rank 2");
  if (eliminate(1, false) != 1) throw Error(ErrorKind::Dependent, "generators do not span rank 2");
  for (std::size_t i = 2; i < g.size(); ++i)
    if (g[i].m != Mat3Z::identity())
      throw Error(ErrorKind::LimitExceeded, "logarithm precision insufficient for exact unit relations");
  return {g[0].m, g[1].m};
}

inline std::optional<long long> rational_denominator(long double x, long double y, int max_den, long double tol) {
  for (int d = 1; d <= max_den; ++d) {
    long double dx = d * x, dy = d * y;
    if (std::fabs(dx - std::round(dx)) < tol && std::fabs(dy - std::round(dy)) < tol) return d;
  }
  return std::nullopt;
}

/// Cubic form det(c0 B0 + c1 B1 + c2 B2) as coefficients indexed by exponent triples.
inline std::map<std::array<int, 3>, BigInt> det_cubic_form(const std::array<Mat3Z, 3>& b) {
  std::map<std::array<int, 3>, BigInt> coef;
  static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  static const int sgn[6] = {1, -1, -1, 1, 1, -1};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        BigInt t = 0;
        for (int p = 0; p < 6; ++p)
          t += sgn[p] * b[i][0][perms[p][0]] * b[j][1][perms[p][1]] * b[k][2][perms[p][2]];
        std::array<int, 3> e{0, 0, 0};
        ++e[i];
        ++e[j];
        ++e[k];
        coef[e] += t;
      }
  return coef;
}

struct SmallNormElement {
  std::array<long long, 3> c;
  int det;
};

/// All c in [-B, B]^3 (first nonzero coordinate positive) with
/// 0 < |det(sum c_i B_i)| <= max_norm.
inline std::vector<SmallNormElement> small_norm_combinations(const std::array<Mat3Z, 3>& b, int budget,
                                                             int max_norm) {
  auto form = det_cubic_form(b);
  // polynomial in c2 for fixed c0, c1: a3 c2^3 + a2 c2^2 + a1 c2 + a0
  BigInt maxc = 0;
  for (const auto& [e, v] : form) maxc = std::max(maxc, abs(v));
  std::vector<SmallNormElement> out;
  long long B = budget;
  const i128 N = max_norm;
  bool fast = bit_length(maxc) + 3 * bit_length(BigInt(B)) + 8 < 120;
  auto get = [&](int e0, int e1, int e2) {
    auto it = form.find({e0, e1, e2});
    return it == form.end() ? BigInt(0) : it->second;
  };
  if (fast) {
    i128 f[4][4][4] = {};
    for (const auto& [e, v] : form) f[e[0]][e[1]][e[2]] = to_i128(v);
    for (long long c0 = 0; c0 <= B; ++c0)
      for (long long c1 = (c0 == 0 ? 0 : -B); c1 <= B; ++c1) {
        i128 x = c0, y = c1;
        i128 a3 = f[0][0][3];
        i128 a2 = f[1][0][2] * x + f[0][1][2] * y;
        i128 a1 = f[2][0][1] * x * x + f[1][1][1] * x * y + f[0][2][1] * y * y;
        i128 a0 = f[3][0][0] * x * x * x + f[2][1][0] * x * x * y + f[1][2][0] * x * y * y + f[0][3][0] * y * y * y;
        long long lo = (c0 == 0 && c1 == 0) ? 1 : -B;
        for (long long c2 = lo; c2 <= B; ++c2) {
          i128 z = c2;
          i128 d = ((a3 * z + a2) * z + a1) * z + a0;
          if (d != 0 && d <= N && d >= -N) out.push_back({{c0, c1, c2}, static_cast<int>(d)});
        }
      }
  } else {
    BigInt f[4][4][4];
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) f[i][j][k] = (i + j + k == 3) ? get(i, j, k) : BigInt(0);
    for (long long c0 = 0; c0 <= B; ++c0)
      for (long long c1 = (c0 == 0 ? 0 : -B); c1 <= B; ++c1) {
        BigInt x = c0, y = c1;
        BigInt a3 = f[0][0][3];
        BigInt a2 = f[1][0][2] * x + f[0][1][2] * y;
        BigInt a1 = f[2][0][1] * x * x + f[1][1][1] * x * y + f[0][2][1] * y * y;
        BigInt a0 = f[3][0][0] * x * x * x + f[2][1][0] * x * x * y + f[1][2][0] * x * y * y + f[0][3][0] * y * y * y;
        long long lo = (c0 == 0 && c1 == 0) ? 1 : -B;
        for (long long c2 = lo; c2 <= B; ++c2) {
          BigInt z = c2;
          BigInt d = ((a3 * z + a2) * z + a1) * z + a0;
          if (d != 0 && abs(d) <= max_norm) out.push_back({{c0, c1, c2}, static_cast<int>(d)});
        }
      }
  }
  return out;
}

/// Integer matrix close to sum_k rho_k P_k, where P_k are the spectral
/// projectors of A; nullopt if the entries are not near integers.
inline std::optional<Mat3Z> from_spectrum(const SpectralData& s, const std::array<long double, 3>& rho) {
  Mat3Z r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      long double v = 0;
      for (int k = 0; k < 3; ++k) v += rho[k] * s.right[k][i] * s.left[k][j] / s.pairing[k];
      if (!std::isfinite(v) || std::fabs(v) > 1e17L) return std::nullopt;
      long double rv = std::round(v);
      if (std::fabs(v - rv) > 0.25L) return std::nullopt;
      r[i][j] = BigInt(static_cast<long long>(rv));
    }
  return r;
}

/// An exact p-th root of w commuting with A with det 1, if one exists and is
/// recoverable numerically.
inline std::optional<Mat3Z> pth_root(const SpectralData& s, const Mat3Z& w, int p) {
  auto mu = s.eigenvalues(w);
  std::vector<std::array<long double, 3>> candidates;
  if (p % 2 == 1) {
    std::array<long double, 3> rho{};
    for (int k = 0; k < 3; ++k) rho[k] = std::copysign(std::pow(std::fabs(mu[k]), 1.0L / p), mu[k]);
    candidates.push_back(rho);
  } else {
    for (int k = 0; k < 3; ++k)
      if (mu[k] <= 0) return std::nullopt;
    for (int mask = 0; mask < 8; ++mask) {
      std::array<long double, 3> rho{};
      for (int k = 0; k < 3; ++k) rho[k] = ((mask >> k) & 1 ? -1 : 1) * std::pow(mu[k], 1.0L / p);
      candidates.push_back(rho);
    }
  }
  for (const auto& rho : candidates) {
    auto r = from_spectrum(s, rho);
    if (!r || r->det() != 1) continue;
    if (*r * s.a != s.a * *r) continue;
    if (mat_pow(*r, p) == w) return r;
  }
  return std::nullopt;
}

/// Lagrange-Gauss reduction of a 2D basis in the logarithm metric.
inline void gauss_reduce(const SpectralData& s, Mat3Z& x, Mat3Z& y) {
  for (int it = 0; it < 200; ++it) {
    auto lx = s.logs(x), ly = s.logs(y);
    if (norm2(ly) < norm2(lx)) {
      std::swap(x, y);
      std::swap(lx, ly);
    }
    long double q = (lx[0] * ly[0] + lx[1] * ly[1] + lx[2] * ly[2]) / norm2(lx);
    long long k = std::llround(q);
    if (k == 0) return;
    y = y * mat_pow(x, -k);
  }
}

inline LogBounds certified_logs(const SpectralData& s, const Mat3Z& u) {
  LogBounds b;
  for (int k = 0; k < 3; ++k) {
    auto [lo, hi] = s.eigenvalue_bounds(u, k);
    if (lo.sign() <= 0 && hi.sign() >= 0) throw Error(ErrorKind::LimitExceeded, "eigenvalue enclosure contains zero");
    Rational alo = lo.sign() > 0 ? lo : Rational(-hi), ahi = lo.sign() > 0 ? hi : Rational(-lo);
    long double l = std::nextafter(to_ld(alo), 0.0L), h = std::nextafter(to_ld(ahi), HUGE_VALL);
    // widen for the library logarithm's rounding
    long double ll = std::log(l), lh = std::log(h);
    long double eps = 8 * std::numeric_limits<long double>::epsilon();
    b.lo[k] = ll - eps * (1 + std::fabs(ll));
    b.hi[k] = lh + eps * (1 + std::fabs(lh));
  }
  return b;
}

}  // namespace detail

inline UnitOperator make_unit_operator(const Mat3Z& u, const Mat3Z& a) {
  UnitOperator op;
  op.matrix = IntegerOperator3(u);
  if (auto e = inverse_poly_expression(u, a)) op.expression = *e;
  op.totally_positive = is_totally_positive(u);
  return op;
}

/// Exponents (i, j) with u = X^i Y^j, verified exactly; nullopt otherwise.
inline std::optional<std::pair<long long, long long>> express_in_basis(const SpectralData& s, const UnitBasis& basis,
                                                                       const Mat3Z& u) {
  auto l = s.logs(u);
  auto [x, y] = detail::solve2(basis.log_x, basis.log_y, l);
  if (!std::isfinite(x) || !std::isfinite(y)) return std::nullopt;
  long long i = std::llround(x), j = std::llround(y);
  for (long long di = -1; di <= 1; ++di)
    for (long long dj = -1; dj <= 1; ++dj)
      if (detail::mat_pow(basis.x(), i + di) * detail::mat_pow(basis.y(), j + dj) == u)
        return std::make_pair(i + di, j + dj);
  return std::nullopt;
}

/// Whether u1, u2 generate the same group as the basis.
inline bool same_unit_lattice(const SpectralData& s, const UnitBasis& basis, const Mat3Z& u1, const Mat3Z& u2) {
  auto e1 = express_in_basis(s, basis, u1);
  auto e2 = express_in_basis(s, basis, u2);
  if (!e1 || !e2) return false;
  long long d = e1->first * e2->second - e1->second * e2->first;
  return d == 1 || d == -1;
}

inline UnitBasis find_positive_unit_basis(const SpectralData& s, const UnitSearchOptions& opt = {}) {
  using detail::LogElem;
  const Mat3Z& a = s.a;
  Mat3Z ai = detail::inverse_unimodular(a);

  // candidate units from two coefficient boxes
  std::map<std::array<std::array<BigInt, 3>, 3>, Mat3Z> found;
  auto add = [&](Mat3Z u) {
    BigInt d = u.det();
    if (d == -1) u = -u;
    if (u == Mat3Z::identity()) return;
    found.emplace(u.a, u);
  };
  add(a);
  std::array<Mat3Z, 3> poly_basis{Mat3Z::identity(), ai, ai * ai};
  auto cb = centralizer_basis(a);
  std::array<Mat3Z, 3> cent{cb[0], cb[1], cb[2]};
  // elements of equal small norm generating the same ideal have a unit quotient
  std::map<int, std::vector<Mat3Z>> by_norm;
  for (const auto* b : {&poly_basis, &cent}) {
    for (const auto& e : detail::small_norm_combinations(*b, opt.budget, opt.max_norm)) {
      Mat3Z u = BigInt(e.c[0]) * (*b)[0] + BigInt(e.c[1]) * (*b)[1] + BigInt(e.c[2]) * (*b)[2];
      if (e.det == 1 || e.det == -1) {
        add(u);
      } else {
        auto& v = by_norm[std::abs(e.det)];
        if (v.size() < opt.max_per_norm) v.push_back(std::move(u));
      }
    }
  }
  auto add_quotients = [&] {
    for (auto& [norm, elems] : by_norm) {
      std::vector<Mat3Z> adj;
      for (const auto& y : elems) adj.push_back(y.adjugate());
      for (std::size_t i = 0; i < elems.size(); ++i)
        for (std::size_t j = i + 1; j < elems.size(); ++j) {
          Mat3Z q = elems[i] * adj[j];
          bool divisible = true;
          for (int r = 0; r < 9 && divisible; ++r) divisible = q[r / 3][r % 3] % norm == 0;
          if (!divisible) continue;
          for (auto& row : q.a)
            for (auto& x : row) x /= norm;
          add(q);
        }
    }
  };

  std::vector<LogElem> elems;
  Mat3Z b1, b2;
  bool have2 = false;
  for (int attempt = 0; attempt < 2 && !have2; ++attempt) {
    // quotients of equal-norm elements only when the units alone are not enough
    if (attempt == 1) add_quotients();
    elems.clear();
    for (const auto& [k, u] : found) elems.push_back({u, s.logs(u)});
    std::sort(elems.begin(), elems.end(), [](const LogElem& x, const LogElem& y) {
      long double nx = detail::norm2(x.l), ny = detail::norm2(y.l);
      if (nx != ny) return nx < ny;
      return x.m.a < y.m.a;
    });
    if (elems.empty()) continue;
    b1 = elems[0].m;
    long double scale1 = std::sqrt(detail::norm2(elems[0].l));
    for (std::size_t i = 1; i < elems.size() && !have2; ++i) {
      long double d = detail::det2(elems[0].l, elems[i].l);
      if (std::fabs(d) > 1e-9L * scale1 * std::sqrt(detail::norm2(elems[i].l))) {
        b2 = elems[i].m;
        have2 = true;
      }
    }
  }
  if (!have2)
    throw Error(ErrorKind::BasisNotFound,
                "no two independent units within coefficient budget " + std::to_string(opt.budget));

  auto rebuild = [&](const Mat3Z& u, long long p, long long q, long long d) {
    std::vector<detail::Gen> g{{b1, BigInt(d), BigInt(0)}, {b2, BigInt(0), BigInt(d)}, {u, BigInt(p), BigInt(q)}};
    auto r = detail::reduce_generators(std::move(g));
    b1 = r.first;
    b2 = r.second;
    detail::gauss_reduce(s, b1, b2);
  };

  std::size_t skipped = 0;
  for (const auto& e : elems) {
    auto [x, y] = detail::solve2(s.logs(b1), s.logs(b2), e.l);
    auto d = detail::rational_denominator(x, y, 64, 1e-6L);
    if (!d) {
      ++skipped;
      continue;
    }
    long long p = std::llround(x * *d), q = std::llround(y * *d);
    if (*d == 1) {
      if (detail::mat_pow(b1, p) * detail::mat_pow(b2, q) != e.m) ++skipped;
      continue;
    }
    rebuild(e.m, p, q, *d);
  }

  // saturation at small primes
  UnitBasis basis;
  for (int p : opt.saturation_primes) {
    bool changed = true;
    for (int round = 0; changed && round < 8; ++round) {
      changed = false;
      for (long long i = 0; i < p && !changed; ++i)
        for (long long j = 0; j < p && !changed; ++j) {
          if (i == 0 && j == 0) continue;
          Mat3Z w = detail::mat_pow(b1, i) * detail::mat_pow(b2, j);
          if (auto r = detail::pth_root(s, w, p)) {
            rebuild(*r, i, j, p);
            changed = true;
          }
        }
    }
    basis.saturated_primes.push_back(p);
  }

  // totally positive subgroup: kernel of the eigenvalue sign character
  auto sig = [&](const Mat3Z& u) {
    auto sg = s.eigen_signs(u);
    return std::make_pair(sg[0] < 0, sg[1] < 0);
  };
  auto s1 = sig(b1), s2 = sig(b2);
  std::vector<detail::Gen> g{{detail::mat_pow(b1, 2), BigInt(2), BigInt(0)}, {detail::mat_pow(b2, 2), BigInt(0), BigInt(2)}};
  if (s1 == std::make_pair(false, false)) g.push_back({b1, BigInt(1), BigInt(0)});
  if (s2 == std::make_pair(false, false)) g.push_back({b2, BigInt(0), BigInt(1)});
  if (s1 == s2) g.push_back({b1 * b2, BigInt(1), BigInt(1)});
  auto [t1, t2] = detail::reduce_generators(std::move(g));
  detail::gauss_reduce(s, t1, t2);

  // deterministic orientation
  auto l1 = s.logs(t1);
  if (l1[0] < 0 || (l1[0] == 0 && l1[1] < 0)) t1 = detail::inverse_unimodular(t1);
  l1 = s.logs(t1);
  auto l2 = s.logs(t2);
  if (detail::det2(l1, l2) < 0) t2 = detail::inverse_unimodular(t2);

  basis.X = make_unit_operator(t1, a);
  basis.Y = make_unit_operator(t2, a);
  if (!basis.X.totally_positive || !basis.Y.totally_positive)
    throw Error(ErrorKind::LimitExceeded, "sign character computation inconsistent");
  basis.log_x = s.logs(t1);
  basis.log_y = s.logs(t2);
  basis.log_x_bounds = detail::certified_logs(s, t1);
  basis.log_y_bounds = detail::certified_logs(s, t2);
  {
    // interval determinant on the first two log coordinates
    auto lo = [](long double a, long double b, long double c, long double d) {
      return std::min({a * c, a * d, b * c, b * d});
    };
    auto hi = [](long double a, long double b, long double c, long double d) {
      return std::max({a * c, a * d, b * c, b * d});
    };
    const auto &x = basis.log_x_bounds, &y = basis.log_y_bounds;
    long double p_lo = lo(x.lo[0], x.hi[0], y.lo[1], y.hi[1]), p_hi = hi(x.lo[0], x.hi[0], y.lo[1], y.hi[1]);
    long double q_lo = lo(x.lo[1], x.hi[1], y.lo[0], y.hi[0]), q_hi = hi(x.lo[1], x.hi[1], y.lo[0], y.hi[0]);
    basis.independence_certified = (p_lo - q_hi > 0) || (p_hi - q_lo < 0);
  }
  basis.units_found = found.size();
  basis.budget = opt.budget;
  basis.maximality_note = "generates every unit met by the search (" + std::to_string(found.size() - skipped) + " of " +
                          std::to_string(found.size()) +
                          " resolved exactly); no p-th roots for the checked primes; maximality in the full unit "
                          "group is not proven";
  return basis;
}

inline UnitBasis find_positive_unit_basis(const IntegerOperator3& a, const UnitSearchOptions& opt = {}) {
  return find_positive_unit_basis(spectral_data(a.matrix()), opt);
}

}  // namespace cfsail
