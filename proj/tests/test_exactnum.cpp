#include <gtest/gtest.h>

#include <random>

#include "helpers.hpp"

using namespace cfsail;
using namespace testing_support;

namespace {

CubicPoly cubic(long long c2, long long c1, long long c0) { return {BigInt(c2), BigInt(c1), BigInt(c0)}; }

bool encloses_root(const RealRootInterval& r) {
  if (r.exact()) return r.poly().eval(r.lo()) == 0;
  return r.poly().eval(r.lo()).sign() * r.poly().eval(r.hi()).sign() < 0;
}

}  // namespace

TEST(IntegerOperator, RejectsNonUnimodular) {
  EXPECT_THROW(IntegerOperator3(rows({2, 0, 0, 0, 1, 0, 0, 0, 1})), Error);
  try {
    IntegerOperator3(rows({1, 2, 3, 4, 5, 6, 7, 8, 9}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidOperator);
  }
}

TEST(IntegerOperator, InverseIsIntegral) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    IntegerOperator3 u(mat(oracle::random_unimodular(rng)));
    EXPECT_EQ((u * u.inverse()).matrix(), Mat3Z::identity());
  }
  auto a = frob(-1, 2);
  EXPECT_EQ(a.det(), 1);
  EXPECT_EQ(a.pow(3) * a.pow(-3), IntegerOperator3::identity());
}

TEST(CharPoly, FrobeniusMatchesTraceOracle) {
  for (long long m = -5; m <= 5; ++m)
    for (long long n = -5; n <= 5; ++n) {
      CubicPoly p = char_poly(frob(m, n));
      EXPECT_EQ(p, cubic(n, m, -1));
      auto o = oracle::char_poly(oracle::frobenius(m, n));
      EXPECT_EQ(p, cubic(o[0], o[1], o[2]));
    }
}

TEST(CharPoly, IdentityAndWorkedMatrix) {
  EXPECT_EQ(char_poly(Mat3Z::identity()), cubic(-3, 3, -1));
  Mat3Z e = rows({1, 2, 0, 0, 1, 2, -7, 0, 29});
  EXPECT_EQ(char_poly(e), cubic(-31, 59, -1));
  auto o = oracle::char_poly(m3(e));
  EXPECT_EQ(char_poly(e), cubic(o[0], o[1], o[2]));
}

TEST(CharPoly, CayleyHamiltonOnRandomUnimodular) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    Mat3Z m = mat(oracle::random_unimodular(rng));
    CubicPoly p = char_poly(m);
    Mat3Z m2 = m * m, id = Mat3Z::identity();
    EXPECT_EQ(m2 * m + p.c2 * m2 + p.c1 * m + p.c0 * id, Mat3Z::zero());
  }
}

TEST(Irreducibility, Examples) {
  EXPECT_TRUE(is_irreducible(cubic(2, -1, -1)));
  for (long long a = -10; a <= 10; ++a) {
    EXPECT_FALSE(is_irreducible(char_poly(frob(a, -a)))) << a;
    EXPECT_FALSE(is_irreducible(char_poly(frob(a, a + 2)))) << a;
    EXPECT_EQ(char_poly(frob(a, -a)).eval(BigInt(1)), 0);
    EXPECT_EQ(char_poly(frob(a, a + 2)).eval(BigInt(-1)), 0);
  }
}

TEST(Irreducibility, AgreesWithRationalRootScan) {
  for (long long m = -12; m <= 12; ++m)
    for (long long n = -12; n <= 12; ++n) {
      CubicPoly p = char_poly(frob(m, n));
      // a monic cubic with constant term -1 is reducible iff +-1 is a root
      bool reducible = p.eval(BigInt(1)) == 0 || p.eval(BigInt(-1)) == 0;
      EXPECT_EQ(is_irreducible(p), !reducible) << m << "," << n;
    }
}

TEST(Discriminant, Examples) {
  EXPECT_EQ(discriminant_frobenius(0, 0), -27);
  EXPECT_EQ(discriminant_frobenius(-1, 2), 49);
  EXPECT_EQ(discriminant_frobenius(1, 1), -44);
  for (long long m = -6; m <= 6; ++m)
    for (long long n = -6; n <= 6; ++n)
      EXPECT_EQ(discriminant_frobenius(m, n), char_poly(frob(m, n)).discriminant());
}

TEST(Discriminant, PositiveExactlyWhenThreeRealRoots) {
  for (long long m = -20; m <= 20; ++m)
    for (long long n = -20; n <= 20; ++n) {
      CubicPoly p = char_poly(frob(m, n));
      BigInt d = discriminant_frobenius(m, n);
      int roots = count_distinct_real_roots(p);
      EXPECT_EQ(roots, oracle::real_root_count(n, m, -1)) << m << "," << n;
      if (d > 0) EXPECT_EQ(roots, 3);
      if (d < 0) EXPECT_EQ(roots, 1);
      if (d == 0) EXPECT_FALSE(is_irreducible(p));
    }
}

TEST(RootIsolation, RepeatedRootRejected) {
  try {
    isolate_real_roots(cubic(-3, 3, -1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonSquarefree);
  }
}

TEST(RootIsolation, ThreeRootsInExpectedIntervals) {
  auto r = isolate_real_roots(cubic(2, -1, -1));
  ASSERT_EQ(r.size(), 3u);
  std::pair<int, int> expect[3] = {{-3, -1}, {-1, 0}, {0, 1}};
  for (int k = 0; k < 3; ++k) {
    auto t = r[k].refined_to_bits(20);
    EXPECT_GT(t.lo(), Rational(expect[k].first));
    EXPECT_LT(t.hi(), Rational(expect[k].second));
    EXPECT_TRUE(encloses_root(t));
  }
  auto num = oracle::real_roots(2, -1, -1);
  ASSERT_EQ(num.size(), 3u);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(static_cast<double>(r[k].refined_to_bits(40).approx()), (double)num[k], 1e-9);
}

TEST(RootIsolation, SingleRealRoot) {
  auto r = isolate_real_roots(cubic(1, 1, -1));
  ASSERT_EQ(r.size(), 1u);
  EXPECT_TRUE(encloses_root(r[0]));
}

TEST(RootIsolation, RefinementShrinksAndKeepsRoot) {
  for (long long m = -6; m <= 6; ++m)
    for (long long n = -6; n <= 6; ++n) {
      CubicPoly p = char_poly(frob(m, n));
      if (p.discriminant() == 0) continue;
      for (const auto& r : isolate_real_roots(p)) {
        auto s = r.refined(1);
        EXPECT_TRUE(encloses_root(s));
        if (!r.exact()) EXPECT_LT(s.width(), r.width());
        EXPECT_GE(s.lo(), r.lo());
        EXPECT_LE(s.hi(), r.hi());
      }
    }
}

TEST(EigenForms, LeftEigenformsOfFrobenius) {
  for (long long m = -6; m <= 6; ++m)
    for (long long n = -6; n <= 6; ++n) {
      CubicPoly p = char_poly(frob(m, n));
      if (!is_irreducible(p) || p.discriminant() <= 0) continue;
      auto forms = eigen_forms(frob(m, n));
      ASSERT_EQ(forms.size(), 3u);
      for (const auto& f : forms) EXPECT_TRUE(is_left_eigenform(f, frob(m, n).matrix()));
    }
}

TEST(EigenForms, ReducibleRejected) {
  try {
    eigen_forms(frob(2, -2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Reducible);
  }
  try {
    eigen_forms(frob(1, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotTotallyReal);
  }
}

TEST(EigenForms, WorkedMatrixHasQuadraticCoefficient) {
  Mat3Z e = rows({1, 2, 0, 0, 1, 2, -7, 0, 29});
  auto forms = eigen_forms(e);
  ASSERT_EQ(forms.size(), 3u);
  for (const auto& f : forms) {
    EXPECT_TRUE(is_left_eigenform(f, e));
    int deg = 0;
    for (const auto& c : f.coeffs) deg = std::max(deg, c.degree());
    EXPECT_EQ(deg, 2);
  }
}

TEST(SignAt, ZeroVector) {
  for (const auto& f : eigen_forms(frob(-1, 2))) EXPECT_EQ(sign_at(f, Vec3(0, 0, 0)), 0);
}

TEST(SignAt, NonzeroOnLatticeAndMatchesNumericOracle) {
  for (auto [m, n] : {std::pair{-1LL, 2LL}, std::pair{4LL, 21LL}, std::pair{-3LL, 9LL}}) {
    auto a = frob(m, n);
    auto forms = eigen_forms(a);
    oracle::Spectrum spec(oracle::frobenius(m, n));
    ASSERT_EQ(spec.lambda.size(), 3u);
    // the library form and the oracle covector agree up to one sign per root
    std::array<int, 3> rel{};
    for (long long x = -4; x <= 4; ++x)
      for (long long y = -4; y <= 4; ++y)
        for (long long z = -4; z <= 4; ++z) {
          if (x == 0 && y == 0 && z == 0) continue;
          auto os = spec.signs({x, y, z});
          for (int k = 0; k < 3; ++k) {
            int s = sign_at(forms[k], Vec3(x, y, z));
            ASSERT_NE(s, 0);
            ASSERT_NE(os[k], 0);
            if (rel[k] == 0) rel[k] = s * os[k];
            EXPECT_EQ(s * os[k], rel[k]) << m << "," << n << " (" << x << "," << y << "," << z << ")";
          }
        }
  }
}

TEST(SignAt, RefinementNeverChangesSign) {
  auto forms = eigen_forms(frob(-1, 2));
  for (auto& f : forms) {
    EigenForm coarse = f;
    coarse.root = isolate_real_roots(f.root.poly())[&f - &forms[0]];
    for (long long x = -3; x <= 3; ++x)
      for (long long y = -3; y <= 3; ++y) {
        Vec3 v(x, y, 1);
        EXPECT_EQ(sign_at(coarse, v), sign_at(f, v));
      }
  }
}

TEST(SquarefreeCore, Examples) {
  EXPECT_EQ(squarefree_core(BigInt(49)), 1);
  EXPECT_EQ(squarefree_core(BigInt(-44)), -11);
  EXPECT_EQ(squarefree_core(BigInt(72)), 2);
  EXPECT_EQ(squarefree_core(BigInt(0)), 0);
}
