#pragma once

// Conversions between the oracle's machine-integer types and library types.

#include <initializer_list>

#include "cfsail/catalog.hpp"
#include "oracles.hpp"

namespace testing_support {

inline cfsail::Vec3 vec(const oracle::I3& v) { return cfsail::Vec3(v[0], v[1], v[2]); }
inline oracle::I3 i3(const cfsail::Vec3& v) {
  return {static_cast<long long>(v[0]), static_cast<long long>(v[1]), static_cast<long long>(v[2])};
}

inline cfsail::Mat3Z mat(const oracle::M3& m) {
  cfsail::Mat3Z r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = m[i][j];
  return r;
}
inline oracle::M3 m3(const cfsail::Mat3Z& m) {
  oracle::M3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = static_cast<long long>(m[i][j]);
  return r;
}

/// Row-major 3x3 matrix from nine integers.
inline cfsail::Mat3Z rows(std::initializer_list<long long> v) {
  cfsail::Mat3Z r;
  int k = 0;
  for (long long x : v) {
    r[k / 3][k % 3] = x;
    ++k;
  }
  return r;
}

inline cfsail::IntegerOperator3 frob(long long m, long long n) { return cfsail::frobenius(m, n); }

}  // namespace testing_support
