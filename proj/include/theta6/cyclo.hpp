#pragma once

// Exact arithmetic in the 72nd cyclotomic ring Z[zeta], zeta = exp(2*pi*i/72).
//
// Elements are stored on the power basis 1, zeta, ..., zeta^23 (degree
// phi(72) = 24) and reduced with the minimal polynomial relation
// zeta^24 = zeta^12 - 1.  All ring operations are exact over 64-bit
// integer coordinates; multiplication accumulates in 128-bit and throws
// std::overflow_error if a reduced coordinate leaves the 64-bit range.
// The only lossy operation is embed(), which maps zeta to the principal
// root exp(2*pi*i/72) at the current working precision.
//
// The subring Z[zeta^2] (the 36th cyclotomic ring) consists exactly of
// the elements whose odd-index coordinates vanish; in_subring_36() tests
// that.  sqrt3() returns 2*zeta^6 - zeta^18, the positive square root
// of 3 (it embeds to +1.732...), which lets half-integral powers of 3
// stay exact.

#include <array>
#include <cstdint>
#include <string>

#include "theta6/bigfloat.hpp"

namespace theta6 {

class CycloExact {
 public:
  static constexpr int kDegree = 24;
  static constexpr int kOrder = 72;

  CycloExact();  // zero

  static CycloExact zero();
  static CycloExact one();
  static CycloExact integer(long long n);
  // zeta^k for any integer k (reduced mod 72, then into the power basis).
  static CycloExact zeta_pow(long k);
  // The positive square root of 3: 2*zeta^6 - zeta^18.
  static CycloExact sqrt3();

  long long coord(int i) const;
  void set_coord(int i, long long v);

  CycloExact operator-() const;
  CycloExact& operator+=(const CycloExact& o);
  CycloExact& operator-=(const CycloExact& o);
  CycloExact& operator*=(const CycloExact& o);
  friend CycloExact operator+(CycloExact a, const CycloExact& b) { return a += b; }
  friend CycloExact operator-(CycloExact a, const CycloExact& b) { return a -= b; }
  friend CycloExact operator*(const CycloExact& a, const CycloExact& b);
  CycloExact scaled(long long n) const;  // n * this, overflow-checked

  // Multiply by zeta^t (t any integer): an exact basis rotation.
  CycloExact times_zeta_pow(long t) const;

  // The ring automorphism zeta -> zeta^m; requires gcd(m, 72) = 1.
  CycloExact galois(int m) const;
  // Complex conjugation zeta -> zeta^{-1}.
  CycloExact conj() const { return galois(71); }

  bool is_zero() const;
  bool operator==(const CycloExact& o) const { return c_ == o.c_; }
  bool operator!=(const CycloExact& o) const { return !(*this == o); }

  // True when the element lies in Z[zeta^2] (the 36th cyclotomic ring):
  // on the reduced power basis this is exactly "odd coordinates vanish".
  bool in_subring_36() const;

  bool divisible_by(long long d) const;
  // Exact division by a nonzero integer; throws std::domain_error if any
  // coordinate is not divisible.
  CycloExact divided_by(long long d) const;

  // Numeric embedding zeta -> exp(2*pi*i/72) at the working precision.
  BigComplex embed() const;

  std::string str() const;

 private:
  std::array<long long, kDegree> c_{};
};

}  // namespace theta6
