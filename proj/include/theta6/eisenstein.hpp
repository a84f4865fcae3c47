#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace theta6 {

/**
 * EInt: an element a + b*w of the ring of integers of Q(sqrt(-3)), where w is
 * the primitive sixth root of unity satisfying w^2 = w - 1.  The unit group is
 * {w^k : 0 <= k < 6} with w^3 = -1, and the ring is norm-Euclidean: division
 * rounds each coordinate of x*conj(y)/N(y) to a nearest integer, which always
 * leaves a remainder of norm at most (3/4)*N(y).
 */
struct EInt {
  mpz_class a, b;

  EInt() : a(0), b(0) {}
  EInt(long x) : a(x), b(0) {}
  EInt(mpz_class x, mpz_class y) : a(std::move(x)), b(std::move(y)) {}
  EInt(long x, long y) : a(x), b(y) {}

  bool is_zero() const { return a == 0 && b == 0; }
  bool operator==(const EInt& o) const { return a == o.a && b == o.b; }
  bool operator!=(const EInt& o) const { return !(*this == o); }

  friend EInt operator+(const EInt& x, const EInt& y) { return {x.a + y.a, x.b + y.b}; }
  friend EInt operator-(const EInt& x, const EInt& y) { return {x.a - y.a, x.b - y.b}; }
  EInt operator-() const { return {-a, -b}; }
  friend EInt operator*(const EInt& x, const EInt& y) {
    // (a+bw)(c+dw) = (ac - bd) + (ad + bc + bd) w  using w^2 = w - 1
    mpz_class ac = x.a * y.a, bd = x.b * y.b;
    return {ac - bd, x.a * y.b + x.b * y.a + bd};
  }
  EInt& operator+=(const EInt& o) { a += o.a; b += o.b; return *this; }
  EInt& operator-=(const EInt& o) { a -= o.a; b -= o.b; return *this; }
  EInt& operator*=(const EInt& o) { *this = *this * o; return *this; }

  /** Complex conjugate: a + b*w  |->  (a+b) - b*w. */
  EInt conj() const { return {a + b, -b}; }
  mpz_class norm() const { return a * a + a * b + b * b; }
  mpz_class trace() const { return 2 * a + b; }

  /** Multiply by the unit w^k (k taken mod 6). */
  EInt times_unit(int k) const;

  std::string str() const;
};

std::ostream& operator<<(std::ostream& os, const EInt& x);

/** The six units w^k, k = 0..5. */
const EInt& unit_power(int k);

/** sqrt(-3) = 2w - 1, the ramified prime above 3. */
inline EInt pi_three() { return {-1, 2}; }

/**
 * Nearest-integer division: returns (q, r) with x = q*y + r and
 * N(r) <= (3/4) N(y).  y must be nonzero.
 */
std::pair<EInt, EInt> divmod(const EInt& x, const EInt& y);

/** Exact quotient; throws std::invalid_argument when y does not divide x. */
EInt divexact(const EInt& x, const EInt& y);

inline bool divides(const EInt& y, const EInt& x) {
  if (y.is_zero()) return x.is_zero();
  EInt t = x * y.conj();
  mpz_class n = y.norm();
  return t.a % n == 0 && t.b % n == 0;
}

/**
 * Greatest common divisor by the Euclidean algorithm, normalized to the
 * canonical associate (see canonical_associate).  gcd(0,0) = 0.
 */
EInt gcd(const EInt& x, const EInt& y);

/** Extended gcd: (g, s, t) with g = s*x + t*y.  g is not unit-normalized. */
std::array<EInt, 3> egcd(const EInt& x, const EInt& y);

/**
 * True when x mod 12 equals one of the twelve fixed residues
 *   {1, 5, 4+3w, 8+3w, 1+6w, 5+6w, 1+9w, 2+9w, 5+9w, 7+9w, 10+9w, 11+9w}.
 * For x coprime to 6 exactly one associate w^k * x satisfies this, because
 * the 72 units of O/12 split as 6 unit classes times these 12 residues.
 */
bool in_residue_list(const EInt& x);

/**
 * The canonical associate of a nonzero element: for x coprime to 6, the
 * unique unit multiple whose residue mod 12 lies in the fixed list above;
 * otherwise the unique associate in the sector 0 <= arg < pi/3 (a > 0,
 * b >= 0).  Returns x itself when x = 0.
 */
EInt canonical_associate(const EInt& x);

/** The canonical associate together with the unit exponent k: w^k * x is canonical. */
std::pair<EInt, int> canonical_associate_exp(const EInt& x);

/** True when gcd(x, 6) is a unit, i.e. x is coprime to both 2 and sqrt(-3). */
bool coprime_to_six(const EInt& x);

/** Parse "a+b*w" / "a-b*w" / "a" / "b*w" (ASCII, no spaces required). */
EInt parse_eint(const std::string& text);

/**
 * Canonical residue enumeration modulo a nonzero c: the column-style Hermite
 * box of the ideal lattice (c) with basis {c, c*w}.  Residues are the
 * elements i + j*w reduced into the box 0 <= i < d1, 0 <= j < d2 where
 * d1*d2 = N(c).
 */
class ResidueBox {
 public:
  explicit ResidueBox(const EInt& c);

  const mpz_class& d1() const { return d1_; }
  const mpz_class& d2() const { return d2_; }
  mpz_class count() const { return d1_ * d2_; }

  /** Canonical representative of x modulo (c). */
  EInt reduce(const EInt& x) const;

  /** All residues, in row-major (j, i) order.  Requires N(c) to fit memory. */
  std::vector<EInt> all() const;

  /** Position of reduce(x) in the all() ordering; requires N(c) to fit long. */
  long index(const EInt& x) const;

 private:
  mpz_class d1_, d2_, e_;  // basis rows (d1_, 0), (e_, d2_)
};

/** Exponent of the exact power of p dividing x (p a nonzero non-unit). */
int valuation(EInt x, const EInt& p);

/** x^e by binary exponentiation, e >= 0. */
EInt pow_eint(EInt x, unsigned long e);

/**
 * A prime of the ring away from 2 and 3, stored by a fixed generator.
 * For split rational primes p = 1 mod 3 there are two entries (conjugate
 * ideals); for inert p = 2 mod 3 (p > 2) a single entry of norm p^2.
 */
struct PrimeE {
  EInt gen;          // fixed generator (sector-canonical associate)
  std::int64_t norm; // N(gen)
  long p;            // rational prime below
  bool split;        // true when norm == p
};

/**
 * All primes of norm in [7, max_norm] away from 2 and 3, ordered by norm and
 * then lexicographically by (a, b) of the stored generator.  Split primes are
 * constructed from a cube root of unity modulo p via a ring gcd.
 */
std::vector<PrimeE> enumerate_primes(std::int64_t max_norm);

/**
 * A generator (canonical associate) of one of the two primes above a split
 * rational prime p = 1 mod 3, via gcd(p, w - u) where u - 1 is a nontrivial
 * cube root of unity mod p.
 */
EInt split_prime_above(const mpz_class& p);

/**
 * In the residue field modulo a split prime pi (of norm p), the class of w is
 * an integer root of u^2 - u + 1.  Returns that root: w = -a * b^{-1} mod p
 * for pi = a + b*w.
 */
mpz_class omega_residue_mod_split(const EInt& pi, const mpz_class& p);

/** x -> x mod pi as an integer in [0, p) for a split prime pi of norm p. */
mpz_class to_residue_mod_split(const EInt& x, const EInt& pi, const mpz_class& p);

/**
 * Factorization of a nonzero x into canonical prime generators with
 * exponents (unit part dropped), by trial division of the norm.  Intended
 * for moderate norms (trial division up to sqrt(norm)).
 */
std::vector<std::pair<EInt, int>> factor_eint(const EInt& x);

}  // namespace theta6
