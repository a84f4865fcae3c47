#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "theta6/bigfloat.hpp"
#include "theta6/eisenstein.hpp"

namespace theta6 {

/**
 * Global sign convention for the additive character: e(x) = exp(sign *
 * 2*pi*i * Tr(x)).  The default -1 matches the engine-level character and the
 * cache file header; every closed form and snapped phase below is pinned
 * against the naive oracle under this convention.
 */
inline constexpr int kAdditiveSign = -1;

/**
 * Additive character e(num/den) = exp(sign * 2*pi*i * Tr(num/den)) for a
 * field element with denominator coprime to 6.  The trace is computed exactly
 * as a rational Tr(num * conj(den)) / norm(den) before any rounding.
 */
BigComplex additive_char(const EInt& num, const EInt& den, int sign = kAdditiveSign);

/**
 * Reference evaluation of the sextic Gauss sum
 *   g6(r, eps^k, c) = sum_{x mod c} eps^k((x/c)_S) e(r x / c)
 * by direct summation over a full residue system mod c.  O(norm(c)) work;
 * used as the oracle against which the fast paths are validated.  A unit
 * modulus gives 1 (empty-modulus convention used when seeding the engine).
 */
BigComplex gauss_naive(const EInt& r, int k, const EInt& c, int sign = kAdditiveSign);

/**
 * Classical Gauss sum g(chi) = sum_{x=1}^{p-1} chi(x) exp(2*pi*i*x/p) for the
 * mod-p character chi = eps^k((./pi)) attached to a split prime pi of norm p,
 * approximated through the Shimura theta quotient W_D = theta(chi, i) /
 * theta(conj chi, i) with ceil(sqrt(p log p)) terms and then snapped to the
 * exact cube root singled out by the cube relation for g(chi)^3.  Only the
 * primitive sextic (k = 1) and cubic (k = 2) characters are supported here;
 * the remaining exponents follow from closed forms and conjugation.
 *
 * Returns g6(1, eps^k, pi), i.e. the prefactor eps^k((-conj(pi)/pi))^{-1} is
 * already applied.  Throws std::runtime_error if the theta approximation
 * fails to select a unique cube root within angular distance pi/6 even after
 * doubling the term count.
 */
BigComplex gauss_split_theta(const EInt& pi, int k, int sign = kAdditiveSign);

/**
 * g6(1, eps^k, pi) for a prime element pi coprime to 6 and k in 1..5:
 * split primes via gauss_split_theta / closed forms / conjugation relations,
 * inert primes via the closed form (k = 1) or a counted direct sum (k >= 2).
 */
BigComplex gauss_prime(const EInt& pi, int k, int sign = kAdditiveSign);

/** Per-prime record: canonical V-associate generator and g6(1, eps^k, pi). */
struct GaussRecord {
  EInt prime;                    // canonical V-associate
  std::map<int, BigComplex> values;  // k in 1..5 -> g6(1, eps^k, pi)
};

/**
 * In-memory Gauss sum table keyed by the canonical generator, with text
 * serialization.  The file format is line-oriented UTF-8: a header
 *   theta6-gauss v1 precision=200 sign=-1
 * followed by one line `a b k re_hex im_hex` per stored value, where re_hex
 * and im_hex are hexadecimal floating-point literals for bit-exact round
 * trips at the declared precision.
 */
class GaussTable {
 public:
  GaussTable() = default;

  /** Compute records for every prime of norm < bound (both conjugates). */
  static GaussTable precompute(long bound, int sign = kAdditiveSign);

  void insert(const GaussRecord& rec);
  const GaussRecord* find(const EInt& canonical_prime) const;
  std::size_t size() const { return records_.size(); }
  long bound() const { return bound_; }
  int sign() const { return sign_; }

  /** All records sorted by norm then lexicographic generator. */
  std::vector<const GaussRecord*> sorted() const;

  void save(const std::string& path) const;
  static GaussTable load(const std::string& path);

 private:
  std::map<std::pair<mpz_class, mpz_class>, GaussRecord> records_;
  long bound_ = 0;
  int sign_ = kAdditiveSign;
};

/**
 * Fully reduced Gauss sum g6(r, eps, c) for c coprime to 6, assembled from
 * per-prime values through the twist and multiplicativity rules:
 *   - gcd(r, c) = 1: g6(r,eps,c) = eps((r/c))^{-1} g6(1,eps,c);
 *   - coprime c1 c2: cross-twist eps((c1/c2)) eps((c2/c1)) times the parts;
 *   - pi^k || c with gcd(r, pi) = 1 and k >= 2: the sum vanishes;
 *   - pi-part pi^l of c with pi^j || r: zero unless l = j+1, in which case it
 *     contributes norm(pi)^j g6(1, eps^l, pi) twisted by the cofactor of r.
 * Prime values come from the table; a missing prime throws
 * std::out_of_range (precompute first).
 */
BigComplex gauss_general(const EInt& r, const EInt& c, const GaussTable& table);

}  // namespace theta6
