#pragma once

// Exact transition-matrix machinery for the vector functional equation.
//
// The 216x216 matrix T(r,s) relating the two half-planes has entries
//
//   T_ij(r,s) = (eta_i,-eta_j)_S / 6^6 * prod_{v in {2,3}} (1 - |pi_v|^{6s})
//               * sum_{h in S-unit classes} (h, -eta_j/eta_i)_S
//               * prod_v sum_{y in K_v*/K_v*^6} (-r/(h eta_i eta_j), y)_v
//                        Gamma_v(|.|^s eps(y,.))
//
// with eta_1..eta_216 the coset representatives and Gamma_v the local Tate
// gamma factor.  Apart from the explicit (eta_i,-eta_j)_S pairing, every
// factor depends on eta_i only through the classes of eta_i^2 and
// eta_i*eta_j; the implementation exploits exactly that bilinear structure
// through precomputed class-pairing and class-difference tables.
//
// Everything is carried out exactly over the 72nd cyclotomic ring: entries
// are Laurent polynomials in the two formal variables
//   V = (1/3)^s  (place three),   W = (1/4)^s  (place two),
// and the assembled numerators must land in the 36th cyclotomic subring with
// support inside {-5..4} x {-3..5} (fatal consistency errors otherwise).
// The matrix cannot be integral outright: applying the functional equation
// twice forces T(r,s) T(r,-s) = D(s) Id with the fixed non-integral scalar
//
//   D(s) = (10 - 3V^6 - 3V^-6)(17 - 4W^6 - 4W^-6) / 15552,
//
// and indeed every entry carries the exact lowest-terms denominator 6^5
// while every column sum reduces to the exact denominator 216.  The column
// sums c_{j,(w1,w2)} satisfy
//
//   sum_i T_ij(r,s)  = sum_w c_{j,w} V^{w1} W^{w2},   equivalently
//   sum_i T_ij(r,-s) = sum_w c_{j,w} (3^{w1} 4^{w2})^s,
//
// and these are the coefficients the Fourier-coefficient engine consumes
// (after numeric embedding), with the 1/216 applied exactly.

#include <array>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "theta6/bigfloat.hpp"
#include "theta6/cyclo.hpp"
#include "theta6/eisenstein.hpp"
#include "theta6/localfields.hpp"

namespace theta6 {

/**
 * Laurent polynomial in V = (1/3)^s and W = (1/4)^s with exact cyclotomic
 * coefficients over one positive integer denominator.  Keys are exponent
 * pairs (w1, w2): the coefficient of V^{w1} W^{w2}.
 */
class LaurentVW {
 public:
  LaurentVW() = default;

  long long den() const { return den_; }
  /** Sets the common denominator (positive). Existing numerators keep their values. */
  void set_den(long long d);

  /** Adds c to the numerator coefficient of V^{w1} W^{w2}. */
  void add_term(int w1, int w2, const CycloExact& c);
  const std::map<std::pair<int, int>, CycloExact>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  /** Equality of the represented values (both sides normalized first). */
  bool operator==(const LaurentVW& o) const;
  bool operator!=(const LaurentVW& o) const { return !(*this == o); }

  LaurentVW& operator+=(const LaurentVW& o);
  friend LaurentVW operator+(LaurentVW a, const LaurentVW& b) { return a += b; }
  friend LaurentVW operator*(const LaurentVW& a, const LaurentVW& b);
  LaurentVW scaled(const CycloExact& c) const;

  /** The substitution s -> -s: negates every exponent pair. */
  LaurentVW negated_s() const;

  /** Drops zero terms and divides out the common content with the denominator. */
  void normalize();

  /** Support box [lo1,hi1] x [lo2,hi2]; returns false when empty. */
  bool support(int& lo1, int& hi1, int& lo2, int& hi2) const;

  /** Numeric value at a real s: V = 3^{-s}, W = 4^{-s}. */
  BigComplex eval(const BigReal& s) const;

  std::string str() const;

 private:
  std::map<std::pair<int, int>, CycloExact> terms_;
  long long den_ = 1;
};

/** Local class indices of r at the places two and three. */
std::pair<int, int> local_class_pair(const EInt& r);

/**
 * Local Tate gamma factor of chi = |.|^s eps(y,.), multiplied by the
 * prefactor (1 - |pi_v|^{6s}) that clears the unramified denominator
 * (1 - chi(pi_v)); the result is Laurent in the single variable
 * |pi_v|^s (V at place three, W at place two).
 *
 * Unramified chi gives (1 - |pi_v| chi(pi_v)^{-1}) / (1 - chi(pi_v)) times
 * chi(pi_v)^{-d} |pi_v|^{d/2} (d = 0 at two, 1 at three), expanded by the
 * finite geometric series.  Ramified chi of conductor f gives the monomial
 * chi(pi_v)^{-d-f} |pi_v|^{(d+f)/2} W(chi) with the normalized root number
 * W(chi) = |pi_v|^{f/2} sum over units mod (1 + p^f) of chi(x) e_v(x/pi^{d+f});
 * the exact check W(chi) * conj(W(chi)) = 1 failing is fatal.
 *
 * `sign` picks the additive-character direction and must match the one used
 * for the Gauss sums.
 */
LaurentVW tate_gamma(const EInt& y, Place place, int sign = -1);
/** Same, from a local class index. */
LaurentVW tate_gamma_class(int class_idx, Place place, int sign = -1);
/**
 * Independent numeric evaluation of the plain gamma factor (no clearing
 * prefactor) at a real s, for cross-checking the exact path.
 */
BigComplex tate_gamma_numeric(int class_idx, Place place, const BigReal& s, int sign = -1);

/** Exact column sums for one class of r, ready for caching. */
struct ColumnSums {
  std::pair<int, int> r_class{0, 0};  // class indices of r at places two/three
  int sign = -1;
  std::array<LaurentVW, 216> cols;  // cols[j-1] = the c_{j,w} table of column j

  bool operator==(const ColumnSums& o) const;
};

/**
 * Shared exact environment for one (class of r, sign): local gamma tables,
 * pairing tables, and the class bookkeeping for entries and column sums.
 */
class TransitionContext {
 public:
  explicit TransitionContext(const EInt& r, int sign = -1);

  const std::pair<int, int>& r_class() const;
  int sign() const;

  /** Exact entry T_ij(r, s) (1-based i, j); minus_s substitutes s -> -s. */
  LaurentVW entry(int i, int j, bool minus_s = false) const;

  /**
   * Exact entry with explicit generators in place of the table
   * representatives (both coprime to 6); used for auditing how the matrix
   * depends on the choice of representatives within a coset.
   */
  LaurentVW entry_with(const EInt& eta_i, const EInt& eta_j, bool minus_s = false) const;

  /** Exact column sum over i of T_ij(r, s) as the c_{j,w} table (1-based j). */
  LaurentVW column_sum(int j) const;

  /** Fully numeric recomputation of T_ij(r, s0) straight from the defining sum. */
  BigComplex entry_numeric(int i, int j, const BigReal& s0) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

/**
 * All 216 exact column sums for r coprime to 6.  Each column reduces to a
 * lowest-terms denominator dividing 216 with numerators in the 36th
 * cyclotomic subring and support inside {-5..4} x {-3..5}; violations are
 * fatal.
 */
ColumnSums column_sums(const EInt& r, int sign = -1);

/**
 * Exact diagonality check of the product T(r,s) T(r,-s) on a sample of
 * 1-based indices: every off-diagonal sampled product entry must vanish
 * identically and every diagonal one must not.
 */
bool diagonal_product_check(const EInt& r, const std::vector<int>& sample, int sign = -1);

/**
 * Serialization: magic and header lines, then one "j w1 w2 c0..c23" row per
 * coefficient.  Rows store the integral numerators of den * c_{j,w} for the
 * common denominator (216) declared in the header, so the persisted
 * coefficients are exact integers of the 36th cyclotomic subring.
 */
void save_column_sums(std::ostream& os, const ColumnSums& cs);
ColumnSums load_column_sums(std::istream& is);

/** Canonical cache file name for a class of r and an additive sign. */
std::string tmat_cache_filename(const std::pair<int, int>& r_class, int sign);

}  // namespace theta6
