#pragma once

#include "theta6/eisenstein.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

namespace theta6 {

/** The two finite places of interest, above 2 (inert) and 3 (ramified). */
enum class Place : int { two = 0, three = 1 };

/**
 * LocalClass: the class of a nonzero element of the local field modulo sixth
 * powers, written as an
 * exponent vector over the fixed generator basis
 *   v=2: g1 = 2,        g2 = 3+2w,     g3 = 5+3w, g4 = 1+2w   (orders 6,2,6,2)
 *   v=3: g1 = 2w-1,     g2 = (1+g1)^2, g3 = 2,    g4 = 1+g1^3 (orders 6,3,6,3)
 * Exponents are stored reduced into their cyclic ranges.  The first generator
 * is the uniformizer, so e[0] is the valuation mod 6.
 */
struct LocalClass {
  Place place;
  std::array<int, 4> e;

  bool is_trivial() const { return e[0] == 0 && e[1] == 0 && e[2] == 0 && e[3] == 0; }
  bool operator==(const LocalClass& o) const { return place == o.place && e == o.e; }
};

/** Number of classes at a place: 144 at v=2, 324 at v=3. */
int class_count(Place v);

/** Dense index of a class: mixed-radix over the generator orders. */
int class_index(const LocalClass& c);
LocalClass class_from_index(Place v, int idx);

LocalClass class_add(const LocalClass& x, const LocalClass& y);
LocalClass class_sub(const LocalClass& x, const LocalClass& y);
LocalClass class_neg(const LocalClass& x);
/** k-th multiple of a class (the class of x^k). */
LocalClass class_scale(const LocalClass& x, int k);

/**
 * Class of a nonzero x modulo local sixth powers, via the precomputed table
 * keyed on (valuation mod 6, unit-part residue modulo pi_v^(2e+1)).  The
 * table is built once by scanning all exponent vectors against the set of
 * sixth-power unit residues; construction fails loudly if that scan does not
 * tile the unit residues exactly.
 */
LocalClass decompose_local(const EInt& x, Place v);

/** True iff x is a sixth power in the local field (trivial class). */
bool is_sixth_power_local(const EInt& x, Place v);

/**
 * Local Hilbert pairing (x,y)_v as an exponent j mod 6 (value zeta6^j),
 * computed as e(x)^T M e(y) with the hard-coded place matrix.
 */
int hilbert_exp_local(const EInt& x, const EInt& y, Place v);

/** Pairing on class indices (table lookup after the first call). */
int pairing_exp(Place v, int ci, int cj);

/** (x,y)_S = (x,y)_2 (x,y)_3 as an exponent mod 6; the complex place is trivial. */
int hilbert_exp_S(const EInt& x, const EInt& y);

/**
 * Conductor of the character t -> zeta6^((y,t)_v): 0 means unramified;
 * otherwise the minimal f >= 1 with the character trivial on 1 + p_v^f.
 * Implemented as the layer-by-layer guess-and-check: starting from the
 * sixth-power bound g = 2e+1 (where layers are automatically trivial) and
 * decrementing while every 1 + r*pi^g stays in the kernel, then testing the
 * prime-to-p root-of-unity part to separate f = 1 from unramified.
 */
int conductor(const EInt& y, Place v);

/** Conductor from a class index rather than an element. */
int conductor_class(Place v, int ci);

/** Access to the fixed data of a place. */
struct LocalData {
  Place place;
  EInt uniformizer;
  int q;                       // residue field size
  int e6;                      // valuation of 6
  int mexp;                    // working modulus exponent 2*e6 + 1
  std::array<EInt, 4> gens;
  std::array<int, 4> orders;
  int matrix[4][4];
  std::vector<EInt> unit_roots;    // representatives of mu_{q-1} (excluding 1)
  std::vector<EInt> residue_reps;  // representatives of the residue field (including 0)
};
const LocalData& local_data(Place v);

/**
 * Exact local additive character psi_v(x / pi_v^k) as an exponent of
 * zeta_72.  With the default sign convention (sign = -1) this is the
 * character exp(-2*pi*i*lambda_v(Tr(x/pi_v^k))), whose values lie in mu_8
 * at v=2 and mu_9 at v=3.  `sign` must be +1 or -1 and must match the sign
 * used in the archimedean character of the Gauss sums.
 */
int additive_char_exp72(const EInt& x, int k, Place v, int sign);

}  // namespace theta6
