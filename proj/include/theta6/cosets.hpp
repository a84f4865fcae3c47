#pragma once

/*
 * The 216-element coset system used to index transition-matrix columns.
 *
 * The product of the two local class groups modulo sixth powers has
 * 144 * 324 = 46656 elements.  The S-units are generated by zeta6, 2, and
 * sqrt(-3); their image is a subgroup of order 216, so the quotient has
 * exactly 216 cosets.  Each coset gets a 1-based index, a canonical pair of
 * local class indices (the lexicographically smallest member), and a small
 * global representative coprime to 6 whose residue mod 12 lies in the fixed
 * twelve-element list V (see in_V below).
 */

#include <array>
#include <utility>
#include <vector>

#include "theta6/eisenstein.hpp"
#include "theta6/localfields.hpp"

namespace theta6 {

class CosetTable {
 public:
  int size() const { return 216; }

  /** Index of the coset of the sixth powers themselves. */
  int identity_index() const { return identity_; }

  /** Coset index of a nonzero element (any valuation at 2 and 3 allowed). */
  int index_of(const EInt& x) const;

  /** Coset index from a pair of local classes (places two and three). */
  int index_of_pair(const LocalClass& c2, const LocalClass& c3) const;

  /** Small representative of coset j (1-based), coprime to 6 and inside V. */
  const EInt& representative(int j) const;

  /** Lexicographically smallest (class index at 2, class index at 3) pair. */
  std::pair<int, int> canonical_pair(int j) const;

  /**
   * The image of the S-units in the product of the two local class groups:
   * 216 (place-two index, place-three index) pairs, sorted by pair code.
   * Together with the coset representatives these split every local-class
   * pair uniquely as representative-class + unit-class.
   */
  const std::vector<std::pair<int, int>>& unit_classes() const { return units_; }

 private:
  friend const CosetTable& coset_table();
  CosetTable();

  std::vector<int> coset_of_;  // dense pair code -> 1..216
  std::array<std::pair<int, int>, 216> canonical_;
  std::array<EInt, 216> reps_;
  std::vector<std::pair<int, int>> units_;
  int identity_ = 0;
};

/** The table, built once on first use (fatal if the orbit count is off). */
const CosetTable& coset_table();

/** The twelve mod-12 residues defining V. */
const std::array<EInt, 12>& v_residues();

/**
 * True iff x mod 12 lies in the twelve-element list; x must be coprime to 6
 * (std::invalid_argument otherwise).
 */
bool in_V(const EInt& x);

struct VNormalization {
  int k;           // smallest k in 1..6 with zeta6^k * a in V (k = 6: a itself)
  EInt associate;  // zeta6^k * a
  int coset;       // coset index of the associate
};

/** V-normalization of an element coprime to 6; failure to land in V is fatal. */
VNormalization normalize_to_V(const EInt& a);

/** Checks (v,w)_6 = 1 or (v,-w)_6 = 1 for all pairs from the twelve residues. */
bool v_property_check();

}  // namespace theta6
