#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "theta6/cosets.hpp"
#include "theta6/eisenstein.hpp"
#include "theta6/localfields.hpp"

using namespace theta6;

namespace {

std::mt19937_64 rng(90017);

EInt random_nonzero(long span) {
  std::uniform_int_distribution<long> d(-span, span);
  for (;;) {
    EInt x{d(rng), d(rng)};
    if (!x.is_zero()) return x;
  }
}

EInt random_coprime(long span) {
  for (;;) {
    EInt x = random_nonzero(span);
    if (coprime_to_six(x)) return x;
  }
}

}  // namespace

TEST_CASE("coset table: orbit structure and round trips") {
  const CosetTable& t = coset_table();
  CHECK(t.size() == 216);

  // The identity coset contains 1 and carries the smallest canonical pair.
  CHECK(t.index_of(EInt{1, 0}) == t.identity_index());
  CHECK(t.identity_index() == 1);
  CHECK(t.canonical_pair(t.identity_index()) == std::pair<int, int>{0, 0});

  // Canonical pairs are distinct and listed in increasing scan order.
  std::set<std::pair<int, int>> seen;
  std::pair<int, int> prev{-1, -1};
  for (int j = 1; j <= t.size(); ++j) {
    const auto cp = t.canonical_pair(j);
    CHECK(seen.insert(cp).second);
    CHECK(prev < cp);
    prev = cp;
  }

  // Representatives: coprime to 6, V-normalized, and they map back to j.
  for (int j = 1; j <= t.size(); ++j) {
    const EInt& rep = t.representative(j);
    CHECK(coprime_to_six(rep));
    CHECK(in_V(rep));
    CHECK(t.index_of(rep) == j);
    CHECK(t.index_of_pair(decompose_local(rep, Place::two),
                          decompose_local(rep, Place::three)) == j);
  }

  CHECK_THROWS_AS(t.index_of(EInt{0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(t.representative(0), std::invalid_argument);
  CHECK_THROWS_AS(t.representative(217), std::invalid_argument);
  CHECK_THROWS_AS(t.index_of_pair(decompose_local(EInt{1, 0}, Place::three),
                                  decompose_local(EInt{1, 0}, Place::two)),
                  std::invalid_argument);
}

TEST_CASE("coset index is constant on S-unit and sixth-power orbits") {
  const CosetTable& t = coset_table();

  // Documented case: x and x * 4^6 * zeta6 share a coset.
  const EInt x0{5, 2};
  CHECK(t.index_of(x0) == t.index_of(x0 * pow_eint(EInt{4, 0}, 6) * EInt{0, 1}));

  std::uniform_int_distribution<int> unit(0, 5);
  for (int round = 0; round < 100; ++round) {
    const EInt x = random_nonzero(80);
    const int j = t.index_of(x);
    const EInt s = random_nonzero(9);
    EInt y = x.times_unit(unit(rng)) * pow_eint(s, 6);
    CHECK(t.index_of(y) == j);
    // Multiplying by the other S-unit generators also stays in the coset.
    y = y * pow_eint(EInt{2, 0}, static_cast<unsigned long>(unit(rng))) *
        pow_eint(EInt{-1, 2}, static_cast<unsigned long>(unit(rng)));
    CHECK(t.index_of(y) == j);
  }
}

TEST_CASE("membership in V") {
  CHECK(in_V(EInt{1, 0}));
  CHECK_FALSE(in_V(EInt{-2, 3}));  // residue 10+3w mod 12 is not listed
  CHECK(in_V(EInt{2, -3}));        // residue 2+9w mod 12 is listed
  for (const EInt& v : v_residues()) CHECK(in_V(v));

  CHECK_THROWS_AS(in_V(EInt{2, 0}), std::invalid_argument);
  CHECK_THROWS_AS(in_V(EInt{3, 0}), std::invalid_argument);
  CHECK_THROWS_AS(in_V(EInt{0, 0}), std::invalid_argument);
}

TEST_CASE("V-normalization") {
  // Documented example: 3w - 2 normalizes with k = 3 to 2 - 3w.
  const VNormalization n = normalize_to_V(EInt{-2, 3});
  CHECK(n.k == 3);
  CHECK(n.associate == EInt{2, -3});
  CHECK(n.coset == coset_table().index_of(EInt{2, -3}));

  // Elements already in V return k = 6 and themselves.
  for (const EInt& v : {EInt{1, 0}, EInt{4, 3}, EInt{11, 9}}) {
    const VNormalization m = normalize_to_V(v);
    CHECK(m.k == 6);
    CHECK(m.associate == v);
  }

  CHECK_THROWS_AS(normalize_to_V(EInt{2, 0}), std::invalid_argument);

  // Randomized: the associate is in V, agrees with the canonical associate,
  // and the index matches the input's coset translated by a unit (units are
  // S-units, so the coset is unchanged).
  for (int round = 0; round < 200; ++round) {
    const EInt a = random_coprime(150);
    const VNormalization m = normalize_to_V(a);
    CHECK(in_V(m.associate));
    const auto [canon, k0] = canonical_associate_exp(a);
    CHECK(m.associate == canon);
    CHECK(m.k % 6 == k0);
    CHECK(m.coset == coset_table().index_of(a));
  }
}

TEST_CASE("every small prime ideal has exactly one associate in V") {
  for (const PrimeE& p : enumerate_primes(10000)) {
    if (!coprime_to_six(p.gen)) continue;
    int hits = 0;
    for (int k = 1; k <= 6; ++k)
      if (in_V(p.gen.times_unit(k))) ++hits;
    if (hits != 1) {
      CAPTURE(p.gen.str());
      CHECK(hits == 1);
    }
  }
  CHECK(true);
}

TEST_CASE("the V property holds and the mod-3 alternative fails") {
  CHECK(v_property_check());

  // (1, w)_6 = 1 for every representative.
  for (const EInt& w : v_residues()) CHECK(hilbert_exp_S(EInt{1, 0}, w) == 0);

  // Randomized pairs of V-normalized elements satisfy the property too.
  for (int round = 0; round < 60; ++round) {
    const EInt v = normalize_to_V(random_coprime(200)).associate;
    const EInt w = normalize_to_V(random_coprime(200)).associate;
    const bool ok = hilbert_exp_S(v, w) == 0 || hilbert_exp_S(v, -w) == 0;
    CHECK(ok);
  }

  // The transversal "x = 1 mod 3" admits a violating pair.
  std::vector<EInt> alt;
  for (long a = -10; a <= 10; ++a)
    for (long b = -9; b <= 9; ++b) {
      const EInt x{a, b};
      if (!coprime_to_six(x)) continue;
      if ((a - 1) % 3 == 0 && b % 3 == 0) alt.push_back(x);
    }
  CHECK(alt.size() > 10);
  bool violated = false;
  for (const EInt& v : alt) {
    for (const EInt& w : alt)
      if (hilbert_exp_S(v, w) != 0 && hilbert_exp_S(v, -w) != 0) {
        violated = true;
        break;
      }
    if (violated) break;
  }
  CHECK(violated);
}

TEST_CASE("unit classes form a transversal-complement of the representatives") {
  const CosetTable& T = coset_table();
  const auto& U = T.unit_classes();
  REQUIRE(U.size() == 216);
  CHECK(U.front() == std::pair<int, int>(0, 0));

  // Every S-unit image lands in the listed set.
  std::set<std::pair<int, int>> uset(U.begin(), U.end());
  for (int round = 0; round < 60; ++round) {
    std::uniform_int_distribution<int> ed(0, 5);
    EInt u{1, 0};
    for (int k = ed(rng); k-- > 0;) u = u * EInt{2, 0};
    for (int k = ed(rng); k-- > 0;) u = u * EInt{-1, 2};
    u = u.times_unit(ed(rng));
    const auto c2 = class_index(decompose_local(u, Place::two));
    const auto c3 = class_index(decompose_local(u, Place::three));
    CHECK(uset.count({c2, c3}) == 1);
  }

  // Representative classes + unit classes hit every local-class pair once:
  // the column assembly of the transition matrix depends on this bijection.
  std::vector<char> seen(144 * 324, 0);
  int hits = 0;
  for (int j = 1; j <= 216; ++j) {
    const EInt& rep = T.representative(j);
    const LocalClass r2 = decompose_local(rep, Place::two);
    const LocalClass r3 = decompose_local(rep, Place::three);
    for (const auto& [u2, u3] : U) {
      const int i2 = class_index(class_add(r2, class_from_index(Place::two, u2)));
      const int i3 = class_index(class_add(r3, class_from_index(Place::three, u3)));
      const int code = i2 * 324 + i3;
      if (!seen[code]) {
        seen[code] = 1;
        ++hits;
      }
    }
  }
  CHECK(hits == 144 * 324);
}
