#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "theta6/bigfloat.hpp"
#include "theta6/dirichlet.hpp"
#include "theta6/eisenstein.hpp"

#include <map>
#include <set>
#include <string>

using namespace theta6;

namespace {

/**
 * Independent oracle: count ideals of norm k by enumerating ring elements of
 * that norm and grouping them into associate classes (the ring is principal,
 * so ideals of norm k correspond to associate classes of elements of norm k).
 */
mpz_class ideal_count_oracle(long k) {
  std::set<std::string> classes;
  // |a + b w|^2 = a^2 + ab + b^2 = k forces |a|, |b| <= 2 sqrt(k).
  long bound = 2;
  while (bound * bound < 4 * k) ++bound;
  for (long a = -bound; a <= bound; ++a)
    for (long b = -bound; b <= bound; ++b) {
      EInt x{a, b};
      if (x.norm() == k) classes.insert(canonical_associate(x).str());
    }
  return mpz_class(static_cast<long>(classes.size()));
}

}  // namespace

TEST_CASE("ideal counts match the enumeration oracle") {
  CHECK(ideal_count(1) == 1);
  CHECK(ideal_count(7) == 2);
  CHECK(ideal_count(2) == 0);
  CHECK(ideal_count(4) == 1);
  for (long k = 1; k <= 400; ++k) CHECK(ideal_count(k) == ideal_count_oracle(k));
  // Spot checks of multiplicativity on coprime arguments.
  CHECK(ideal_count(7 * 13) == ideal_count(7) * ideal_count(13));
  CHECK(ideal_count(49) == 3);
  CHECK(ideal_count(3 * 3 * 7) == 2);
  CHECK_THROWS_AS(ideal_count(0), std::invalid_argument);
}

TEST_CASE("coefficient support and values") {
  CHECK(coeff_a(1) == 1);
  CHECK(coeff_b(1) == 1);
  mpz_class p7_6;
  mpz_ui_pow_ui(p7_6.get_mpz_t(), 7, 6);
  CHECK(coeff_a(p7_6) == mpq_class(2, 7));
  CHECK(coeff_b(p7_6) == mpq_class(2, 7));
  CHECK(coeff_a(64) == 0);   // 2^6: even part excluded from a
  CHECK(coeff_b(64) == 0);   // I(2) = 0
  CHECK(coeff_a(729) == 0);  // 3^6 excluded from a
  CHECK(coeff_b(729) == mpq_class(1, 3));
  // Off the sixth powers both vanish.
  for (long m : {2L, 5L, 100L, 117648L, 117650L}) {
    CHECK(coeff_a(m) == 0);
    CHECK(coeff_b(m) == 0);
  }
  // Agreement on sixth powers of integers coprime to 6.
  for (long k = 1; k <= 60; ++k) {
    mpz_class m;
    mpz_ui_pow_ui(m.get_mpz_t(), static_cast<unsigned long>(k), 6);
    if (gcd(mpz_class(k), mpz_class(6)) == 1) {
      CHECK(coeff_a(m) == coeff_b(m));
      mpq_class expected(ideal_count(k), k);
      expected.canonicalize();
      CHECK(coeff_a(m) == expected);
    } else {
      CHECK(coeff_a(m) == 0);
    }
  }
}

TEST_CASE("partial sums reproduce the Dedekind zeta Euler product") {
  // sum_m b(m) m^{-1} = sum_k I(k) k^{-7}; compare the partial sum over
  // k <= 100 with the Euler product over p <= 2000 (both tails < 1e-9).
  BigReal sum(0);
  for (long k = 1; k <= 100; ++k) {
    mpz_class m;
    mpz_ui_pow_ui(m.get_mpz_t(), static_cast<unsigned long>(k), 6);
    mpq_class b = coeff_b(m);
    if (b != 0) sum += BigReal(mpq_class(b.get_num(), b.get_den() * m));
  }
  BigReal prod(1);
  for (long p = 2; p <= 2000; ++p) {
    bool prime = p >= 2;
    for (long d = 2; d * d <= p; ++d)
      if (p % d == 0) { prime = false; break; }
    if (!prime) continue;
    BigReal pp = pow_si(BigReal(p), -7);
    if (p == 3) {
      prod /= BigReal(1) - pp;
    } else if (p % 3 == 1) {
      prod /= (BigReal(1) - pp) * (BigReal(1) - pp);
    } else {
      prod /= BigReal(1) - pp * pp;
    }
  }
  CHECK(abs(sum - prod) < BigReal(1e-9));
}
