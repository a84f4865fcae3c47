#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "theta6/gauss.hpp"
#include "theta6/symbols.hpp"

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace theta6;

namespace {

std::mt19937_64 rng(77003);

EInt random_nonzero(long lo = -40, long hi = 40) {
  std::uniform_int_distribution<long> d(lo, hi);
  for (;;) {
    EInt x{d(rng), d(rng)};
    if (!x.is_zero()) return x;
  }
}

EInt random_coprime_to(const EInt& m, long lo = -40, long hi = 40) {
  for (;;) {
    EInt x = random_nonzero(lo, hi);
    if (gcd(x, m) == EInt{1, 0}) return x;
  }
}

BigComplex z6(long j) {
  j = ((j % 6) + 6) % 6;
  BigReal half = BigReal(1) / BigReal(2);
  BigReal s3h = sqrt(BigReal(3)) / BigReal(2);
  switch (j) {
    case 0: return BigComplex::one(BigReal::working_precision());
    case 1: return {half, s3h};
    case 2: return {-half, s3h};
    case 3: return {BigReal(-1), BigReal(0)};
    case 4: return {-half, -s3h};
    default: return {half, -s3h};
  }
}

bool near(const BigComplex& a, const BigComplex& b, double tol = 1e-40) {
  return (a - b).abs() < BigReal(tol);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("additive character basics") {
  EInt one{1, 0};
  // Unit denominator: the exponential of an integral trace is 1.
  CHECK(near(additive_char(EInt{5, -3}, one), BigComplex::one(200)));
  // Shifting the numerator by a multiple of the denominator changes nothing.
  EInt c{3, 1};  // norm 13
  for (int t = 0; t < 25; ++t) {
    EInt x = random_nonzero(), y = random_nonzero();
    CHECK(near(additive_char(x + y * c, c), additive_char(x, c)));
  }
  // The two sign conventions are complex conjugates of each other.
  for (int t = 0; t < 10; ++t) {
    EInt x = random_nonzero();
    CHECK(near(additive_char(x, c, 1), additive_char(x, c, -1).conj()));
  }
  // Hand value: e(1/7) at sign -1 has angle -2*pi*Tr(7)/49 = -4*pi/7.
  BigReal angle = BigReal(-4) * const_pi(200) / BigReal(7);
  CHECK(near(additive_char(one, EInt{7, 0}), BigComplex::cis(angle)));
  CHECK_THROWS_AS(additive_char(one, EInt{0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(additive_char(one, EInt{2, 0}), std::invalid_argument);
  CHECK_THROWS_AS(additive_char(one, EInt{3, 0}), std::invalid_argument);
}

TEST_CASE("naive sum properties at prime moduli") {
  EInt one{1, 0};
  // Inert closed-form values.
  CHECK(near(gauss_naive(one, 1, EInt{5, 0}), BigComplex{BigReal(-5), BigReal(0)}, 1e-50));
  CHECK(near(gauss_naive(one, 1, EInt{11, 0}), BigComplex{BigReal(11), BigReal(0)}, 1e-50));
  // Character power is taken mod 6.
  EInt pi7 = split_prime_above(7);
  CHECK(near(gauss_naive(one, 7, pi7), gauss_naive(one, 1, pi7)));
  // Twist rule for a coprime index r.
  for (long p : {7L, 13L, 19L}) {
    EInt pi = split_prime_above(p);
    for (int t = 0; t < 5; ++t) {
      EInt r = random_coprime_to(pi);
      CHECK(near(gauss_naive(r, 1, pi),
                 z6(-residue_symbol_exp(r, pi)) * gauss_naive(one, 1, pi)));
    }
  }
  // Magnitude sqrt(norm) at a prime modulus with coprime index.
  for (const EInt& pi : {pi7, split_prime_above(13), EInt{5, 0}}) {
    BigReal m = gauss_naive(random_coprime_to(pi), 1, pi).abs();
    CHECK(abs(m * m - BigReal(pi.norm())) < BigReal(1e-40));
  }
  // Coprime index at a square modulus: the sum vanishes.
  CHECK(gauss_naive(one, 1, pi7 * pi7).abs() < BigReal(1e-40));
  // The two sign conventions pair up under conjugation and k -> 6-k.
  for (int k = 1; k <= 5; ++k)
    CHECK(near(gauss_naive(one, k, pi7, 1), gauss_naive(one, 6 - k, pi7, -1).conj()));
}

TEST_CASE("theta route and relations match the oracle at small split primes") {
  EInt one{1, 0};
  for (long p : {7L, 13L, 19L, 31L, 37L, 43L}) {
    EInt pi = split_prime_above(p);
    for (int k = 1; k <= 5; ++k)
      CHECK(near(gauss_prime(pi, k), gauss_naive(one, k, pi)));
    // Non-canonical associates are handled through their own trace.
    CHECK(near(gauss_prime(pi.times_unit(1), 1), gauss_naive(one, 1, pi.times_unit(1))));
    // Plus-sign convention.
    CHECK(near(gauss_prime(pi, 1, 1), gauss_naive(one, 1, pi, 1)));
    CHECK(near(gauss_prime(pi, 2, 1), gauss_naive(one, 2, pi, 1)));
  }
  // Documented spot value: p = 7 sextic agrees with the direct sum.
  CHECK((gauss_split_theta(split_prime_above(7), 1) -
         gauss_naive(one, 1, split_prime_above(7))).abs() < BigReal(1e-10));
  // The snapping diagnostic stays quiet across a range of primes.
  for (const PrimeE& pe : enumerate_primes(500)) {
    if (!pe.split) continue;
    CHECK_NOTHROW(gauss_split_theta(pe.gen, 1));
    CHECK_NOTHROW(gauss_split_theta(pe.gen, 2));
  }
}

TEST_CASE("every split prime below 10^4 agrees with the oracle") {
  EInt one{1, 0};
  for (const PrimeE& pe : enumerate_primes(10000)) {
    if (!pe.split) continue;
    for (int k : {1, 2}) {
      BigComplex fast = gauss_split_theta(pe.gen, k);
      BigComplex naive = gauss_naive(one, k, pe.gen);
      if ((fast - naive).abs() >= BigReal(1e-8)) {
        CAPTURE(pe.gen.str());
        CAPTURE(k);
        CHECK((fast - naive).abs() < BigReal(1e-8));
      }
    }
  }
  CHECK(true);  // reached the end without a reported mismatch
}

TEST_CASE("inert prime values") {
  EInt one{1, 0};
  // Closed form against the direct sum for every k.
  for (long p : {5L, 11L, 17L, 23L}) {
    EInt pr{p, 0};
    for (int k = 1; k <= 5; ++k)
      CHECK(near(gauss_prime(pr, k), gauss_naive(one, k, pr)));
    // Unit associates reduce to the rational modulus with a symbol twist.
    CHECK(near(gauss_prime(EInt{-p, 0}, 1), gauss_naive(one, 1, EInt{-p, 0})));
    CHECK(near(gauss_prime(pr.times_unit(1), 2), gauss_naive(one, 2, pr.times_unit(1))));
  }
  // k = 1 closed form for every inert prime below 100.
  for (const PrimeE& pe : enumerate_primes(10000)) {
    if (pe.split || pe.p >= 100) continue;
    long want = (pe.p % 4 == 3) ? pe.p : -pe.p;
    CHECK(near(gauss_prime(EInt{pe.p, 0}, 1), BigComplex{BigReal(want), BigReal(0)}, 1e-60));
  }
  // Quadratic character: magnitude sqrt(norm) and a 12th root of unity phase.
  for (const EInt& pi : {EInt{5, 0}, EInt{11, 0}, split_prime_above(7), split_prime_above(13)}) {
    BigComplex v = gauss_prime(pi, 3);
    BigReal sn = sqrt(BigReal(pi.norm()));
    CHECK(abs(v.abs() - sn) < BigReal(1e-40));
    BigComplex ph = (BigReal(1) / sn) * v;
    BigComplex ph12 = BigComplex::one(200);
    for (int i = 0; i < 12; ++i) ph12 = ph12 * ph;
    CHECK(near(ph12, BigComplex::one(200)));
  }
}

TEST_CASE("general assembly matches the oracle") {
  GaussTable table = GaussTable::precompute(200);
  EInt one{1, 0};
  EInt pi7 = split_prime_above(7);
  EInt pi13 = split_prime_above(13);
  EInt cp7 = canonical_associate(pi7.conj());

  // Documented reduction: r = pi, c = pi^2 gives norm(pi) * g6(1, eps^2, pi).
  CHECK(near(gauss_general(pi7, pi7 * pi7, table), BigReal(7) * gauss_prime(pi7, 2)));

  std::vector<EInt> moduli = {pi7,
                              pi7 * pi13,
                              pi7 * cp7,
                              pi7 * pi7,
                              pi7 * pi7 * pi7,
                              pi7 * EInt{5, 0},
                              (pi7 * pi13).times_unit(3)};
  std::vector<EInt> indices = {one,     pi7,        pi7 * pi7, pi13,
                               EInt{5, 0}, EInt{-3, 7}, pi7 * pi13};
  for (const EInt& c : moduli)
    for (const EInt& r : indices) {
      CAPTURE(c.str());
      CAPTURE(r.str());
      CHECK(near(gauss_general(r, c, table), gauss_naive(r, 1, c), 1e-38));
    }

  // Unit modulus and zero index.
  CHECK(near(gauss_general(pi7, EInt{0, 1}, table), BigComplex::one(200)));
  CHECK(gauss_general(EInt{0, 0}, pi7, table).abs() < BigReal(1e-60));

  // A prime beyond the table bound is reported, not silently mishandled.
  CHECK_THROWS_AS(gauss_general(one, split_prime_above(211), table), std::out_of_range);
}

TEST_CASE("sixth power modulus reduces to a Ramanujan-type sum") {
  GaussTable table = GaussTable::precompute(20);
  EInt pi7 = split_prime_above(7);
  EInt c = pow_eint(pi7, 6);
  // r = pi^5: the trivial local character leaves -norm^5.
  EInt r5 = pow_eint(pi7, 5);
  CHECK(near(gauss_general(r5, c, table), gauss_naive(r5, 1, c), 1e-30));
  CHECK(near(gauss_general(r5, c, table), BigComplex{BigReal(-16807), BigReal(0)}, 1e-30));
  // r = pi^6: the full unit count phi(pi^6).
  EInt r6 = pow_eint(pi7, 6);
  CHECK(near(gauss_general(r6, c, table), gauss_naive(r6, 1, c), 1e-30));
  CHECK(near(gauss_general(r6, c, table), BigComplex{BigReal(16807L * 6), BigReal(0)}, 1e-30));
  // r coprime to pi: depth mismatch, the sum vanishes.
  CHECK(gauss_general(split_prime_above(13), c, table).abs() < BigReal(1e-60));
}

TEST_CASE("multiplicativity across squarefree moduli") {
  EInt one{1, 0};
  std::vector<PrimeE> ps = enumerate_primes(285);
  long pairs = 0;
  for (std::size_t i = 0; i < ps.size(); ++i)
    for (std::size_t j = i + 1; j < ps.size(); ++j) {
      if (ps[i].norm * ps[j].norm >= 2000) continue;
      const EInt& c1 = ps[i].gen;
      const EInt& c2 = ps[j].gen;
      EInt c = c1 * c2;
      EInt r = random_nonzero();
      BigComplex lhs = gauss_naive(r, 1, c);
      BigComplex rhs = z6(legendre_exp(c1, c2) + legendre_exp(c2, c1)) *
                       gauss_naive(r, 1, c1) * gauss_naive(r, 1, c2);
      CAPTURE(c1.str());
      CAPTURE(c2.str());
      CAPTURE(r.str());
      CHECK(near(lhs, rhs, 1e-35));
      if (gcd(r, c) == one) {
        BigReal m = lhs.abs();
        CHECK(abs(m * m - BigReal(c.norm())) < BigReal(1e-30));
      }
      ++pairs;
    }
  CHECK(pairs > 100);
  // One triple product for the three-factor cross twists.
  EInt g1 = split_prime_above(7), g2 = split_prime_above(13), g3 = split_prime_above(19);
  EInt r = random_nonzero();
  long tw = legendre_exp(g1, g2) + legendre_exp(g2, g1) + legendre_exp(g1, g3) +
            legendre_exp(g3, g1) + legendre_exp(g2, g3) + legendre_exp(g3, g2);
  CHECK(near(gauss_naive(r, 1, g1 * g2 * g3),
             z6(tw) * gauss_naive(r, 1, g1) * gauss_naive(r, 1, g2) * gauss_naive(r, 1, g3),
             1e-33));
}

TEST_CASE("cache round trip and conjugate shortcut") {
  GaussTable table = GaussTable::precompute(1000);
  CHECK(table.size() == enumerate_primes(1000).size());
  CHECK(table.bound() == 1000);
  CHECK(table.sign() == kAdditiveSign);

  std::string path = "gauss_cache_test.txt";
  table.save(path);
  GaussTable loaded = GaussTable::load(path);
  CHECK(loaded.size() == table.size());
  for (const GaussRecord* rec : table.sorted()) {
    const GaussRecord* got = loaded.find(rec->prime);
    REQUIRE(got != nullptr);
    for (const auto& [k, v] : rec->values) {
      const BigComplex& w = got->values.at(k);
      CHECK(mpfr_equal_p(v.re.get(), w.re.get()));
      CHECK(mpfr_equal_p(v.im.get(), w.im.get()));
    }
  }
  // Resaving the loaded table reproduces the file byte for byte.
  std::string path2 = "gauss_cache_test2.txt";
  loaded.save(path2);
  CHECK(slurp(path) == slurp(path2));
  std::remove(path.c_str());
  std::remove(path2.c_str());

  // A header with a different precision is rejected.
  std::string bad = "gauss_cache_bad.txt";
  {
    std::ofstream out(bad);
    out << "theta6-gauss v1 precision=100 sign=-1\n";
  }
  CHECK_THROWS_AS(GaussTable::load(bad), std::runtime_error);
  std::remove(bad.c_str());

  // Conjugate-partner records agree with direct evaluation, both ways.
  EInt one{1, 0};
  for (long p : {7L, 13L}) {
    EInt pi = split_prime_above(p);
    EInt cv = canonical_associate(pi.conj());
    for (const EInt& gen : {pi, cv}) {
      const GaussRecord* rec = table.find(gen);
      REQUIRE(rec != nullptr);
      for (int k = 1; k <= 5; ++k) {
        CHECK(near(rec->values.at(k), gauss_prime(gen, k), 1e-45));
        CHECK(near(rec->values.at(k), gauss_naive(one, k, gen), 1e-45));
      }
    }
  }
}
