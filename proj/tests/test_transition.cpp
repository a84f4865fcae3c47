#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "doctest.h"
#include "theta6/bigfloat.hpp"
#include "theta6/cosets.hpp"
#include "theta6/cyclo.hpp"
#include "theta6/eisenstein.hpp"
#include "theta6/localfields.hpp"
#include "theta6/transition.hpp"

using namespace theta6;

namespace {

double diff_abs(const BigComplex& a, const BigComplex& b) { return (a - b).abs().to_double(); }

CycloExact z6(long t) { return CycloExact::zeta_pow(12 * t); }

bool in_window(const LaurentVW& p) {
  int lo1, hi1, lo2, hi2;
  if (!p.support(lo1, hi1, lo2, hi2)) return true;
  return lo1 >= -5 && hi1 <= 4 && lo2 >= -3 && hi2 <= 5;
}

}  // namespace

TEST_CASE("local gamma factors: conductors, windows, and root numbers") {
  // Place two: 144 classes, six of them unramified, conductors at most 3.
  int unram2 = 0;
  for (int y = 0; y < class_count(Place::two); ++y) {
    int f = conductor_class(Place::two, y);
    REQUIRE(f >= 0);
    REQUIRE(f <= 3);
    if (f == 0) ++unram2;
    LaurentVW g = tate_gamma_class(y, Place::two);  // fatal inside if the root number is off
    CHECK(g.den() == 64);
    int lo1, hi1, lo2, hi2;
    REQUIRE(g.support(lo1, hi1, lo2, hi2));
    CHECK(lo1 == 0);
    CHECK(hi1 == 0);  // purely a W-series
    CHECK(lo2 >= -3);
    CHECK(hi2 <= 5);
    if (f == 0) {
      CHECK(lo2 == -1);
      CHECK(hi2 == 5);
      CHECK(g.terms().size() == 7);
    } else {
      CHECK(lo2 == -f);
      CHECK(hi2 == 6 - f);
      CHECK(g.terms().size() == 2);
    }
  }
  CHECK(unram2 == 6);

  // Place three: 324 classes, six unramified, conductors at most 4.
  int unram3 = 0;
  for (int y = 0; y < class_count(Place::three); ++y) {
    int f = conductor_class(Place::three, y);
    REQUIRE(f >= 0);
    REQUIRE(f <= 4);
    if (f == 0) ++unram3;
    LaurentVW g = tate_gamma_class(y, Place::three);
    CHECK(g.den() == 243);
    int lo1, hi1, lo2, hi2;
    REQUIRE(g.support(lo1, hi1, lo2, hi2));
    CHECK(lo2 == 0);
    CHECK(hi2 == 0);  // purely a V-series
    CHECK(lo1 >= -5);
    CHECK(hi1 <= 4);
    if (f == 0) {
      CHECK(lo1 == -2);
      CHECK(hi1 == 4);
      CHECK(g.terms().size() == 7);
    } else {
      CHECK(lo1 == -1 - f);
      CHECK(hi1 == 5 - f);
      CHECK(g.terms().size() == 2);
    }
  }
  CHECK(unram3 == 6);
}

TEST_CASE("gamma factors agree with the independent numeric evaluation") {
  std::vector<BigReal> points;
  points.push_back(BigReal(1) / BigReal(6));
  points.push_back(BigReal(31) / BigReal(100));
  for (Place v : {Place::two, Place::three}) {
    long q = local_data(v).q;
    for (int y = 0; y < class_count(v); ++y) {
      LaurentVW g = tate_gamma_class(y, v);
      for (const BigReal& s : points) {
        // The exact table carries the clearing prefactor 1 - q^{-6s}.
        BigReal pref = BigReal(1) - exp(-(BigReal(6) * s * log(BigReal(q))));
        BigComplex exact = g.eval(s);
        BigComplex expect = pref * tate_gamma_numeric(y, v, s);
        CHECK(diff_abs(exact, expect) < 1e-40);
      }
    }
  }
}

TEST_CASE("unramified gamma factors satisfy the exact rational identity") {
  // Multiplying the cleared factor back by (1 - zeta6^u X) must reproduce the
  // displayed rational form of the unramified gamma factor exactly.
  const int pi2 = class_index(decompose_local(local_data(Place::two).uniformizer, Place::two));
  for (int y = 0; y < class_count(Place::two); ++y) {
    if (conductor_class(Place::two, y) != 0) continue;
    long u = pairing_exp(Place::two, y, pi2);
    LaurentVW lhs = tate_gamma_class(y, Place::two).scaled(CycloExact::integer(4));
    LaurentVW fac;
    fac.add_term(0, 0, CycloExact::one());
    fac.add_term(0, 1, -z6(u));
    lhs = lhs * fac;
    // (1 - W^6) (4 - zeta6^{-u} W^{-1})
    LaurentVW rhs;
    rhs.add_term(0, 0, CycloExact::integer(4));
    rhs.add_term(0, -1, -z6(-u));
    rhs.add_term(0, 6, CycloExact::integer(-4));
    rhs.add_term(0, 5, z6(-u));
    CHECK(lhs == rhs);
  }
  const int pi3 = class_index(decompose_local(local_data(Place::three).uniformizer, Place::three));
  for (int y = 0; y < class_count(Place::three); ++y) {
    if (conductor_class(Place::three, y) != 0) continue;
    long u = pairing_exp(Place::three, y, pi3);
    LaurentVW lhs = tate_gamma_class(y, Place::three).scaled(CycloExact::sqrt3().scaled(3));
    LaurentVW fac;
    fac.add_term(0, 0, CycloExact::one());
    fac.add_term(1, 0, -z6(u));
    lhs = lhs * fac;
    // (1 - V^6) (3 zeta6^{-u} V^{-1} - zeta6^{-2u} V^{-2})
    LaurentVW rhs;
    rhs.add_term(-1, 0, z6(-u).scaled(3));
    rhs.add_term(-2, 0, -z6(-2 * u));
    rhs.add_term(5, 0, z6(-u).scaled(-3));
    rhs.add_term(4, 0, z6(-2 * u));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("ramified gamma coefficients carry the exact Gauss modulus") {
  for (Place v : {Place::two, Place::three}) {
    for (int y = 0; y < class_count(v); ++y) {
      int f = conductor_class(v, y);
      if (f == 0) continue;
      LaurentVW g = tate_gamma_class(y, v);
      REQUIRE(g.terms().size() == 2);
      // Terms sit at the conductor-shifted edges and are negatives of each other.
      const auto& lowKey = g.terms().begin()->first;
      const CycloExact& low = g.terms().begin()->second;
      const CycloExact& high = std::next(g.terms().begin())->second;
      CHECK(high == -low);
      if (v == Place::two) {
        CHECK(lowKey == std::make_pair(0, -f));
        long long m = 1;  // |coef|^2 = (4^{3-f})^2 * 4^f = 4^{6-f}
        for (int t = 0; t < 6 - f; ++t) m *= 4;
        CHECK(low * low.conj() == CycloExact::integer(m));
      } else {
        CHECK(lowKey == std::make_pair(-1 - f, 0));
        long long m = 1;  // |coef|^2 = (3^{4-f})^2 * 3 * 3^f = 3^{9-f}
        for (int t = 0; t < 9 - f; ++t) m *= 3;
        CHECK(low * low.conj() == CycloExact::integer(m));
      }
    }
  }
}

TEST_CASE("transition entries match the numeric mirror") {
  TransitionContext ctx(EInt(1));
  CHECK(ctx.sign() == -1);
  BigReal s0 = BigReal(1) / BigReal(6);
  const std::pair<int, int> picks[] = {{1, 1}, {2, 5}, {17, 100}, {57, 31}, {216, 216}};
  for (const auto& [i, j] : picks) {
    LaurentVW e = ctx.entry(i, j);
    CHECK(in_window(e));
    BigComplex exact = e.eval(s0);
    BigComplex mirror = ctx.entry_numeric(i, j, s0);
    CHECK(diff_abs(exact, mirror) <= 1e-20 * (1.0 + mirror.abs().to_double()));
  }
  // The reflected entry is the same function evaluated at -s.
  BigReal s1 = BigReal(31) / BigReal(100);
  LaurentVW em = ctx.entry(2, 5, true);
  CHECK(diff_abs(em.eval(s1), ctx.entry_numeric(2, 5, -s1)) <= 1e-25);

  CHECK_THROWS_AS(TransitionContext(EInt(2)), std::invalid_argument);
  CHECK_THROWS_AS(TransitionContext(EInt(-1, 2)), std::invalid_argument);  // the ramified prime itself
  CHECK_THROWS_AS(ctx.entry(0, 5), std::invalid_argument);
  CHECK_THROWS_AS(ctx.entry(1, 217), std::invalid_argument);
}

TEST_CASE("column sums at the trivial class: integrality, window, fast path, cache") {
  EInt one(1);
  ColumnSums cs = column_sums(one);  // integrality and window violations are fatal inside
  CHECK(cs.r_class == local_class_pair(one));
  CHECK(cs.sign == -1);

  const CosetTable& tab = coset_table();
  int jid = tab.identity_index();
  CHECK(tab.representative(jid) == EInt(1));
  CHECK(!cs.cols[jid - 1].is_zero());

  int nonzero = 0;
  long long worst_den = 1;
  for (int j = 1; j <= 216; ++j) {
    const LaurentVW& col = cs.cols[j - 1];
    CHECK(col.den() >= 1);
    CHECK(216 % col.den() == 0);  // lowest-terms denominator divides 216
    worst_den = std::max(worst_den, col.den());
    CHECK(in_window(col));
    for (const auto& kv : col.terms()) CHECK(kv.second.in_subring_36());
    if (!col.is_zero()) ++nonzero;
  }
  // A priori the assembly only bounds the denominator by 6^6 * 64 * 243; the
  // sharp uniform value is part of the contract.
  CHECK(worst_den == 216);
  MESSAGE("nonzero columns: ", nonzero, " of 216");
  CHECK(nonzero > 0);

  // Fast path == plain sum of entries, added in reverse order.
  TransitionContext ctx(one);
  for (int j : {jid, 57}) {
    LaurentVW direct;
    for (int i = 216; i >= 1; --i) direct += ctx.entry(i, j);
    direct.normalize();
    CHECK(cs.cols[j - 1] == direct);
  }

  // Serialization round trip; the persisted numerators are 216 * c_{j,w},
  // exact integers of the index-36 subring.
  std::stringstream ss;
  save_column_sums(ss, cs);
  ColumnSums back = load_column_sums(ss);
  CHECK(back == cs);
  CHECK(tmat_cache_filename(cs.r_class, cs.sign).rfind("theta6-tmat-v2-", 0) == 0);

  std::stringstream bad("theta6-tmat v1\n");
  CHECK_THROWS_AS(load_column_sums(bad), std::runtime_error);
}

TEST_CASE("column sums depend only on the class of r") {
  EInt seven(7);
  EInt lam(1, 3);  // 1 + 3w, norm 13, coprime to six
  EInt r2 = seven * pow_eint(lam, 6);
  TransitionContext a(seven), b(r2);
  CHECK(a.r_class() == b.r_class());
  for (int j : {1, 57, 216}) CHECK(a.column_sum(j) == b.column_sum(j));
}

TEST_CASE("the transition matrix times its reflection is diagonal on a sample") {
  CHECK(diagonal_product_check(EInt(1), {1, 57}));
}

TEST_CASE("T(s)T(-s) equals the exact scalar forced by the functional equation") {
  // Applying the functional equation twice pins the product completely:
  //   T(r,s) T(r,-s) = (10 - 3V^6 - 3V^-6)(17 - 4W^6 - 4W^-6) / 15552 * Id,
  // independent of r.  This is the strongest self-check available: it fixes
  // the absolute normalization of every gamma factor and of the 1/6^6
  // prefactor, not just the shape of the matrix.
  LaurentVW f3;  // 10 - 3V^6 - 3V^-6
  f3.add_term(-6, 0, CycloExact::integer(-3));
  f3.add_term(0, 0, CycloExact::integer(10));
  f3.add_term(6, 0, CycloExact::integer(-3));
  LaurentVW f2;  // (17 - 4W^6 - 4W^-6) / 15552
  f2.set_den(15552);
  f2.add_term(0, -6, CycloExact::integer(-4));
  f2.add_term(0, 0, CycloExact::integer(17));
  f2.add_term(0, 6, CycloExact::integer(-4));
  const LaurentVW expected = f3 * f2;

  TransitionContext ctx(EInt(1));
  for (int i : {1, 57}) {
    LaurentVW diag;
    for (int k = 1; k <= 216; ++k) diag += ctx.entry(i, k) * ctx.entry(k, i, true);
    CHECK(diag == expected);
  }
  // Same scalar at a different class of r.
  TransitionContext ctx7(EInt(2, 1));
  LaurentVW diag7;
  for (int k = 1; k <= 216; ++k) diag7 += ctx7.entry(1, k) * ctx7.entry(k, 1, true);
  CHECK(diag7 == expected);
}

TEST_CASE("explicit-generator entries: table consistency and representative probe") {
  TransitionContext ctx(EInt(1));
  const CosetTable& tab = coset_table();
  const std::pair<int, int> picks[] = {{2, 5}, {57, 31}};
  for (const auto& [i, j] : picks)
    CHECK(ctx.entry_with(tab.representative(i), tab.representative(j)) == ctx.entry(i, j));

  // Probe: replace generators by their zeta6 multiples (same coset; a
  // different member of it when the class of zeta6 is nontrivial) and see
  // whether the column sum is sensitive to that choice.
  auto zcls = local_class_pair(EInt(0, 1));
  MESSAGE("class pair of zeta6: (", zcls.first, ", ", zcls.second, ")");
  if (zcls != std::make_pair(0, 0)) {
    int j = 57;
    LaurentVW col = ctx.column_sum(j);
    LaurentVW col_alt_j;
    for (int i = 1; i <= 216; ++i)
      col_alt_j += ctx.entry_with(tab.representative(i), tab.representative(j).times_unit(1));
    col_alt_j.normalize();
    LaurentVW col_alt_rows;
    for (int i = 1; i <= 216; ++i)
      col_alt_rows += ctx.entry_with(tab.representative(i).times_unit(1), tab.representative(j));
    col_alt_rows.normalize();
    MESSAGE("column generator replaced: ",
            std::string((col_alt_j == col) ? "column sum unchanged" : "column sum changes"));
    MESSAGE("row generators replaced:   ",
            std::string((col_alt_rows == col) ? "column sum unchanged" : "column sum changes"));
  }
}
