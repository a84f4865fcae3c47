#include "theta6/specialfn.hpp"

#include <mutex>
#include <stdexcept>
#include <vector>

namespace theta6 {

namespace {

mpfr_prec_t wp() { return BigReal::working_precision(); }

// Inner series term count at which the non-convergence alarm fires.
constexpr long kMaxInnerTerms = 10000;
// Exact entries cached per k; beyond this the quotient is advanced in
// floating point so a runaway argument cannot exhaust memory first.
constexpr long kTableCap = 2048;
constexpr long kPrefill = 600;

// Exact numerator/denominator of the step Q(k,i) -> Q(k,i+1), namely
// (k+6i)^2 / ((k+6i)(k+6i+1)...(k+6i+5)) with i the index of the known entry.
void step_parts(int k, long i, mpz_class& num, mpz_class& den) {
  const long a = k + 6 * i;
  num = mpz_class(a) * a;
  den = 1;
  for (long m = 0; m < 6; ++m) den *= mpz_class(a + m);
}

class QuotientTable {
 public:
  QuotientTable() {
    for (int k = 1; k <= 5; ++k) ensure(k, kPrefill);
  }

  mpq_class at(int k, long i) {
    if (k < 1 || k > 5) throw std::invalid_argument("quotient index k must be in 1..5");
    if (i < 1) throw std::invalid_argument("quotient index i must be positive");
    std::scoped_lock lock(mu_);
    if (i <= kTableCap) {
      ensure(k, i);
      return cols_[k - 1][static_cast<std::size_t>(i - 1)];
    }
    if (i > 100000) throw std::invalid_argument("quotient index i out of supported range");
    ensure(k, kTableCap);
    mpq_class q = cols_[k - 1].back();
    mpz_class num, den;
    for (long j = kTableCap; j < i; ++j) {
      step_parts(k, j, num, den);
      mpq_class step(num, den);
      step.canonicalize();
      q *= step;
    }
    return q;
  }

 private:
  // Caller holds the lock.
  void ensure(int k, long upto) {
    auto& col = cols_[k - 1];
    if (col.empty()) {
      mpz_class f;
      mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(k + 5));
      col.emplace_back(mpz_class(1), f);  // Q(k,1) = 1/(k+5)!
    }
    mpz_class num, den;
    while (static_cast<long>(col.size()) < upto) {
      const long i = static_cast<long>(col.size());  // extend Q(k,i) -> Q(k,i+1)
      step_parts(k, i, num, den);
      mpq_class step(num, den);
      step.canonicalize();
      col.push_back(col.back() * step);
    }
  }

  std::mutex mu_;
  std::array<std::vector<mpq_class>, 5> cols_;
};

QuotientTable& table() {
  static QuotientTable t;
  return t;
}

// 1/(k*k!) + sum_{i>=1} (x/36)^i Q(k,i), truncated at the cutoff.
BigReal inner_sum(int k, const BigReal& x, const BigReal& cutoff) {
  mpz_class kfac;
  mpz_fac_ui(kfac.get_mpz_t(), static_cast<unsigned long>(k));
  mpz_class kden = mpz_class(k) * kfac;
  BigReal sum{BigReal(mpq_class(mpz_class(1), kden))};

  const BigReal ratio = x / BigReal(36);
  BigReal pw(1);
  BigReal qf;  // floating continuation beyond the exact table
  mpz_class num, den;
  for (long i = 1; i <= kMaxInnerTerms; ++i) {
    pw *= ratio;
    BigReal q;
    if (i <= kTableCap) {
      q = BigReal(table().at(k, i));
      if (i == kTableCap) qf = q;
    } else {
      step_parts(k, i - 1, num, den);
      qf *= BigReal(num) / BigReal(den);
      q = qf;
    }
    BigReal summand = q * pw;
    sum += summand;
    if (summand < cutoff) return sum;
  }
  throw std::runtime_error("kernel series failed to reach the cutoff within 10000 terms");
}

}  // namespace

BigReal f2_value(const BigReal& x) {
  if (!(x > BigReal(0))) throw std::domain_error("f2_value requires x > 0");
  const BigReal t = rootn(x, 6);
  const BigReal two(2);
  return exp(-(sqrt(BigReal(3)) * t) / two) * sin(t / two) / (BigReal(6) * const_pi(wp()));
}

BigReal f1_value(const BigReal& x, const BigReal& cutoff) {
  if (!(x > BigReal(0))) throw std::domain_error("f1_value requires x > 0");
  if (cutoff < BigReal(0)) throw std::domain_error("f1_value requires cutoff >= 0");
  const BigReal z = -rootn(x, 6);
  const GammaConstants gc = gamma_constants();
  BigReal total(0);
  for (int k = 1; k <= 5; ++k) {
    total += -pow_si(z, k) * gc.inv_square[static_cast<std::size_t>(k - 1)] *
             inner_sum(k, x, cutoff);
  }
  return total;
}

BigReal f1_value(const BigReal& x) { return f1_value(x, pow_si(BigReal(10), -20)); }

GammaConstants gamma_constants() {
  const BigReal six(6);
  const BigReal pi = const_pi(wp());
  GammaConstants gc;
  const BigReal g16 = gamma(BigReal(1) / six);
  gc.front = g16 * (g16 / six);  // Gamma(7/6) = (1/6) Gamma(1/6)
  for (int k = 1; k <= 5; ++k) {
    // Reflection: Gamma(-k/6) = -pi / ( sin(pi k/6) * Gamma(1 + k/6) ),
    // with Gamma(1 + k/6) = (k/6) Gamma(k/6).
    const BigReal kk(static_cast<long>(k));
    const BigReal g1k = (kk / six) * gamma(kk / six);
    const BigReal gneg = -pi / (sin(pi * kk / six) * g1k);
    gc.inv_square[static_cast<std::size_t>(k - 1)] = pow_si(gneg, -2);
  }
  return gc;
}

mpq_class f1_quotient(int k, long i) { return table().at(k, i); }

}  // namespace theta6
