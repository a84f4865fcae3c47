#include "theta6/dirichlet.hpp"

#include <stdexcept>

namespace theta6 {

namespace {

/** Exact sixth root of m, or 0 when m is not a perfect sixth power. */
mpz_class sixth_root(const mpz_class& m) {
  if (m <= 0) throw std::invalid_argument("sixth_root: argument must be positive");
  mpz_class r;
  int exact = mpz_root(r.get_mpz_t(), m.get_mpz_t(), 6);
  return exact ? r : mpz_class(0);
}

}  // namespace

mpz_class ideal_count(const mpz_class& k) {
  if (k <= 0) throw std::invalid_argument("ideal_count: argument must be positive");
  mpz_class count = 1;
  mpz_class rest = k;
  for (mpz_class p = 2; p * p <= rest; ++p) {
    if (rest % p != 0) continue;
    int e = 0;
    while (rest % p == 0) { rest /= p; ++e; }
    if (p == 3) continue;                       // one ramified ideal at each level
    if (p % 3 == 1) count *= e + 1;             // split: e+1 ways to distribute
    else if (e % 2 != 0) return 0;              // inert: only even powers have ideals
  }
  if (rest > 1) {
    if (rest % 3 == 2) return 0;  // a single inert prime to the first power
    if (rest % 3 == 1) count *= 2;
  }
  return count;
}

mpq_class coeff_a(const mpz_class& m) {
  mpz_class k = sixth_root(m);
  if (k == 0 || gcd(k, mpz_class(6)) != 1) return 0;
  mpq_class q(ideal_count(k), k);
  q.canonicalize();
  return q;
}

mpq_class coeff_b(const mpz_class& m) {
  mpz_class k = sixth_root(m);
  if (k == 0) return 0;
  mpq_class q(ideal_count(k), k);
  q.canonicalize();
  return q;
}

}  // namespace theta6
