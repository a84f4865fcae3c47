#include "theta6/symbols.hpp"

#include <stdexcept>

namespace theta6 {

namespace {

// x^e in O/(p) for an inert rational prime p, with coordinate reduction.
EInt powmod_inert(EInt x, mpz_class e, const mpz_class& p) {
  auto red = [&p](EInt v) {
    v.a %= p; if (v.a < 0) v.a += p;
    v.b %= p; if (v.b < 0) v.b += p;
    return v;
  };
  EInt acc{1, 0};
  x = red(x);
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) acc = red(acc * x);
    x = red(x * x);
    e >>= 1;
  }
  return acc;
}

}  // namespace

int residue_symbol_exp(const EInt& a, const EInt& pi) {
  mpz_class n = pi.norm();
  if (n % 6 != 1)
    throw std::invalid_argument("residue_symbol_exp: modulus not a prime coprime to 6");
  if (mpz_probab_prime_p(n.get_mpz_t(), 30)) {
    // Split prime: residue field F_p, map through w -> u and exponentiate.
    const mpz_class& p = n;
    mpz_class r = to_residue_mod_split(a, pi, p);
    if (r == 0) throw std::invalid_argument("residue_symbol_exp: arguments share a factor");
    mpz_class e = (p - 1) / 6;
    mpz_class t;
    mpz_powm(t.get_mpz_t(), r.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
    mpz_class u = omega_residue_mod_split(pi, p);
    mpz_class zj = 1;
    for (int j = 0; j < 6; ++j) {
      if (t == zj) return j;
      zj = (zj * u) % p;
    }
    throw std::logic_error("residue_symbol_exp: Euler value is not a sixth root of unity");
  }
  // Inert prime: norm p^2, residue field F_{p^2} on coordinate pairs.
  mpz_class p;
  if (!mpz_perfect_square_p(n.get_mpz_t()))
    throw std::invalid_argument("residue_symbol_exp: modulus is not prime");
  mpz_sqrt(p.get_mpz_t(), n.get_mpz_t());
  if (!mpz_probab_prime_p(p.get_mpz_t(), 30) || p % 3 != 2 || !divides(pi, EInt{p, 0}))
    throw std::invalid_argument("residue_symbol_exp: modulus is not prime");
  EInt r{a.a % p, a.b % p};
  if (r.norm() % p == 0) throw std::invalid_argument("residue_symbol_exp: arguments share a factor");
  mpz_class e = (p * p - 1) / 6;
  EInt t = powmod_inert(r, e, p);
  for (int j = 0; j < 6; ++j) {
    EInt zj = unit_power(j);
    zj.a %= p; if (zj.a < 0) zj.a += p;
    zj.b %= p; if (zj.b < 0) zj.b += p;
    if (t == zj) return j;
  }
  throw std::logic_error("residue_symbol_exp: Euler value is not a sixth root of unity");
}

int legendre_exp(const EInt& a, const EInt& b) {
  if (b.is_zero()) throw std::invalid_argument("legendre_exp: zero denominator");
  if (!coprime_to_six(b)) throw std::invalid_argument("legendre_exp: denominator not coprime to 6");
  if (gcd(a, b) != EInt{1, 0}) throw std::invalid_argument("legendre_exp: arguments share a factor");
  int exp = 0;
  for (const auto& [q, k] : factor_eint(b)) exp += k * residue_symbol_exp(a, q);
  return ((exp % 6) + 6) % 6;
}

int tame_hilbert_exp(const EInt& x, const EInt& y, const EInt& pi) {
  int a = valuation(x, pi), b = valuation(y, pi);
  EInt u = divexact(x, pow_eint(pi, static_cast<unsigned long>(a)));
  EInt t = divexact(y, pow_eint(pi, static_cast<unsigned long>(b)));
  int e = a * b * residue_symbol_exp(EInt{-1, 0}, pi);  // the (-1)^(ab) factor
  if (b != 0) e += b * residue_symbol_exp(u, pi);
  if (a != 0) e -= a * residue_symbol_exp(t, pi);
  return ((e % 6) + 6) % 6;
}

}  // namespace theta6
