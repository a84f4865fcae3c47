#pragma once

#include "theta6/eisenstein.hpp"

namespace theta6 {

/**
 * Sixth-order power residue symbol (a/pi) at a prime pi coprime to 6, as an
 * exponent j mod 6: a^((N(pi)-1)/6) = w^j mod pi by the generalized Euler
 * criterion.  pi may be split (prime norm) or inert (a rational prime
 * congruent to 2 mod 3).  Rejects a sharing a factor with pi.
 */
int residue_symbol_exp(const EInt& a, const EInt& pi);

/**
 * Generalized Legendre symbol (a/b) for b coprime to 6 and gcd(a,b)=1, as an
 * exponent mod 6: the product of residue_symbol_exp over the prime
 * factorization of b (with multiplicity).  Unit b gives the empty product 0.
 * The symbol depends only on the ideal (b), not on the chosen associate.
 */
int legendre_exp(const EInt& a, const EInt& b);

/**
 * Tame Hilbert symbol (x, y) at a prime pi away from 2 and 3, as an exponent
 * mod 6.  For x = pi^a u, y = pi^b t with u, t coprime to pi this is the
 * classical tame formula
 *   exponent = a*b*sym(-1) + b*sym(u) - a*sym(t),
 * i.e. the symbol of (-1)^(ab) x^b y^(-a) reduced mod pi.  It is antisymmetric,
 * and the product over all primes dividing x or y equals the S-pairing
 * hilbert_exp_S(x, y); the cross-validation suite re-derives the hard-coded
 * pairing matrices from this identity.
 */
int tame_hilbert_exp(const EInt& x, const EInt& y, const EInt& pi);

}  // namespace theta6
