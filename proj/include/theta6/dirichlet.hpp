#pragma once

#include <gmpxx.h>

namespace theta6 {

/**
 * Number of ideals of the ring of norm k.  Multiplicative in k with local
 * counts e+1 at split rational primes (p = 1 mod 3), 1 or 0 at inert primes
 * (p = 2 mod 3) according to the parity of e, and 1 at the ramified prime 3.
 */
mpz_class ideal_count(const mpz_class& k);

/**
 * Dirichlet coefficient a(m) of the unramified zeta factor: I(k)/k when
 * m = k^6 with k coprime to 6, and 0 otherwise.  Exact rational.
 */
mpq_class coeff_a(const mpz_class& m);

/**
 * Dirichlet coefficient b(m) of the completed zeta factor: I(k)/k whenever
 * m = k^6 (any k), and 0 otherwise.  Exact rational.
 */
mpq_class coeff_b(const mpz_class& m);

}  // namespace theta6
