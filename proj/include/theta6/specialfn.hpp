#pragma once

/*
 * Kernel functions for the coefficient engine.
 *
 * Both kernels are inverse Mellin transforms of Gamma(6s)/Gamma(s) * f(+-s)
 * * x^{-s} along a vertical line, with the fixed weight f(s) = 1/Gamma(1+s).
 * That choice makes the second kernel elementary,
 *
 *   f2_value(x) = (1/6*pi) * exp(-sqrt(3) x^{1/6} / 2) * sin(x^{1/6} / 2),
 *
 * while the first one is evaluated through its residue expansion
 *
 *   f1_value(x) = sum_{k=1..5} (-z^k / Gamma(-k/6)^2) *
 *                 ( 1/(k*k!) + sum_{i>=1} (z^6/36)^i * Q(k,i) ),
 *   z = -x^{1/6},  Q(k,i) = prod_{l=1}^{i-1} (k+6l)^2 / (k+6i-1)!.
 *
 * The quotients Q(k,i) are kept in a shared table of exact rationals (600
 * entries per k up front, extended on demand) so repeated evaluations do not
 * recompute them; the inner series is truncated as soon as a summand drops
 * below the cutoff.  The series converges smoothly for every x > 0, but the
 * summands first grow with x, so an evaluation that fails to reach the
 * cutoff within 10^4 inner terms raises an alarm instead of looping.
 */

#include <array>

#include <gmpxx.h>

#include "theta6/bigfloat.hpp"

namespace theta6 {

/** Closed-form second kernel; requires x > 0. */
BigReal f2_value(const BigReal& x);

/**
 * First kernel via the residue series; requires x > 0 and cutoff >= 0.
 * Throws std::runtime_error if an inner series fails to reach the cutoff
 * within 10^4 terms.
 */
BigReal f1_value(const BigReal& x, const BigReal& cutoff);

/** Same with the default cutoff 10^-20. */
BigReal f1_value(const BigReal& x);

/** Gamma factors shared by the final normalization and the residue series. */
struct GammaConstants {
  /** Gamma(1/6) * Gamma(7/6). */
  BigReal front;
  /** inv_square[k-1] = Gamma(-k/6)^{-2} for k = 1..5. */
  std::array<BigReal, 5> inv_square;
};

/** Computed at the current working precision via recurrence and reflection. */
GammaConstants gamma_constants();

/**
 * Exact table quotient Q(k,i) for k in 1..5 and i >= 1 (i = 1 gives
 * 1/(k+5)!).  Exposed so the recurrence
 * Q(k,i+1)/Q(k,i) = (k+6i)^2 / ((k+6i)(k+6i+1)...(k+6i+5)) can be audited.
 */
mpq_class f1_quotient(int k, long i);

}  // namespace theta6
