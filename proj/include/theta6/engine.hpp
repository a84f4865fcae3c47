#pragma once

#include <gmpxx.h>

#include <array>
#include <map>
#include <tuple>
#include <vector>

#include "theta6/bigfloat.hpp"
#include "theta6/eisenstein.hpp"
#include "theta6/gauss.hpp"
#include "theta6/transition.hpp"

namespace theta6 {

/**
 * Run parameters for one coefficient computation.
 *
 * r is the twisting element (must be coprime to 6).  bound is the honesty
 * knob: every squarefree modulus of norm <= bound enters the accumulation
 * (together with the forced prime powers at primes dividing r).  x > 0 is the
 * control parameter of the two-sided smoothing; the answer is asymptotically
 * independent of it, which the stability report quantifies.  cutoff is the
 * tail threshold for the inner k-series, and precision is the MPFR working
 * precision in bits for everything derived from this configuration.
 */
struct EngineConfig {
  EInt r{1, 0};
  long long bound = 100000;
  mpq_class x{1, 300};
  double cutoff = 1e-20;
  mpfr_prec_t precision = 200;
};

/** One accumulated modulus: V-normalized generator, Gauss sum, norm. */
struct SweepEntry {
  EInt element;
  BigComplex gauss;
  mpz_class norm;
};

/**
 * Full state of one accumulation run.  L lists the accumulated moduli in
 * creation order (deterministic); M memoizes the F1 inner sum by norm; V1 and
 * V2 are the two contour-side accumulators combined in the final assembly.
 */
struct SweepState {
  std::vector<SweepEntry> L;
  std::map<mpz_class, BigReal> M;
  BigComplex V1, V2;
};

/**
 * Archimedean scale of the expansion: (2*pi)^5 * N(r)^{-1/2} / 27, at the
 * current working precision.  Depends only on the ideal of r.
 */
BigReal y1_factor(const EInt& r);

/**
 * Inner k-series on the F1 side: sum of F1(scale * k^6) * a_k over k >= 1,
 * where a_k = I(k)/k for k coprime to 6 and 0 otherwise (I counts ideals of
 * norm k).  Zero-weight terms are skipped; the series stops at the first
 * nonzero term smaller than cutoff in absolute value (that term excluded).
 */
BigReal inner_sum_F1(const BigReal& scale, const BigReal& cutoff);

/**
 * Inner k-series of one window slot on the F2 side:
 * sum of F2(scale * 3^{-w1} * 4^{-w2} * k^6) * b_k over k >= 1, with
 * b_k = I(k)/k.  The series stops once the positive envelope of the term
 * (the decaying factor in front of the oscillation) falls below cutoff, so a
 * zero of the oscillating factor cannot truncate the series early.
 */
BigReal f2_window_sum(const BigReal& scale, int w1, int w2, const BigReal& cutoff);

/** Fixed support window of the column-sum tables: exponents of the
 *  3^{-s} variable lie in [-5, 4], those of the 4^{-s} variable in [-3, 5]. */
inline constexpr int kWindowLoV = -5;
inline constexpr int kWindowHiV = 4;
inline constexpr int kWindowLoW = -3;
inline constexpr int kWindowHiW = 5;
inline constexpr int kWindowSlots =
    (kWindowHiV - kWindowLoV + 1) * (kWindowHiW - kWindowLoW + 1);

/** Dense slot index of a window pair. */
inline constexpr int window_slot(int w1, int w2) {
  return (w1 - kWindowLoV) * (kWindowHiW - kWindowLoW + 1) + (w2 - kWindowLoW);
}

/**
 * Column-sum tables embedded into complex floats at the current working
 * precision: for each column j (1-based via cols[j-1]), the list of
 * (w1, w2, coefficient) with the exact common denominator divided out.
 * Term order follows the exact table's key order, so dot products against a
 * value grid are reproducible bit for bit.
 */
struct EmbeddedColumns {
  std::array<std::vector<std::tuple<int, int, BigComplex>>, 216> cols;

  static EmbeddedColumns from(const ColumnSums& sums);
};

/**
 * Inner double series on the F2 side for column j (1-based): the sum over the
 * column's window support of coefficient * f2_window_sum(scale, w1, w2).
 * scale carries everything outside the window shift (y1 / x times the norm).
 */
BigComplex inner_sum_F2(const EmbeddedColumns& cols, int j, const BigReal& scale,
                        const BigReal& cutoff);

/**
 * Coefficient accumulator: breadth sweep over all squarefree products of the
 * enumerated prime generators with norm <= bound (primes dividing r enter
 * with exponent valuation + 1, the only exponent with a nonzero Gauss sum),
 * each product V-normalized, weighted by its Gauss sum over its norm, and fed
 * into the two accumulators; then the closing scale factors.
 *
 * The Gauss table and column sums must outlive the engine.  The constructor
 * validates the configuration (bound >= 7, 0 < x <= 1, cutoff > 0, r coprime
 * to 6) and the caches (table bound covers the run, signs agree, column sums
 * match the class of r).
 */
class TauEngine {
 public:
  TauEngine(const EngineConfig& cfg, const GaussTable& gauss, const ColumnSums& cols);

  /** Runs the accumulation once (idempotent) and returns the final state. */
  const SweepState& sweep();

  /** The finished coefficient: closing scale factors applied to (V1, V2). */
  BigComplex tau();

  const EngineConfig& config() const { return cfg_; }

  /** Wall-clock seconds spent inside sweep(). */
  double sweep_seconds() const { return seconds_; }

 private:
  const std::array<BigReal, kWindowSlots>& f2_grid(const mpz_class& norm);
  BigComplex f2_dot(int j, const mpz_class& norm);
  BigReal f1_of_norm(const mpz_class& norm);

  EngineConfig cfg_;
  const GaussTable& gauss_;
  EmbeddedColumns embedded_;
  BigReal y1_, cutoff_, scale_f1_, scale_f2_;
  SweepState state_;
  std::map<mpz_class, std::array<BigReal, kWindowSlots>> f2_memo_;
  bool done_ = false;
  double seconds_ = 0;
};

/** Convenience wrapper: configure, sweep, assemble. */
BigComplex tau_value(const EngineConfig& cfg, const GaussTable& gauss,
                     const ColumnSums& cols);

struct StabilityPoint {
  mpq_class x;
  BigComplex value;
};

/** Result of re-running tau over a grid of x values at fixed everything else. */
struct StabilityReport {
  std::vector<StabilityPoint> points;
  BigReal max_deviation;  // max over pairs of |tau_i - tau_j|
};

StabilityReport x_stability(const EngineConfig& base, const std::vector<mpq_class>& xs,
                            const GaussTable& gauss, const ColumnSums& cols);

}  // namespace theta6
