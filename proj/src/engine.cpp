#include "theta6/engine.hpp"

#include <chrono>
#include <stdexcept>

#include "theta6/cosets.hpp"
#include "theta6/dirichlet.hpp"
#include "theta6/specialfn.hpp"

namespace theta6 {
namespace {

mpfr_prec_t wp() { return BigReal::working_precision(); }

/** Scoped working-precision override: every run carries its own bits. */
class PrecisionGuard {
 public:
  explicit PrecisionGuard(mpfr_prec_t p) : old_(BigReal::working_precision()) {
    BigReal::set_working_precision(p);
  }
  ~PrecisionGuard() { BigReal::set_working_precision(old_); }
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  mpfr_prec_t old_;
};

// Defensive ceiling for the inner k-series; the integrands decay like
// exp(-c k), so hitting this means a broken argument, not a slow series.
constexpr long kMaxInnerK = 100000;

/** I(k)/k as a float at the working precision; zero when no ideal has norm k. */
BigReal series_weight(long k, const mpz_class& count) {
  mpq_class w(count, k);
  w.canonicalize();
  return BigReal(w);
}

}  // namespace

BigReal y1_factor(const EInt& r) {
  if (r.is_zero() || !coprime_to_six(r))
    throw std::invalid_argument("y1_factor: r must be nonzero and coprime to 6");
  const BigReal two_pi = BigReal(2L) * const_pi(wp());
  return pow_si(two_pi, 5) / (BigReal(27L) * sqrt(BigReal(r.norm())));
}

BigReal inner_sum_F1(const BigReal& scale, const BigReal& cutoff) {
  if (!(scale > BigReal(0L)))
    throw std::invalid_argument("inner_sum_F1: scale must be positive");
  BigReal acc(0L);
  for (long k = 1; k <= kMaxInnerK; ++k) {
    if (k % 2 == 0 || k % 3 == 0) continue;  // zero weight at even or 3-divisible k
    const mpz_class count = ideal_count(k);
    if (count == 0) continue;  // norm gap: zero weight
    const BigReal term =
        f1_value(scale * pow_si(BigReal(k), 6), cutoff) * series_weight(k, count);
    if (abs(term) < cutoff) return acc;
    acc += term;
  }
  throw std::runtime_error("inner_sum_F1: series failed to reach the cutoff");
}

BigReal f2_window_sum(const BigReal& scale, int w1, int w2, const BigReal& cutoff) {
  if (!(scale > BigReal(0L)))
    throw std::invalid_argument("f2_window_sum: scale must be positive");
  const BigReal base = scale * pow_si(BigReal(3L), -w1) * pow_si(BigReal(4L), -w2);
  const BigReal half_sqrt3 = sqrt(BigReal(3L)) / BigReal(2L);
  const BigReal inv_six_pi = BigReal(1L) / (BigReal(6L) * const_pi(wp()));
  BigReal acc(0L);
  for (long k = 1; k <= kMaxInnerK; ++k) {
    const mpz_class count = ideal_count(k);
    if (count == 0) continue;  // norm gap: zero weight
    const BigReal bk = series_weight(k, count);
    const BigReal arg = base * pow_si(BigReal(k), 6);
    // |F2(arg)| <= exp(-sqrt(3)/2 * arg^{1/6}) / (6 pi): stop on the envelope
    // so a zero of the oscillating factor cannot end the series early.
    const BigReal envelope = exp(-(half_sqrt3 * rootn(arg, 6))) * inv_six_pi * bk;
    if (envelope < cutoff) return acc;
    acc += f2_value(arg) * bk;
  }
  throw std::runtime_error("f2_window_sum: series failed to reach the cutoff");
}

EmbeddedColumns EmbeddedColumns::from(const ColumnSums& sums) {
  EmbeddedColumns out;
  for (int j = 0; j < 216; ++j) {
    const LaurentVW& col = sums.cols[static_cast<std::size_t>(j)];
    const BigReal den(static_cast<long>(col.den()));
    for (const auto& [key, coef] : col.terms()) {
      if (coef.is_zero()) continue;
      if (key.first < kWindowLoV || key.first > kWindowHiV || key.second < kWindowLoW ||
          key.second > kWindowHiW)
        throw std::logic_error("EmbeddedColumns: table support escapes the window");
      const BigComplex c = coef.embed();
      out.cols[static_cast<std::size_t>(j)].emplace_back(
          key.first, key.second, BigComplex{c.re / den, c.im / den});
    }
  }
  return out;
}

BigComplex inner_sum_F2(const EmbeddedColumns& cols, int j, const BigReal& scale,
                        const BigReal& cutoff) {
  if (j < 1 || j > 216)
    throw std::invalid_argument("inner_sum_F2: column index out of range");
  BigComplex acc = BigComplex::zero(wp());
  for (const auto& [w1, w2, c] : cols.cols[static_cast<std::size_t>(j - 1)])
    acc += f2_window_sum(scale, w1, w2, cutoff) * c;
  return acc;
}

TauEngine::TauEngine(const EngineConfig& cfg, const GaussTable& gauss,
                     const ColumnSums& cols)
    : cfg_(cfg), gauss_(gauss) {
  if (cfg_.r.is_zero() || !coprime_to_six(cfg_.r))
    throw std::invalid_argument("engine: r must be nonzero and coprime to 6");
  if (cfg_.bound < 7) throw std::invalid_argument("engine: bound must be at least 7");
  if (cfg_.x <= 0 || cfg_.x > 1)
    throw std::invalid_argument("engine: x must lie in (0, 1]");
  if (!(cfg_.cutoff > 0)) throw std::invalid_argument("engine: cutoff must be positive");
  if (gauss_.bound() < cfg_.bound)
    throw std::invalid_argument("engine: Gauss table bound does not cover the run");
  if (gauss_.sign() != kAdditiveSign)
    throw std::invalid_argument("engine: Gauss table sign mismatch");
  if (cols.sign != kAdditiveSign)
    throw std::invalid_argument("engine: column-sum sign mismatch");
  if (cols.r_class != local_class_pair(cfg_.r))
    throw std::invalid_argument("engine: column sums belong to a different class of r");

  PrecisionGuard guard(cfg_.precision);
  embedded_ = EmbeddedColumns::from(cols);
  y1_ = y1_factor(cfg_.r);
  cutoff_ = BigReal(cfg_.cutoff);
  const BigReal xr{mpq_class(cfg_.x)};
  scale_f1_ = y1_ * xr;
  scale_f2_ = y1_ / xr;
}

const std::array<BigReal, kWindowSlots>& TauEngine::f2_grid(const mpz_class& norm) {
  auto it = f2_memo_.find(norm);
  if (it != f2_memo_.end()) return it->second;
  std::array<BigReal, kWindowSlots> grid;
  const BigReal scaled = scale_f2_ * BigReal(norm);
  for (int w1 = kWindowLoV; w1 <= kWindowHiV; ++w1)
    for (int w2 = kWindowLoW; w2 <= kWindowHiW; ++w2)
      grid[static_cast<std::size_t>(window_slot(w1, w2))] =
          f2_window_sum(scaled, w1, w2, cutoff_);
  return f2_memo_.emplace(norm, std::move(grid)).first->second;
}

BigComplex TauEngine::f2_dot(int j, const mpz_class& norm) {
  const auto& grid = f2_grid(norm);
  BigComplex acc = BigComplex::zero(wp());
  for (const auto& [w1, w2, c] : embedded_.cols[static_cast<std::size_t>(j - 1)])
    acc += grid[static_cast<std::size_t>(window_slot(w1, w2))] * c;
  return acc;
}

BigReal TauEngine::f1_of_norm(const mpz_class& norm) {
  auto it = state_.M.find(norm);
  if (it != state_.M.end()) return it->second;
  const BigReal value = inner_sum_F1(scale_f1_ * BigReal(norm), cutoff_);
  return state_.M.emplace(norm, value).first->second;
}

const SweepState& TauEngine::sweep() {
  if (done_) return state_;
  const auto t0 = std::chrono::steady_clock::now();
  PrecisionGuard guard(cfg_.precision);
  const mpz_class bound(static_cast<long>(cfg_.bound));

  state_.V1 = BigComplex::zero(wp());
  state_.V2 = BigComplex::zero(wp());

  // Constant term: the modulus (1), identity column, Gauss weight 1.
  const VNormalization seed = normalize_to_V(EInt{1, 0});
  state_.L.push_back({seed.associate, BigComplex::one(wp()), mpz_class(1)});
  state_.V2 += f2_dot(coset_table().identity_index(), mpz_class(1));
  state_.V1 += BigComplex(f1_of_norm(mpz_class(1)));

  // Breadth sweep: primes in increasing norm order, each multiplying the
  // snapshot of the list taken before it starts, so every squarefree product
  // (with the forced exponent valuation+1 at primes dividing r) is created
  // exactly once, V-normalized, and weighted into both accumulators.
  for (const PrimeE& p : enumerate_primes(cfg_.bound)) {
    const int e = valuation(cfg_.r, p.gen) + 1;
    const EInt power = pow_eint(p.gen, static_cast<unsigned long>(e));
    const mpz_class pnorm = power.norm();
    if (pnorm > bound) continue;
    const std::size_t snapshot = state_.L.size();
    for (std::size_t t = 0; t < snapshot; ++t) {
      const mpz_class norm = state_.L[t].norm * pnorm;
      if (norm > bound) continue;
      const EInt raw = state_.L[t].element * power;
      const VNormalization vn = normalize_to_V(raw);
      const BigComplex g = gauss_general(cfg_.r, vn.associate, gauss_);
      state_.L.push_back({vn.associate, g, norm});
      const BigReal inv_norm = BigReal(1L) / BigReal(norm);
      state_.V2 += inv_norm * (f2_dot(vn.coset, norm) * g);
      state_.V1 += inv_norm * (f1_of_norm(norm) * g);
    }
  }

  seconds_ = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  done_ = true;
  return state_;
}

BigComplex TauEngine::tau() {
  sweep();
  PrecisionGuard guard(cfg_.precision);
  const BigReal six_sqrt3 = BigReal(6L) * sqrt(BigReal(3L));
  const BigComplex combined = state_.V1 - six_sqrt3 * state_.V2;
  const BigReal closing = rootn(BigReal(mpq_class(cfg_.x)), 6) * gamma_constants().front *
                          rootn(y1_, 6) * rootn(BigReal(cfg_.r.norm()), 12);
  return closing * combined;
}

BigComplex tau_value(const EngineConfig& cfg, const GaussTable& gauss,
                     const ColumnSums& cols) {
  TauEngine engine(cfg, gauss, cols);
  return engine.tau();
}

StabilityReport x_stability(const EngineConfig& base, const std::vector<mpq_class>& xs,
                            const GaussTable& gauss, const ColumnSums& cols) {
  StabilityReport report;
  for (const mpq_class& xv : xs) {
    EngineConfig cfg = base;
    cfg.x = xv;
    TauEngine engine(cfg, gauss, cols);
    report.points.push_back({xv, engine.tau()});
  }
  PrecisionGuard guard(base.precision);
  report.max_deviation = BigReal(0L);
  for (std::size_t i = 0; i < report.points.size(); ++i)
    for (std::size_t j = i + 1; j < report.points.size(); ++j) {
      const BigReal d = (report.points[i].value - report.points[j].value).abs();
      if (d > report.max_deviation) report.max_deviation = d;
    }
  return report;
}

}  // namespace theta6
