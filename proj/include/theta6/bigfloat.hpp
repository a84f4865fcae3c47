#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <cstdint>
#include <string>
#include <utility>

namespace theta6 {

/**
 * BigReal: value-semantic arbitrary-precision binary float on top of MPFR.
 *
 * Every value carries its own precision; arithmetic allocates the result at
 * the larger precision of the two operands, rounding to nearest.  The global
 * working precision used for fresh values is set once per run via
 * set_working_precision(); it is read by the default constructor only, so a
 * computation that needs scratch headroom can construct explicit-precision
 * values without touching global state.
 */
class BigReal {
 public:
  static mpfr_prec_t& working_precision() {
    static mpfr_prec_t prec = 200;
    return prec;
  }
  static void set_working_precision(mpfr_prec_t prec) { working_precision() = prec; }

  BigReal() { mpfr_init2(v_, working_precision()); mpfr_set_zero(v_, 1); }
  explicit BigReal(mpfr_prec_t prec, int /*tag*/) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
  BigReal(long x) { mpfr_init2(v_, working_precision()); mpfr_set_si(v_, x, MPFR_RNDN); }
  BigReal(int x) : BigReal(static_cast<long>(x)) {}
  BigReal(unsigned long x) { mpfr_init2(v_, working_precision()); mpfr_set_ui(v_, x, MPFR_RNDN); }
  BigReal(double x) { mpfr_init2(v_, working_precision()); mpfr_set_d(v_, x, MPFR_RNDN); }
  explicit BigReal(const mpz_class& z) {
    mpfr_init2(v_, working_precision());
    mpfr_set_z(v_, z.get_mpz_t(), MPFR_RNDN);
  }
  explicit BigReal(const mpq_class& q) {
    mpfr_init2(v_, working_precision());
    mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN);
  }
  explicit BigReal(const std::string& s) {
    mpfr_init2(v_, working_precision());
    if (mpfr_set_str(v_, s.c_str(), 10, MPFR_RNDN) != 0)
      mpfr_set_nan(v_);
  }

  BigReal(const BigReal& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  BigReal(BigReal&& o) noexcept {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
  }
  BigReal& operator=(const BigReal& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  BigReal& operator=(BigReal&& o) noexcept {
    if (this != &o) mpfr_swap(v_, o.v_);
    return *this;
  }
  ~BigReal() { mpfr_clear(v_); }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_nan() const { return mpfr_nan_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  /** Decimal rendering with enough digits for the stored precision. */
  std::string str(int digits = 0) const {
    if (digits <= 0) digits = static_cast<int>(precision() * 0.3010) + 2;
    char* raw = nullptr;
    mpfr_asprintf(&raw, "%.*Rg", digits, v_);
    std::string out(raw);
    mpfr_free_str(raw);
    return out;
  }

  static mpfr_prec_t join(const BigReal& a, const BigReal& b) {
    return std::max(mpfr_get_prec(a.v_), mpfr_get_prec(b.v_));
  }

  friend BigReal operator+(const BigReal& a, const BigReal& b) {
    BigReal r(join(a, b), 0); mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN); return r;
  }
  friend BigReal operator-(const BigReal& a, const BigReal& b) {
    BigReal r(join(a, b), 0); mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN); return r;
  }
  friend BigReal operator*(const BigReal& a, const BigReal& b) {
    BigReal r(join(a, b), 0); mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN); return r;
  }
  friend BigReal operator/(const BigReal& a, const BigReal& b) {
    BigReal r(join(a, b), 0); mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN); return r;
  }
  BigReal operator-() const { BigReal r(precision(), 0); mpfr_neg(r.v_, v_, MPFR_RNDN); return r; }
  BigReal& operator+=(const BigReal& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  BigReal& operator-=(const BigReal& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
  BigReal& operator*=(const BigReal& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
  BigReal& operator/=(const BigReal& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }

  friend bool operator<(const BigReal& a, const BigReal& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator>(const BigReal& a, const BigReal& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const BigReal& a, const BigReal& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const BigReal& a, const BigReal& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
  friend bool operator==(const BigReal& a, const BigReal& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }

 private:
  mpfr_t v_;
};

inline BigReal abs(const BigReal& a) {
  BigReal r(a.precision(), 0); mpfr_abs(r.get(), a.get(), MPFR_RNDN); return r;
}
inline BigReal sqrt(const BigReal& a) {
  BigReal r(a.precision(), 0); mpfr_sqrt(r.get(), a.get(), MPFR_RNDN); return r;
}
inline BigReal exp(const BigReal& a) {
  BigReal r(a.precision(), 0); mpfr_exp(r.get(), a.get(), MPFR_RNDN); return r;
}
inline BigReal log(const BigReal& a) {
  BigReal r(a.precision(), 0); mpfr_log(r.get(), a.get(), MPFR_RNDN); return r;
}
inline BigReal sin(const BigReal& a) {
  BigReal r(a.precision(), 0); mpfr_sin(r.get(), a.get(), MPFR_RNDN); return r;
}
inline BigReal cos(const BigReal& a) {
  BigReal r(a.precision(), 0); mpfr_cos(r.get(), a.get(), MPFR_RNDN); return r;
}
inline BigReal sinh(const BigReal& a) {
  BigReal r(a.precision(), 0); mpfr_sinh(r.get(), a.get(), MPFR_RNDN); return r;
}
inline BigReal cosh(const BigReal& a) {
  BigReal r(a.precision(), 0); mpfr_cosh(r.get(), a.get(), MPFR_RNDN); return r;
}
inline BigReal atan2(const BigReal& y, const BigReal& x) {
  BigReal r(BigReal::join(y, x), 0); mpfr_atan2(r.get(), y.get(), x.get(), MPFR_RNDN); return r;
}
inline BigReal pow_si(const BigReal& a, long e) {
  BigReal r(a.precision(), 0); mpfr_pow_si(r.get(), a.get(), e, MPFR_RNDN); return r;
}
/** Principal n-th root of a nonnegative value. */
inline BigReal rootn(const BigReal& a, unsigned long n) {
  BigReal r(a.precision(), 0); mpfr_rootn_ui(r.get(), a.get(), n, MPFR_RNDN); return r;
}
inline BigReal const_pi(mpfr_prec_t prec) {
  BigReal r(prec, 0); mpfr_const_pi(r.get(), MPFR_RNDN); return r;
}
inline BigReal gamma(const BigReal& a) {
  BigReal r(a.precision(), 0); mpfr_gamma(r.get(), a.get(), MPFR_RNDN); return r;
}

/** Complex value as a real/imaginary BigReal pair. */
struct BigComplex {
  BigReal re, im;

  BigComplex() = default;
  BigComplex(BigReal r, BigReal i) : re(std::move(r)), im(std::move(i)) {}
  explicit BigComplex(const BigReal& r) : re(r), im(r.precision(), 0) {}
  BigComplex(long r) : re(r), im(0L) {}

  static BigComplex zero(mpfr_prec_t prec) { return {BigReal(prec, 0), BigReal(prec, 0)}; }
  static BigComplex one(mpfr_prec_t prec) {
    BigComplex z = zero(prec);
    mpfr_set_ui(z.re.get(), 1, MPFR_RNDN);
    return z;
  }
  /** exp(i*theta). */
  static BigComplex cis(const BigReal& theta) {
    BigComplex z = zero(theta.precision());
    mpfr_sin_cos(z.im.get(), z.re.get(), theta.get(), MPFR_RNDN);
    return z;
  }

  friend BigComplex operator+(const BigComplex& a, const BigComplex& b) { return {a.re + b.re, a.im + b.im}; }
  friend BigComplex operator-(const BigComplex& a, const BigComplex& b) { return {a.re - b.re, a.im - b.im}; }
  friend BigComplex operator*(const BigComplex& a, const BigComplex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend BigComplex operator*(const BigReal& s, const BigComplex& a) { return {s * a.re, s * a.im}; }
  friend BigComplex operator/(const BigComplex& a, const BigComplex& b) {
    BigReal d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
  }
  BigComplex operator-() const { return {-re, -im}; }
  BigComplex& operator+=(const BigComplex& o) { re += o.re; im += o.im; return *this; }
  BigComplex& operator-=(const BigComplex& o) { re -= o.re; im -= o.im; return *this; }
  BigComplex& operator*=(const BigComplex& o) { *this = *this * o; return *this; }

  BigComplex conj() const { return {re, -im}; }
  BigReal abs2() const { return re * re + im * im; }
  BigReal abs() const { return sqrt(abs2()); }

  std::string str(int digits = 0) const { return re.str(digits) + (im.sign() < 0 ? " - " : " + ") + theta6::abs(im).str(digits) + "*i"; }
};

/** Complex exponential. */
inline BigComplex cexp(const BigComplex& z) {
  BigReal m = exp(z.re);
  BigComplex u = BigComplex::cis(z.im);
  return {m * u.re, m * u.im};
}
/** Principal complex logarithm. */
inline BigComplex clog(const BigComplex& z) {
  return {BigReal(0.5) * log(z.abs2()), atan2(z.im, z.re)};
}
/** Complex sine via the hyperbolic split of sin(x+iy). */
inline BigComplex csin(const BigComplex& z) {
  return {sin(z.re) * cosh(z.im), cos(z.re) * sinh(z.im)};
}

}  // namespace theta6
