#include "theta6/cyclo.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

namespace theta6 {

namespace {

// red[e] = the power-basis coordinates of zeta^e for e = 0..71, obtained
// by iterating zeta^e = zeta^{e-12} - zeta^{e-24} down from the relation
// zeta^24 = zeta^12 - 1.
struct ReductionTable {
  std::array<std::array<long long, CycloExact::kDegree>, CycloExact::kOrder> row{};
  ReductionTable() {
    for (int e = 0; e < CycloExact::kDegree; ++e) row[e][e] = 1;
    for (int e = CycloExact::kDegree; e < CycloExact::kOrder; ++e) {
      for (int i = 0; i < CycloExact::kDegree; ++i) {
        row[e][i] = row[e - 12][i] - row[e - 24][i];
      }
    }
  }
};

const ReductionTable& red() {
  static const ReductionTable t;
  return t;
}

long long checked_cast(__int128 v) {
  if (v > static_cast<__int128>(INT64_MAX) || v < static_cast<__int128>(INT64_MIN)) {
    throw std::overflow_error("cyclotomic coordinate exceeds the 64-bit range");
  }
  return static_cast<long long>(v);
}

}  // namespace

CycloExact::CycloExact() = default;

CycloExact CycloExact::zero() { return CycloExact{}; }

CycloExact CycloExact::one() { return integer(1); }

CycloExact CycloExact::integer(long long n) {
  CycloExact r;
  r.c_[0] = n;
  return r;
}

CycloExact CycloExact::zeta_pow(long k) {
  long e = k % kOrder;
  if (e < 0) e += kOrder;
  CycloExact r;
  r.c_ = red().row[static_cast<int>(e)];
  return r;
}

CycloExact CycloExact::sqrt3() {
  // zeta^6 + zeta^{-6} = 2*cos(pi/6) = +sqrt(3); reduced: 2*zeta^6 - zeta^18.
  CycloExact r;
  r.c_[6] = 2;
  r.c_[18] = -1;
  return r;
}

long long CycloExact::coord(int i) const {
  if (i < 0 || i >= kDegree) throw std::out_of_range("cyclotomic coordinate index");
  return c_[i];
}

void CycloExact::set_coord(int i, long long v) {
  if (i < 0 || i >= kDegree) throw std::out_of_range("cyclotomic coordinate index");
  c_[i] = v;
}

CycloExact CycloExact::operator-() const {
  CycloExact r;
  for (int i = 0; i < kDegree; ++i) r.c_[i] = -c_[i];
  return r;
}

CycloExact& CycloExact::operator+=(const CycloExact& o) {
  for (int i = 0; i < kDegree; ++i) {
    __int128 s = static_cast<__int128>(c_[i]) + o.c_[i];
    c_[i] = checked_cast(s);
  }
  return *this;
}

CycloExact& CycloExact::operator-=(const CycloExact& o) {
  for (int i = 0; i < kDegree; ++i) {
    __int128 s = static_cast<__int128>(c_[i]) - o.c_[i];
    c_[i] = checked_cast(s);
  }
  return *this;
}

CycloExact operator*(const CycloExact& a, const CycloExact& b) {
  // Convolve into degrees 0..46, then fold zeta^e = zeta^{e-12} - zeta^{e-24}
  // from the top down.
  std::array<__int128, 2 * CycloExact::kDegree - 1> conv{};
  for (int i = 0; i < CycloExact::kDegree; ++i) {
    if (a.c_[i] == 0) continue;
    const __int128 ai = a.c_[i];
    for (int j = 0; j < CycloExact::kDegree; ++j) {
      if (b.c_[j] == 0) continue;
      conv[i + j] += ai * b.c_[j];
    }
  }
  for (int e = 2 * CycloExact::kDegree - 2; e >= CycloExact::kDegree; --e) {
    conv[e - 12] += conv[e];
    conv[e - 24] -= conv[e];
    conv[e] = 0;
  }
  CycloExact r;
  for (int i = 0; i < CycloExact::kDegree; ++i) r.c_[i] = checked_cast(conv[i]);
  return r;
}

CycloExact& CycloExact::operator*=(const CycloExact& o) {
  *this = *this * o;
  return *this;
}

CycloExact CycloExact::scaled(long long n) const {
  CycloExact r;
  for (int i = 0; i < kDegree; ++i) {
    r.c_[i] = checked_cast(static_cast<__int128>(c_[i]) * n);
  }
  return r;
}

CycloExact CycloExact::times_zeta_pow(long t) const {
  long e0 = t % kOrder;
  if (e0 < 0) e0 += kOrder;
  CycloExact r;
  for (int k = 0; k < kDegree; ++k) {
    if (c_[k] == 0) continue;
    const auto& row = red().row[(k + e0) % kOrder];
    for (int i = 0; i < kDegree; ++i) {
      __int128 s = static_cast<__int128>(r.c_[i]) + static_cast<__int128>(c_[k]) * row[i];
      r.c_[i] = checked_cast(s);
    }
  }
  return r;
}

CycloExact CycloExact::galois(int m) const {
  int mm = m % kOrder;
  if (mm < 0) mm += kOrder;
  if (std::gcd(mm, kOrder) != 1) {
    throw std::invalid_argument("galois exponent must be a unit mod 72");
  }
  CycloExact r;
  for (int k = 0; k < kDegree; ++k) {
    if (c_[k] == 0) continue;
    const auto& row = red().row[(static_cast<long>(mm) * k) % kOrder];
    for (int i = 0; i < kDegree; ++i) {
      __int128 s = static_cast<__int128>(r.c_[i]) + static_cast<__int128>(c_[k]) * row[i];
      r.c_[i] = checked_cast(s);
    }
  }
  return r;
}

bool CycloExact::is_zero() const {
  for (long long v : c_) {
    if (v != 0) return false;
  }
  return true;
}

bool CycloExact::in_subring_36() const {
  for (int i = 1; i < kDegree; i += 2) {
    if (c_[i] != 0) return false;
  }
  return true;
}

bool CycloExact::divisible_by(long long d) const {
  if (d == 0) throw std::domain_error("division of a cyclotomic element by zero");
  for (long long v : c_) {
    if (v % d != 0) return false;
  }
  return true;
}

CycloExact CycloExact::divided_by(long long d) const {
  if (d == 0) throw std::domain_error("division of a cyclotomic element by zero");
  CycloExact r;
  for (int i = 0; i < kDegree; ++i) {
    if (c_[i] % d != 0) {
      throw std::domain_error("inexact integer division of a cyclotomic element");
    }
    r.c_[i] = c_[i] / d;
  }
  return r;
}

BigComplex CycloExact::embed() const {
  const mpfr_prec_t prec = BigReal::working_precision();
  const BigReal two_pi = BigReal(2) * const_pi(prec);
  BigComplex acc = BigComplex::zero(prec);
  for (int k = 0; k < kDegree; ++k) {
    if (c_[k] == 0) continue;
    BigReal theta = two_pi * BigReal(static_cast<long>(k)) / BigReal(static_cast<long>(kOrder));
    acc += BigReal(static_cast<long>(c_[k])) * BigComplex::cis(theta);
  }
  return acc;
}

std::string CycloExact::str() const {
  std::ostringstream os;
  bool first = true;
  for (int i = 0; i < kDegree; ++i) {
    if (c_[i] == 0) continue;
    if (!first) os << (c_[i] > 0 ? " + " : " - ");
    else if (c_[i] < 0) os << "-";
    long long a = c_[i] > 0 ? c_[i] : -c_[i];
    if (a != 1 || i == 0) os << a;
    if (i > 0) {
      if (a != 1) os << "*";
      os << "z";
      if (i > 1) os << "^" << i;
    }
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

}  // namespace theta6
