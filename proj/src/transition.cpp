#include "theta6/transition.hpp"

#include <algorithm>
#include <cstdlib>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "theta6/cosets.hpp"

namespace theta6 {

namespace {

constexpr int kN = 216;
constexpr long long kDen2 = 64;        // common denominator of the place-two table
constexpr long long kDen3 = 243;       // common denominator of the place-three table
constexpr long long kSixPowSix = 46656;
constexpr long long kTotalDen = kDen2 * kDen3 * kSixPowSix;
// Exact lowest-terms denominator of every column sum (entries themselves carry
// 6^5).  The product identity T(s)T(-s) = D(s)*Id with the non-integral scalar
// D(s) = (10-3V^6-3V^-6)(17-4W^6-4W^-6)/(144*108) forces a rational denominator
// on the matrix; empirically the column content is always exactly 216.
constexpr long long kColumnDen = 216;

// Slot packing of the single-place Laurent supports: place two lives in
// W-exponents [-3, 5] (9 slots), place three in V-exponents [-5, 4] (10).
constexpr int kOff2 = 3, kSlots2 = 9;
constexpr int kOff3 = 5, kSlots3 = 10;

long long checked_mul_ll(long long a, long long b, const char* what) {
  __int128 p = static_cast<__int128>(a) * b;
  if (p > INT64_MAX || p < INT64_MIN) throw std::overflow_error(what);
  return static_cast<long long>(p);
}

long long checked_lcm_ll(long long a, long long b) {
  long long g = std::gcd(a, b);
  return checked_mul_ll(a / g, b, "LaurentVW: denominator lcm overflow");
}

CycloExact zeta6_exact(long t) { return CycloExact::zeta_pow(12 * t); }

bool unit_at(const EInt& x, Place v) {
  return (x.norm() % (v == Place::two ? 2 : 3)) != 0;
}

// Unit residues modulo pi_v^f, enumerated from the canonical residue box.
std::vector<EInt> units_mod_power(Place v, int f) {
  const LocalData& ld = local_data(v);
  ResidueBox box(pow_eint(ld.uniformizer, static_cast<unsigned long>(f)));
  std::vector<EInt> out;
  for (const EInt& x : box.all())
    if (unit_at(x, v)) out.push_back(x);
  const std::size_t expect = (v == Place::two) ? 3ull << (2 * (f - 1))   // 3 * 4^(f-1)
                                               : 2ull * [&] { std::size_t p = 1; for (int i = 1; i < f; ++i) p *= 3; return p; }();
  if (out.size() != expect)
    throw std::logic_error("units_mod_power: residue count mismatch");
  return out;
}

int class_of(const EInt& x, Place v) { return class_index(decompose_local(x, v)); }

int uniformizer_class(Place v) {
  static const int c2 = class_of(local_data(Place::two).uniformizer, Place::two);
  static const int c3 = class_of(local_data(Place::three).uniformizer, Place::three);
  return v == Place::two ? c2 : c3;
}

void check_sign(int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("additive sign must be +1 or -1");
}

// Ramified character sum S = sum over units x mod pi^f of eps(y,x) psi(x/pi^(d+f)).
CycloExact ramified_char_sum(int ci, Place v, int f, int d, int sign) {
  CycloExact s = CycloExact::zero();
  for (const EInt& x : units_mod_power(v, f)) {
    long pe = pairing_exp(v, ci, class_of(x, v));
    long ae = additive_char_exp72(x, d + f, v, sign);
    s += CycloExact::zeta_pow(12 * pe + ae);
  }
  return s;
}

// The normalized root number W = q^{-f/2} S must be a root of unity: checks
// S = q^{f/2} zeta72^j for some j (mu_72 is the full unit torsion of the ring).
void check_root_number(const CycloExact& s, Place v, int f) {
  long long qf = 1;
  const int q = local_data(v).q;
  for (int t = 0; t < f; ++t) qf *= q;
  if (s * s.conj() != CycloExact::integer(qf))
    throw std::logic_error("local gamma factor: ramified character sum has wrong modulus");
  CycloExact half;  // q^{f/2}
  if (v == Place::two) {
    long long r = 1;
    for (int t = 0; t < f; ++t) r *= 2;
    half = CycloExact::integer(r);
  } else {
    long long r = 1;
    for (int t = 0; t < f / 2; ++t) r *= 3;
    half = (f % 2 == 0) ? CycloExact::integer(r) : CycloExact::sqrt3().scaled(r);
  }
  for (int j = 0; j < 72; ++j)
    if (s == half.times_zeta_pow(j)) return;
  throw std::logic_error("local gamma factor: root number is not a root of unity");
}

}  // namespace

// ---------------------------------------------------------------------------
// LaurentVW

void LaurentVW::set_den(long long d) {
  if (d <= 0) throw std::invalid_argument("LaurentVW: denominator must be positive");
  den_ = d;
}

void LaurentVW::add_term(int w1, int w2, const CycloExact& c) {
  if (c.is_zero()) return;
  auto key = std::make_pair(w1, w2);
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_.emplace(key, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

bool LaurentVW::operator==(const LaurentVW& o) const {
  if (den_ == o.den_) return terms_ == o.terms_;
  // Cross-multiply onto a common denominator.
  auto ia = terms_.begin();
  auto ib = o.terms_.begin();
  while (ia != terms_.end() || ib != o.terms_.end()) {
    if (ib == o.terms_.end() || (ia != terms_.end() && ia->first < ib->first)) {
      if (!ia->second.scaled(o.den_).is_zero()) return false;
      ++ia;
    } else if (ia == terms_.end() || ib->first < ia->first) {
      if (!ib->second.scaled(den_).is_zero()) return false;
      ++ib;
    } else {
      if (ia->second.scaled(o.den_) != ib->second.scaled(den_)) return false;
      ++ia;
      ++ib;
    }
  }
  return true;
}

LaurentVW& LaurentVW::operator+=(const LaurentVW& o) {
  long long l = checked_lcm_ll(den_, o.den_);
  long long sa = l / den_, sb = l / o.den_;
  if (sa != 1) {
    for (auto& kv : terms_) kv.second = kv.second.scaled(sa);
    den_ = l;
  }
  for (const auto& kv : o.terms_) add_term(kv.first.first, kv.first.second, kv.second.scaled(sb));
  return *this;
}

LaurentVW operator*(const LaurentVW& a, const LaurentVW& b) {
  LaurentVW r;
  r.den_ = checked_mul_ll(a.den_, b.den_, "LaurentVW: denominator product overflow");
  for (const auto& ka : a.terms_)
    for (const auto& kb : b.terms_)
      r.add_term(ka.first.first + kb.first.first, ka.first.second + kb.first.second,
                 ka.second * kb.second);
  return r;
}

LaurentVW LaurentVW::scaled(const CycloExact& c) const {
  LaurentVW r;
  r.den_ = den_;
  for (const auto& kv : terms_) r.add_term(kv.first.first, kv.first.second, kv.second * c);
  return r;
}

LaurentVW LaurentVW::negated_s() const {
  LaurentVW r;
  r.den_ = den_;
  for (const auto& kv : terms_) r.terms_.emplace(std::make_pair(-kv.first.first, -kv.first.second), kv.second);
  return r;
}

void LaurentVW::normalize() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->second.is_zero()) it = terms_.erase(it);
    else ++it;
  }
  if (terms_.empty()) {
    den_ = 1;
    return;
  }
  long long g = den_;
  for (const auto& kv : terms_) {
    for (int i = 0; i < CycloExact::kDegree; ++i) {
      long long v = kv.second.coord(i);
      g = std::gcd(g, v < 0 ? -v : v);
      if (g == 1) return;
    }
  }
  for (auto& kv : terms_) kv.second = kv.second.divided_by(g);
  den_ /= g;
}

bool LaurentVW::support(int& lo1, int& hi1, int& lo2, int& hi2) const {
  if (terms_.empty()) return false;
  lo1 = hi1 = terms_.begin()->first.first;
  lo2 = hi2 = terms_.begin()->first.second;
  for (const auto& kv : terms_) {
    lo1 = std::min(lo1, kv.first.first);
    hi1 = std::max(hi1, kv.first.first);
    lo2 = std::min(lo2, kv.first.second);
    hi2 = std::max(hi2, kv.first.second);
  }
  return true;
}

BigComplex LaurentVW::eval(const BigReal& s) const {
  mpfr_prec_t prec = std::max<mpfr_prec_t>(s.precision(), BigReal::working_precision());
  BigComplex acc = BigComplex::zero(prec);
  BigReal l3 = log(BigReal(3)), l4 = log(BigReal(4));
  for (const auto& kv : terms_) {
    // V^{w1} W^{w2} = 3^{-s w1} 4^{-s w2}
    BigReal e = exp(-(s * (BigReal(kv.first.first) * l3 + BigReal(kv.first.second) * l4)));
    acc += e * kv.second.embed();
  }
  BigReal d(static_cast<long>(den_));
  return {acc.re / d, acc.im / d};
}

std::string LaurentVW::str() const {
  std::ostringstream os;
  if (terms_.empty()) return "0";
  bool first = true;
  for (const auto& kv : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << kv.second.str() << ")*V^" << kv.first.first << "*W^" << kv.first.second;
  }
  if (den_ != 1) return "(" + os.str() + ")/" + std::to_string(den_);
  return os.str();
}

// ---------------------------------------------------------------------------
// Local gamma factors

std::pair<int, int> local_class_pair(const EInt& r) {
  if (r.is_zero()) throw std::invalid_argument("local_class_pair: zero element");
  return {class_of(r, Place::two), class_of(r, Place::three)};
}

LaurentVW tate_gamma_class(int class_idx, Place place, int sign) {
  check_sign(sign);
  if (class_idx < 0 || class_idx >= class_count(place))
    throw std::invalid_argument("tate_gamma_class: class index out of range");
  const int d = (place == Place::two) ? 0 : 1;
  const long u = pairing_exp(place, class_idx, uniformizer_class(place));
  const int f = conductor_class(place, class_idx);
  LaurentVW P;
  auto add2 = [&P](int w2, const CycloExact& c) { P.add_term(0, w2, c); };
  auto add3 = [&P](int w1, const CycloExact& c) { P.add_term(w1, 0, c); };
  if (place == Place::two) {
    P.set_den(kDen2);
    if (f == 0) {
      add2(-1, zeta6_exact(-u).scaled(-16));
      for (int m = 0; m <= 4; ++m) add2(m, zeta6_exact(m * u).scaled(48));
      add2(5, zeta6_exact(5 * u).scaled(64));
    } else {
      CycloExact s = ramified_char_sum(class_idx, place, f, d, sign);
      check_root_number(s, place, f);
      long long scale = 1;
      for (int t = 0; t < 3 - f; ++t) scale *= 4;
      CycloExact c = (zeta6_exact(-static_cast<long>(f) * u) * s).scaled(scale);
      add2(-f, c);
      add2(6 - f, -c);
    }
  } else {
    P.set_den(kDen3);
    if (f == 0) {
      CycloExact s3 = CycloExact::sqrt3();
      add3(-2, (s3 * zeta6_exact(-2 * u)).scaled(-27));
      for (int m = -1; m <= 3; ++m) add3(m, (s3 * zeta6_exact(m * u)).scaled(54));
      add3(4, (s3 * zeta6_exact(4 * u)).scaled(81));
    } else {
      CycloExact s = ramified_char_sum(class_idx, place, f, d, sign);
      check_root_number(s, place, f);
      long long scale = 1;
      for (int t = 0; t < 4 - f; ++t) scale *= 3;
      CycloExact c = (CycloExact::sqrt3() * zeta6_exact(-(1L + f) * u) * s).scaled(scale);
      add3(-1 - f, c);
      add3(5 - f, -c);
    }
  }
  return P;
}

LaurentVW tate_gamma(const EInt& y, Place place, int sign) {
  if (y.is_zero()) throw std::invalid_argument("tate_gamma: zero element");
  return tate_gamma_class(class_of(y, place), place, sign);
}

BigComplex tate_gamma_numeric(int class_idx, Place place, const BigReal& s, int sign) {
  check_sign(sign);
  const LocalData& ld = local_data(place);
  const int d = (place == Place::two) ? 0 : 1;
  const long q = ld.q;
  mpfr_prec_t prec = std::max<mpfr_prec_t>(s.precision(), BigReal::working_precision());
  BigReal two_pi = BigReal(2) * const_pi(prec);
  auto root72 = [&](long t) {
    t = ((t % 72) + 72) % 72;
    return BigComplex::cis(two_pi * BigReal(t) / BigReal(72));
  };
  BigComplex one = BigComplex::one(prec);
  auto cpow = [&](BigComplex z, int e) {
    BigComplex r = one;
    if (e < 0) {
      z = one / z;
      e = -e;
    }
    while (e) {
      if (e & 1) r *= z;
      z *= z;
      e >>= 1;
    }
    return r;
  };
  const long u = pairing_exp(place, class_idx, uniformizer_class(place));
  BigComplex chi_pi = exp(-(s * log(BigReal(q)))) * root72(12 * u);
  const int f = conductor_class(place, class_idx);
  if (f == 0) {
    BigComplex num = one - (BigReal(1) / BigReal(q)) * (one / chi_pi);
    BigComplex den = one - chi_pi;
    BigComplex g = (num / den) * cpow(chi_pi, -d);
    return (BigReal(1) / sqrt(pow_si(BigReal(q), d))) * g;
  }
  BigComplex sum = BigComplex::zero(prec);
  for (const EInt& x : units_mod_power(place, f)) {
    long pe = pairing_exp(place, class_idx, class_of(x, place));
    long ae = additive_char_exp72(x, d + f, place, sign);
    sum += root72(12 * pe + ae);
  }
  BigReal scale = sqrt(pow_si(BigReal(q), -(d + 2 * f)));
  return scale * (cpow(chi_pi, -d - f) * sum);
}

// ---------------------------------------------------------------------------
// TransitionContext

struct TransitionContext::Impl {
  int sign = -1;
  std::pair<int, int> rcls{0, 0};
  int mb2 = 0, mb3 = 0;  // classes of -r

  // Classes of representatives, their negatives, and the S-unit image.
  std::array<int, kN> c2{}, c3{}, n2{}, n3{}, u2{}, u3{};

  // Hilbert pairing exponent tables (values in 0..5).
  std::array<std::array<int8_t, kN>, kN> pen{};  // (eta_i, -eta_j)_S     [i][j]
  std::array<std::array<int8_t, kN>, kN> pun{};  // (u_h,   -eta_j)_S     [h][j]
  std::array<std::array<int8_t, kN>, kN> pue{};  // (u_h,    eta_i)_S     [h][i]

  // Class-difference index tables.
  std::vector<int16_t> sub2t, sub3t;
  int sub2(int a, int b) const { return sub2t[a * 144 + b]; }
  int sub3(int a, int b) const { return sub3t[a * 324 + b]; }

  // Slot-packed local gamma transforms:
  //   h2[c][m] = coefficient of W^{m-3} in sum_y zeta6^{(c,y)} P_2[y], over kDen2;
  //   h3[c][m] = coefficient of V^{m-5} in sum_y zeta6^{(c,y)} P_3[y], over kDen3;
  //   h3rot[(e*324 + c)*10 + m] = zeta6^e * h3[c][m].
  std::vector<std::array<CycloExact, kSlots2>> h2;
  std::vector<std::array<CycloExact, kSlots3>> h3;
  std::vector<CycloExact> h3rot;
  const CycloExact* h3rot_at(int e, int c) const { return &h3rot[(e * 324 + c) * kSlots3]; }

  LaurentVW assemble(int ci2, int ci3, int nj2, int nj3, int cj2, int cj3, int pen_exp,
                     bool minus_s) const;
  LaurentVW column(int jj) const;
};

namespace {

// Packs a single-place gamma factor into its slot array.
template <std::size_t N>
void pack_gamma(const LaurentVW& g, long long want_den, int offset, bool place_three,
                std::array<CycloExact, N>& out) {
  if (g.den() != want_den) throw std::logic_error("transition: unexpected gamma denominator");
  for (const auto& kv : g.terms()) {
    int w = place_three ? kv.first.first : kv.first.second;
    int other = place_three ? kv.first.second : kv.first.first;
    if (other != 0) throw std::logic_error("transition: gamma term off its own place");
    int slot = w + offset;
    if (slot < 0 || slot >= static_cast<int>(N))
      throw std::logic_error("transition: gamma support outside the fixed window");
    out[static_cast<std::size_t>(slot)] = kv.second;
  }
}

}  // namespace

TransitionContext::TransitionContext(const EInt& r, int sign) {
  check_sign(sign);
  if (r.is_zero() || !coprime_to_six(r))
    throw std::invalid_argument("TransitionContext: r must be nonzero and coprime to six");
  auto im = std::make_shared<Impl>();
  im->sign = sign;
  im->rcls = local_class_pair(r);
  EInt mr = -r;
  im->mb2 = class_of(mr, Place::two);
  im->mb3 = class_of(mr, Place::three);

  const CosetTable& tab = coset_table();
  for (int i = 0; i < kN; ++i) {
    const EInt& eta = tab.representative(i + 1);
    EInt neg = -eta;
    im->c2[i] = class_of(eta, Place::two);
    im->c3[i] = class_of(eta, Place::three);
    im->n2[i] = class_of(neg, Place::two);
    im->n3[i] = class_of(neg, Place::three);
    im->u2[i] = tab.unit_classes()[static_cast<std::size_t>(i)].first;
    im->u3[i] = tab.unit_classes()[static_cast<std::size_t>(i)].second;
  }
  for (int a = 0; a < kN; ++a)
    for (int b = 0; b < kN; ++b) {
      im->pen[a][b] = static_cast<int8_t>(
          (pairing_exp(Place::two, im->c2[a], im->n2[b]) + pairing_exp(Place::three, im->c3[a], im->n3[b])) % 6);
      im->pun[a][b] = static_cast<int8_t>(
          (pairing_exp(Place::two, im->u2[a], im->n2[b]) + pairing_exp(Place::three, im->u3[a], im->n3[b])) % 6);
      im->pue[a][b] = static_cast<int8_t>(
          (pairing_exp(Place::two, im->u2[a], im->c2[b]) + pairing_exp(Place::three, im->u3[a], im->c3[b])) % 6);
    }

  im->sub2t.resize(144 * 144);
  for (int a = 0; a < 144; ++a) {
    LocalClass ca = class_from_index(Place::two, a);
    for (int b = 0; b < 144; ++b)
      im->sub2t[a * 144 + b] =
          static_cast<int16_t>(class_index(class_sub(ca, class_from_index(Place::two, b))));
  }
  im->sub3t.resize(324 * 324);
  for (int a = 0; a < 324; ++a) {
    LocalClass ca = class_from_index(Place::three, a);
    for (int b = 0; b < 324; ++b)
      im->sub3t[a * 324 + b] =
          static_cast<int16_t>(class_index(class_sub(ca, class_from_index(Place::three, b))));
  }

  // Local gamma tables and their pairing transforms.
  std::vector<std::array<CycloExact, kSlots2>> p2(144);
  std::vector<std::array<CycloExact, kSlots3>> p3(324);
  for (int y = 0; y < 144; ++y) pack_gamma(tate_gamma_class(y, Place::two, sign), kDen2, kOff2, false, p2[y]);
  for (int y = 0; y < 324; ++y) pack_gamma(tate_gamma_class(y, Place::three, sign), kDen3, kOff3, true, p3[y]);

  // Rotations zeta6^t * p[y] once, then H[c] = sum_y rot[(c,y)][y].
  std::vector<std::array<CycloExact, kSlots2>> p2rot(6 * 144);
  for (int t = 0; t < 6; ++t)
    for (int y = 0; y < 144; ++y)
      for (int m = 0; m < kSlots2; ++m) p2rot[t * 144 + y][m] = p2[y][m].times_zeta_pow(12 * t);
  std::vector<std::array<CycloExact, kSlots3>> p3rot(6 * 324);
  for (int t = 0; t < 6; ++t)
    for (int y = 0; y < 324; ++y)
      for (int m = 0; m < kSlots3; ++m) p3rot[t * 324 + y][m] = p3[y][m].times_zeta_pow(12 * t);

  im->h2.assign(144, {});
  for (int c = 0; c < 144; ++c)
    for (int y = 0; y < 144; ++y) {
      const auto& src = p2rot[pairing_exp(Place::two, c, y) * 144 + y];
      for (int m = 0; m < kSlots2; ++m) im->h2[c][m] += src[m];
    }
  im->h3.assign(324, {});
  for (int c = 0; c < 324; ++c)
    for (int y = 0; y < 324; ++y) {
      const auto& src = p3rot[pairing_exp(Place::three, c, y) * 324 + y];
      for (int m = 0; m < kSlots3; ++m) im->h3[c][m] += src[m];
    }
  im->h3rot.assign(6 * 324 * kSlots3, CycloExact::zero());
  for (int e = 0; e < 6; ++e)
    for (int c = 0; c < 324; ++c)
      for (int m = 0; m < kSlots3; ++m)
        im->h3rot[(e * 324 + c) * kSlots3 + m] = im->h3[c][m].times_zeta_pow(12 * e);

  impl_ = std::move(im);
}

const std::pair<int, int>& TransitionContext::r_class() const { return impl_->rcls; }
int TransitionContext::sign() const { return impl_->sign; }

// Shared assembly of one entry (or of one column when summing over i outside):
// given the classes of eta_i (ci), -eta_j (nj) and eta_j (cj) plus the outer
// pairing exponent, runs the S-unit sum grouped by the place-two class.
LaurentVW TransitionContext::Impl::assemble(int ci2, int ci3, int nj2, int nj3, int cj2, int cj3,
                                            int pen_exp, bool minus_s) const {
  const int m2 = sub2(sub2(mb2, cj2), ci2);
  const int m3 = sub3(sub3(mb3, cj3), ci3);
  std::vector<CycloExact> acc(144 * kSlots3);
  std::vector<char> hit(144, 0);
  for (int h = 0; h < kN; ++h) {
    int t2 = sub2(m2, u2[h]);
    int t3 = sub3(m3, u3[h]);
    int e = (pairing_exp(Place::two, u2[h], nj2) + pairing_exp(Place::three, u3[h], nj3) + 12 -
             pairing_exp(Place::two, u2[h], ci2) - pairing_exp(Place::three, u3[h], ci3)) %
            6;
    const CycloExact* src = h3rot_at(e, t3);
    CycloExact* dst = &acc[t2 * kSlots3];
    hit[t2] = 1;
    for (int m = 0; m < kSlots3; ++m) dst[m] += src[m];
  }
  LaurentVW out;
  out.set_den(kTotalDen);
  for (int t2 = 0; t2 < 144; ++t2) {
    if (!hit[t2]) continue;
    for (int a = 0; a < kSlots2; ++a) {
      if (h2[t2][a].is_zero()) continue;
      for (int b = 0; b < kSlots3; ++b) {
        const CycloExact& bb = acc[t2 * kSlots3 + b];
        if (bb.is_zero()) continue;
        out.add_term(b - kOff3, a - kOff2, h2[t2][a] * bb);
      }
    }
  }
  if (pen_exp % 6 != 0) {
    LaurentVW rot;
    rot.set_den(out.den());
    for (const auto& kv : out.terms())
      rot.add_term(kv.first.first, kv.first.second, kv.second.times_zeta_pow(12 * (pen_exp % 6)));
    out = std::move(rot);
  }
  if (minus_s) out = out.negated_s();
  return out;
}

LaurentVW TransitionContext::entry(int i, int j, bool minus_s) const {
  if (i < 1 || i > kN || j < 1 || j > kN) throw std::invalid_argument("entry: index out of range");
  const Impl& im = *impl_;
  int ii = i - 1, jj = j - 1;
  LaurentVW e = im.assemble(im.c2[ii], im.c3[ii], im.n2[jj], im.n3[jj], im.c2[jj], im.c3[jj],
                            im.pen[ii][jj], minus_s);
  e.normalize();
  return e;
}

LaurentVW TransitionContext::entry_with(const EInt& eta_i, const EInt& eta_j, bool minus_s) const {
  if (eta_i.is_zero() || eta_j.is_zero() || !coprime_to_six(eta_i) || !coprime_to_six(eta_j))
    throw std::invalid_argument("entry_with: generators must be nonzero and coprime to six");
  const Impl& im = *impl_;
  EInt neg_j = -eta_j;
  int ci2 = class_of(eta_i, Place::two), ci3 = class_of(eta_i, Place::three);
  int nj2 = class_of(neg_j, Place::two), nj3 = class_of(neg_j, Place::three);
  int cj2 = class_of(eta_j, Place::two), cj3 = class_of(eta_j, Place::three);
  int pen_exp = hilbert_exp_S(eta_i, neg_j);
  LaurentVW e = im.assemble(ci2, ci3, nj2, nj3, cj2, cj3, pen_exp, minus_s);
  e.normalize();
  return e;
}

LaurentVW TransitionContext::Impl::column(int jj) const {
  const int base2 = sub2(mb2, c2[jj]);
  const int base3 = sub3(mb3, c3[jj]);
  std::vector<CycloExact> acc(144 * kSlots3);
  std::vector<char> hit(144, 0);
  for (int i = 0; i < kN; ++i) {
    const int m2 = sub2(base2, c2[i]);
    const int m3 = sub3(base3, c3[i]);
    const int pe = pen[i][jj];
    for (int h = 0; h < kN; ++h) {
      int t2 = sub2(m2, u2[h]);
      int t3 = sub3(m3, u3[h]);
      int e = pe + pun[h][jj] + 6 - pue[h][i];
      e %= 6;
      const CycloExact* src = h3rot_at(e, t3);
      CycloExact* dst = &acc[t2 * kSlots3];
      hit[t2] = 1;
      for (int m = 0; m < kSlots3; ++m) dst[m] += src[m];
    }
  }
  LaurentVW out;
  out.set_den(kTotalDen);
  for (int t2 = 0; t2 < 144; ++t2) {
    if (!hit[t2]) continue;
    for (int a = 0; a < kSlots2; ++a) {
      if (h2[t2][a].is_zero()) continue;
      for (int b = 0; b < kSlots3; ++b) {
        const CycloExact& bb = acc[t2 * kSlots3 + b];
        if (bb.is_zero()) continue;
        out.add_term(b - kOff3, a - kOff2, h2[t2][a] * bb);
      }
    }
  }
  return out;
}

LaurentVW TransitionContext::column_sum(int j) const {
  if (j < 1 || j > kN) throw std::invalid_argument("column_sum: index out of range");
  LaurentVW out = impl_->column(j - 1);
  out.normalize();
  // Contract: in lowest terms the column denominator divides 216, the numerators
  // lie in the index-36 subring, and the support stays inside the fixed window.
  if (out.den() <= 0 || kColumnDen % out.den() != 0)
    throw std::logic_error("column_sum: denominator does not divide 216");
  for (const auto& kv : out.terms())
    if (!kv.second.in_subring_36())
      throw std::logic_error("column_sum: coefficient lies outside the index-36 subring");
  int lo1, hi1, lo2, hi2;
  if (out.support(lo1, hi1, lo2, hi2) && (lo1 < -5 || hi1 > 4 || lo2 < -3 || hi2 > 5))
    throw std::logic_error("column_sum: support escapes the fixed window");
  return out;
}

BigComplex TransitionContext::entry_numeric(int i, int j, const BigReal& s0) const {
  if (i < 1 || i > kN || j < 1 || j > kN)
    throw std::invalid_argument("entry_numeric: index out of range");
  const Impl& im = *impl_;
  int ii = i - 1, jj = j - 1;
  mpfr_prec_t prec = std::max<mpfr_prec_t>(s0.precision(), BigReal::working_precision());
  BigReal two_pi = BigReal(2) * const_pi(prec);
  std::array<BigComplex, 6> z6;
  for (int t = 0; t < 6; ++t) z6[t] = BigComplex::cis(two_pi * BigReal(t) / BigReal(6));
  std::vector<BigComplex> g2(144, BigComplex::zero(prec)), g3(324, BigComplex::zero(prec));
  for (int y = 0; y < 144; ++y) g2[y] = tate_gamma_numeric(y, Place::two, s0, im.sign);
  for (int y = 0; y < 324; ++y) g3[y] = tate_gamma_numeric(y, Place::three, s0, im.sign);
  std::vector<BigComplex> h2n(144, BigComplex::zero(prec)), h3n(324, BigComplex::zero(prec));
  for (int c = 0; c < 144; ++c)
    for (int y = 0; y < 144; ++y) h2n[c] += z6[pairing_exp(Place::two, c, y)] * g2[y];
  for (int c = 0; c < 324; ++c)
    for (int y = 0; y < 324; ++y) h3n[c] += z6[pairing_exp(Place::three, c, y)] * g3[y];
  const int m2 = im.sub2(im.sub2(im.mb2, im.c2[jj]), im.c2[ii]);
  const int m3 = im.sub3(im.sub3(im.mb3, im.c3[jj]), im.c3[ii]);
  BigComplex acc = BigComplex::zero(prec);
  for (int h = 0; h < kN; ++h) {
    int t2 = im.sub2(m2, im.u2[h]);
    int t3 = im.sub3(m3, im.u3[h]);
    int e = (im.pun[h][jj] + 6 - im.pue[h][ii]) % 6;
    acc += z6[e] * (h2n[t2] * h3n[t3]);
  }
  BigReal pf2 = BigReal(1) - exp(-(BigReal(6) * s0 * log(BigReal(4))));
  BigReal pf3 = BigReal(1) - exp(-(BigReal(6) * s0 * log(BigReal(3))));
  BigComplex out = z6[im.pen[ii][jj]] * acc;
  out = (pf2 * pf3 / BigReal(static_cast<long>(kSixPowSix))) * out;
  return out;
}

ColumnSums column_sums(const EInt& r, int sign) {
  TransitionContext ctx(r, sign);
  ColumnSums cs;
  cs.r_class = ctx.r_class();
  cs.sign = sign;
  for (int j = 1; j <= kN; ++j) cs.cols[static_cast<std::size_t>(j - 1)] = ctx.column_sum(j);
  return cs;
}

bool ColumnSums::operator==(const ColumnSums& o) const {
  if (r_class != o.r_class || sign != o.sign) return false;
  for (int j = 0; j < kN; ++j)
    if (!(cols[static_cast<std::size_t>(j)] == o.cols[static_cast<std::size_t>(j)])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Diagonal product check

namespace {

// Accumulates the (i,j) entry of T(r,s) T(r,-s) exactly, with 128-bit
// coefficient accumulators over the fixed common denominator; only zeroness
// matters, so the denominator is never materialized.
struct WideAccum {
  std::map<std::pair<int, int>, std::array<__int128, 2 * CycloExact::kDegree - 1>> slots;

  void add_product(const LaurentVW& a, const LaurentVW& b) {
    for (const auto& ka : a.terms())
      for (const auto& kb : b.terms()) {
        auto& acc = slots[{ka.first.first + kb.first.first, ka.first.second + kb.first.second}];
        for (int x = 0; x < CycloExact::kDegree; ++x) {
          long long cx = ka.second.coord(x);
          if (cx == 0) continue;
          for (int y = 0; y < CycloExact::kDegree; ++y) {
            long long cy = kb.second.coord(y);
            if (cy != 0) acc[x + y] += static_cast<__int128>(cx) * cy;
          }
        }
      }
  }

  bool is_zero() const {
    for (const auto& kv : slots) {
      auto conv = kv.second;
      for (int e = 2 * CycloExact::kDegree - 2; e >= CycloExact::kDegree; --e) {
        conv[e - 12] += conv[e];
        conv[e - 24] -= conv[e];
        conv[e] = 0;
      }
      for (int x = 0; x < CycloExact::kDegree; ++x)
        if (conv[x] != 0) return false;
    }
    return true;
  }
};

// Rescales a normalized entry back to the fixed common denominator so that
// products can share one implicit denominator.
LaurentVW lift_to_den(const LaurentVW& e, long long den) {
  if (den % e.den() != 0) throw std::logic_error("diagonal check: denominator does not divide");
  long long s = den / e.den();
  LaurentVW out;
  out.set_den(den);
  for (const auto& kv : e.terms()) out.add_term(kv.first.first, kv.first.second, kv.second.scaled(s));
  return out;
}

}  // namespace

bool diagonal_product_check(const EInt& r, const std::vector<int>& sample, int sign) {
  TransitionContext ctx(r, sign);
  std::map<int, std::vector<LaurentVW>> rows, cols;
  for (int i : sample) {
    auto& row = rows[i];
    row.reserve(kN);
    for (int k = 1; k <= kN; ++k) row.push_back(lift_to_den(ctx.entry(i, k, false), kTotalDen));
  }
  for (int j : sample) {
    auto& col = cols[j];
    col.reserve(kN);
    for (int k = 1; k <= kN; ++k) col.push_back(lift_to_den(ctx.entry(k, j, true), kTotalDen));
  }
  for (int i : sample)
    for (int j : sample) {
      WideAccum acc;
      for (int k = 0; k < kN; ++k) acc.add_product(rows[i][static_cast<std::size_t>(k)], cols[j][static_cast<std::size_t>(k)]);
      bool zero = acc.is_zero();
      if (i == j ? zero : !zero) return false;
    }
  return true;
}

// ---------------------------------------------------------------------------
// Serialization

void save_column_sums(std::ostream& os, const ColumnSums& cs) {
  // Rows hold the integral numerators of den * c_{jw}; every column denominator
  // divides the common value 216 written in the header.
  long rows = 0;
  for (const auto& col : cs.cols) {
    if (col.den() <= 0 || 216 % col.den() != 0)
      throw std::logic_error("save_column_sums: column denominator does not divide 216");
    rows += static_cast<long>(col.terms().size());
  }
  os << "theta6-tmat v2\n";
  os << "class2 " << cs.r_class.first << " class3 " << cs.r_class.second << " sign " << cs.sign
     << " den 216 rows " << rows << "\n";
  for (int j = 1; j <= kN; ++j) {
    const LaurentVW& col = cs.cols[static_cast<std::size_t>(j - 1)];
    const long lift = static_cast<long>(216 / col.den());
    for (const auto& kv : col.terms()) {
      os << j << ' ' << kv.first.first << ' ' << kv.first.second;
      for (int x = 0; x < CycloExact::kDegree; ++x) os << ' ' << kv.second.coord(x) * lift;
      os << '\n';
    }
  }
  os << "end\n";
}

ColumnSums load_column_sums(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "theta6-tmat v2")
    throw std::runtime_error("column-sum cache: bad magic line");
  if (!std::getline(is, line)) throw std::runtime_error("column-sum cache: missing header");
  std::istringstream hs(line);
  std::string k1, k2, k3, k4, k5;
  long den = -1, rows = -1;
  ColumnSums cs;
  hs >> k1 >> cs.r_class.first >> k2 >> cs.r_class.second >> k3 >> cs.sign >> k4 >> den >> k5 >>
      rows;
  if (!hs || k1 != "class2" || k2 != "class3" || k3 != "sign" || k4 != "den" || k5 != "rows" ||
      den != 216 || rows < 0)
    throw std::runtime_error("column-sum cache: bad header");
  if (cs.sign != 1 && cs.sign != -1) throw std::runtime_error("column-sum cache: bad sign");
  for (auto& col : cs.cols) col.set_den(den);
  for (long n = 0; n < rows; ++n) {
    if (!std::getline(is, line)) throw std::runtime_error("column-sum cache: truncated");
    std::istringstream rs(line);
    int j, w1, w2;
    rs >> j >> w1 >> w2;
    if (!rs || j < 1 || j > kN) throw std::runtime_error("column-sum cache: bad row");
    CycloExact c;
    for (int x = 0; x < CycloExact::kDegree; ++x) {
      long long v;
      rs >> v;
      if (!rs) throw std::runtime_error("column-sum cache: bad coefficient row");
      c.set_coord(x, v);
    }
    cs.cols[static_cast<std::size_t>(j - 1)].add_term(w1, w2, c);
  }
  if (!std::getline(is, line) || line != "end")
    throw std::runtime_error("column-sum cache: missing end marker");
  for (auto& col : cs.cols) col.normalize();
  return cs;
}

std::string tmat_cache_filename(const std::pair<int, int>& r_class, int sign) {
  return "theta6-tmat-v2-c" + std::to_string(r_class.first) + "-" + std::to_string(r_class.second) +
         (sign < 0 ? "-sm1" : "-sp1") + ".txt";
}

}  // namespace theta6
