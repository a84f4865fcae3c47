#include "theta6/eisenstein.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace theta6 {

EInt EInt::times_unit(int k) const {
  k %= 6;
  if (k < 0) k += 6;
  // w*(a+bw) = -b + (a+b) w; apply repeatedly from a table of small cases.
  switch (k) {
    case 0: return *this;
    case 1: return {-b, a + b};
    case 2: return {-a - b, a};       // w^2 = w - 1
    case 3: return {-a, -b};
    case 4: return {b, -a - b};
    default: return {a + b, -a};      // w^5 = conj(w) on units
  }
}

const EInt& unit_power(int k) {
  static const std::array<EInt, 6> units = {
      EInt{1, 0}, EInt{0, 1}, EInt{-1, 1}, EInt{-1, 0}, EInt{0, -1}, EInt{1, -1}};
  k %= 6;
  if (k < 0) k += 6;
  return units[static_cast<size_t>(k)];
}

std::string EInt::str() const {
  std::ostringstream os;
  os << *this;
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const EInt& x) {
  if (x.b == 0) return os << x.a;
  if (x.a == 0) {
    if (x.b == 1) return os << "w";
    if (x.b == -1) return os << "-w";
    return os << x.b << "*w";
  }
  os << x.a;
  if (x.b > 0) {
    os << "+";
    if (x.b != 1) os << x.b << "*";
  } else {
    os << "-";
    if (x.b != -1) os << -x.b << "*";
  }
  return os << "w";
}

namespace {

// Nearest integer to n/d for d > 0 (ties toward +infinity).
mpz_class round_div(const mpz_class& n, const mpz_class& d) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), mpz_class(2 * n + d).get_mpz_t(), mpz_class(2 * d).get_mpz_t());
  return q;
}

}  // namespace

std::pair<EInt, EInt> divmod(const EInt& x, const EInt& y) {
  if (y.is_zero()) throw std::invalid_argument("divmod: division by zero");
  EInt t = x * y.conj();
  mpz_class n = y.norm();
  EInt q{round_div(t.a, n), round_div(t.b, n)};
  return {q, x - q * y};
}

EInt divexact(const EInt& x, const EInt& y) {
  if (y.is_zero()) throw std::invalid_argument("divexact: division by zero");
  EInt t = x * y.conj();
  mpz_class n = y.norm();
  if (t.a % n != 0 || t.b % n != 0)
    throw std::invalid_argument("divexact: " + y.str() + " does not divide " + x.str());
  return {t.a / n, t.b / n};
}

EInt gcd(const EInt& x, const EInt& y) {
  EInt u = x, v = y;
  while (!v.is_zero()) {
    auto [q, r] = divmod(u, v);
    u = v;
    v = r;
  }
  return canonical_associate(u);
}

std::array<EInt, 3> egcd(const EInt& x, const EInt& y) {
  EInt r0 = x, r1 = y;
  EInt s0{1, 0}, s1{0, 0}, t0{0, 0}, t1{1, 0};
  while (!r1.is_zero()) {
    auto [q, r] = divmod(r0, r1);
    r0 = r1; r1 = r;
    EInt s2 = s0 - q * s1, t2 = t0 - q * t1;
    s0 = s1; s1 = s2;
    t0 = t1; t1 = t2;
  }
  return {r0, s0, t0};
}

bool in_residue_list(const EInt& x) {
  static const int list[12][2] = {{1, 0}, {5, 0},  {4, 3}, {8, 3}, {1, 6},  {5, 6},
                                  {1, 9}, {2, 9},  {5, 9}, {7, 9}, {10, 9}, {11, 9}};
  long ra = mpz_fdiv_ui(x.a.get_mpz_t(), 12);
  long rb = mpz_fdiv_ui(x.b.get_mpz_t(), 12);
  for (auto& e : list)
    if (ra == e[0] && rb == e[1]) return true;
  return false;
}

std::pair<EInt, int> canonical_associate_exp(const EInt& x) {
  if (x.is_zero()) return {x, 0};
  EInt c = x;
  if (coprime_to_six(x)) {
    for (int k = 0; k < 6; ++k) {
      if (in_residue_list(c)) return {c, k};
      c = c.times_unit(1);
    }
    throw std::logic_error("canonical_associate: no associate in the residue list");
  }
  // Exactly one of the six associates has a > 0, b >= 0 (arg in [0, pi/3)).
  for (int k = 0; k < 6; ++k) {
    if (c.a > 0 && c.b >= 0) return {c, k};
    c = c.times_unit(1);
  }
  throw std::logic_error("canonical_associate: no associate in the fundamental sector");
}

EInt canonical_associate(const EInt& x) { return canonical_associate_exp(x).first; }

bool coprime_to_six(const EInt& x) {
  // Coprime to 2 iff N(x) is odd; coprime to sqrt(-3) iff 3 does not divide N(x).
  mpz_class n = x.norm();
  return n % 2 != 0 && n % 3 != 0;
}

EInt parse_eint(const std::string& text) {
  // Accepted forms: "a", "b*w", "w", "-w", "a+b*w", "a-b*w" (the "*" is optional).
  std::string s;
  for (char ch : text)
    if (!isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s.empty()) throw std::invalid_argument("parse_eint: empty input");

  auto parse_int = [](std::string t) -> mpz_class {
    if (t.empty() || t == "+") return 1;
    if (t == "-") return -1;
    if (t.front() == '+') t.erase(0, 1);  // mpz rejects an explicit plus sign
    return mpz_class(t);
  };

  // Find the split between the rational part and the w-part, if any.
  size_t wpos = s.find('w');
  try {
    if (wpos == std::string::npos) return {mpz_class(s), 0};
    std::string head = s.substr(0, wpos);
    if (!head.empty() && head.back() == '*') head.pop_back();
    // Locate a +/- separating two terms (not a leading sign).
    size_t sep = std::string::npos;
    for (size_t i = 1; i < head.size(); ++i)
      if (head[i] == '+' || head[i] == '-') sep = i;
    if (sep == std::string::npos) return {0, parse_int(head)};
    mpz_class a(head.substr(0, sep));
    std::string btxt = head.substr(sep);
    return {a, parse_int(btxt)};
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("parse_eint: cannot parse '" + text + "'");
  }
}

ResidueBox::ResidueBox(const EInt& c) {
  if (c.is_zero()) throw std::invalid_argument("ResidueBox: zero modulus");
  // Lattice rows for (c): c = (a, b), c*w = (-b, a+b) in the 1, w basis.
  mpz_class r1x = c.a, r1y = c.b;
  mpz_class r2x = -c.b, r2y = c.a + c.b;
  // Column reduce to the Hermite form {(d1, 0), (e, d2)}.
  mpz_class g, u, v;
  mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), r1y.get_mpz_t(), r2y.get_mpz_t());
  d2_ = g;  // g >= 0; g > 0 unless both y-components vanish
  if (d2_ == 0) {
    // c is a nonzero rational integer: lattice is c*Z x c*Z in this basis.
    d1_ = abs(r1x);
    d2_ = d1_;
    e_ = 0;
    return;
  }
  mpz_class w2x = u * r1x + v * r2x;
  mpz_class k1 = r2y / g, k2 = r1y / g;
  mpz_class w1x = k1 * r1x - k2 * r2x;  // y-component is zero by construction
  d1_ = abs(w1x);
  if (d1_ == 0) throw std::invalid_argument("ResidueBox: degenerate lattice");
  mpz_class em;
  mpz_fdiv_r(em.get_mpz_t(), w2x.get_mpz_t(), d1_.get_mpz_t());
  e_ = em;
}

EInt ResidueBox::reduce(const EInt& x) const {
  mpz_class j, i;
  mpz_class qj;
  mpz_fdiv_qr(qj.get_mpz_t(), j.get_mpz_t(), x.b.get_mpz_t(), d2_.get_mpz_t());
  mpz_class xa = x.a - qj * e_;
  mpz_fdiv_r(i.get_mpz_t(), xa.get_mpz_t(), d1_.get_mpz_t());
  return {i, j};
}

std::vector<EInt> ResidueBox::all() const {
  std::vector<EInt> out;
  out.reserve(mpz_get_ui(count().get_mpz_t()));
  for (mpz_class j = 0; j < d2_; ++j)
    for (mpz_class i = 0; i < d1_; ++i) out.emplace_back(i, j);
  return out;
}

long ResidueBox::index(const EInt& x) const {
  EInt r = reduce(x);
  mpz_class idx = r.b * d1_ + r.a;
  return idx.get_si();
}

EInt pow_eint(EInt x, unsigned long e) {
  EInt acc{1, 0};
  while (e > 0) {
    if (e & 1) acc *= x;
    x *= x;
    e >>= 1;
  }
  return acc;
}

int valuation(EInt x, const EInt& p) {
  if (x.is_zero()) throw std::invalid_argument("valuation: zero element");
  int k = 0;
  while (divides(p, x)) {
    x = divexact(x, p);
    ++k;
  }
  return k;
}

namespace {

// A cube root of unity u != 1 modulo p = 1 mod 3, via g^((p-1)/3) for the
// first base g whose power is nontrivial.
mpz_class cube_root_of_unity(const mpz_class& p) {
  mpz_class e = (p - 1) / 3;
  for (long g = 2;; ++g) {
    mpz_class z;
    mpz_class base(g);
    mpz_powm(z.get_mpz_t(), base.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
    if (z != 1) return z;
  }
}

}  // namespace

EInt split_prime_above(const mpz_class& p) {
  if (p % 3 != 1) throw std::invalid_argument("split_prime_above: p must be 1 mod 3");
  mpz_class u = cube_root_of_unity(p) + 1;
  EInt pi = gcd(EInt{p, 0}, EInt{-u, 1});
  if (pi.norm() != p) throw std::logic_error("split_prime_above: construction failed");
  return pi;
}

std::vector<PrimeE> enumerate_primes(std::int64_t max_norm) {
  std::vector<PrimeE> out;
  if (max_norm < 7) return out;
  // Sieve rational primes up to max_norm.
  std::vector<bool> comp(static_cast<size_t>(max_norm) + 1, false);
  for (std::int64_t q = 2; q * q <= max_norm; ++q)
    if (!comp[static_cast<size_t>(q)])
      for (std::int64_t m = q * q; m <= max_norm; m += q) comp[static_cast<size_t>(m)] = true;

  for (std::int64_t p = 5; p <= max_norm; ++p) {
    if (comp[static_cast<size_t>(p)]) continue;
    if (p % 3 == 1) {
      EInt pi = split_prime_above(mpz_class(static_cast<long>(p)));
      EInt pib = canonical_associate(pi.conj());
      out.push_back(PrimeE{pi, p, static_cast<long>(p), true});
      out.push_back(PrimeE{pib, p, static_cast<long>(p), true});
    } else if (p % 3 == 2 && p * p <= max_norm) {
      out.push_back(
          PrimeE{canonical_associate(EInt{static_cast<long>(p), 0}), p * p, static_cast<long>(p), false});
    }
  }
  std::sort(out.begin(), out.end(), [](const PrimeE& x, const PrimeE& y) {
    if (x.norm != y.norm) return x.norm < y.norm;
    if (x.gen.a != y.gen.a) return x.gen.a < y.gen.a;
    return x.gen.b < y.gen.b;
  });
  return out;
}

std::vector<std::pair<EInt, int>> factor_eint(const EInt& x) {
  if (x.is_zero()) throw std::invalid_argument("factor_eint: zero element");
  std::vector<std::pair<EInt, int>> out;
  EInt b = x;
  auto strip = [&b, &out](const EInt& q) {
    int k = 0;
    while (divides(q, b)) {
      b = divexact(b, q);
      ++k;
    }
    if (k > 0) out.emplace_back(canonical_associate(q), k);
  };
  mpz_class n = b.norm();
  for (mpz_class p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    if (p == 3) {
      strip(EInt{-1, 2});
    } else if (p % 3 == 1) {
      EInt pi = split_prime_above(p);
      strip(pi);
      strip(pi.conj());
    } else {
      strip(EInt{p, 0});
    }
    n = b.norm();
  }
  if (n > 1) {
    // A single prime remains: split of norm n, or inert of norm p^2.
    if (mpz_perfect_square_p(n.get_mpz_t())) {
      mpz_class p;
      mpz_sqrt(p.get_mpz_t(), n.get_mpz_t());
      if (p % 3 == 2 && mpz_probab_prime_p(p.get_mpz_t(), 30)) strip(EInt{p, 0});
    }
    if (b.norm() > 1) {
      out.emplace_back(canonical_associate(b), 1);
      b = EInt{1, 0};
    }
  }
  return out;
}

mpz_class omega_residue_mod_split(const EInt& pi, const mpz_class& p) {
  // a + b*w = 0 mod pi  =>  w = -a/b in the residue field.
  mpz_class binv;
  if (mpz_invert(binv.get_mpz_t(), pi.b.get_mpz_t(), p.get_mpz_t()) == 0)
    throw std::invalid_argument("omega_residue_mod_split: generator has b not invertible mod p");
  mpz_class u = (-pi.a * binv) % p;
  if (u < 0) u += p;
  return u;
}

mpz_class to_residue_mod_split(const EInt& x, const EInt& pi, const mpz_class& p) {
  mpz_class u = omega_residue_mod_split(pi, p);
  mpz_class r = (x.a + x.b * u) % p;
  if (r < 0) r += p;
  return r;
}

}  // namespace theta6
