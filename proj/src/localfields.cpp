#include "theta6/localfields.hpp"

#include <set>
#include <stdexcept>
#include <string>

namespace theta6 {

namespace {

LocalData build_local_data(Place v) {
  LocalData d;
  d.place = v;
  if (v == Place::two) {
    d.uniformizer = EInt{2, 0};
    d.q = 4;
    d.e6 = 1;
    d.mexp = 3;
    d.gens = {EInt{2, 0}, EInt{3, 2}, EInt{5, 3}, EInt{1, 2}};
    d.orders = {6, 2, 6, 2};
    const int m[4][4] = {{0, 3, 4, 0}, {3, 3, 3, 0}, {2, 3, 0, 3}, {0, 0, 3, 3}};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) d.matrix[i][j] = m[i][j];
    d.unit_roots = {EInt{-1, 1}, EInt{0, -1}};        // w^2, w^4: the cube roots of 1
    d.residue_reps = {EInt{0, 0}, EInt{1, 0}, EInt{0, 1}, EInt{1, 1}};
  } else {
    EInt pi3{-1, 2};  // sqrt(-3)
    d.uniformizer = pi3;
    d.q = 3;
    d.e6 = 2;
    d.mexp = 5;
    EInt one_plus = EInt{1, 0} + pi3;
    d.gens = {pi3, one_plus * one_plus, EInt{2, 0}, EInt{1, 0} + pi3 * pi3 * pi3};
    d.orders = {6, 3, 6, 3};
    const int m[4][4] = {{3, 0, 3, 2}, {0, 0, 4, 0}, {3, 2, 0, 0}, {4, 0, 0, 0}};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) d.matrix[i][j] = m[i][j];
    d.unit_roots = {EInt{-1, 0}};                     // mu_2 \ {1}
    d.residue_reps = {EInt{0, 0}, EInt{1, 0}, EInt{-1, 0}};
  }
  return d;
}

// One place's derived tables: the working residue box and the eager
// (valuation mod 6, unit residue) -> class lookup.
struct PlaceTables {
  LocalData data;
  ResidueBox box;              // modulo pi^mexp
  long box_size;
  std::vector<int> cls_of;     // size 6 * box_size; -1 for non-units
  std::vector<signed char> pair;  // class_count^2 pairing exponents

  explicit PlaceTables(Place v)
      : data(build_local_data(v)),
        box(pow_eint(data.uniformizer, static_cast<unsigned long>(data.mexp))) {
    box_size = box.count().get_si();
    build_class_table();
    build_pair_table();
  }

  bool unit_residue(const EInt& r) const {
    mpz_class n = r.norm();
    return (data.place == Place::two) ? (n % 2 != 0) : (n % 3 != 0);
  }

  void build_class_table() {
    const int nclass = class_count(data.place);
    const std::vector<EInt> residues = box.all();
    // Sixth powers of unit residues modulo pi^mexp.
    std::set<long> sixth;
    long units = 0;
    for (const EInt& r : residues) {
      if (!unit_residue(r)) continue;
      ++units;
      sixth.insert(box.index(pow_eint(r, 6)));
    }
    cls_of.assign(static_cast<size_t>(6) * box_size, -1);
    long filled = 0;
    for (int idx = 0; idx < nclass; ++idx) {
      LocalClass c = class_from_index(data.place, idx);
      // Candidate representative: product of generator powers, split into
      // uniformizer part (exponent e[0]) and unit part.
      EInt u{1, 0};
      for (int i = 1; i < 4; ++i) u *= pow_eint(data.gens[i], static_cast<unsigned long>(c.e[i]));
      for (long w : sixth) {
        const EInt& welem = residues[static_cast<size_t>(w)];
        long key = box.index(u * welem);
        size_t slot = static_cast<size_t>(c.e[0]) * box_size + key;
        if (cls_of[slot] != -1)
          throw std::logic_error("localfields: class table collision (group presentation wrong)");
        cls_of[slot] = idx;
        ++filled;
      }
    }
    // Every unit residue must be covered for each valuation class.
    if (filled != 6 * units)
      throw std::logic_error("localfields: class table does not tile the units");
  }

  void build_pair_table() {
    const int nclass = class_count(data.place);
    pair.assign(static_cast<size_t>(nclass) * nclass, 0);
    for (int i = 0; i < nclass; ++i) {
      LocalClass ci = class_from_index(data.place, i);
      for (int j = 0; j < nclass; ++j) {
        LocalClass cj = class_from_index(data.place, j);
        int s = 0;
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b) s += ci.e[a] * data.matrix[a][b] * cj.e[b];
        pair[static_cast<size_t>(i) * nclass + j] = static_cast<signed char>(((s % 6) + 6) % 6);
      }
    }
  }
};

const PlaceTables& tables(Place v) {
  static const PlaceTables t2(Place::two);
  static const PlaceTables t3(Place::three);
  return v == Place::two ? t2 : t3;
}

}  // namespace

int class_count(Place v) { return v == Place::two ? 144 : 324; }

int class_index(const LocalClass& c) {
  const auto& ord = (c.place == Place::two) ? std::array<int, 4>{6, 2, 6, 2} : std::array<int, 4>{6, 3, 6, 3};
  int idx = 0;
  for (int i = 0; i < 4; ++i) idx = idx * ord[i] + c.e[i];
  return idx;
}

LocalClass class_from_index(Place v, int idx) {
  const auto ord = (v == Place::two) ? std::array<int, 4>{6, 2, 6, 2} : std::array<int, 4>{6, 3, 6, 3};
  LocalClass c{v, {0, 0, 0, 0}};
  for (int i = 3; i >= 0; --i) {
    c.e[i] = idx % ord[i];
    idx /= ord[i];
  }
  return c;
}

namespace {
std::array<int, 4> orders_of(Place v) {
  return (v == Place::two) ? std::array<int, 4>{6, 2, 6, 2} : std::array<int, 4>{6, 3, 6, 3};
}
}  // namespace

LocalClass class_add(const LocalClass& x, const LocalClass& y) {
  if (x.place != y.place) throw std::invalid_argument("class_add: mixed places");
  auto ord = orders_of(x.place);
  LocalClass r{x.place, {}};
  for (int i = 0; i < 4; ++i) r.e[i] = (x.e[i] + y.e[i]) % ord[i];
  return r;
}

LocalClass class_sub(const LocalClass& x, const LocalClass& y) { return class_add(x, class_neg(y)); }

LocalClass class_neg(const LocalClass& x) {
  auto ord = orders_of(x.place);
  LocalClass r{x.place, {}};
  for (int i = 0; i < 4; ++i) r.e[i] = (ord[i] - x.e[i]) % ord[i];
  return r;
}

LocalClass class_scale(const LocalClass& x, int k) {
  auto ord = orders_of(x.place);
  LocalClass r{x.place, {}};
  for (int i = 0; i < 4; ++i) {
    int m = (x.e[i] * k) % ord[i];
    r.e[i] = (m + ord[i]) % ord[i];
  }
  return r;
}

const LocalData& local_data(Place v) { return tables(v).data; }

LocalClass decompose_local(const EInt& x, Place v) {
  if (x.is_zero()) throw std::invalid_argument("decompose_local: zero element");
  const PlaceTables& t = tables(v);
  EInt u = x;
  int k = 0;
  // Strip the uniformizer; most callers pass elements coprime to 6.
  mpz_class n = u.norm();
  int p = (v == Place::two) ? 2 : 3;
  while (n % p == 0) {
    u = divexact(u, t.data.uniformizer);
    n = u.norm();
    ++k;
  }
  long key = t.box.index(u);
  int idx = t.cls_of[static_cast<size_t>(k % 6) * t.box_size + key];
  if (idx < 0) throw std::logic_error("decompose_local: unit residue missing from table");
  return class_from_index(v, idx);
}

bool is_sixth_power_local(const EInt& x, Place v) { return decompose_local(x, v).is_trivial(); }

int pairing_exp(Place v, int ci, int cj) {
  const PlaceTables& t = tables(v);
  return t.pair[static_cast<size_t>(ci) * class_count(v) + cj];
}

int hilbert_exp_local(const EInt& x, const EInt& y, Place v) {
  return pairing_exp(v, class_index(decompose_local(x, v)), class_index(decompose_local(y, v)));
}

int hilbert_exp_S(const EInt& x, const EInt& y) {
  return (hilbert_exp_local(x, y, Place::two) + hilbert_exp_local(x, y, Place::three)) % 6;
}

int conductor_class(Place v, int ci) {
  const PlaceTables& t = tables(v);
  const LocalData& d = t.data;
  // Pairing of the fixed class against the class of an element.
  auto chi_exp = [&](const EInt& e) { return pairing_exp(v, ci, class_index(decompose_local(e, v))); };
  // Layers 1 + r*pi^g for g at or beyond the sixth-power bound are trivial
  // automatically; walk downward while the character stays trivial.
  int f = d.mexp + 1;
  for (int g = d.mexp; g >= 1; --g) {
    bool trivial = true;
    EInt pig = pow_eint(d.uniformizer, static_cast<unsigned long>(g));
    for (const EInt& r : d.residue_reps) {
      if (r.is_zero()) continue;
      if (chi_exp(EInt{1, 0} + r * pig) != 0) { trivial = false; break; }
    }
    if (!trivial) break;
    f = g;
  }
  if (f > d.mexp)
    throw std::logic_error("conductor: nontrivial beyond the sixth-power bound");
  if (f > 1) return f;
  // Trivial on all higher-unit layers: ramification rests on mu_{q-1}.
  for (const EInt& u : d.unit_roots)
    if (chi_exp(u) != 0) return 1;
  return 0;
}

int conductor(const EInt& y, Place v) {
  return conductor_class(v, class_index(decompose_local(y, v)));
}

int additive_char_exp72(const EInt& x, int k, Place v, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("additive_char_exp72: sign must be +-1");
  if (k < 0) throw std::invalid_argument("additive_char_exp72: negative denominator exponent");
  // Rational trace of x / pi_v^k.
  mpq_class t;
  if (v == Place::two) {
    mpz_class den = 1;
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<mp_bitcnt_t>(k));
    t = mpq_class(x.trace(), den);
  } else {
    EInt num = x;
    int m = k / 2;
    if (k % 2 == 1) {
      num = num * EInt{-1, 2};  // multiply by sqrt(-3); denominator becomes (-3)^(m+1)
      m += 1;
    }
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 3, static_cast<unsigned long>(m));
    t = mpq_class(num.trace(), den);
    if (m % 2 == 1) t = -t;  // (-3)^m sign
  }
  t.canonicalize();
  // v-fractional part lambda_v(t): t = n / (v^j * d') with d' coprime to v.
  mpz_class den = t.get_den();
  int p = (v == Place::two) ? 2 : 3;
  int j = 0;
  mpz_class dprime = den;
  while (dprime % p == 0) { dprime /= p; ++j; }
  if (dprime != 1)
    throw std::invalid_argument("additive_char_exp72: trace has support outside the place");
  mpz_class pj;
  mpz_ui_pow_ui(pj.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(j));
  if (72 % pj != 0)
    throw std::invalid_argument("additive_char_exp72: character value outside mu_72");
  mpz_class frac_num = t.get_num() % pj;
  if (frac_num < 0) frac_num += pj;
  mpz_class e = mpz_class(72 / pj) * frac_num;  // 72 * lambda
  long exp72 = mpz_class(e % 72).get_si();
  exp72 = (sign * exp72) % 72;
  if (exp72 < 0) exp72 += 72;
  return static_cast<int>(exp72);
}

}  // namespace theta6
