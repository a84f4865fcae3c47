#include "theta6/cosets.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace theta6 {

namespace {

constexpr int kN2 = 144;
constexpr int kN3 = 324;
constexpr int kTotal = kN2 * kN3;
constexpr int kCosets = 216;

int pair_code(int i2, int i3) { return i2 * kN3 + i3; }

int code_of(const EInt& x) {
  return pair_code(class_index(decompose_local(x, Place::two)),
                   class_index(decompose_local(x, Place::three)));
}

int code_add(int a, int b) {
  const LocalClass s2 = class_add(class_from_index(Place::two, a / kN3),
                                  class_from_index(Place::two, b / kN3));
  const LocalClass s3 = class_add(class_from_index(Place::three, a % kN3),
                                  class_from_index(Place::three, b % kN3));
  return pair_code(class_index(s2), class_index(s3));
}

}  // namespace

CosetTable::CosetTable() : coset_of_(kTotal, 0) {
  // Closure of the S-unit images: zeta6, 2, and sqrt(-3) = 2w - 1.
  const int gens[3] = {code_of(EInt{0, 1}), code_of(EInt{2, 0}), code_of(EInt{-1, 2})};
  std::set<int> subgroup{0};
  std::vector<int> frontier{0};
  while (!frontier.empty()) {
    const int c = frontier.back();
    frontier.pop_back();
    for (int g : gens) {
      const int n = code_add(c, g);
      if (subgroup.insert(n).second) frontier.push_back(n);
    }
  }
  if (static_cast<int>(subgroup.size()) != kCosets)
    throw std::logic_error("coset table: the S-unit image does not have order 216");
  const std::vector<int> uvec(subgroup.begin(), subgroup.end());
  units_.reserve(uvec.size());
  for (int u : uvec) units_.push_back({u / kN3, u % kN3});

  int next = 0;
  for (int c = 0; c < kTotal; ++c) {
    if (coset_of_[c] != 0) continue;
    ++next;
    if (next > kCosets) throw std::logic_error("coset table: more than 216 orbits");
    canonical_[static_cast<std::size_t>(next - 1)] = {c / kN3, c % kN3};
    for (int u : uvec) {
      const int m = code_add(c, u);
      if (coset_of_[m] == 0) {
        coset_of_[m] = next;
      } else if (coset_of_[m] != next) {
        throw std::logic_error("coset table: orbits are not disjoint");
      }
    }
  }
  if (next != kCosets) throw std::logic_error("coset table: orbit count is not 216");
  identity_ = coset_of_[0];

  // Small representatives: scan coprime-to-6 elements by norm, store each
  // first hit V-normalized so downstream code can use them directly.
  struct Cand {
    long norm, a, b;
  };
  std::vector<Cand> cands;
  for (long a = -60; a <= 60; ++a)
    for (long b = -60; b <= 60; ++b) {
      if (a == 0 && b == 0) continue;
      cands.push_back({a * a + a * b + b * b, a, b});
    }
  std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
    return std::tie(x.norm, x.a, x.b) < std::tie(y.norm, y.a, y.b);
  });
  int filled = 0;
  std::array<bool, kCosets> have{};
  for (const Cand& c : cands) {
    const EInt x{c.a, c.b};
    if (!coprime_to_six(x)) continue;
    const int j = coset_of_[static_cast<std::size_t>(code_of(x))];
    if (have[static_cast<std::size_t>(j - 1)]) continue;
    have[static_cast<std::size_t>(j - 1)] = true;
    reps_[static_cast<std::size_t>(j - 1)] = canonical_associate(x);
    if (++filled == kCosets) break;
  }
  if (filled != kCosets)
    throw std::logic_error("coset table: representative scan did not cover all cosets");
}

int CosetTable::index_of(const EInt& x) const {
  if (x.is_zero()) throw std::invalid_argument("coset index of zero is undefined");
  return coset_of_[static_cast<std::size_t>(code_of(x))];
}

int CosetTable::index_of_pair(const LocalClass& c2, const LocalClass& c3) const {
  if (c2.place != Place::two || c3.place != Place::three)
    throw std::invalid_argument("index_of_pair expects classes at places two and three");
  return coset_of_[static_cast<std::size_t>(pair_code(class_index(c2), class_index(c3)))];
}

const EInt& CosetTable::representative(int j) const {
  if (j < 1 || j > kCosets) throw std::invalid_argument("coset index out of range");
  return reps_[static_cast<std::size_t>(j - 1)];
}

std::pair<int, int> CosetTable::canonical_pair(int j) const {
  if (j < 1 || j > kCosets) throw std::invalid_argument("coset index out of range");
  return canonical_[static_cast<std::size_t>(j - 1)];
}

const CosetTable& coset_table() {
  static CosetTable table;
  return table;
}

const std::array<EInt, 12>& v_residues() {
  static const std::array<EInt, 12> reps = {
      EInt{1, 0}, EInt{5, 0},  EInt{4, 3}, EInt{8, 3},  EInt{1, 6},  EInt{5, 6},
      EInt{1, 9}, EInt{2, 9},  EInt{5, 9}, EInt{7, 9},  EInt{10, 9}, EInt{11, 9}};
  return reps;
}

bool in_V(const EInt& x) {
  if (!coprime_to_six(x)) throw std::invalid_argument("in_V requires gcd(x, 6) = 1");
  return in_residue_list(x);
}

VNormalization normalize_to_V(const EInt& a) {
  if (!coprime_to_six(a)) throw std::invalid_argument("normalize_to_V requires gcd(a, 6) = 1");
  for (int k = 1; k <= 6; ++k) {
    EInt cand = a.times_unit(k);
    if (in_residue_list(cand)) return {k, cand, coset_table().index_of(cand)};
  }
  throw std::logic_error("normalize_to_V: no associate lies in V");
}

bool v_property_check() {
  const auto& reps = v_residues();
  for (const EInt& v : reps)
    for (const EInt& w : reps)
      if (hilbert_exp_S(v, w) != 0 && hilbert_exp_S(v, -w) != 0) return false;
  return true;
}

}  // namespace theta6
