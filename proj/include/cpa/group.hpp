#pragma once
// Finite groups presented by multiplication tables.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "json.hpp"

#include "cpa/error.hpp"

namespace cpa {

using Element = std::uint32_t;

struct GroupValidation {
  // Orders above this bound are checked on random triples only.
  std::size_t exhaustive_max_order = 64;
  std::size_t sampled_triples = 10000;
  std::uint64_t seed = 0;
  bool force_exhaustive = false;
};

/// An immutable finite group: element indices 0..order-1, a full
/// multiplication table, and identity/inverse tables located on construction.
class FiniteGroup {
 public:
  FiniteGroup() : FiniteGroup(std::vector<Element>{0}, {"e"}) {}

  /// Validates the axioms; throws Error(NotAGroup) with a witness on failure.
  FiniteGroup(std::vector<Element> flat_table, std::vector<std::string> names,
              const GroupValidation& validation = {})
      : order_(names.size()), table_(std::move(flat_table)), names_(std::move(names)) {
    if (order_ == 0) throw Error(ErrorKind::NotAGroup, "empty table");
    if (table_.size() != order_ * order_)
      throw Error(ErrorKind::NotAGroup, "table is not square with one row per name");
    for (Element x : table_)
      if (x >= order_) throw Error(ErrorKind::NotAGroup, "table entry out of range");
    std::unordered_set<std::string> seen(names_.begin(), names_.end());
    if (seen.size() != order_) throw Error(ErrorKind::NotAGroup, "element names are not distinct");
    locate_identity();
    locate_inverses();
    check_associativity(validation);
  }

  std::size_t order() const noexcept { return order_; }
  Element identity() const noexcept { return identity_; }
  Element mul(Element a, Element b) const noexcept { return table_[a * order_ + b]; }
  Element inverse(Element a) const noexcept { return inverse_[a]; }
  const std::string& name(Element a) const { return names_.at(a); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::vector<Element>& flat_table() const noexcept { return table_; }

  std::optional<Element> find(std::string_view name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) return std::nullopt;
    return static_cast<Element>(it - names_.begin());
  }

  std::size_t element_order(Element a) const {
    std::size_t k = 1;
    for (Element x = a; x != identity_; x = mul(x, a)) ++k;
    return k;
  }

  bool operator==(const FiniteGroup& other) const {
    return order_ == other.order_ && table_ == other.table_;
  }

 private:
  void locate_identity() {
    for (Element e = 0; e < order_; ++e) {
      bool ok = true;
      for (Element a = 0; a < order_ && ok; ++a) ok = mul(e, a) == a && mul(a, e) == a;
      if (ok) {
        identity_ = e;
        return;
      }
    }
    throw Error(ErrorKind::NotAGroup, "no two-sided identity");
  }

  void locate_inverses() {
    inverse_.assign(order_, 0);
    for (Element a = 0; a < order_; ++a) {
      bool found = false;
      for (Element b = 0; b < order_ && !found; ++b) {
        if (mul(a, b) == identity_ && mul(b, a) == identity_) {
          inverse_[a] = b;
          found = true;
        }
      }
      if (!found) throw Error(ErrorKind::NotAGroup, "element " + names_[a] + " has no inverse");
    }
  }

  void check_triple(Element a, Element b, Element c) const {
    if (mul(mul(a, b), c) != mul(a, mul(b, c)))
      throw Error(ErrorKind::NotAGroup, "associativity fails on (" + names_[a] + ", " +
                                            names_[b] + ", " + names_[c] + ")");
  }

  void check_associativity(const GroupValidation& v) const {
    if (v.force_exhaustive || order_ <= v.exhaustive_max_order) {
      for (Element a = 0; a < order_; ++a)
        for (Element b = 0; b < order_; ++b)
          for (Element c = 0; c < order_; ++c) check_triple(a, b, c);
      return;
    }
    std::mt19937_64 rng(v.seed);
    std::uniform_int_distribution<Element> pick(0, static_cast<Element>(order_ - 1));
    for (std::size_t t = 0; t < v.sampled_triples; ++t) {
      Element a = pick(rng), b = pick(rng), c = pick(rng);
      check_triple(a, b, c);
    }
  }

  std::size_t order_;
  std::vector<Element> table_;
  std::vector<std::string> names_;
  Element identity_ = 0;
  std::vector<Element> inverse_;
};

inline FiniteGroup group_from_table(const std::vector<std::vector<std::size_t>>& table,
                                    std::vector<std::string> names,
                                    const GroupValidation& validation = {}) {
  const std::size_t m = table.size();
  if (m == 0) throw Error(ErrorKind::NotAGroup, "empty table");
  if (names.empty()) {
    for (std::size_t i = 0; i < m; ++i) names.push_back("g" + std::to_string(i));
  }
  if (names.size() != m) throw Error(ErrorKind::NotAGroup, "names do not match table size");
  std::vector<Element> flat;
  flat.reserve(m * m);
  for (const auto& row : table) {
    if (row.size() != m) throw Error(ErrorKind::NotAGroup, "table is not square");
    for (std::size_t x : row) {
      if (x >= m) throw Error(ErrorKind::NotAGroup, "table entry out of range");
      flat.push_back(static_cast<Element>(x));
    }
  }
  return FiniteGroup(std::move(flat), std::move(names), validation);
}

inline FiniteGroup trivial_group() { return FiniteGroup(); }

/// Cyclic group of order m; elements named e, t, t^2, ...
inline FiniteGroup cyclic(std::size_t m) {
  if (m == 0) throw Error(ErrorKind::BadInput, "cyclic group order must be positive");
  std::vector<Element> flat(m * m);
  std::vector<std::string> names;
  for (std::size_t a = 0; a < m; ++a) {
    names.push_back(a == 0 ? "e" : a == 1 ? "t" : "t^" + std::to_string(a));
    for (std::size_t b = 0; b < m; ++b) flat[a * m + b] = static_cast<Element>((a + b) % m);
  }
  return FiniteGroup(std::move(flat), std::move(names));
}

namespace detail {

inline std::vector<std::vector<int>> permutations_lex(int m) {
  std::vector<int> p(m);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

inline std::string one_line(const std::vector<int>& p) {
  std::string s = "[";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(p[i] + 1);
  }
  return s + "]";
}

}  // namespace detail

/// Symmetric group on m letters. Elements are permutations in lexicographic
/// one-line order; the product p*q is the composite "q first, then p".
inline FiniteGroup symmetric(int m) {
  if (m < 1) throw Error(ErrorKind::BadInput, "symmetric group degree must be positive");
  if (m > 6) throw Error(ErrorKind::SizeLimit, "symmetric(m) supports m <= 6");
  const auto perms = detail::permutations_lex(m);
  const std::size_t order = perms.size();
  std::vector<Element> flat(order * order);
  std::vector<std::string> names;
  for (std::size_t a = 0; a < order; ++a) {
    names.push_back(detail::one_line(perms[a]));
    for (std::size_t b = 0; b < order; ++b) {
      std::vector<int> c(m);
      for (int i = 0; i < m; ++i) c[i] = perms[a][perms[b][i]];
      auto it = std::lower_bound(perms.begin(), perms.end(), c);
      flat[a * order + b] = static_cast<Element>(it - perms.begin());
    }
  }
  return FiniteGroup(std::move(flat), std::move(names));
}

/// Elements are pairs (g, h) indexed g*|H| + h.
inline FiniteGroup direct_product(const FiniteGroup& g, const FiniteGroup& h) {
  const std::size_t ng = g.order(), nh = h.order(), order = ng * nh;
  std::vector<Element> flat(order * order);
  std::vector<std::string> names(order);
  for (Element a = 0; a < ng; ++a)
    for (Element b = 0; b < nh; ++b) {
      names[a * nh + b] = "(" + g.name(a) + "," + h.name(b) + ")";
      for (Element c = 0; c < ng; ++c)
        for (Element d = 0; d < nh; ++d)
          flat[(a * nh + b) * order + (c * nh + d)] = g.mul(a, c) * nh + h.mul(b, d);
    }
  return FiniteGroup(std::move(flat), std::move(names));
}

/// Decoded wreath element: labels g_1..g_n and a permutation in one-line form.
struct WreathElement {
  std::vector<Element> labels;
  std::vector<int> perm;
};

/// Index bookkeeping for G wr S_n. An element ((g_1..g_n); s) has index
/// rank(s) * |G|^n + sum_i g_i |G|^(i-1), with rank taken in lexicographic order.
/// Product: (g; s)(h; t) = (g * (s.h); s o t) where (s.h)_i = h_{s^-1(i)}.
class WreathIndexer {
 public:
  WreathIndexer(std::size_t base_order, int n)
      : base_(base_order), n_(n), perms_(detail::permutations_lex(n)) {
    base_pow_ = 1;
    for (int i = 0; i < n; ++i) base_pow_ *= base_;
  }

  std::size_t order() const { return base_pow_ * perms_.size(); }
  int degree() const { return n_; }

  std::size_t encode(const WreathElement& w) const {
    auto it = std::lower_bound(perms_.begin(), perms_.end(), w.perm);
    if (it == perms_.end() || *it != w.perm) throw Error(ErrorKind::BadInput, "not a permutation");
    std::size_t idx = 0;
    for (int i = n_ - 1; i >= 0; --i) idx = idx * base_ + w.labels[i];
    return static_cast<std::size_t>(it - perms_.begin()) * base_pow_ + idx;
  }

  WreathElement decode(std::size_t index) const {
    WreathElement w;
    w.perm = perms_[index / base_pow_];
    std::size_t rest = index % base_pow_;
    for (int i = 0; i < n_; ++i) {
      w.labels.push_back(static_cast<Element>(rest % base_));
      rest /= base_;
    }
    return w;
  }

 private:
  std::size_t base_;
  int n_;
  std::vector<std::vector<int>> perms_;
  std::size_t base_pow_ = 1;
};

inline FiniteGroup wreath_product(const FiniteGroup& g, int n, std::size_t order_cap = 10000) {
  if (n < 1) throw Error(ErrorKind::BadInput, "wreath degree must be positive");
  double estimate = 1;
  for (int i = 0; i < n; ++i) estimate *= static_cast<double>(g.order()) * (i + 1);
  if (estimate > static_cast<double>(order_cap))
    throw Error(ErrorKind::SizeLimit, "wreath product order exceeds cap " + std::to_string(order_cap));
  const WreathIndexer ix(g.order(), n);
  const std::size_t order = ix.order();
  std::vector<WreathElement> elems;
  elems.reserve(order);
  for (std::size_t i = 0; i < order; ++i) elems.push_back(ix.decode(i));

  std::vector<Element> flat(order * order);
  std::vector<std::string> names(order);
  for (std::size_t a = 0; a < order; ++a) {
    const auto& x = elems[a];
    std::string nm = "((";
    for (int i = 0; i < n; ++i) nm += (i ? "," : "") + g.name(x.labels[i]);
    names[a] = nm + ");" + detail::one_line(x.perm) + ")";
    std::vector<int> inv(n);
    for (int i = 0; i < n; ++i) inv[x.perm[i]] = i;
    for (std::size_t b = 0; b < order; ++b) {
      const auto& y = elems[b];
      WreathElement z;
      z.labels.resize(n);
      z.perm.resize(n);
      for (int i = 0; i < n; ++i) {
        z.labels[i] = g.mul(x.labels[i], y.labels[inv[i]]);
        z.perm[i] = x.perm[y.perm[i]];
      }
      flat[a * order + b] = static_cast<Element>(ix.encode(z));
    }
  }
  return FiniteGroup(std::move(flat), std::move(names));
}

namespace detail {

inline std::size_t parse_count(std::string_view s, std::size_t& pos) {
  std::size_t start = pos, v = 0;
  while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
    v = v * 10 + static_cast<std::size_t>(s[pos] - '0');
    if (v > 1000000) throw Error(ErrorKind::BadInput, "group size out of range");
    ++pos;
  }
  if (pos == start) throw Error(ErrorKind::BadInput, "expected a number in group spec");
  return v;
}

inline FiniteGroup load_group_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::BadInput, "cannot open group table " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::BadInput, std::string("malformed group JSON: ") + e.what());
  }
  if (!j.contains("table")) throw Error(ErrorKind::BadInput, "group JSON lacks \"table\"");
  auto table = j.at("table").get<std::vector<std::vector<std::size_t>>>();
  std::vector<std::string> names;
  if (j.contains("names")) names = j.at("names").get<std::vector<std::string>>();
  return group_from_table(table, std::move(names));
}

inline FiniteGroup parse_group_prefix(std::string_view s, std::size_t& pos) {
  auto rest = s.substr(pos);
  auto starts = [&](std::string_view p) { return rest.substr(0, p.size()) == p; };
  if (starts("trivial")) {
    pos += 7;
    return trivial_group();
  }
  if (starts("C:")) {
    pos += 2;
    return cyclic(parse_count(s, pos));
  }
  if (starts("S:")) {
    pos += 2;
    auto m = parse_count(s, pos);
    if (m > 6) throw Error(ErrorKind::SizeLimit, "symmetric(m) supports m <= 6");
    return symmetric(static_cast<int>(m));
  }
  if (starts("prod:")) {
    pos += 5;
    FiniteGroup left = parse_group_prefix(s, pos);
    if (pos >= s.size() || s[pos] != ',') throw Error(ErrorKind::BadInput, "prod: expects SPEC,SPEC");
    ++pos;
    FiniteGroup right = parse_group_prefix(s, pos);
    return direct_product(left, right);
  }
  if (starts("table:")) {
    pos += 6;
    std::size_t end = s.find(',', pos);
    if (end == std::string_view::npos) end = s.size();
    std::string path(s.substr(pos, end - pos));
    pos = end;
    return load_group_json(path);
  }
  throw Error(ErrorKind::BadInput, "unrecognised group spec '" + std::string(rest) + "'");
}

}  // namespace detail

/// Parses "trivial", "C:m", "S:m", "prod:SPEC,SPEC" or "table:FILE.json".
inline FiniteGroup parse_group_spec(std::string_view spec) {
  std::size_t pos = 0;
  FiniteGroup g = detail::parse_group_prefix(spec, pos);
  if (pos != spec.size())
    throw Error(ErrorKind::BadInput, "trailing characters in group spec '" + std::string(spec) + "'");
  return g;
}

}  // namespace cpa
