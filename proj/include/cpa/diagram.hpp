#pragma once
// G-coloured partition diagrams on n left and n right nodes.
//
// Nodes are numbered Left-1..Left-n as 0..n-1 and Right-1..Right-n as
// n..2n-1; this is also the total order used for canonical forms. A diagram
// stores the restricted-growth labelling of its partition together with, for
// every node x, the colour gamma(base(x), x) where base(x) is the smallest node
// of x's block. Two coloured diagrams are equal iff both vectors are equal.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cpa/error.hpp"
#include "cpa/group.hpp"
#include "cpa/partition.hpp"

namespace cpa {

enum class Side : std::uint8_t { Left, Right };

struct NodeId {
  Side side;
  std::size_t index;  // 1-based

  std::size_t flat(std::size_t n) const { return side == Side::Left ? index - 1 : n + index - 1; }
  static NodeId from_flat(std::size_t n, std::size_t x) {
    return x < n ? NodeId{Side::Left, x + 1} : NodeId{Side::Right, x - n + 1};
  }
  auto operator<=>(const NodeId&) const = default;
};

inline constexpr std::size_t kMaxDiagramSize = 16;

class ColouredDiagram {
 public:
  ColouredDiagram() = default;

  /// Canonicalises a diagram given arbitrary block labels (any integers, equal
  /// labels meaning same block) and per-node potentials alpha with
  /// gamma(x, y) = alpha(x)^-1 alpha(y).
  static ColouredDiagram from_potentials(std::size_t n, const std::vector<int>& block_label,
                                         const std::vector<Element>& potential, const FiniteGroup& g) {
    check_size(n);
    const std::size_t m = 2 * n;
    if (block_label.size() != m || potential.size() != m)
      throw Error(ErrorKind::SizeMismatch, "diagram data does not cover 2n nodes");
    ColouredDiagram d;
    d.n_ = static_cast<std::uint8_t>(n);
    d.labels_.resize(m);
    d.colours_.resize(m);
    std::unordered_map<int, std::uint8_t> relabel;
    std::vector<std::size_t> base;
    for (std::size_t x = 0; x < m; ++x) {
      if (potential[x] >= g.order()) throw Error(ErrorKind::BadInput, "colour outside the group");
      auto [it, fresh] = relabel.try_emplace(block_label[x], static_cast<std::uint8_t>(base.size()));
      if (fresh) base.push_back(x);
      d.labels_[x] = it->second;
      d.colours_[x] = g.mul(g.inverse(potential[base[it->second]]), potential[x]);
    }
    return d;
  }

  /// Blocks given as flat node lists; colours[b][k] = gamma(blocks[b][0], blocks[b][k]).
  static ColouredDiagram from_blocks(std::size_t n, const std::vector<std::vector<std::size_t>>& blocks,
                                     const std::vector<std::vector<Element>>& colours, const FiniteGroup& g) {
    check_size(n);
    const std::size_t m = 2 * n;
    if (colours.size() != blocks.size()) throw Error(ErrorKind::BadInput, "one colour list per block required");
    std::vector<int> label(m, -1);
    std::vector<Element> potential(m, g.identity());
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (blocks[b].empty() || colours[b].size() != blocks[b].size())
        throw Error(ErrorKind::BadInput, "block and colour list lengths differ");
      for (std::size_t k = 0; k < blocks[b].size(); ++k) {
        auto x = blocks[b][k];
        if (x >= m || label[x] != -1) throw Error(ErrorKind::BadInput, "blocks do not partition the nodes");
        label[x] = static_cast<int>(b);
        potential[x] = colours[b][k];
      }
    }
    for (auto l : label)
      if (l < 0) throw Error(ErrorKind::BadInput, "blocks do not cover the nodes");
    return from_potentials(n, label, potential, g);
  }

  /// Trivially coloured diagram on a set partition of the 2n nodes.
  static ColouredDiagram uncoloured(std::size_t n, const SetPartition& p, const FiniteGroup& g) {
    if (p.size() != 2 * n) throw Error(ErrorKind::SizeMismatch, "partition size is not 2n");
    ColouredDiagram d;
    d.n_ = static_cast<std::uint8_t>(n);
    d.labels_ = p.labels();
    d.colours_.assign(2 * n, g.identity());
    return d;
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t node_count() const noexcept { return labels_.size(); }
  std::uint8_t block_of(std::size_t x) const { return labels_[x]; }
  Element colour(std::size_t x) const { return colours_[x]; }
  const std::vector<std::uint8_t>& labels() const noexcept { return labels_; }
  const std::vector<Element>& colours() const noexcept { return colours_; }

  std::size_t block_count() const {
    std::size_t c = 0;
    for (auto l : labels_) c = std::max<std::size_t>(c, l + 1u);
    return c;
  }

  SetPartition partition() const { return SetPartition(labels_); }

  /// gamma(x, y) on flat node indices; nullopt when x and y lie in different blocks.
  std::optional<Element> gamma(std::size_t x, std::size_t y, const FiniteGroup& g) const {
    if (labels_[x] != labels_[y]) return std::nullopt;
    return g.mul(g.inverse(colours_[x]), colours_[y]);
  }
  std::optional<Element> gamma(NodeId x, NodeId y, const FiniteGroup& g) const {
    return gamma(x.flat(n_), y.flat(n_), g);
  }

  /// Blocks meeting both the left and the right side.
  std::size_t propagating_count() const {
    std::array<std::uint8_t, 2 * kMaxDiagramSize> seen{};
    for (std::size_t x = 0; x < n_; ++x) seen[labels_[x]] |= 1;
    for (std::size_t x = n_; x < 2u * n_; ++x) seen[labels_[x]] |= 2;
    std::size_t c = 0;
    for (auto s : seen) c += (s == 3);
    return c;
  }

  /// n propagating blocks of size two.
  bool is_permutation() const {
    std::array<std::uint8_t, 2 * kMaxDiagramSize> left{}, right{};
    for (std::size_t x = 0; x < n_; ++x) ++left[labels_[x]];
    for (std::size_t x = n_; x < 2u * n_; ++x) ++right[labels_[x]];
    const std::size_t blocks = block_count();
    if (blocks != n_) return false;
    for (std::size_t b = 0; b < blocks; ++b)
      if (left[b] != 1 || right[b] != 1) return false;
    return true;
  }

  bool is_singleton(std::size_t x) const {
    for (std::size_t y = 0; y < labels_.size(); ++y)
      if (y != x && labels_[y] == labels_[x]) return false;
    return true;
  }

  bool operator==(const ColouredDiagram&) const = default;

  std::size_t hash() const noexcept {
    std::size_t h = 1469598103934665603ull ^ n_;
    for (std::size_t x = 0; x < labels_.size(); ++x) {
      h = (h ^ labels_[x]) * 1099511628211ull;
      h = (h ^ colours_[x]) * 1099511628211ull;
    }
    return h;
  }

  /// e.g. "{1,2'}{2,1'|t}"; right nodes carry a prime, non-identity colours follow '|'.
  std::string to_string(const FiniteGroup& g) const {
    std::string s;
    const std::size_t blocks = block_count();
    for (std::size_t b = 0; b < blocks; ++b) {
      s += '{';
      bool first = true;
      std::string cols;
      for (std::size_t x = 0; x < labels_.size(); ++x) {
        if (labels_[x] != b) continue;
        auto id = NodeId::from_flat(n_, x);
        if (!first) s += ',';
        s += std::to_string(id.index) + (id.side == Side::Right ? "'" : "");
        if (!first) cols += (cols.empty() ? "" : ",") + g.name(colours_[x]);
        first = false;
      }
      bool trivial = true;
      for (std::size_t x = 0; x < labels_.size(); ++x)
        if (labels_[x] == b && colours_[x] != g.identity()) trivial = false;
      if (!trivial) s += "|" + cols;
      s += '}';
    }
    return s;
  }

 private:
  static void check_size(std::size_t n) {
    if (n == 0) throw Error(ErrorKind::BadInput, "diagram size must be positive");
    if (n > kMaxDiagramSize) throw Error(ErrorKind::SizeLimit, "diagram size too large");
  }

  std::uint8_t n_ = 0;
  std::vector<std::uint8_t> labels_;
  std::vector<Element> colours_;
};

struct DiagramHash {
  std::size_t operator()(const ColouredDiagram& d) const noexcept { return d.hash(); }
};

struct CompositionOutcome {
  std::optional<ColouredDiagram> result;  // nullopt: colours do not extend
  std::size_t internal_components = 0;    // meaningful only when result is set

  bool is_zero() const noexcept { return !result.has_value(); }
};

namespace detail {

/// Union-find over up to 3n nodes where each node carries gamma(parent, node).
class PotentialUnionFind {
 public:
  PotentialUnionFind(std::size_t size, const FiniteGroup& g) : g_(g), size_(size) {
    for (std::size_t i = 0; i < size; ++i) {
      parent_[i] = static_cast<std::uint8_t>(i);
      rel_[i] = g.identity();
    }
  }

  /// Returns the root; pot receives gamma(root, x).
  std::size_t find(std::size_t x, Element& pot) {
    std::size_t r = x;
    // Walk to the root accumulating gamma(root, x) = rel[p_k] ... rel[x].
    std::array<std::size_t, 3 * kMaxDiagramSize> path;
    std::size_t len = 0;
    while (parent_[r] != r) {
      path[len++] = r;
      r = parent_[r];
    }
    // Compress: recompute each node's gamma(root, node) from the top down.
    Element above = g_.identity();
    for (std::size_t k = len; k-- > 0;) {
      std::size_t v = path[k];
      above = g_.mul(above, rel_[v]);
      rel_[v] = above;
      parent_[v] = static_cast<std::uint8_t>(r);
    }
    pot = len ? rel_[x] : g_.identity();
    return r;
  }

  /// Imposes gamma(u, v) = c. Returns false on an inconsistent loop.
  bool unite(std::size_t u, std::size_t v, Element c) {
    Element pu, pv;
    std::size_t ru = find(u, pu), rv = find(v, pv);
    if (ru == rv) return g_.mul(pu, c) == pv;
    // gamma(ru, rv) = gamma(ru, u) c gamma(v, rv)
    parent_[rv] = static_cast<std::uint8_t>(ru);
    rel_[rv] = g_.mul(g_.mul(pu, c), g_.inverse(pv));
    return true;
  }

 private:
  const FiniteGroup& g_;
  std::size_t size_;
  std::array<std::uint8_t, 3 * kMaxDiagramSize> parent_{};
  std::array<Element, 3 * kMaxDiagramSize> rel_{};
};

}  // namespace detail

/// Composite d1 then d2: d1's right face is glued to d2's left face.
/// Merges blocks over 3n nodes (left of d1, middle, right of d2) while
/// propagating colour potentials. A loop with non-identity product makes the
/// composite zero. Internal components are merged blocks within the middle.
inline CompositionOutcome compose(const ColouredDiagram& d1, const ColouredDiagram& d2, const FiniteGroup& g) {
  if (d1.n() != d2.n()) throw Error(ErrorKind::SizeMismatch, "composing diagrams of different sizes");
  const std::size_t n = d1.n();
  detail::PotentialUnionFind uf(3 * n, g);
  bool consistent = true;

  // Each block is a star from its base node: gamma(base, x) = colour(x).
  auto add_edges = [&](const ColouredDiagram& d, std::size_t offset) {
    std::array<int, 2 * kMaxDiagramSize> base;
    base.fill(-1);
    for (std::size_t x = 0; x < 2 * n; ++x) {
      auto b = d.block_of(x);
      if (base[b] < 0) {
        base[b] = static_cast<int>(x);
        continue;
      }
      if (!uf.unite(offset + static_cast<std::size_t>(base[b]), offset + x, d.colour(x))) consistent = false;
    }
  };
  add_edges(d1, 0);
  add_edges(d2, n);

  CompositionOutcome out;
  std::array<std::uint8_t, 3 * kMaxDiagramSize> outer{};
  Element pot;
  for (std::size_t x = 0; x < n; ++x) outer[uf.find(x, pot)] = 1;
  for (std::size_t x = 2 * n; x < 3 * n; ++x) outer[uf.find(x, pot)] = 1;
  for (std::size_t x = n; x < 2 * n; ++x) {
    std::size_t r = uf.find(x, pot);
    if (r == x && !outer[r]) ++out.internal_components;
  }
  if (!consistent) return out;

  std::vector<int> label(2 * n);
  std::vector<Element> potential(2 * n);
  for (std::size_t x = 0; x < n; ++x) {
    label[x] = static_cast<int>(uf.find(x, pot));
    potential[x] = pot;
  }
  for (std::size_t x = 0; x < n; ++x) {
    label[n + x] = static_cast<int>(uf.find(2 * n + x, pot));
    potential[n + x] = pot;
  }
  out.result = ColouredDiagram::from_potentials(n, label, potential, g);
  return out;
}

inline ColouredDiagram identity_diagram(std::size_t n, const FiniteGroup& g) {
  std::vector<int> label(2 * n);
  for (std::size_t i = 0; i < n; ++i) label[i] = label[n + i] = static_cast<int>(i);
  return ColouredDiagram::from_potentials(n, label, std::vector<Element>(2 * n, g.identity()), g);
}

/// Blocks {i, sigma(i)'} with gamma(i, sigma(i)') = labels[i]; sigma is 0-based one-line.
inline ColouredDiagram permutation_diagram(const std::vector<int>& sigma, const std::vector<Element>& labels,
                                           const FiniteGroup& g) {
  const std::size_t n = sigma.size();
  if (labels.size() != n) throw Error(ErrorKind::SizeMismatch, "one label per strand required");
  std::vector<int> label(2 * n, -1);
  std::vector<Element> potential(2 * n, g.identity());
  for (std::size_t i = 0; i < n; ++i) {
    if (sigma[i] < 0 || static_cast<std::size_t>(sigma[i]) >= n || label[n + sigma[i]] != -1)
      throw Error(ErrorKind::BadInput, "sigma is not a bijection");
    label[i] = label[n + sigma[i]] = static_cast<int>(i);
    potential[n + sigma[i]] = labels[i];
  }
  return ColouredDiagram::from_potentials(n, label, potential, g);
}

/// Components {a'}, {a, b, b'} and {i, i'} otherwise; trivial colouring. 1-based a, b.
inline ColouredDiagram mu_diagram(std::size_t n, std::size_t a, std::size_t b, const FiniteGroup& g) {
  if (a < 1 || b < 1 || a > n || b > n || a == b) throw Error(ErrorKind::BadIndex, "mu needs distinct a, b in 1..n");
  std::vector<int> label(2 * n);
  for (std::size_t i = 0; i < n; ++i) label[i] = label[n + i] = static_cast<int>(i);
  label[a - 1] = static_cast<int>(b - 1);
  label[n + a - 1] = static_cast<int>(n);  // isolated
  return ColouredDiagram::from_potentials(n, label, std::vector<Element>(2 * n, g.identity()), g);
}

/// Component {a, b, a', b'} with gamma(a, b) = gamma(a', b') = h and gamma(a, a') = 1; {i, i'} otherwise.
inline ColouredDiagram nu_diagram(std::size_t n, std::size_t a, std::size_t b, Element h, const FiniteGroup& g) {
  if (a < 1 || b > n || a >= b) throw Error(ErrorKind::BadIndex, "nu needs 1 <= a < b <= n");
  if (h >= g.order()) throw Error(ErrorKind::BadInput, "colour outside the group");
  std::vector<int> label(2 * n);
  std::vector<Element> potential(2 * n, g.identity());
  for (std::size_t i = 0; i < n; ++i) label[i] = label[n + i] = static_cast<int>(i);
  label[b - 1] = label[n + b - 1] = static_cast<int>(a - 1);
  potential[b - 1] = potential[n + b - 1] = h;
  return ColouredDiagram::from_potentials(n, label, potential, g);
}

/// Size n -> n+1 by adjoining the trivially coloured block {n+1, (n+1)'}.
inline ColouredDiagram include_diagram(const ColouredDiagram& d, const FiniteGroup& g) {
  const std::size_t n = d.n(), m = n + 1;
  std::vector<int> label(2 * m);
  std::vector<Element> potential(2 * m);
  for (std::size_t i = 0; i < n; ++i) {
    label[i] = d.block_of(i);
    potential[i] = d.colour(i);
    label[m + i] = d.block_of(n + i);
    potential[m + i] = d.colour(n + i);
  }
  label[n] = label[m + n] = 1000;
  potential[n] = potential[m + n] = g.identity();
  return ColouredDiagram::from_potentials(m, label, potential, g);
}

/// Visits every coloured diagram of size n: partitions in restricted-growth
/// order, then colourings of the non-base nodes as an odometer (last node fastest).
inline void for_each_diagram(std::size_t n, const FiniteGroup& g,
                             const std::function<void(const ColouredDiagram&)>& visit,
                             const EnumerationLimits& limits = {}) {
  if (n == 0) throw Error(ErrorKind::BadInput, "diagram size must be positive");
  if (n > kMaxDiagramSize) throw Error(ErrorKind::SizeLimit, "diagram size too large");
  const std::size_t m = 2 * n;
  // Total = sum over partitions of |G|^(2n - blocks).
  double total = 0;
  for_each_set_partition(m, [&](const SetPartition& p) {
    double c = 1;
    for (std::size_t i = p.block_count(); i < m; ++i) c *= static_cast<double>(g.order());
    total += c;
  }, limits);
  if (total > static_cast<double>(limits.max_diagrams))
    throw Error(ErrorKind::SizeLimit, "diagram count exceeds cap " + std::to_string(limits.max_diagrams));

  for_each_set_partition(m, [&](const SetPartition& p) {
    ColouredDiagram base = ColouredDiagram::uncoloured(n, p, g);
    std::vector<std::size_t> free_nodes;
    std::vector<bool> seen(p.block_count(), false);
    for (std::size_t x = 0; x < m; ++x) {
      if (seen[p.labels()[x]]) free_nodes.push_back(x);
      seen[p.labels()[x]] = true;
    }
    if (g.order() == 1 || free_nodes.empty()) {
      visit(base);
      return;
    }
    std::vector<int> label(p.labels().begin(), p.labels().end());
    // Potentials are relative to an identity-coloured base node.
    std::vector<Element> potential(m, g.identity());
    std::vector<Element> digits(free_nodes.size(), 0);
    while (true) {
      for (std::size_t k = 0; k < free_nodes.size(); ++k) potential[free_nodes[k]] = digits[k];
      visit(ColouredDiagram::from_potentials(n, label, potential, g));
      std::size_t k = digits.size();
      while (k > 0 && ++digits[k - 1] == g.order()) digits[--k] = 0;
      if (k == 0) return;
    }
  }, limits);
}

/// All diagrams of size n with a stable integer index per diagram.
class DiagramBasis {
 public:
  DiagramBasis(std::size_t n, FiniteGroup g, const EnumerationLimits& limits = {}) : n_(n), g_(std::move(g)) {
    for_each_diagram(n_, g_, [&](const ColouredDiagram& d) {
      index_.emplace(d, static_cast<std::uint32_t>(diagrams_.size()));
      diagrams_.push_back(d);
      if (d.is_permutation()) permutations_.push_back(static_cast<std::uint32_t>(diagrams_.size() - 1));
    }, limits);
    identity_ = index_of(identity_diagram(n_, g_));
  }

  std::size_t n() const noexcept { return n_; }
  const FiniteGroup& group() const noexcept { return g_; }
  std::size_t size() const noexcept { return diagrams_.size(); }
  const ColouredDiagram& operator[](std::uint32_t i) const { return diagrams_[i]; }
  const std::vector<ColouredDiagram>& diagrams() const noexcept { return diagrams_; }
  const std::vector<std::uint32_t>& permutation_indices() const noexcept { return permutations_; }
  std::uint32_t identity_index() const noexcept { return identity_; }

  std::uint32_t index_of(const ColouredDiagram& d) const {
    auto it = index_.find(d);
    if (it == index_.end()) throw Error(ErrorKind::BadInput, "diagram not in basis");
    return it->second;
  }

 private:
  std::size_t n_;
  FiniteGroup g_;
  std::vector<ColouredDiagram> diagrams_;
  std::unordered_map<ColouredDiagram, std::uint32_t, DiagramHash> index_;
  std::vector<std::uint32_t> permutations_;
  std::uint32_t identity_ = 0;
};

}  // namespace cpa
