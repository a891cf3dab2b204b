#pragma once
// Set partitions of {0..m-1} and their enumeration.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cpa/error.hpp"

namespace cpa {

/// A set partition in restricted-growth form: label[i] is the block of
/// element i, blocks numbered in order of their minimal element. This is the
/// canonical form, so structural equality is partition equality.
class SetPartition {
 public:
  SetPartition() = default;
  explicit SetPartition(std::vector<std::uint8_t> labels) : labels_(std::move(labels)) {
    std::uint8_t next = 0;
    for (auto l : labels_) {
      if (l > next) throw Error(ErrorKind::BadInput, "labels are not a restricted growth string");
      if (l == next) ++next;
    }
    blocks_ = next;
  }

  /// Canonicalises an arbitrary block list covering 0..m-1 exactly once.
  static SetPartition from_blocks(std::size_t m, const std::vector<std::vector<std::size_t>>& blocks) {
    std::vector<int> raw(m, -1);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (blocks[b].empty()) throw Error(ErrorKind::BadInput, "empty block");
      for (auto x : blocks[b]) {
        if (x >= m || raw[x] != -1) throw Error(ErrorKind::BadInput, "blocks do not partition the set");
        raw[x] = static_cast<int>(b);
      }
    }
    std::vector<int> relabel(blocks.size(), -1);
    std::vector<std::uint8_t> labels(m);
    int next = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (raw[i] < 0) throw Error(ErrorKind::BadInput, "blocks do not cover the set");
      if (relabel[raw[i]] < 0) relabel[raw[i]] = next++;
      labels[i] = static_cast<std::uint8_t>(relabel[raw[i]]);
    }
    return SetPartition(std::move(labels));
  }

  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t block_count() const noexcept { return blocks_; }
  const std::vector<std::uint8_t>& labels() const noexcept { return labels_; }

  /// Blocks sorted ascending, ordered by minimal element.
  std::vector<std::vector<std::size_t>> blocks() const {
    std::vector<std::vector<std::size_t>> out(blocks_);
    for (std::size_t i = 0; i < labels_.size(); ++i) out[labels_[i]].push_back(i);
    return out;
  }

  auto operator<=>(const SetPartition&) const = default;

 private:
  std::vector<std::uint8_t> labels_;
  std::size_t blocks_ = 0;
};

struct EnumerationLimits {
  std::size_t max_set_size = 10;
  std::size_t max_diagrams = 1000000;
};

/// Visits every partition of an m-element set once, as restricted growth
/// strings in lexicographic order.
inline void for_each_set_partition(std::size_t m, const std::function<void(const SetPartition&)>& visit,
                                   const EnumerationLimits& limits = {}) {
  if (m == 0) throw Error(ErrorKind::BadInput, "set size must be positive");
  if (m > limits.max_set_size)
    throw Error(ErrorKind::SizeLimit, "partition enumeration capped at " +
                                          std::to_string(limits.max_set_size) + " elements");
  std::vector<std::uint8_t> a(m, 0);
  // prefix_max[i] = max(a[0..i])
  std::vector<std::uint8_t> prefix_max(m, 0);
  while (true) {
    visit(SetPartition(a));
    std::size_t i = m - 1;
    while (i > 0 && a[i] > prefix_max[i - 1]) --i;
    if (i == 0) return;
    ++a[i];
    prefix_max[i] = std::max(prefix_max[i - 1], a[i]);
    for (std::size_t j = i + 1; j < m; ++j) {
      a[j] = 0;
      prefix_max[j] = prefix_max[i];
    }
  }
}

inline std::vector<SetPartition> set_partitions(std::size_t m, const EnumerationLimits& limits = {}) {
  std::vector<SetPartition> out;
  for_each_set_partition(m, [&](const SetPartition& p) { out.push_back(p); }, limits);
  return out;
}

/// Independent generator: inserts element k into each existing block or a new
/// one, recursively. Used to cross-check the restricted-growth enumerator.
inline std::vector<SetPartition> set_partitions_by_insertion(std::size_t m,
                                                             const EnumerationLimits& limits = {}) {
  if (m == 0) throw Error(ErrorKind::BadInput, "set size must be positive");
  if (m > limits.max_set_size) throw Error(ErrorKind::SizeLimit, "partition enumeration cap exceeded");
  std::vector<std::vector<std::vector<std::size_t>>> level{{{0}}};
  for (std::size_t k = 1; k < m; ++k) {
    std::vector<std::vector<std::vector<std::size_t>>> next;
    for (const auto& blocks : level) {
      for (std::size_t b = 0; b < blocks.size(); ++b) {
        auto copy = blocks;
        copy[b].push_back(k);
        next.push_back(std::move(copy));
      }
      auto copy = blocks;
      copy.push_back({k});
      next.push_back(std::move(copy));
    }
    level = std::move(next);
  }
  std::vector<SetPartition> out;
  out.reserve(level.size());
  for (const auto& blocks : level) out.push_back(SetPartition::from_blocks(m, blocks));
  return out;
}

}  // namespace cpa
