#pragma once
// Exact sparse linear algebra: streaming column elimination over fields and
// Smith normal form over the integers.

#include <algorithm>
#include <cstdint>
#include <gmpxx.h>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cpa/error.hpp"
#include "cpa/ring.hpp"

namespace cpa {

template <class Ring>
using SparseVec = std::vector<std::pair<std::uint64_t, typename Ring::value_type>>;

/// Sorts by index, merges duplicates and drops zeros.
template <class Ring>
void normalize(const Ring& r, SparseVec<Ring>& v) {
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::size_t out = 0;
  for (std::size_t i = 0; i < v.size();) {
    auto idx = v[i].first;
    auto acc = v[i].second;
    std::size_t j = i + 1;
    for (; j < v.size() && v[j].first == idx; ++j) acc = r.add(acc, v[j].second);
    if (!r.is_zero(acc)) v[out++] = {idx, std::move(acc)};
    i = j;
  }
  v.resize(out);
}

/// Column-major sparse matrix with normalised columns.
template <class Ring>
struct SparseMatrix {
  std::uint64_t rows = 0;
  std::vector<SparseVec<Ring>> columns;

  std::uint64_t cols() const noexcept { return columns.size(); }

  std::size_t nonzeros() const {
    std::size_t s = 0;
    for (const auto& c : columns) s += c.size();
    return s;
  }

  SparseMatrix transpose() const {
    SparseMatrix t;
    t.rows = cols();
    t.columns.resize(rows);
    for (std::uint64_t j = 0; j < cols(); ++j)
      for (const auto& [i, v] : columns[j]) t.columns[i].push_back({j, v});
    return t;
  }
};

/// Incremental echelon basis of a column space over a field. Each stored
/// vector is scaled so its largest index (the pivot) has coefficient 1;
/// incoming columns are reduced from the top until the leading index is
/// free or the column vanishes. Memory is bounded by the rank times the
/// stored fill, never by the number of columns streamed.
template <class Ring>
class FieldEliminator {
 public:
  using value_type = typename Ring::value_type;
  static_assert(Ring::is_field, "FieldEliminator needs a field");

  FieldEliminator(Ring ring, std::uint64_t rows, std::size_t budget_bytes = std::size_t{4} << 30)
      : ring_(std::move(ring)), rows_(rows), budget_(budget_bytes) {
    if (rows * (sizeof(std::int32_t) + sizeof(value_type) + 1) > budget_)
      throw Error(ErrorKind::BudgetExceeded, "row space too large for the memory budget");
    pivot_of_row_.assign(rows, -1);
    acc_.assign(rows, ring_.zero());
    queued_.assign(rows, 0);
    bytes_ = rows * (sizeof(std::int32_t) + sizeof(value_type) + 1);
  }

  std::uint64_t rows() const noexcept { return rows_; }
  std::size_t rank() const noexcept { return pivots_.size(); }
  std::size_t stored_bytes() const noexcept { return bytes_; }

  /// Adds a column; returns the new pivot id when the rank grows.
  std::optional<std::size_t> insert(const SparseVec<Ring>& column) {
    load(column);
    while (!heap_.empty()) {
      const std::uint64_t r = pop();
      if (ring_.is_zero(acc_[r])) continue;
      const int p = pivot_of_row_[r];
      if (p >= 0) {
        eliminate(r, static_cast<std::size_t>(p), nullptr);
        continue;
      }
      // r is free: the remainder becomes a new pivot vector.
      SparseVec<Ring> stored;
      const value_type scale = ring_.inv(acc_[r]);
      stored.push_back({r, ring_.one()});
      acc_[r] = ring_.zero();
      while (!heap_.empty()) {
        const std::uint64_t s = pop();
        if (!ring_.is_zero(acc_[s])) stored.push_back({s, ring_.mul(acc_[s], scale)});
        acc_[s] = ring_.zero();
      }
      std::reverse(stored.begin(), stored.end());
      bytes_ += stored.size() * (sizeof(std::uint64_t) + sizeof(value_type)) + 64;
      if (bytes_ > budget_) throw Error(ErrorKind::BudgetExceeded, "echelon basis exceeds the memory budget");
      pivot_of_row_[r] = static_cast<std::int32_t>(pivots_.size());
      pivots_.push_back(std::move(stored));
      return pivots_.size() - 1;
    }
    return std::nullopt;
  }

  /// Full reduction against the stored basis. Returns the part outside the
  /// span (empty iff the vector is in the span); multipliers, when given,
  /// receive (pivot id, c) with v = sum c * pivot + remainder.
  SparseVec<Ring> reduce(const SparseVec<Ring>& column,
                         std::vector<std::pair<std::size_t, value_type>>* multipliers = nullptr) {
    load(column);
    SparseVec<Ring> rest;
    while (!heap_.empty()) {
      const std::uint64_t r = pop();
      if (ring_.is_zero(acc_[r])) continue;
      const int p = pivot_of_row_[r];
      if (p >= 0) {
        eliminate(r, static_cast<std::size_t>(p), multipliers);
      } else {
        rest.push_back({r, acc_[r]});
        acc_[r] = ring_.zero();
      }
    }
    std::reverse(rest.begin(), rest.end());
    return rest;
  }

  const SparseVec<Ring>& pivot_vector(std::size_t id) const { return pivots_[id]; }

 private:
  void load(const SparseVec<Ring>& column) {
    for (const auto& [i, v] : column) {
      if (i >= rows_) throw Error(ErrorKind::BadIndex, "column entry outside the row space");
      acc_[i] = ring_.add(acc_[i], v);
      push(i);
    }
  }

  void push(std::uint64_t i) {
    if (!queued_[i]) {
      queued_[i] = 1;
      heap_.push(i);
    }
  }

  std::uint64_t pop() {
    const std::uint64_t r = heap_.top();
    heap_.pop();
    queued_[r] = 0;
    return r;
  }

  void eliminate(std::uint64_t r, std::size_t p, std::vector<std::pair<std::size_t, value_type>>* multipliers) {
    const value_type c = acc_[r];
    if (multipliers) multipliers->push_back({p, c});
    for (const auto& [i, v] : pivots_[p]) {
      if (i == r) continue;
      acc_[i] = ring_.sub(acc_[i], ring_.mul(c, v));
      push(i);
    }
    acc_[r] = ring_.zero();
  }

  Ring ring_;
  std::uint64_t rows_;
  std::size_t budget_;
  std::size_t bytes_ = 0;
  std::vector<std::int32_t> pivot_of_row_;
  std::vector<SparseVec<Ring>> pivots_;
  std::vector<value_type> acc_;
  std::vector<std::uint8_t> queued_;
  std::priority_queue<std::uint64_t> heap_;
};

/// Rank over a field of a column stream.
template <class Ring, class ColumnSource>
std::size_t streaming_rank(const Ring& ring, std::uint64_t rows, std::uint64_t cols, ColumnSource&& column,
                           std::size_t budget_bytes = std::size_t{4} << 30) {
  if (rows == 0 || cols == 0) return 0;
  FieldEliminator<Ring> elim(ring, rows, budget_bytes);
  SparseVec<Ring> v;
  for (std::uint64_t j = 0; j < cols; ++j) {
    v.clear();
    column(j, v);
    if (!v.empty()) elim.insert(v);
    if (elim.rank() == rows) break;
  }
  return elim.rank();
}

template <class Ring>
std::size_t rank(const Ring& ring, const SparseMatrix<Ring>& m, std::size_t budget_bytes = std::size_t{4} << 30) {
  return streaming_rank(ring, m.rows, m.cols(), [&](std::uint64_t j, SparseVec<Ring>& out) { out = m.columns[j]; },
                        budget_bytes);
}

/// Nullspace basis of a (small) matrix over a field by dense elimination.
template <class Ring>
std::vector<SparseVec<Ring>> nullspace(const Ring& r, const SparseMatrix<Ring>& m) {
  using V = typename Ring::value_type;
  const std::size_t rows = m.rows, cols = m.cols();
  std::vector<std::vector<V>> a(rows, std::vector<V>(cols, r.zero()));
  for (std::size_t j = 0; j < cols; ++j)
    for (const auto& [i, v] : m.columns[j]) a[i][j] = v;
  std::vector<int> pivot_col_of_row;
  std::vector<bool> is_pivot(cols, false);
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < rows; ++col) {
    std::size_t sel = row;
    while (sel < rows && r.is_zero(a[sel][col])) ++sel;
    if (sel == rows) continue;
    std::swap(a[sel], a[row]);
    const V inv = r.inv(a[row][col]);
    for (auto& x : a[row]) x = r.mul(x, inv);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == row || r.is_zero(a[i][col])) continue;
      const V f = a[i][col];
      for (std::size_t k = col; k < cols; ++k) a[i][k] = r.sub(a[i][k], r.mul(f, a[row][k]));
    }
    pivot_col_of_row.push_back(static_cast<int>(col));
    is_pivot[col] = true;
    ++row;
  }
  std::vector<SparseVec<Ring>> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    SparseVec<Ring> v{{free, r.one()}};
    for (std::size_t i = 0; i < pivot_col_of_row.size(); ++i)
      if (!r.is_zero(a[i][free])) v.push_back({static_cast<std::uint64_t>(pivot_col_of_row[i]), r.neg(a[i][free])});
    normalize(r, v);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Rank and invariant factors (> 1, each dividing the next) of an integer matrix.
struct SmithForm {
  std::size_t rank = 0;
  std::vector<mpz_class> divisors;
};

namespace detail {

inline SmithForm dense_smith(std::vector<std::vector<mpz_class>> a) {
  SmithForm out;
  const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  std::vector<mpz_class> diag;
  std::size_t t = 0;
  while (t < rows && t < cols) {
    // Smallest nonzero entry of the trailing block.
    std::size_t pi = rows, pj = cols;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (sgn(a[i][j]) != 0 && (pi == rows || abs(a[i][j]) < abs(a[pi][pj]))) {
          pi = i;
          pj = j;
        }
    if (pi == rows) break;
    std::swap(a[pi], a[t]);
    for (auto& row : a) std::swap(row[pj], row[t]);
    bool clean = false;
    while (!clean) {
      clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (sgn(a[i][t]) == 0) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), a[i][t].get_mpz_t(), a[t][t].get_mpz_t());
        for (std::size_t j = t; j < cols; ++j) a[i][j] -= q * a[t][j];
        if (sgn(a[i][t]) != 0) {
          std::swap(a[i], a[t]);
          clean = false;
        }
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (sgn(a[t][j]) == 0) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), a[t][j].get_mpz_t(), a[t][t].get_mpz_t());
        for (std::size_t i = t; i < rows; ++i) a[i][j] -= q * a[i][t];
        if (sgn(a[t][j]) != 0) {
          for (auto& row : a) std::swap(row[j], row[t]);
          clean = false;
        }
      }
    }
    diag.push_back(abs(a[t][t]));
    ++t;
  }
  // Normalise the diagonal into a divisibility chain.
  for (std::size_t i = 0; i < diag.size(); ++i)
    for (std::size_t j = i + 1; j < diag.size(); ++j) {
      mpz_class g, l;
      mpz_gcd(g.get_mpz_t(), diag[i].get_mpz_t(), diag[j].get_mpz_t());
      mpz_lcm(l.get_mpz_t(), diag[i].get_mpz_t(), diag[j].get_mpz_t());
      diag[i] = g;
      diag[j] = l;
    }
  out.rank = diag.size();
  for (const auto& d : diag)
    if (d > 1) out.divisors.push_back(d);
  return out;
}

}  // namespace detail

/// Smith normal form of a sparse integer matrix. Unit entries are used as
/// pivots first (each one deletes its row and column after clearing its
/// column by row operations); whatever remains is finished densely.
inline SmithForm smith_normal_form(const SparseMatrix<Integers>& m, std::size_t dense_limit = 4000) {
  const std::size_t rows = m.rows;
  std::vector<std::map<std::uint64_t, mpz_class>> row_data(rows);
  std::map<std::uint64_t, std::set<std::uint64_t>> col_rows;
  for (std::uint64_t j = 0; j < m.cols(); ++j)
    for (const auto& [i, v] : m.columns[j]) {
      if (sgn(v) == 0) continue;
      row_data[i][j] = v;
      col_rows[j].insert(i);
    }
  std::size_t unit_rank = 0;
  bool progress = true;
  while (progress) {
    progress = false;
    for (auto cit = col_rows.begin(); cit != col_rows.end();) {
      const std::uint64_t col = cit->first;
      // Unit entry in this column whose row is sparsest; ties by row index.
      std::optional<std::uint64_t> best;
      for (auto i : cit->second) {
        const auto& v = row_data[i].at(col);
        if ((v == 1 || v == -1) && (!best || row_data[i].size() < row_data[*best].size())) best = i;
      }
      if (!best) {
        ++cit;
        continue;
      }
      const std::uint64_t pr = *best;
      const mpz_class pv = row_data[pr].at(col);
      const auto pivot_row = row_data[pr];
      std::vector<std::uint64_t> others(cit->second.begin(), cit->second.end());
      for (auto i : others) {
        if (i == pr) continue;
        const mpz_class f = row_data[i].at(col) * pv;  // pv = +-1 so f / pv = f * pv
        for (const auto& [j, v] : pivot_row) {
          auto& entry = row_data[i][j];
          entry -= f * v;
          if (sgn(entry) == 0) {
            row_data[i].erase(j);
            col_rows[j].erase(i);
          } else {
            col_rows[j].insert(i);
          }
        }
      }
      for (const auto& [j, v] : pivot_row) {
        if (j != col) col_rows[j].erase(pr);
      }
      row_data[pr].clear();
      cit = col_rows.erase(cit);
      // Drop columns emptied by the elimination; only pivot-row columns can empty.
      for (const auto& [j, v] : pivot_row) {
        if (j == col) continue;
        auto it = col_rows.find(j);
        if (it == col_rows.end() || !it->second.empty()) continue;
        if (it == cit) cit = col_rows.erase(it);
        else col_rows.erase(it);
      }
      ++unit_rank;
      progress = true;
    }
  }
  std::vector<std::uint64_t> live_rows, live_cols;
  for (std::uint64_t i = 0; i < rows; ++i)
    if (!row_data[i].empty()) live_rows.push_back(i);
  for (const auto& [j, rs] : col_rows)
    if (!rs.empty()) live_cols.push_back(j);
  SmithForm out;
  if (!live_rows.empty()) {
    if (live_rows.size() > dense_limit || live_cols.size() > dense_limit)
      throw Error(ErrorKind::BudgetExceeded, "Smith normal form residue too large for dense completion");
    std::vector<std::vector<mpz_class>> dense(live_rows.size(), std::vector<mpz_class>(live_cols.size(), 0));
    for (std::size_t a = 0; a < live_rows.size(); ++a)
      for (const auto& [j, v] : row_data[live_rows[a]]) {
        auto pos = std::lower_bound(live_cols.begin(), live_cols.end(), j) - live_cols.begin();
        dense[a][pos] = v;
      }
    out = detail::dense_smith(std::move(dense));
  }
  out.rank += unit_rank;
  return out;
}

}  // namespace cpa
