#pragma once
// Reference computations used only by the tests. Each one is written from
// the definitions, independently of the library code it checks.

#include <algorithm>
#include <cstdint>
#include <gmpxx.h>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <vector>

#include "cpa/diagram.hpp"
#include "cpa/group.hpp"

namespace oracle {

/// Bell numbers from the Bell triangle.
inline std::vector<std::uint64_t> bell_numbers(std::size_t up_to) {
  std::vector<std::uint64_t> bell{1};
  std::vector<std::uint64_t> row{1};
  for (std::size_t i = 1; i <= up_to; ++i) {
    std::vector<std::uint64_t> next{row.back()};
    for (auto x : row) next.push_back(next.back() + x);
    bell.push_back(next.front());
    row = std::move(next);
  }
  return bell;
}

/// Stirling numbers of the second kind S(m, k).
inline std::uint64_t stirling2(std::size_t m, std::size_t k) {
  std::vector<std::vector<std::uint64_t>> s(m + 1, std::vector<std::uint64_t>(m + 1, 0));
  s[0][0] = 1;
  for (std::size_t i = 1; i <= m; ++i)
    for (std::size_t j = 1; j <= i; ++j) s[i][j] = j * s[i - 1][j] + s[i - 1][j - 1];
  return k <= m ? s[m][k] : 0;
}

/// Number of G-coloured diagrams on m nodes: sum_k S(m, k) |G|^(m - k).
inline std::uint64_t coloured_count(std::size_t m, std::uint64_t g) {
  std::uint64_t total = 0;
  for (std::size_t k = 1; k <= m; ++k) {
    std::uint64_t p = 1;
    for (std::size_t i = k; i < m; ++i) p *= g;
    total += stirling2(m, k) * p;
  }
  return total;
}

inline std::uint64_t factorial(std::uint64_t n) { return n <= 1 ? 1 : n * factorial(n - 1); }

/// Composition by explicit graph search: nodes 0..n-1 top-left, n..2n-1 the
/// middle row, 2n..3n-1 bottom-right; edges are labelled arcs x -> y
/// carrying gamma(x, y) in either diagram. Potentials are assigned by BFS and
/// every arc is re-checked afterwards.
struct BruteResult {
  bool zero = false;
  std::size_t loops = 0;
  std::vector<int> component;               // per outer node (2n)
  std::vector<cpa::Element> potential;      // per outer node
};

inline BruteResult brute_compose(const cpa::ColouredDiagram& d1, const cpa::ColouredDiagram& d2,
                                 const cpa::FiniteGroup& g) {
  const std::size_t n = d1.n();
  const std::size_t total = 3 * n;
  struct Arc {
    std::size_t to;
    cpa::Element label;
  };
  std::vector<std::vector<Arc>> adj(total);
  auto add_diagram = [&](const cpa::ColouredDiagram& d, std::size_t left_off, std::size_t right_off) {
    auto where = [&](std::size_t x) { return x < n ? left_off + x : right_off + (x - n); };
    for (std::size_t x = 0; x < 2 * n; ++x)
      for (std::size_t y = 0; y < 2 * n; ++y) {
        if (x == y) continue;
        auto gm = d.gamma(x, y, g);
        if (gm) adj[where(x)].push_back({where(y), *gm});
      }
  };
  add_diagram(d1, 0, n);
  add_diagram(d2, n, 2 * n);

  BruteResult res;
  std::vector<int> comp(total, -1);
  std::vector<cpa::Element> pot(total, g.identity());
  int next = 0;
  for (std::size_t s = 0; s < total; ++s) {
    if (comp[s] >= 0) continue;
    std::queue<std::size_t> q;
    q.push(s);
    comp[s] = next;
    bool outer = false;
    while (!q.empty()) {
      auto x = q.front();
      q.pop();
      if (x < n || x >= 2 * n) outer = true;
      for (const auto& a : adj[x]) {
        if (comp[a.to] < 0) {
          comp[a.to] = next;
          pot[a.to] = g.mul(pot[x], a.label);
          q.push(a.to);
        }
      }
    }
    if (!outer) ++res.loops;
    ++next;
  }
  for (std::size_t x = 0; x < total; ++x)
    for (const auto& a : adj[x])
      if (g.mul(pot[x], a.label) != pot[a.to]) res.zero = true;
  for (std::size_t x = 0; x < n; ++x) {
    res.component.push_back(comp[x]);
    res.potential.push_back(pot[x]);
  }
  for (std::size_t x = 2 * n; x < 3 * n; ++x) {
    res.component.push_back(comp[x]);
    res.potential.push_back(pot[x]);
  }
  return res;
}

/// Whether a diagram matches a brute-force result: same blocks, same gamma.
inline bool matches(const cpa::ColouredDiagram& d, const BruteResult& r, const cpa::FiniteGroup& g) {
  const std::size_t m = r.component.size();
  for (std::size_t x = 0; x < m; ++x)
    for (std::size_t y = 0; y < m; ++y) {
      const bool same = r.component[x] == r.component[y];
      auto gm = d.gamma(x, y, g);
      if (same != gm.has_value()) return false;
      if (same && *gm != g.mul(g.inverse(r.potential[x]), r.potential[y])) return false;
    }
  return true;
}

/// Invariant factors (> 1, ascending, each dividing the next) of the
/// abelianisation of a finite group, from its multiplication table.
inline std::vector<std::uint64_t> abelianisation_invariants(const cpa::FiniteGroup& h) {
  const std::size_t m = h.order();
  // Commutator subgroup: closure of all commutators under multiplication.
  std::set<cpa::Element> sub{h.identity()};
  std::vector<cpa::Element> gens;
  for (cpa::Element a = 0; a < m; ++a)
    for (cpa::Element b = 0; b < m; ++b)
      gens.push_back(h.mul(h.mul(h.inverse(a), h.inverse(b)), h.mul(a, b)));
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<cpa::Element> cur(sub.begin(), sub.end());
    for (auto x : cur)
      for (auto c : gens)
        if (sub.insert(h.mul(x, c)).second) grew = true;
  }
  // Cosets of the (normal) commutator subgroup.
  std::vector<int> coset(m, -1);
  std::vector<cpa::Element> reps;
  for (cpa::Element a = 0; a < m; ++a) {
    if (coset[a] >= 0) continue;
    for (auto c : sub) coset[h.mul(a, c)] = static_cast<int>(reps.size());
    reps.push_back(a);
  }
  const std::size_t k = reps.size();
  auto qmul = [&](std::size_t x, std::size_t y) { return static_cast<std::size_t>(coset[h.mul(reps[x], reps[y])]); };
  const std::size_t unit = static_cast<std::size_t>(coset[h.identity()]);
  auto power = [&](std::size_t x, std::uint64_t e) {
    std::size_t r = unit;
    for (std::uint64_t i = 0; i < e; ++i) r = qmul(r, x);
    return r;
  };
  // For each prime p: #{a : a^(p^i) = 1} = p^(sum_j min(i, e_j)).
  std::map<std::uint64_t, std::vector<std::uint64_t>> exps;
  std::uint64_t rest = k;
  for (std::uint64_t p = 2; rest > 1; ++p) {
    if (rest % p) continue;
    while (rest % p == 0) rest /= p;
    std::vector<std::uint64_t> logs{0};
    for (std::uint64_t pi = p;; pi *= p) {
      std::uint64_t cnt = 0;
      for (std::size_t a = 0; a < k; ++a)
        if (power(a, pi) == unit) ++cnt;
      std::uint64_t l = 0;
      while (cnt > 1) {
        cnt /= p;
        ++l;
      }
      if (l == logs.back()) break;
      logs.push_back(l);
    }
    // Factors of order >= p^i number logs[i] - logs[i-1].
    std::vector<std::uint64_t> at_least;
    for (std::size_t i = 1; i < logs.size(); ++i) at_least.push_back(logs[i] - logs[i - 1]);
    const std::uint64_t count = at_least.front();
    std::vector<std::uint64_t> e(count, 0);
    for (std::size_t i = 0; i < at_least.size(); ++i)
      for (std::uint64_t j = 0; j < at_least[i]; ++j) e[j] = i + 1;
    exps[p] = e;  // descending
  }
  std::size_t width = 0;
  for (const auto& [p, e] : exps) width = std::max(width, e.size());
  std::vector<std::uint64_t> inv(width, 1);
  for (const auto& [p, e] : exps)
    for (std::size_t j = 0; j < e.size(); ++j)
      for (std::uint64_t t = 0; t < e[j]; ++t) inv[j] *= p;
  std::sort(inv.begin(), inv.end());
  return inv;
}

/// Dense rank over Z/p.
inline std::size_t dense_rank_mod(std::vector<std::vector<std::int64_t>> a, std::int64_t p) {
  std::size_t rank = 0;
  const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  for (auto& row : a)
    for (auto& x : row) x = ((x % p) + p) % p;
  auto inv = [&](std::int64_t x) {
    std::int64_t r = 1, e = p - 2;
    while (e) {
      if (e & 1) r = r * x % p;
      x = x * x % p;
      e >>= 1;
    }
    return r;
  };
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t s = rank;
    while (s < rows && a[s][c] == 0) ++s;
    if (s == rows) continue;
    std::swap(a[s], a[rank]);
    const std::int64_t iv = inv(a[rank][c]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || a[r][c] == 0) continue;
      const std::int64_t f = a[r][c] * iv % p;
      for (std::size_t k = 0; k < cols; ++k) a[r][k] = ((a[r][k] - f * a[rank][k]) % p + p) % p;
    }
    ++rank;
  }
  return rank;
}

/// d_k = gcd of all k x k minors; invariant factors are d_k / d_{k-1}.
inline mpz_class det(std::vector<std::vector<mpz_class>> a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  mpz_class result = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (a[0][j] == 0) continue;
    std::vector<std::vector<mpz_class>> minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<mpz_class> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(a[i][k]);
      minor.push_back(row);
    }
    mpz_class term = a[0][j] * det(minor);
    result += (j % 2 == 0) ? term : mpz_class(-term);
  }
  return result;
}

inline void choose(std::size_t m, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
                   std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < m; ++i) {
    cur.push_back(i);
    choose(m, k, i + 1, cur, out);
    cur.pop_back();
  }
}

inline std::vector<mpz_class> invariant_factors_by_minors(const std::vector<std::vector<mpz_class>>& a) {
  const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  std::vector<mpz_class> d{1};
  for (std::size_t k = 1; k <= std::min(rows, cols); ++k) {
    std::vector<std::vector<std::size_t>> rs, cs;
    std::vector<std::size_t> cur;
    choose(rows, k, 0, cur, rs);
    choose(cols, k, 0, cur, cs);
    mpz_class g = 0;
    for (const auto& r : rs)
      for (const auto& c : cs) {
        std::vector<std::vector<mpz_class>> sub(k, std::vector<mpz_class>(k));
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) sub[i][j] = a[r[i]][c[j]];
        mpz_class v = det(sub);
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
      }
    if (g == 0) break;
    d.push_back(g);
  }
  std::vector<mpz_class> out;
  for (std::size_t k = 1; k < d.size(); ++k) {
    mpz_class f = d[k] / d[k - 1];
    if (f > 1) out.push_back(f);
  }
  return out;
}

}  // namespace oracle
