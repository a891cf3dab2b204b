#pragma once
// The left ideals K_i (right node i isolated) and L_{i,j,g} (right nodes i, j
// joined with gamma = g) covering the ideal of non-permutation diagrams, their
// intersections, and the idempotents generating those intersections.

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "cpa/algebra.hpp"
#include "cpa/diagram.hpp"
#include "cpa/error.hpp"
#include "cpa/report.hpp"

namespace cpa {

struct PairColour {
  std::size_t i;  // 1-based, i < j
  std::size_t j;
  Element g;
  auto operator<=>(const PairColour&) const = default;
};

/// Indexes the intersection of K_i for i in S and L_{i,j,g} for ((i,j),g) in T.
struct CoverSpec {
  std::set<std::size_t> S;
  std::set<PairColour> T;

  std::size_t size() const noexcept { return S.size() + T.size(); }

  nlohmann::json to_json(const FiniteGroup& g) const {
    nlohmann::json t = nlohmann::json::array();
    for (const auto& p : T) t.push_back({{"i", p.i}, {"j", p.j}, {"g", g.name(p.g)}});
    return {{"S", std::vector<std::size_t>(S.begin(), S.end())}, {"T", t}};
  }
};

using IdealBasis = std::vector<std::uint32_t>;

inline void check_spec(const CoverSpec& spec, std::size_t n, const FiniteGroup& g) {
  for (auto i : spec.S)
    if (i < 1 || i > n) throw Error(ErrorKind::BadIndex, "S index outside 1..n");
  for (const auto& p : spec.T)
    if (p.i < 1 || p.i >= p.j || p.j > n || p.g >= g.order())
      throw Error(ErrorKind::BadIndex, "T triple needs 1 <= i < j <= n and g in G");
}

inline bool in_k_ideal(const ColouredDiagram& d, std::size_t i) { return d.is_singleton(d.n() + i - 1); }

inline bool in_l_ideal(const ColouredDiagram& d, std::size_t i, std::size_t j, Element g, const FiniteGroup& grp) {
  auto c = d.gamma(d.n() + i - 1, d.n() + j - 1, grp);
  return c && *c == g;
}

inline bool in_intersection(const ColouredDiagram& d, const CoverSpec& spec, const FiniteGroup& g) {
  for (auto i : spec.S)
    if (!in_k_ideal(d, i)) return false;
  for (const auto& p : spec.T)
    if (!in_l_ideal(d, p.i, p.j, p.g, g)) return false;
  return true;
}

inline IdealBasis k_ideal_basis(const DiagramBasis& basis, std::size_t i) {
  if (i < 1 || i > basis.n()) throw Error(ErrorKind::BadIndex, "K_i needs 1 <= i <= n");
  IdealBasis out;
  for (std::uint32_t x = 0; x < basis.size(); ++x)
    if (in_k_ideal(basis[x], i)) out.push_back(x);
  return out;
}

inline IdealBasis l_ideal_basis(const DiagramBasis& basis, std::size_t i, std::size_t j, Element g) {
  if (i < 1 || i >= j || j > basis.n()) throw Error(ErrorKind::BadIndex, "L_{i,j,g} needs 1 <= i < j <= n");
  if (g >= basis.group().order()) throw Error(ErrorKind::BadIndex, "colour outside the group");
  IdealBasis out;
  for (std::uint32_t x = 0; x < basis.size(); ++x)
    if (in_l_ideal(basis[x], i, j, g, basis.group())) out.push_back(x);
  return out;
}

/// Empty spec: every diagram (the unit ideal).
inline IdealBasis intersection_basis(const DiagramBasis& basis, const CoverSpec& spec) {
  check_spec(spec, basis.n(), basis.group());
  IdealBasis out;
  for (std::uint32_t x = 0; x < basis.size(); ++x)
    if (in_intersection(basis[x], spec, basis.group())) out.push_back(x);
  return out;
}

/// True iff every K and L basis lies among the non-permutation diagrams and
/// together they exhaust them.
inline bool cover_union_check(const DiagramBasis& basis) {
  const std::size_t n = basis.n();
  std::vector<bool> covered(basis.size(), false);
  auto absorb = [&](const IdealBasis& ideal) {
    for (auto x : ideal) {
      if (basis[x].is_permutation()) return false;
      covered[x] = true;
    }
    return true;
  };
  for (std::size_t i = 1; i <= n; ++i)
    if (!absorb(k_ideal_basis(basis, i))) return false;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = i + 1; j <= n; ++j)
      for (Element g = 0; g < basis.group().order(); ++g)
        if (!absorb(l_ideal_basis(basis, i, j, g))) return false;
  for (std::uint32_t x = 0; x < basis.size(); ++x)
    if (covered[x] == basis[x].is_permutation()) return false;
  return true;
}

/// The three vanishing conditions: a joined pair touching S; one pair with
/// two colours; a triangle (i,j),(j,k),(i,k) whose colours fail h = f g.
inline bool is_zero_by_criterion(const CoverSpec& spec, const FiniteGroup& g) {
  for (const auto& p : spec.T)
    if (spec.S.count(p.i) || spec.S.count(p.j)) return true;
  for (const auto& p : spec.T)
    for (const auto& q : spec.T)
      if (p.i == q.i && p.j == q.j && p.g != q.g) return true;
  for (const auto& f : spec.T)
    for (const auto& s : spec.T) {
      if (s.i != f.j) continue;
      for (const auto& h : spec.T)
        if (h.i == f.i && h.j == s.j && h.g != g.mul(f.g, s.g)) return true;
    }
  return false;
}

/// The (a, b) pairs used for the mu factors: a runs through S ascending and b is
/// the least index outside S.
inline std::vector<std::pair<std::size_t, std::size_t>> mu_chain(const CoverSpec& spec, std::size_t n) {
  std::size_t b = 0;
  for (std::size_t x = 1; x <= n && b == 0; ++x)
    if (!spec.S.count(x)) b = x;
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (auto a : spec.S) out.emplace_back(a, b);
  return out;
}

/// Generator of the intersection as a left ideal: the product of mu(n, a, b)
/// over S followed by nu(n, i, j, g) over T, then checked to be idempotent,
/// to fix every basis diagram of the intersection on the right, and to lie in it.
template <class Ring>
AlgebraElement<Ring> idempotent_generator(const AlgebraContext<Ring>& ctx, const CoverSpec& spec) {
  const auto& basis = ctx.basis();
  const auto& g = ctx.group();
  const std::size_t n = ctx.n();
  const IdealBasis members = intersection_basis(basis, spec);
  if (members.empty()) throw Error(ErrorKind::ZeroIdeal, "intersection is zero");
  if (spec.S.size() == n) throw Error(ErrorKind::FullS, "S = {1..n} has no mu retraction");

  auto e = AlgebraElement<Ring>::one(ctx);
  for (auto [a, b] : mu_chain(spec, n))
    e = multiply(ctx, e, AlgebraElement<Ring>::basis(ctx, basis.index_of(mu_diagram(n, a, b, g))));
  for (const auto& p : spec.T)
    e = multiply(ctx, e, AlgebraElement<Ring>::basis(ctx, basis.index_of(nu_diagram(n, p.i, p.j, p.g, g))));

  auto fail = [&](const std::string& what) { throw Error(ErrorKind::VerificationFailed, what); };
  if (!(multiply(ctx, e, e) == e)) fail("generator is not idempotent");
  std::vector<bool> member(basis.size(), false);
  for (auto x : members) member[x] = true;
  for (const auto& [x, c] : e.terms())
    if (!member[x]) fail("generator leaves the intersection");
  for (auto x : members) {
    auto d = AlgebraElement<Ring>::basis(ctx, x);
    if (!(multiply(ctx, d, e) == d)) fail("d e != d for a basis diagram of the intersection");
  }
  return e;
}

namespace detail {

/// Shared body of the mu and nu retraction checks: every d in J maps into the
/// span of target, and every d in target is fixed with no delta factor.
template <class Ring>
VerificationReport verify_retraction(const AlgebraContext<Ring>& ctx, const CoverSpec& spec, const CoverSpec& target,
                                     const ColouredDiagram& retraction, const std::string& kind) {
  const auto& basis = ctx.basis();
  const auto& g = ctx.group();
  VerificationReport rep;
  const IdealBasis j = intersection_basis(basis, spec);
  const IdealBasis tgt = intersection_basis(basis, target);
  auto spec_json = spec.to_json(g);
  spec_json["retraction"] = retraction.to_string(g);
  if (tgt.empty()) {
    rep.details["vacuous"] = true;
    return rep;
  }
  std::vector<bool> in_target(basis.size(), false);
  for (auto x : tgt) in_target[x] = true;
  for (auto x : j) {
    ++rep.checked;
    auto out = compose(basis[x], retraction, g);
    if (out.is_zero()) continue;
    auto y = basis.index_of(*out.result);
    if (!in_target[y]) rep.fail(kind + "-image", spec_json, {{"d", basis[x].to_string(g)}, {"product", out.result->to_string(g)}});
  }
  for (auto x : tgt) {
    ++rep.checked;
    auto out = compose(basis[x], retraction, g);
    if (out.is_zero() || *out.result != basis[x] || out.internal_components != 0)
      rep.fail(kind + "-fix", spec_json, {{"d", basis[x].to_string(g)},
                                           {"internal_components", out.internal_components},
                                           {"zero", out.is_zero()}});
  }
  rep.details["vacuous"] = false;
  return rep;
}

}  // namespace detail

/// Right multiplication by mu(n, a, b) retracts J onto K_a meet J.
template <class Ring>
VerificationReport verify_retraction_mu(const AlgebraContext<Ring>& ctx, const CoverSpec& spec, std::size_t a,
                                        std::size_t b) {
  if (spec.S.count(a) || spec.S.count(b) || a == b)
    throw Error(ErrorKind::BadIndex, "mu retraction needs distinct a, b outside S");
  CoverSpec target = spec;
  target.S.insert(a);
  return detail::verify_retraction(ctx, spec, target, mu_diagram(ctx.n(), a, b, ctx.group()), "mu");
}

/// Right multiplication by nu(n, a, b, h) retracts J onto L_{a,b,h} meet J.
template <class Ring>
VerificationReport verify_retraction_nu(const AlgebraContext<Ring>& ctx, const CoverSpec& spec, std::size_t a,
                                        std::size_t b, Element h) {
  if (spec.T.count(PairColour{a, b, h})) throw Error(ErrorKind::BadIndex, "((a,b),h) already in T");
  CoverSpec target = spec;
  target.T.insert(PairColour{a, b, h});
  return detail::verify_retraction(ctx, spec, target, nu_diagram(ctx.n(), a, b, h, ctx.group()), "nu");
}

/// Every triple ((i,j),g) in lexicographic order.
inline std::vector<PairColour> all_pair_colours(std::size_t n, const FiniteGroup& g) {
  std::vector<PairColour> out;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = i + 1; j <= n; ++j)
      for (Element c = 0; c < g.order(); ++c) out.push_back({i, j, c});
  return out;
}

namespace detail {

inline double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  double r = 1;
  for (std::size_t i = 0; i < k; ++i) r = r * static_cast<double>(n - i) / static_cast<double>(i + 1);
  return r;
}

/// Visits every subset of {0..m-1} of size <= max_size, in order of size then lexicographically.
inline void for_each_small_subset(std::size_t m, std::size_t max_size,
                                  const std::function<void(const std::vector<std::size_t>&)>& visit) {
  for (std::size_t k = 0; k <= std::min(m, max_size); ++k) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      visit(idx);
      std::size_t i = k;
      while (i > 0 && idx[i - 1] == m - k + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t t = i; t < k; ++t) idx[t] = idx[t - 1] + 1;
    }
  }
}

}  // namespace detail

struct CoverLimits {
  double exhaustive_max_specs = 1e6;
  std::size_t sampled_specs = 10000;
  std::uint64_t seed = 0;
};

/// Checks one spec: the zero criterion against the computed intersection and,
/// for a nonzero intersection with S != {1..n}, the idempotent generator and
/// every mu / nu retraction available from it.
template <class Ring>
VerificationReport verify_spec(const AlgebraContext<Ring>& ctx, const CoverSpec& spec) {
  const auto& g = ctx.group();
  const std::size_t n = ctx.n();
  VerificationReport rep;
  ++rep.checked;
  const bool predicted_zero = is_zero_by_criterion(spec, g);
  const bool empty = intersection_basis(ctx.basis(), spec).empty();
  if (predicted_zero != empty) {
    rep.fail("zero-criterion", spec.to_json(g), {{"criterion_zero", predicted_zero}, {"intersection_empty", empty}});
    return rep;
  }
  if (empty || spec.S.size() == n) return rep;
  try {
    idempotent_generator(ctx, spec);
    ++rep.checked;
  } catch (const Error& e) {
    rep.fail("idempotent-generator", spec.to_json(g), {{"error", e.what()}});
  }
  for (std::size_t a = 1; a <= n; ++a)
    for (std::size_t b = 1; b <= n; ++b)
      if (a != b && !spec.S.count(a) && !spec.S.count(b)) rep.merge(verify_retraction_mu(ctx, spec, a, b));
  for (const auto& p : all_pair_colours(n, g))
    if (!spec.T.count(p)) rep.merge(verify_retraction_nu(ctx, spec, p.i, p.j, p.g));
  return rep;
}

/// Full check of the cover up to the given height: the union condition, then
/// every spec with |S| + |T| <= height (seeded sample when there are too many).
template <class Ring>
VerificationReport verify_cover(const AlgebraContext<Ring>& ctx, std::size_t height, const CoverLimits& limits = {}) {
  const auto& g = ctx.group();
  const std::size_t n = ctx.n();
  if (height > n - 1) throw Error(ErrorKind::BadInput, "cover height must be at most n - 1");
  VerificationReport rep;
  rep.seed = limits.seed;
  ++rep.checked;
  if (!cover_union_check(ctx.basis())) rep.fail("cover-union", {{"n", n}}, nullptr);

  const auto triples = all_pair_colours(n, g);
  double total = 0;
  for (std::size_t s = 0; s <= height; ++s) total += detail::binomial(n, s) * [&] {
    double t = 0;
    for (std::size_t k = 0; k + s <= height; ++k) t += detail::binomial(triples.size(), k);
    return t;
  }();
  std::size_t specs = 0, nonzero = 0;
  auto run = [&](const CoverSpec& spec) {
    ++specs;
    if (!is_zero_by_criterion(spec, g)) ++nonzero;
    rep.merge(verify_spec(ctx, spec));
  };
  if (total <= limits.exhaustive_max_specs) {
    detail::for_each_small_subset(n, height, [&](const std::vector<std::size_t>& s_idx) {
      detail::for_each_small_subset(triples.size(), height - s_idx.size(), [&](const std::vector<std::size_t>& t_idx) {
        CoverSpec spec;
        for (auto i : s_idx) spec.S.insert(i + 1);
        for (auto t : t_idx) spec.T.insert(triples[t]);
        run(spec);
      });
    });
  } else {
    rep.exhaustive = false;
    SeededRng rng(limits.seed);
    for (std::size_t k = 0; k < limits.sampled_specs; ++k) {
      CoverSpec spec;
      const std::size_t size = rng.below(height + 1);
      while (spec.size() < size) {
        std::uint64_t pick = rng.below(n + triples.size());
        if (pick < n) spec.S.insert(pick + 1);
        else spec.T.insert(triples[pick - n]);
      }
      run(spec);
    }
  }
  const std::size_t width = n + triples.size();
  rep.details = {{"n", n}, {"height", height}, {"width", width}, {"specs", specs}, {"nonzero_specs", nonzero},
                 {"spec_space", total}};
  return rep;
}

/// Zero-criterion equivalence over every (S, T), regardless of height.
template <class Ring>
VerificationReport verify_zero_criterion_all(const AlgebraContext<Ring>& ctx, std::size_t max_specs = 1u << 20) {
  const auto& g = ctx.group();
  const std::size_t n = ctx.n();
  const auto triples = all_pair_colours(n, g);
  const std::size_t bits = n + triples.size();
  if (bits >= 63 || (std::size_t{1} << bits) > max_specs)
    throw Error(ErrorKind::SizeLimit, "too many specs for an exhaustive zero-criterion check");
  VerificationReport rep;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << bits); ++mask) {
    CoverSpec spec;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) spec.S.insert(i + 1);
    for (std::size_t t = 0; t < triples.size(); ++t)
      if (mask >> (n + t) & 1) spec.T.insert(triples[t]);
    ++rep.checked;
    const bool zero = is_zero_by_criterion(spec, g);
    const bool empty = intersection_basis(ctx.basis(), spec).empty();
    if (zero != empty) rep.fail("zero-criterion", spec.to_json(g), {{"criterion_zero", zero}, {"intersection_empty", empty}});
  }
  return rep;
}

}  // namespace cpa
