#pragma once
// The coloured partition algebra P_n(delta, G) over an exact ring, its
// augmentation, the ideal of non-permutation diagrams and the quotient onto
// the group algebra of G wr S_n.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "cpa/diagram.hpp"
#include "cpa/error.hpp"
#include "cpa/group.hpp"
#include "cpa/report.hpp"
#include "cpa/ring.hpp"

namespace cpa {

/// Product of two basis diagrams: zero, or delta^loops times a basis diagram.
struct BasisProduct {
  bool zero = true;
  std::uint32_t index = 0;
  std::size_t loops = 0;
};

template <class Ring>
class AlgebraContext {
 public:
  using value_type = typename Ring::value_type;

  AlgebraContext(std::size_t n, FiniteGroup g, Ring ring, value_type delta, const EnumerationLimits& limits = {})
      : basis_(n, std::move(g), limits), ring_(std::move(ring)), delta_(std::move(delta)) {}

  std::size_t n() const noexcept { return basis_.n(); }
  const FiniteGroup& group() const noexcept { return basis_.group(); }
  const DiagramBasis& basis() const noexcept { return basis_; }
  const Ring& ring() const noexcept { return ring_; }
  const value_type& delta() const noexcept { return delta_; }
  std::size_t dimension() const noexcept { return basis_.size(); }

  BasisProduct basis_product(std::uint32_t i, std::uint32_t j) const {
    auto out = compose(basis_[i], basis_[j], group());
    BasisProduct p;
    if (out.is_zero()) return p;
    p.zero = false;
    p.index = basis_.index_of(*out.result);
    p.loops = out.internal_components;
    return p;
  }

  /// delta^k with delta^0 = 1 for every delta, including 0.
  value_type delta_power(std::size_t k) const { return ring_.pow(delta_, k); }

 private:
  DiagramBasis basis_;
  Ring ring_;
  value_type delta_;
};

/// Finitely supported linear combination of basis diagrams; no zero coefficients stored.
template <class Ring>
class AlgebraElement {
 public:
  using value_type = typename Ring::value_type;

  explicit AlgebraElement(const AlgebraContext<Ring>& ctx) : ctx_(&ctx) {}

  static AlgebraElement basis(const AlgebraContext<Ring>& ctx, std::uint32_t index) {
    AlgebraElement e(ctx);
    e.add_term(index, ctx.ring().one());
    return e;
  }

  static AlgebraElement one(const AlgebraContext<Ring>& ctx) { return basis(ctx, ctx.basis().identity_index()); }

  const AlgebraContext<Ring>& context() const noexcept { return *ctx_; }
  const std::map<std::uint32_t, value_type>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  void add_term(std::uint32_t index, const value_type& c) {
    const Ring& r = ctx_->ring();
    if (index >= ctx_->dimension()) throw Error(ErrorKind::BadIndex, "diagram index outside basis");
    if (r.is_zero(c)) return;
    auto [it, fresh] = terms_.try_emplace(index, c);
    if (!fresh) {
      it->second = r.add(it->second, c);
      if (r.is_zero(it->second)) terms_.erase(it);
    }
  }

  value_type coefficient(std::uint32_t index) const {
    auto it = terms_.find(index);
    return it == terms_.end() ? ctx_->ring().zero() : it->second;
  }

  AlgebraElement& operator+=(const AlgebraElement& other) {
    check_same(other);
    for (const auto& [i, c] : other.terms_) add_term(i, c);
    return *this;
  }

  AlgebraElement scaled(const value_type& s) const {
    AlgebraElement out(*ctx_);
    for (const auto& [i, c] : terms_) out.add_term(i, ctx_->ring().mul(s, c));
    return out;
  }

  bool operator==(const AlgebraElement& other) const { return ctx_ == other.ctx_ && terms_ == other.terms_; }

  void check_same(const AlgebraElement& other) const {
    if (ctx_ != other.ctx_) throw Error(ErrorKind::ContextMismatch, "elements belong to different algebras");
  }

 private:
  const AlgebraContext<Ring>* ctx_;
  std::map<std::uint32_t, value_type> terms_;
};

/// Bilinear extension of d1 * d2 = delta^(internal components) d1d2, or 0.
template <class Ring>
AlgebraElement<Ring> multiply(const AlgebraContext<Ring>& ctx, const AlgebraElement<Ring>& u,
                              const AlgebraElement<Ring>& v) {
  if (&u.context() != &ctx || &v.context() != &ctx)
    throw Error(ErrorKind::ContextMismatch, "elements belong to a different algebra");
  const Ring& r = ctx.ring();
  AlgebraElement<Ring> out(ctx);
  for (const auto& [i, a] : u.terms())
    for (const auto& [j, b] : v.terms()) {
      BasisProduct p = ctx.basis_product(i, j);
      if (p.zero) continue;
      out.add_term(p.index, r.mul(r.mul(a, b), ctx.delta_power(p.loops)));
    }
  return out;
}

/// Sum of the coefficients on permutation diagrams.
template <class Ring>
typename Ring::value_type augmentation(const AlgebraContext<Ring>& ctx, const AlgebraElement<Ring>& u) {
  const Ring& r = ctx.ring();
  auto s = r.zero();
  for (const auto& [i, c] : u.terms())
    if (ctx.basis()[i].is_permutation()) s = r.add(s, c);
  return s;
}

/// Indices of all non-permutation diagrams, ascending.
template <class Ring>
std::vector<std::uint32_t> ideal_basis(const AlgebraContext<Ring>& ctx) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < ctx.dimension(); ++i)
    if (!ctx.basis()[i].is_permutation()) out.push_back(i);
  return out;
}

/// The element ((g_1..g_n); pi) of G wr S_n read off a permutation diagram:
/// g_i = gamma(i, sigma(i)') and pi = sigma^-1, where left i meets right sigma(i).
inline WreathElement quotient_element(const ColouredDiagram& d, const FiniteGroup& g) {
  if (!d.is_permutation()) throw Error(ErrorKind::NotAPermutationDiagram, "diagram has fewer than n propagating blocks");
  const std::size_t n = d.n();
  WreathElement w;
  w.labels.resize(n);
  w.perm.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (d.block_of(i) == d.block_of(n + j)) {
        w.labels[i] = *d.gamma(i, n + j, g);
        w.perm[j] = static_cast<int>(i);
      }
  return w;
}

/// Index of the image in wreath_product(G, n).
inline std::size_t quotient_map(const ColouredDiagram& d, const FiniteGroup& g) {
  return WreathIndexer(g.order(), static_cast<int>(d.n())).encode(quotient_element(d, g));
}

/// Element of k[H] for a finite group H, keyed by element index.
template <class Ring>
struct GroupAlgebraElement {
  using value_type = typename Ring::value_type;
  std::map<std::uint32_t, value_type> terms;

  void add_term(const Ring& r, std::uint32_t h, const value_type& c) {
    if (r.is_zero(c)) return;
    auto [it, fresh] = terms.try_emplace(h, c);
    if (!fresh) {
      it->second = r.add(it->second, c);
      if (r.is_zero(it->second)) terms.erase(it);
    }
  }
  bool operator==(const GroupAlgebraElement&) const = default;
};

template <class Ring>
GroupAlgebraElement<Ring> group_algebra_multiply(const Ring& r, const FiniteGroup& h,
                                                 const GroupAlgebraElement<Ring>& x,
                                                 const GroupAlgebraElement<Ring>& y) {
  GroupAlgebraElement<Ring> out;
  for (const auto& [a, c] : x.terms)
    for (const auto& [b, d] : y.terms) out.add_term(r, h.mul(a, b), r.mul(c, d));
  return out;
}

/// Image in k[G wr S_n] of a partition-algebra element: non-permutation terms vanish.
template <class Ring>
GroupAlgebraElement<Ring> quotient_image(const AlgebraContext<Ring>& ctx, const AlgebraElement<Ring>& u) {
  GroupAlgebraElement<Ring> out;
  for (const auto& [i, c] : u.terms()) {
    const auto& d = ctx.basis()[i];
    if (d.is_permutation()) out.add_term(ctx.ring(), static_cast<std::uint32_t>(quotient_map(d, ctx.group())), c);
  }
  return out;
}

template <class Ring>
GroupAlgebraElement<Ring> quotient_multiply(const AlgebraContext<Ring>& ctx, const AlgebraElement<Ring>& u,
                                            const AlgebraElement<Ring>& v) {
  return quotient_image(ctx, multiply(ctx, u, v));
}

/// Unit law, associativity, multiplicativity of the augmentation and the
/// two-sided ideal property, on seeded samples (ideal property exhaustively
/// when dimension^2 <= exhaustive_pairs).
template <class Ring>
VerificationReport verify_algebra_axioms(const AlgebraContext<Ring>& ctx, std::uint64_t seed,
                                         std::size_t samples = 1000, std::size_t exhaustive_pairs = 250000) {
  const Ring& r = ctx.ring();
  const std::size_t dim = ctx.dimension();
  const auto& basis = ctx.basis();
  VerificationReport rep;
  rep.seed = seed;
  SeededRng rng(seed);
  auto pick = [&] { return static_cast<std::uint32_t>(rng.below(dim)); };
  auto spec = nlohmann::json{{"n", ctx.n()}, {"group_order", ctx.group().order()}, {"delta", r.to_string(ctx.delta())}};
  auto one = AlgebraElement<Ring>::one(ctx);

  for (std::uint32_t i = 0; i < dim; ++i) {
    auto x = AlgebraElement<Ring>::basis(ctx, i);
    ++rep.checked;
    if (!(multiply(ctx, one, x) == x) || !(multiply(ctx, x, one) == x))
      rep.fail("unit", spec, {{"diagram", basis[i].to_string(ctx.group())}});
  }

  std::size_t assoc = 0, aug = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    auto a = AlgebraElement<Ring>::basis(ctx, pick());
    auto b = AlgebraElement<Ring>::basis(ctx, pick());
    auto c = AlgebraElement<Ring>::basis(ctx, pick());
    ++rep.checked;
    ++assoc;
    if (!(multiply(ctx, multiply(ctx, a, b), c) == multiply(ctx, a, multiply(ctx, b, c))))
      rep.fail("associativity", spec, {{"a", a.terms().begin()->first}, {"b", b.terms().begin()->first},
                                       {"c", c.terms().begin()->first}});
  }
  if (!(r.is_zero(r.sub(augmentation(ctx, one), r.one())))) rep.fail("augmentation-unit", spec, nullptr);
  for (std::size_t s = 0; s < samples; ++s) {
    auto a = AlgebraElement<Ring>::basis(ctx, pick());
    auto b = AlgebraElement<Ring>::basis(ctx, pick());
    ++rep.checked;
    ++aug;
    auto lhs = augmentation(ctx, multiply(ctx, a, b));
    auto rhs = r.mul(augmentation(ctx, a), augmentation(ctx, b));
    if (!r.is_zero(r.sub(lhs, rhs)))
      rep.fail("augmentation-multiplicative", spec, {{"a", a.terms().begin()->first}, {"b", b.terms().begin()->first}});
  }

  const auto ideal = ideal_basis(ctx);
  auto in_ideal = [&](const AlgebraElement<Ring>& e) {
    for (const auto& [i, c] : e.terms())
      if (basis[i].is_permutation()) return false;
    return true;
  };
  auto check_ideal_pair = [&](std::uint32_t d, std::uint32_t x) {
    auto de = AlgebraElement<Ring>::basis(ctx, d);
    auto xe = AlgebraElement<Ring>::basis(ctx, x);
    ++rep.checked;
    if (!in_ideal(multiply(ctx, xe, de)) || !in_ideal(multiply(ctx, de, xe)))
      rep.fail("two-sided-ideal", spec, {{"ideal_diagram", d}, {"other", x}});
  };
  const bool ideal_exhaustive = ideal.size() * dim <= exhaustive_pairs;
  if (ideal_exhaustive) {
    for (auto d : ideal)
      for (std::uint32_t x = 0; x < dim; ++x) check_ideal_pair(d, x);
  } else if (!ideal.empty()) {
    for (std::size_t s = 0; s < samples; ++s) check_ideal_pair(ideal[rng.below(ideal.size())], pick());
  }
  rep.exhaustive = false;  // associativity and augmentation are sampled
  rep.details = {{"associativity_samples", assoc}, {"augmentation_samples", aug},
                 {"ideal_exhaustive", ideal_exhaustive}, {"ideal_dimension", ideal.size()}};
  return rep;
}

/// Exhaustive comparison of quotient structure constants with those of
/// k[G wr S_n]: for every pair of permutation diagrams, the image of the
/// product equals the product of the images.
template <class Ring>
VerificationReport verify_quotient_homomorphism(const AlgebraContext<Ring>& ctx, const FiniteGroup& wreath) {
  VerificationReport rep;
  const auto& perms = ctx.basis().permutation_indices();
  const Ring& r = ctx.ring();
  auto spec = nlohmann::json{{"n", ctx.n()}, {"group_order", ctx.group().order()}, {"delta", r.to_string(ctx.delta())}};
  if (perms.size() != wreath.order())
    rep.fail("permutation-count", spec, {{"permutation_diagrams", perms.size()}, {"wreath_order", wreath.order()}});
  for (auto i : perms)
    for (auto j : perms) {
      ++rep.checked;
      auto u = AlgebraElement<Ring>::basis(ctx, i);
      auto v = AlgebraElement<Ring>::basis(ctx, j);
      auto lhs = quotient_multiply(ctx, u, v);
      auto rhs = group_algebra_multiply(r, wreath, quotient_image(ctx, u), quotient_image(ctx, v));
      if (!(lhs == rhs)) rep.fail("structure-constant", spec, {{"left", i}, {"right", j}});
    }
  return rep;
}

}  // namespace cpa
