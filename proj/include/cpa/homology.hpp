#pragma once
// Tor and Ext of the trivial module over an augmented algebra, computed from
// the normalised bar complex with exact coefficients.
//
// C_q is spanned by q-fold tensors of the reduced basis r(x) = x - eps(x) 1
// (x ranging over the algebra basis minus the unit), and
//   d(a_1 | ... | a_q) = sum_{i=1}^{q-1} (-1)^(i-1) a_1 | ... | a_i a_{i+1} | ... | a_q
// with products rewritten in the reduced basis. C_0 is the ground ring and
// d_1 = 0.

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "cpa/algebra.hpp"
#include "cpa/error.hpp"
#include "cpa/group.hpp"
#include "cpa/linalg.hpp"
#include "cpa/report.hpp"
#include "cpa/ring.hpp"

namespace cpa {

/// What the bar construction consumes: a basis containing the unit, the
/// augmentation on basis elements, and structure constants.
template <class Ring>
struct AugmentedAlgebraView {
  using value_type = typename Ring::value_type;
  using Terms = std::vector<std::pair<std::uint32_t, value_type>>;

  explicit AugmentedAlgebraView(Ring r) : ring(std::move(r)) {}

  Ring ring;
  std::size_t basis_size = 0;
  std::uint32_t unit = 0;
  std::vector<value_type> augmentation;
  std::function<void(std::uint32_t, std::uint32_t, Terms&)> product;
};

template <class Ring>
AugmentedAlgebraView<Ring> algebra_view(const AlgebraContext<Ring>& ctx) {
  AugmentedAlgebraView<Ring> v(ctx.ring());
  v.basis_size = ctx.dimension();
  v.unit = ctx.basis().identity_index();
  for (std::uint32_t i = 0; i < v.basis_size; ++i)
    v.augmentation.push_back(ctx.basis()[i].is_permutation() ? ctx.ring().one() : ctx.ring().zero());
  v.product = [&ctx](std::uint32_t a, std::uint32_t b, typename AugmentedAlgebraView<Ring>::Terms& out) {
    out.clear();
    BasisProduct p = ctx.basis_product(a, b);
    if (!p.zero) out.push_back({p.index, ctx.delta_power(p.loops)});
  };
  return v;
}

/// k[H] with eps(h) = 1.
template <class Ring>
AugmentedAlgebraView<Ring> group_algebra_view(const FiniteGroup& h, const Ring& ring) {
  AugmentedAlgebraView<Ring> v(ring);
  v.basis_size = h.order();
  v.unit = h.identity();
  v.augmentation.assign(h.order(), ring.one());
  v.product = [h, ring](std::uint32_t a, std::uint32_t b, typename AugmentedAlgebraView<Ring>::Terms& out) {
    out.clear();
    out.push_back({h.mul(a, b), ring.one()});
  };
  return v;
}

/// Unit law and multiplicativity of eps on seeded samples.
template <class Ring>
VerificationReport validate_view(const AugmentedAlgebraView<Ring>& v, std::uint64_t seed, std::size_t samples = 100) {
  VerificationReport rep;
  rep.seed = seed;
  rep.exhaustive = false;
  const Ring& r = v.ring;
  SeededRng rng(seed);
  typename AugmentedAlgebraView<Ring>::Terms t;
  auto eps_of = [&](const auto& terms) {
    auto s = r.zero();
    for (const auto& [i, c] : terms) s = r.add(s, r.mul(c, v.augmentation[i]));
    return s;
  };
  if (!(r.is_zero(r.sub(v.augmentation[v.unit], r.one())))) rep.fail("unit-augmentation", nullptr, nullptr);
  for (std::size_t s = 0; s < samples; ++s) {
    auto x = static_cast<std::uint32_t>(rng.below(v.basis_size));
    ++rep.checked;
    for (int side = 0; side < 2; ++side) {
      side ? v.product(x, v.unit, t) : v.product(v.unit, x, t);
      if (t.size() != 1 || t[0].first != x || !r.is_zero(r.sub(t[0].second, r.one())))
        rep.fail("unit", nullptr, {{"element", x}});
    }
    auto y = static_cast<std::uint32_t>(rng.below(v.basis_size));
    ++rep.checked;
    v.product(x, y, t);
    if (!r.is_zero(r.sub(eps_of(t), r.mul(v.augmentation[x], v.augmentation[y]))))
      rep.fail("augmentation", nullptr, {{"x", x}, {"y", y}});
  }
  return rep;
}

/// Reduced basis and the table of reduced products r(x) r(y), in CSR layout.
template <class Ring>
class ReducedAlgebra {
 public:
  using value_type = typename Ring::value_type;

  explicit ReducedAlgebra(const AugmentedAlgebraView<Ring>& v) : ring_(v.ring) {
    const std::size_t n = v.basis_size;
    reduced_of_.assign(n, -1);
    for (std::uint32_t x = 0; x < n; ++x)
      if (x != v.unit) {
        reduced_of_[x] = static_cast<std::int64_t>(basis_of_.size());
        basis_of_.push_back(x);
      }
    m_ = basis_of_.size();
    offsets_.reserve(m_ * m_ + 1);
    offsets_.push_back(0);
    typename AugmentedAlgebraView<Ring>::Terms prod;
    SparseVec<Ring> acc;
    const Ring& r = ring_;
    for (std::uint64_t a = 0; a < m_; ++a)
      for (std::uint64_t b = 0; b < m_; ++b) {
        const std::uint32_t x = basis_of_[a], y = basis_of_[b];
        acc.clear();
        v.product(x, y, prod);
        // r(x) r(y) = xy - eps(y) x - eps(x) y + eps(x) eps(y) 1; unit terms drop.
        for (const auto& [z, c] : prod)
          if (z != v.unit) acc.push_back({static_cast<std::uint64_t>(reduced_of_[z]), c});
        if (!r.is_zero(v.augmentation[y])) acc.push_back({a, r.neg(v.augmentation[y])});
        if (!r.is_zero(v.augmentation[x])) acc.push_back({b, r.neg(v.augmentation[x])});
        normalize(r, acc);
        for (const auto& [z, c] : acc) {
          indices_.push_back(static_cast<std::uint32_t>(z));
          values_.push_back(c);
        }
        offsets_.push_back(indices_.size());
      }
  }

  std::uint64_t size() const noexcept { return m_; }
  const Ring& ring() const noexcept { return ring_; }
  std::uint32_t basis_element(std::uint64_t reduced) const { return basis_of_[reduced]; }
  std::optional<std::uint64_t> reduced_index(std::uint32_t basis) const {
    if (reduced_of_[basis] < 0) return std::nullopt;
    return static_cast<std::uint64_t>(reduced_of_[basis]);
  }

  template <class F>
  void for_each_product_term(std::uint64_t a, std::uint64_t b, F&& f) const {
    const std::size_t k = a * m_ + b;
    for (std::size_t t = offsets_[k]; t < offsets_[k + 1]; ++t) f(indices_[t], values_[t]);
  }

 private:
  Ring ring_;
  std::uint64_t m_ = 0;
  std::vector<std::int64_t> reduced_of_;
  std::vector<std::uint32_t> basis_of_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> indices_;
  std::vector<value_type> values_;
};

struct EngineLimits {
  std::size_t budget_bytes = std::size_t{4} << 30;
  std::uint64_t max_columns = std::uint64_t{1} << 27;
  std::uint64_t snf_max_dimension = 50000;
  std::size_t threads = 1;
  std::uint64_t seed = 0;
};

/// The normalised bar complex, with columns generated on demand.
template <class Ring>
class BarComplex {
 public:
  explicit BarComplex(const AugmentedAlgebraView<Ring>& v) : reduced_(v) {}

  const ReducedAlgebra<Ring>& reduced() const noexcept { return reduced_; }
  const Ring& ring() const noexcept { return reduced_.ring(); }

  /// dim C_q = m^q, or nullopt on overflow.
  std::optional<std::uint64_t> dim(std::size_t q) const {
    std::uint64_t d = 1;
    for (std::size_t i = 0; i < q; ++i) {
      if (reduced_.size() != 0 && d > UINT64_MAX / reduced_.size()) return std::nullopt;
      d *= reduced_.size();
    }
    return d;
  }

  std::uint64_t checked_dim(std::size_t q) const {
    auto d = dim(q);
    if (!d) throw Error(ErrorKind::BudgetExceeded, "chain group dimension overflows");
    return *d;
  }

  /// Column j of d_q : C_q -> C_{q-1}, normalised.
  void column(std::size_t q, std::uint64_t j, SparseVec<Ring>& out) const {
    out.clear();
    if (q < 2) return;
    const std::uint64_t m = reduced_.size();
    const Ring& r = ring();
    std::uint64_t digits[64];
    std::uint64_t rest = j;
    for (std::size_t k = q; k-- > 0;) {
      digits[k] = rest % m;
      rest /= m;
    }
    // Face i (0-based) multiplies digits i and i+1.
    std::uint64_t prefix = 0;
    for (std::size_t i = 0; i + 1 < q; ++i) {
      std::uint64_t suffix = 0, suffix_scale = 1;
      for (std::size_t k = q; k-- > i + 2;) {
        suffix += digits[k] * suffix_scale;
        suffix_scale *= m;
      }
      const std::uint64_t head = prefix * m;
      const bool negate = (i % 2) == 1;
      reduced_.for_each_product_term(digits[i], digits[i + 1], [&](std::uint32_t z, const auto& c) {
        out.push_back({(head + z) * suffix_scale + suffix, negate ? r.neg(c) : c});
      });
      prefix = prefix * m + digits[i];
    }
    normalize(r, out);
  }

  SparseMatrix<Ring> materialize(std::size_t q, const EngineLimits& limits = {}) const {
    SparseMatrix<Ring> mtx;
    mtx.rows = q == 0 ? 0 : checked_dim(q - 1);
    const std::uint64_t cols = checked_dim(q);
    if (cols > limits.max_columns) throw Error(ErrorKind::BudgetExceeded, "too many columns to materialise");
    if (q == 0) return mtx;
    mtx.columns.resize(cols);
    for (std::uint64_t j = 0; j < cols; ++j) column(q, j, mtx.columns[j]);
    return mtx;
  }

 private:
  ReducedAlgebra<Ring> reduced_;
};

/// Streams the columns of d_q in fixed-size batches; each batch may be
/// generated by several threads, but columns are consumed in index order.
template <class Ring, class Sink>
void stream_columns(const BarComplex<Ring>& complex, std::size_t q, std::size_t threads, Sink&& sink) {
  const std::uint64_t cols = complex.checked_dim(q);
  if (threads <= 1) {
    SparseVec<Ring> v;
    for (std::uint64_t j = 0; j < cols; ++j) {
      complex.column(q, j, v);
      if (!sink(j, v)) return;
    }
    return;
  }
  const std::uint64_t batch = 1 << 14;
  std::vector<SparseVec<Ring>> buf(batch);
  for (std::uint64_t start = 0; start < cols; start += batch) {
    const std::uint64_t count = std::min(batch, cols - start);
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (std::uint64_t k = t; k < count; k += threads) complex.column(q, start + k, buf[k]);
      });
    for (auto& th : pool) th.join();
    for (std::uint64_t k = 0; k < count; ++k)
      if (!sink(start + k, buf[k])) return;
  }
}

/// Exact check of d_{q-1} d_q = 0, column by column.
template <class Ring>
bool verify_d_squared(const BarComplex<Ring>& complex, std::size_t q, std::size_t threads = 1) {
  if (q < 3) return true;  // d_1 = 0
  const Ring& r = complex.ring();
  bool ok = true;
  SparseVec<Ring> inner, acc;
  stream_columns(complex, q, threads, [&](std::uint64_t, const SparseVec<Ring>& col) {
    acc.clear();
    for (const auto& [i, c] : col) {
      complex.column(q - 1, i, inner);
      for (const auto& [k, v] : inner) acc.push_back({k, r.mul(c, v)});
    }
    normalize(r, acc);
    if (!acc.empty()) ok = false;
    return ok;
  });
  return ok;
}

/// Homology in one degree: over a field only rank is set (the Betti number);
/// over Z, rank is the free rank and divisors the torsion, when computed.
struct DegreeHomology {
  std::uint64_t rank = 0;
  std::vector<mpz_class> divisors;
  bool divisors_known = true;
};

struct HomologyResult {
  std::string ring;
  bool integral = false;
  std::vector<DegreeHomology> degrees;
  std::vector<std::uint64_t> chain_dims;
  std::vector<std::uint64_t> boundary_ranks;  // rank d_q for q = 0..max_q+1
  bool d_squared_zero = true;

  std::vector<std::uint64_t> betti() const {
    std::vector<std::uint64_t> out;
    for (const auto& d : degrees) out.push_back(d.rank);
    return out;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["ring"] = ring;
    if (!integral) {
      j["betti"] = betti();
    } else {
      nlohmann::json divs = nlohmann::json::array();
      for (const auto& d : degrees) {
        if (!d.divisors_known) {
          divs.push_back(nullptr);
          continue;
        }
        std::vector<std::string> s;
        for (const auto& x : d.divisors) s.push_back(x.get_str());
        divs.push_back(s);
      }
      j["betti"] = {{"rank", betti()}, {"divisors", divs}};
    }
    return j;
  }
};

namespace detail {

template <class Ring>
std::uint64_t boundary_rank_over_field(const BarComplex<Ring>& complex, std::size_t q, const EngineLimits& limits) {
  if (q < 2) return 0;
  const std::uint64_t rows = complex.checked_dim(q - 1);
  const std::uint64_t cols = complex.checked_dim(q);
  if (rows == 0 || cols == 0) return 0;
  if (cols > limits.max_columns) throw Error(ErrorKind::BudgetExceeded, "d_" + std::to_string(q) + " has too many columns");
  FieldEliminator<Ring> elim(complex.ring(), rows, limits.budget_bytes);
  stream_columns(complex, q, limits.threads, [&](std::uint64_t, const SparseVec<Ring>& v) {
    if (!v.empty()) elim.insert(v);
    return elim.rank() < rows;
  });
  return elim.rank();
}

}  // namespace detail

/// Homology of the bar complex in degrees 0..max_q.
template <class Ring>
HomologyResult homology(const BarComplex<Ring>& complex, std::size_t max_q, const EngineLimits& limits = {}) {
  HomologyResult res;
  res.ring = complex.ring().name();
  res.integral = !Ring::is_field;
  for (std::size_t q = 0; q <= max_q + 1; ++q) res.chain_dims.push_back(complex.checked_dim(q));
  for (std::size_t q = 3; q <= max_q + 1; ++q)
    if (!verify_d_squared(complex, q, limits.threads))
      throw Error(ErrorKind::VerificationFailed, "d^2 != 0 in degree " + std::to_string(q));

  if constexpr (Ring::is_field) {
    for (std::size_t q = 0; q <= max_q + 1; ++q)
      res.boundary_ranks.push_back(detail::boundary_rank_over_field(complex, q, limits));
    for (std::size_t q = 0; q <= max_q; ++q) {
      DegreeHomology h;
      h.rank = res.chain_dims[q] - res.boundary_ranks[q] - res.boundary_ranks[q + 1];
      res.degrees.push_back(h);
    }
  } else {
    // Integral: Smith form of d_{q+1} gives torsion in degree q; large
    // differentials fall back to the rational rank with torsion unknown.
    std::vector<std::optional<SmithForm>> snf(max_q + 2);
    res.boundary_ranks.assign(max_q + 2, 0);
    for (std::size_t q = 2; q <= max_q + 1; ++q) {
      const std::uint64_t rows = res.chain_dims[q - 1], cols = res.chain_dims[q];
      if (rows == 0 || cols == 0) {
        snf[q] = SmithForm{};
        continue;
      }
      if (cols <= limits.snf_max_dimension && rows <= limits.snf_max_dimension) {
        snf[q] = smith_normal_form(complex.materialize(q, limits));
        res.boundary_ranks[q] = snf[q]->rank;
      } else {
        // Rank over Q of the same integer matrix.
        const Rationals qq;
        FieldEliminator<Rationals> elim(qq, rows, limits.budget_bytes);
        stream_columns(complex, q, limits.threads, [&](std::uint64_t, const SparseVec<Ring>& v) {
          SparseVec<Rationals> w;
          for (const auto& [i, c] : v) w.push_back({i, mpq_class(c)});
          if (!w.empty()) elim.insert(w);
          return elim.rank() < rows;
        });
        res.boundary_ranks[q] = elim.rank();
      }
    }
    for (std::size_t q = 0; q <= max_q; ++q) {
      DegreeHomology h;
      h.rank = res.chain_dims[q] - res.boundary_ranks[q] - res.boundary_ranks[q + 1];
      if (q + 1 >= 2 && snf[q + 1]) h.divisors = snf[q + 1]->divisors;
      else if (q + 1 >= 2) h.divisors_known = false;
      res.degrees.push_back(h);
    }
  }
  return res;
}

/// Tor_*(1, 1) over the view's algebra, degrees 0..max_q.
template <class Ring>
HomologyResult tor_of_view(const AugmentedAlgebraView<Ring>& v, std::size_t max_q, const EngineLimits& limits = {}) {
  auto val = validate_view(v, limits.seed);
  if (!val.passed()) throw Error(ErrorKind::VerificationFailed, "algebra view violates unit or augmentation laws");
  BarComplex<Ring> complex(v);
  return homology(complex, max_q, limits);
}

template <class Ring>
HomologyResult tor_of_algebra(const AlgebraContext<Ring>& ctx, std::size_t max_q, const EngineLimits& limits = {}) {
  return tor_of_view(algebra_view(ctx), max_q, limits);
}

template <class Ring>
HomologyResult tor_of_group(const FiniteGroup& h, const Ring& ring, std::size_t max_q, const EngineLimits& limits = {}) {
  return tor_of_view(group_algebra_view(h, ring), max_q, limits);
}

/// Ext^*(1, 1) over a field: cohomology of the transposed differentials.
/// Ranks are computed on the explicit transposes, so the equality
/// dim Ext^q = dim Tor_q is a genuine cross-check.
template <class Ring>
HomologyResult ext_of(const AugmentedAlgebraView<Ring>& v, std::size_t max_q, const EngineLimits& limits = {}) {
  if constexpr (!Ring::is_field) {
    throw Error(ErrorKind::RingUnsupported, "Ext is only computed over fields");
  } else {
    BarComplex<Ring> complex(v);
    HomologyResult res;
    res.ring = v.ring.name();
    for (std::size_t q = 0; q <= max_q + 1; ++q) res.chain_dims.push_back(complex.checked_dim(q));
    for (std::size_t q = 0; q <= max_q + 1; ++q) {
      if (q < 2) {
        res.boundary_ranks.push_back(0);
        continue;
      }
      auto t = complex.materialize(q, limits).transpose();
      res.boundary_ranks.push_back(rank(v.ring, t, limits.budget_bytes));
    }
    for (std::size_t q = 0; q <= max_q; ++q) {
      DegreeHomology h;
      h.rank = res.chain_dims[q] - res.boundary_ranks[q] - res.boundary_ranks[q + 1];
      res.degrees.push_back(h);
    }
    return res;
  }
}

/// Induced map on Tor_q along the inclusion P_{n-1} -> P_n, per degree.
struct InducedDegree {
  std::size_t q = 0;
  std::uint64_t source_dim = 0;
  std::uint64_t target_dim = 0;
  std::uint64_t rank = 0;
  bool isomorphism = false;
  std::optional<std::vector<std::vector<std::string>>> matrix;  // target coords of source basis classes
};

struct InducedMapReport {
  bool chain_map = true;
  bool include_unital = true;
  bool include_augmented = true;
  std::vector<InducedDegree> degrees;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["chain_map"] = chain_map;
    j["include_unital"] = include_unital;
    j["include_augmented"] = include_augmented;
    j["degrees"] = nlohmann::json::array();
    for (const auto& d : degrees) {
      nlohmann::json e{{"q", d.q}, {"source_dim", d.source_dim}, {"target_dim", d.target_dim}, {"rank", d.rank},
                       {"isomorphism", d.isomorphism}};
      e["matrix"] = d.matrix ? nlohmann::json(*d.matrix) : nlohmann::json(nullptr);
      j["degrees"].push_back(e);
    }
    return j;
  }
};

/// Applies the inclusion factorwise to the bar complexes, checks d f = f d
/// exactly in degrees 1..max_q+1, and computes the rank of the induced map on
/// each Tor_q. The explicit matrix is produced when the target cycle space is small.
template <class Ring>
InducedMapReport induced_map_on_tor(const AlgebraContext<Ring>& small, const AlgebraContext<Ring>& big, std::size_t max_q,
                                    const EngineLimits& limits = {}, std::uint64_t matrix_limit = 3000) {
  static_assert(Ring::is_field, "induced maps are computed over fields");
  if (big.n() != small.n() + 1 || !(big.group() == small.group()))
    throw Error(ErrorKind::ContextMismatch, "inclusion needs sizes n-1 and n over the same group");
  const Ring& r = small.ring();
  InducedMapReport rep;
  const auto& g = small.group();

  std::vector<std::uint32_t> include_index(small.dimension());
  for (std::uint32_t i = 0; i < small.dimension(); ++i)
    include_index[i] = big.basis().index_of(include_diagram(small.basis()[i], g));
  rep.include_unital = include_index[small.basis().identity_index()] == big.basis().identity_index();
  for (std::uint32_t i = 0; i < small.dimension(); ++i)
    if (small.basis()[i].is_permutation() != big.basis()[include_index[i]].is_permutation()) rep.include_augmented = false;
  if (!rep.include_unital || !rep.include_augmented)
    throw Error(ErrorKind::VerificationFailed, "inclusion is not unital and augmented");

  BarComplex<Ring> cs(algebra_view(small)), cb(algebra_view(big));
  const std::uint64_t ms = cs.reduced().size(), mb = cb.reduced().size();
  std::vector<std::uint64_t> fmap(ms);
  for (std::uint64_t a = 0; a < ms; ++a) fmap[a] = *cb.reduced().reduced_index(include_index[cs.reduced().basis_element(a)]);

  auto apply_f = [&](std::size_t q, std::uint64_t j) {
    std::uint64_t out = 0, scale = 1;
    for (std::size_t k = 0; k < q; ++k) {
      out += fmap[j % ms] * scale;
      j /= ms;
      scale *= mb;
    }
    return out;
  };
  auto map_vec = [&](std::size_t q, const SparseVec<Ring>& v) {
    SparseVec<Ring> out;
    for (const auto& [i, c] : v) out.push_back({apply_f(q, i), c});
    normalize(r, out);
    return out;
  };

  SparseVec<Ring> col, img;
  for (std::size_t q = 2; q <= max_q + 1; ++q) {
    const std::uint64_t cols = cs.checked_dim(q);
    for (std::uint64_t j = 0; j < cols && rep.chain_map; ++j) {
      cs.column(q, j, col);
      cb.column(q, apply_f(q, j), img);
      if (map_vec(q - 1, col) != img) rep.chain_map = false;
    }
  }
  if (!rep.chain_map) throw Error(ErrorKind::VerificationFailed, "inclusion does not commute with the differentials");

  for (std::size_t q = 0; q <= max_q; ++q) {
    InducedDegree deg;
    deg.q = q;
    if (q == 0) {
      deg.source_dim = deg.target_dim = deg.rank = 1;
      deg.isomorphism = true;
      deg.matrix = std::vector<std::vector<std::string>>{{r.to_string(r.one())}};
      rep.degrees.push_back(deg);
      continue;
    }
    // Source cycles and a basis of source homology.
    std::vector<SparseVec<Ring>> z_small;
    if (q == 1) {
      for (std::uint64_t a = 0; a < ms; ++a) z_small.push_back({{a, r.one()}});
    } else {
      z_small = nullspace(r, cs.materialize(q, limits));
    }
    FieldEliminator<Ring> src(r, cs.checked_dim(q), limits.budget_bytes);
    stream_columns(cs, q + 1, limits.threads, [&](std::uint64_t, const SparseVec<Ring>& v) {
      if (!v.empty()) src.insert(v);
      return true;
    });
    std::vector<SparseVec<Ring>> reps;
    for (const auto& z : z_small)
      if (src.insert(z)) reps.push_back(z);
    deg.source_dim = reps.size();

    // Target boundaries, then target homology representatives when affordable.
    FieldEliminator<Ring> tgt(r, cb.checked_dim(q), limits.budget_bytes);
    stream_columns(cb, q + 1, limits.threads, [&](std::uint64_t, const SparseVec<Ring>& v) {
      if (!v.empty()) tgt.insert(v);
      return true;
    });
    const std::size_t boundary_rank = tgt.rank();
    const std::uint64_t cycles_big = cb.checked_dim(q) - detail::boundary_rank_over_field(cb, q, limits);
    deg.target_dim = cycles_big - boundary_rank;

    const bool want_matrix = cb.checked_dim(q) <= matrix_limit;
    if (want_matrix) {
      std::vector<SparseVec<Ring>> z_big;
      if (q == 1) {
        for (std::uint64_t a = 0; a < mb; ++a) z_big.push_back({{a, r.one()}});
      } else {
        z_big = nullspace(r, cb.materialize(q, limits));
      }
      std::vector<std::size_t> rep_pivots;
      for (const auto& z : z_big)
        if (auto p = tgt.insert(z)) rep_pivots.push_back(*p);
      std::vector<std::vector<std::string>> matrix(rep_pivots.size(), std::vector<std::string>(reps.size()));
      FieldEliminator<Ring> image_span(r, cb.checked_dim(q), limits.budget_bytes);
      for (std::size_t c = 0; c < reps.size(); ++c) {
        std::vector<std::pair<std::size_t, typename Ring::value_type>> mult;
        auto rest = tgt.reduce(map_vec(q, reps[c]), &mult);
        if (!rest.empty()) throw Error(ErrorKind::VerificationFailed, "image of a cycle is not a cycle");
        std::vector<typename Ring::value_type> coords(rep_pivots.size(), r.zero());
        for (const auto& [pid, coef] : mult)
          for (std::size_t k = 0; k < rep_pivots.size(); ++k)
            if (rep_pivots[k] == pid) coords[k] = r.add(coords[k], coef);
        SparseVec<Ring> cv;
        for (std::size_t k = 0; k < coords.size(); ++k) {
          matrix[k][c] = r.to_string(coords[k]);
          if (!r.is_zero(coords[k])) cv.push_back({k, coords[k]});
        }
        if (!cv.empty()) image_span.insert(cv);
      }
      deg.rank = image_span.rank();
      deg.matrix = std::move(matrix);
    } else {
      for (const auto& z : reps)
        if (tgt.insert(map_vec(q, z))) ++deg.rank;
    }
    deg.isomorphism = deg.rank == deg.source_dim && deg.rank == deg.target_dim;
    rep.degrees.push_back(deg);
  }
  return rep;
}

/// Both sides of the stability comparison and their agreement.
struct StabilityReport {
  std::size_t n = 0;
  std::size_t max_q = 0;
  std::size_t asserted_range = 0;
  HomologyResult algebra;
  HomologyResult wreath;
  std::vector<bool> agree;  // per degree 0..max_q
  nlohmann::json fallback = nlohmann::json::object();
  bool passed = true;

  nlohmann::json to_json(const std::string& delta) const {
    auto side = [&](const char* name, const HomologyResult& h) {
      auto j = h.to_json();
      j["side"] = name;
      j["delta"] = delta;
      j["asserted_range"] = asserted_range;
      j["chain_dims"] = h.chain_dims;
      return j;
    };
    nlohmann::json j{{"n", n}, {"max_q", max_q}, {"asserted_range", asserted_range},
                     {"algebra", side("algebra", algebra)}, {"wreath", side("wreath", wreath)},
                     {"agree", agree}, {"passed", passed}};
    if (!fallback.empty()) j["fallback"] = fallback;
    return j;
  }
};

/// Tor of P_n(delta, G) against Tor of G wr S_n; equality is asserted in
/// degrees q <= min(max_q, n - 1) and reported beyond.
template <class Ring>
StabilityReport compare_stability(const AlgebraContext<Ring>& ctx, std::size_t max_q, const EngineLimits& limits = {}) {
  StabilityReport rep;
  rep.n = ctx.n();
  rep.max_q = max_q;
  rep.asserted_range = std::min(max_q, ctx.n() - 1);
  const FiniteGroup wreath = wreath_product(ctx.group(), static_cast<int>(ctx.n()));
  rep.algebra = tor_of_algebra(ctx, max_q, limits);
  rep.wreath = tor_of_group(wreath, ctx.ring(), max_q, limits);
  bool unknown_torsion = false;
  for (std::size_t q = 0; q <= max_q; ++q) {
    const auto& a = rep.algebra.degrees[q];
    const auto& w = rep.wreath.degrees[q];
    bool same = a.rank == w.rank;
    if (a.divisors_known && w.divisors_known) same = same && a.divisors == w.divisors;
    else if (q <= rep.asserted_range) unknown_torsion = true;
    rep.agree.push_back(same);
    if (q <= rep.asserted_range && !same) rep.passed = false;
  }
  if constexpr (!Ring::is_field) {
    if (unknown_torsion) {
      // Torsion too large to resolve: compare mod-p Betti numbers instead.
      for (std::uint64_t p : {2u, 3u}) {
        PrimeField fp(p);
        AlgebraContext<PrimeField> cp(ctx.n(), ctx.group(), fp, fp.from_int(mpz_class(ctx.delta()).get_si()));
        auto a = tor_of_algebra(cp, rep.asserted_range, limits).betti();
        auto w = tor_of_group(wreath, fp, rep.asserted_range, limits).betti();
        rep.fallback["F:" + std::to_string(p)] = {{"algebra", a}, {"wreath", w}};
        if (a != w) rep.passed = false;
      }
    }
  }
  return rep;
}

}  // namespace cpa
