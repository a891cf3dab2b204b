#include <gtest/gtest.h>

#include "cpa/cover.hpp"
#include "oracles.hpp"

using namespace cpa;

namespace {

// Diagrams with right node i isolated: the other 2n - 1 nodes are partitioned freely.
std::uint64_t k_count(std::size_t n, std::uint64_t g) { return oracle::coloured_count(2 * n - 1, g); }

// Diagrams with right nodes i, j joined by a fixed colour: merge the pair into
// one node; a block containing it has one colour fewer to choose than its size.
std::uint64_t l_count(std::size_t n, std::uint64_t g) { return oracle::coloured_count(2 * n - 1, g); }

}  // namespace

TEST(Cover, IdealSizes) {
  DiagramBasis t1(1, trivial_group()), t2(2, trivial_group()), c2(2, cyclic(2)), c3(3, cyclic(2));
  EXPECT_EQ(k_ideal_basis(t1, 1).size(), 1u);
  EXPECT_EQ(k_ideal_basis(t2, 1).size(), 5u);
  EXPECT_EQ(l_ideal_basis(t2, 1, 2, 0).size(), 5u);
  EXPECT_EQ(k_ideal_basis(c2, 1).size(), k_count(2, 2));
  EXPECT_EQ(k_ideal_basis(c2, 1).size(), 11u);
  EXPECT_EQ(l_ideal_basis(c2, 1, 2, 1).size(), l_count(2, 2));
  EXPECT_EQ(l_ideal_basis(c2, 1, 2, 1).size(), 11u);
  for (std::size_t i = 1; i <= 3; ++i) EXPECT_EQ(k_ideal_basis(c3, i).size(), k_count(3, 2));
  for (Element g = 0; g < 2; ++g) EXPECT_EQ(l_ideal_basis(c3, 1, 3, g).size(), l_count(3, 2));
  for (const auto* b : {&t2, &c2, &c3})
    for (std::size_t i = 1; i <= b->n(); ++i)
      for (auto x : k_ideal_basis(*b, i)) EXPECT_LE((*b)[x].propagating_count(), b->n() - 1);
  EXPECT_THROW(k_ideal_basis(t2, 3), Error);
  EXPECT_THROW(l_ideal_basis(t2, 2, 1, 0), Error);
}

TEST(Cover, DistinctColoursAreDisjoint) {
  DiagramBasis b(3, cyclic(2));
  auto x = l_ideal_basis(b, 1, 2, 0), y = l_ideal_basis(b, 1, 2, 1);
  std::vector<std::uint32_t> both;
  std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(both));
  EXPECT_TRUE(both.empty());
}

TEST(Cover, UnionIsTheIdeal) {
  for (std::size_t n = 1; n <= 3; ++n)
    for (const auto& g : {trivial_group(), cyclic(2)}) EXPECT_TRUE(cover_union_check(DiagramBasis(n, g)));
}

TEST(Cover, CriterionExamples) {
  auto g = cyclic(2);
  DiagramBasis b(3, g);
  CoverSpec empty;
  EXPECT_FALSE(is_zero_by_criterion(empty, g));
  EXPECT_EQ(intersection_basis(b, empty).size(), b.size());

  CoverSpec touch{{1}, {{1, 2, 0}}};
  EXPECT_TRUE(is_zero_by_criterion(touch, g));
  EXPECT_TRUE(intersection_basis(b, touch).empty());

  CoverSpec two_colours{{}, {{1, 2, 0}, {1, 2, 1}}};
  EXPECT_TRUE(is_zero_by_criterion(two_colours, g));
  EXPECT_TRUE(intersection_basis(b, two_colours).empty());

  CoverSpec good{{}, {{1, 2, 1}, {2, 3, 1}, {1, 3, 0}}};
  EXPECT_FALSE(is_zero_by_criterion(good, g));
  EXPECT_FALSE(intersection_basis(b, good).empty());
  CoverSpec bad{{}, {{1, 2, 1}, {2, 3, 1}, {1, 3, 1}}};
  EXPECT_TRUE(is_zero_by_criterion(bad, g));
  EXPECT_TRUE(intersection_basis(b, bad).empty());
}

TEST(Cover, CriterionEquivalenceOverEverySpec) {
  for (std::size_t n = 1; n <= 3; ++n)
    for (const auto& g : {trivial_group(), cyclic(2)}) {
      Rationals q;
      AlgebraContext<Rationals> ctx(n, g, q, 1);
      auto rep = verify_zero_criterion_all(ctx);
      EXPECT_TRUE(rep.passed()) << rep.to_json().dump();
      EXPECT_EQ(rep.checked, std::size_t{1} << (n + n * (n - 1) / 2 * g.order()));
    }
}

TEST(Cover, GeneratorExamples) {
  Rationals q;
  AlgebraContext<Rationals> ctx(2, cyclic(2), q, 3);
  const auto& g = ctx.group();
  auto e0 = idempotent_generator(ctx, CoverSpec{});
  EXPECT_EQ(e0, AlgebraElement<Rationals>::one(ctx));

  auto e1 = idempotent_generator(ctx, CoverSpec{{1}, {}});
  EXPECT_EQ(e1, AlgebraElement<Rationals>::basis(ctx, ctx.basis().index_of(mu_diagram(2, 1, 2, g))));
  EXPECT_EQ(multiply(ctx, e1, e1), e1);

  auto e2 = idempotent_generator(ctx, CoverSpec{{}, {{1, 2, 1}}});
  EXPECT_EQ(e2, AlgebraElement<Rationals>::basis(ctx, ctx.basis().index_of(nu_diagram(2, 1, 2, 1, g))));
  for (auto x : l_ideal_basis(ctx.basis(), 1, 2, 1)) {
    auto d = AlgebraElement<Rationals>::basis(ctx, x);
    EXPECT_EQ(multiply(ctx, d, e2), d);
  }

  auto expect_kind = [&](const CoverSpec& s, ErrorKind k) {
    try {
      idempotent_generator(ctx, s);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), k);
    }
  };
  expect_kind(CoverSpec{{1, 2}, {}}, ErrorKind::FullS);
  expect_kind(CoverSpec{{1}, {{1, 2, 0}}}, ErrorKind::ZeroIdeal);
}

TEST(Cover, GeneratorGeneratesOnTheLeft) {
  // support(x e) stays in the intersection for every basis x.
  PrimeField f(5);
  AlgebraContext<PrimeField> ctx(3, cyclic(2), f, 2);
  CoverSpec spec{{3}, {{1, 2, 1}}};
  auto e = idempotent_generator(ctx, spec);
  auto members = intersection_basis(ctx.basis(), spec);
  std::set<std::uint32_t> in(members.begin(), members.end());
  for (std::uint32_t x = 0; x < ctx.dimension(); ++x) {
    const auto xe = multiply(ctx, AlgebraElement<PrimeField>::basis(ctx, x), e);
    for (const auto& [y, c] : xe.terms()) EXPECT_TRUE(in.count(y));
  }
}

TEST(Cover, Retractions) {
  Rationals q;
  AlgebraContext<Rationals> ctx(2, cyclic(2), q, 1);
  auto mu = verify_retraction_mu(ctx, CoverSpec{}, 1, 2);
  EXPECT_TRUE(mu.passed());
  EXPECT_EQ(mu.checked, 49u + 11u);
  auto nu = verify_retraction_nu(ctx, CoverSpec{}, 1, 2, 1);
  EXPECT_TRUE(nu.passed()) << nu.to_json().dump();
  EXPECT_EQ(nu.checked, 49u + 11u);
  auto vacuous = verify_retraction_nu(ctx, CoverSpec{{1}, {}}, 1, 2, 1);
  EXPECT_TRUE(vacuous.details["vacuous"].get<bool>());
  EXPECT_THROW(verify_retraction_mu(ctx, CoverSpec{{1}, {}}, 1, 2), Error);
}

TEST(Cover, OtherNuColouringBreaksTheRetraction) {
  // Colouring gamma(a, b) = gamma(a', b') = 1 with h on the vertical edges:
  // d nu vanishes for d in L_{1,2,t}, so it cannot fix them.
  Rationals q;
  AlgebraContext<Rationals> ctx(2, cyclic(2), q, 1);
  const auto& g = ctx.group();
  auto other = ColouredDiagram::from_potentials(2, {0, 0, 0, 0}, {0, 0, 1, 1}, g);
  EXPECT_EQ(*other.gamma(2, 3, g), g.identity());
  CoverSpec target{{}, {{1, 2, 1}}};
  auto rep = detail::verify_retraction(ctx, CoverSpec{}, target, other, "nu");
  EXPECT_FALSE(rep.passed());
}

TEST(Cover, FullVerification) {
  for (std::size_t n = 2; n <= 3; ++n)
    for (const auto& g : {trivial_group(), cyclic(2)}) {
      Integers z;
      AlgebraContext<Integers> ctx(n, g, z, 1);
      auto rep = verify_cover(ctx, n - 1);
      EXPECT_TRUE(rep.passed()) << rep.to_json().dump();
      EXPECT_TRUE(rep.exhaustive);
      EXPECT_EQ(rep.details["specs"].get<double>(), rep.details["spec_space"].get<double>());
    }
  Integers z;
  AlgebraContext<Integers> one(1, trivial_group(), z, 1);
  EXPECT_TRUE(verify_cover(one, 0).passed());
}

TEST(Cover, SampledModeIsSeeded) {
  PrimeField f(2);
  AlgebraContext<PrimeField> ctx(3, cyclic(2), f, 1);
  CoverLimits lim;
  lim.exhaustive_max_specs = 0;
  lim.sampled_specs = 50;
  lim.seed = 9;
  auto a = verify_cover(ctx, 2, lim), b = verify_cover(ctx, 2, lim);
  EXPECT_FALSE(a.exhaustive);
  EXPECT_TRUE(a.passed());
  EXPECT_EQ(a.to_json(), b.to_json());
}
