#include <gtest/gtest.h>

#include <set>

#include "cpa/diagram.hpp"
#include "oracles.hpp"

using namespace cpa;

namespace {

NodeId L(std::size_t i) { return {Side::Left, i}; }
NodeId R(std::size_t i) { return {Side::Right, i}; }

std::size_t flat(std::size_t n, NodeId x) { return x.flat(n); }

}  // namespace

TEST(Diagram, CountsMatchStirlingFormula) {
  struct Case {
    std::size_t n;
    FiniteGroup g;
  };
  for (const auto& c : {Case{1, trivial_group()}, Case{1, cyclic(2)}, Case{2, trivial_group()}, Case{2, cyclic(2)},
                        Case{3, trivial_group()}, Case{3, cyclic(2)}, Case{2, symmetric(3)}}) {
    DiagramBasis b(c.n, c.g);
    EXPECT_EQ(b.size(), oracle::coloured_count(2 * c.n, c.g.order()));
    std::uint64_t perms = oracle::factorial(c.n);
    for (std::size_t i = 0; i < c.n; ++i) perms *= c.g.order();
    EXPECT_EQ(b.permutation_indices().size(), perms);
    std::set<std::string> distinct;
    for (const auto& d : b.diagrams()) distinct.insert(d.to_string(c.g));
    EXPECT_EQ(distinct.size(), b.size());
  }
  EXPECT_EQ(DiagramBasis(1, cyclic(2)).size(), 3u);
  EXPECT_EQ(DiagramBasis(2, trivial_group()).size(), 15u);
  EXPECT_EQ(DiagramBasis(2, cyclic(2)).size(), 49u);
  EXPECT_EQ(DiagramBasis(3, trivial_group()).size(), 203u);
}

TEST(Diagram, EnumerationCap) {
  EnumerationLimits lim;
  lim.max_diagrams = 40;
  EXPECT_THROW(DiagramBasis(2, cyclic(2), lim), Error);
}

TEST(Diagram, CanonicalColouring) {
  auto g = cyclic(2);
  // Same colouring given from two different base points.
  auto a = ColouredDiagram::from_potentials(1, {0, 0}, {0, 1}, g);
  auto b = ColouredDiagram::from_potentials(1, {0, 0}, {1, 0}, g);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.colour(0), g.identity());
  EXPECT_EQ(*a.gamma(L(1), R(1), g), 1u);
  auto c = ColouredDiagram::from_potentials(1, {0, 0}, {1, 1}, g);
  EXPECT_EQ(c, identity_diagram(1, g));
}

TEST(Diagram, GammaAxiomsOnEveryDiagram) {
  auto g = symmetric(3);
  DiagramBasis b(2, g);
  for (const auto& d : b.diagrams())
    for (std::size_t x = 0; x < 4; ++x) {
      EXPECT_EQ(*d.gamma(x, x, g), g.identity());
      for (std::size_t y = 0; y < 4; ++y) {
        auto xy = d.gamma(x, y, g);
        if (!xy) continue;
        EXPECT_EQ(*xy, g.inverse(*d.gamma(y, x, g)));
        for (std::size_t z = 0; z < 4; ++z)
          if (auto yz = d.gamma(y, z, g)) {
            EXPECT_EQ(*d.gamma(x, z, g), g.mul(*xy, *yz));
          }
      }
    }
}

TEST(Diagram, CompositionAgreesWithGraphSearch) {
  for (const auto& g : {trivial_group(), cyclic(2), cyclic(3)}) {
    DiagramBasis b(2, g);
    for (const auto& d1 : b.diagrams())
      for (const auto& d2 : b.diagrams()) {
        auto out = compose(d1, d2, g);
        auto ref = oracle::brute_compose(d1, d2, g);
        ASSERT_EQ(out.is_zero(), ref.zero) << d1.to_string(g) << " * " << d2.to_string(g);
        if (out.is_zero()) continue;
        EXPECT_EQ(out.internal_components, ref.loops);
        EXPECT_TRUE(oracle::matches(*out.result, ref, g)) << d1.to_string(g) << " * " << d2.to_string(g);
      }
  }
}

TEST(Diagram, CompositionAgreesWithGraphSearchSampled) {
  auto g = cyclic(2);
  DiagramBasis b(3, g);
  std::uint64_t state = 12345;
  auto next = [&] {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    return static_cast<std::uint32_t>((state >> 33) % b.size());
  };
  for (int s = 0; s < 20000; ++s) {
    const auto& d1 = b[next()];
    const auto& d2 = b[next()];
    auto out = compose(d1, d2, g);
    auto ref = oracle::brute_compose(d1, d2, g);
    ASSERT_EQ(out.is_zero(), ref.zero);
    if (out.is_zero()) continue;
    EXPECT_EQ(out.internal_components, ref.loops);
    EXPECT_TRUE(oracle::matches(*out.result, ref, g));
  }
}

TEST(Diagram, HandComputedProducts) {
  auto triv = trivial_group();
  // n = 1, both nodes isolated: the middle node is one internal component.
  auto iso = ColouredDiagram::from_blocks(1, {{0}, {1}}, {{0}, {0}}, triv);
  auto out = compose(iso, iso, triv);
  ASSERT_FALSE(out.is_zero());
  EXPECT_EQ(*out.result, iso);
  EXPECT_EQ(out.internal_components, 1u);

  auto g = cyclic(2);
  const Element e = 0, t = 1;
  // d1 = {1}{2}{1',2'} with gamma(1',2') = t; d2 = {1,2}{1'}{2'}.
  auto d1 = ColouredDiagram::from_blocks(2, {{0}, {1}, {2, 3}}, {{e}, {e}, {e, t}}, g);
  auto d2 = ColouredDiagram::from_blocks(2, {{0, 1}, {2}, {3}}, {{e, e}, {e}, {e}}, g);
  EXPECT_TRUE(compose(d1, d2, g).is_zero());
  auto d2t = ColouredDiagram::from_blocks(2, {{0, 1}, {2}, {3}}, {{e, t}, {e}, {e}}, g);
  auto ok = compose(d1, d2t, g);
  ASSERT_FALSE(ok.is_zero());
  EXPECT_EQ(ok.internal_components, 1u);
  EXPECT_EQ(ok.result->block_count(), 4u);
  EXPECT_THROW(compose(d1, identity_diagram(3, g), g), Error);
}

TEST(Diagram, IdentityAndPermutations) {
  auto g = cyclic(2);
  DiagramBasis b(2, g);
  auto id = identity_diagram(2, g);
  for (const auto& d : b.diagrams()) {
    auto l = compose(id, d, g), r = compose(d, id, g);
    EXPECT_EQ(*l.result, d);
    EXPECT_EQ(*r.result, d);
    EXPECT_EQ(l.internal_components + r.internal_components, 0u);
  }
  EXPECT_EQ(id.propagating_count(), 2u);
  EXPECT_TRUE(id.is_permutation());

  auto swap = permutation_diagram({1, 0}, {0, 0}, g);
  EXPECT_EQ(swap.to_string(g), "{1,2'}{2,1'}");
  std::set<std::string> perms;
  for (int s = 0; s < 2; ++s)
    for (Element a = 0; a < 2; ++a)
      for (Element c = 0; c < 2; ++c)
        perms.insert(permutation_diagram(s ? std::vector<int>{1, 0} : std::vector<int>{0, 1}, {a, c}, g).to_string(g));
  EXPECT_EQ(perms.size(), 8u);
  EXPECT_EQ(permutation_diagram({0, 1}, {0, 0}, g), id);
  EXPECT_THROW(permutation_diagram({0, 0}, {0, 0}, g), Error);

  for (auto i : b.permutation_indices())
    for (auto j : b.permutation_indices()) {
      auto out = compose(b[i], b[j], g);
      ASSERT_FALSE(out.is_zero());
      EXPECT_TRUE(out.result->is_permutation());
      EXPECT_EQ(out.internal_components, 0u);
    }
}

TEST(Diagram, PropagatingCountNeverGrows) {
  auto g = cyclic(2);
  DiagramBasis b(2, g);
  for (const auto& d1 : b.diagrams())
    for (const auto& d2 : b.diagrams()) {
      auto out = compose(d1, d2, g);
      if (!out.is_zero()) {
        EXPECT_LE(out.result->propagating_count(), std::min(d1.propagating_count(), d2.propagating_count()));
      }
    }
  auto all_single = ColouredDiagram::from_blocks(2, {{0}, {1}, {2}, {3}}, {{0}, {0}, {0}, {0}}, g);
  EXPECT_EQ(all_single.propagating_count(), 0u);
  auto one_block = ColouredDiagram::from_blocks(2, {{0, 1, 2, 3}}, {{0, 0, 0, 0}}, g);
  EXPECT_EQ(one_block.propagating_count(), 1u);
  EXPECT_FALSE(one_block.is_permutation());
}

TEST(Diagram, MuShape) {
  auto g = trivial_group();
  EXPECT_EQ(mu_diagram(2, 1, 2, g).to_string(g), "{1,2,2'}{1'}");
  auto m3 = mu_diagram(3, 1, 2, g);
  EXPECT_TRUE(m3.is_singleton(flat(3, R(1))));
  EXPECT_TRUE(m3.gamma(L(1), R(2), g).has_value());
  EXPECT_TRUE(m3.gamma(L(3), R(3), g).has_value());
  for (std::size_t n = 2; n <= 4; ++n)
    for (std::size_t a = 1; a <= n; ++a)
      for (std::size_t b = 1; b <= n; ++b)
        if (a != b) {
          EXPECT_EQ(mu_diagram(n, a, b, g).propagating_count(), n - 1);
        }
  EXPECT_THROW(mu_diagram(2, 1, 1, g), Error);
  EXPECT_THROW(mu_diagram(2, 0, 1, g), Error);
  EXPECT_THROW(mu_diagram(2, 1, 3, g), Error);
}

TEST(Diagram, NuColouring) {
  auto g = cyclic(2);
  const Element e = 0, t = 1;
  auto plain = nu_diagram(2, 1, 2, e, g);
  EXPECT_EQ(plain, ColouredDiagram::from_blocks(2, {{0, 1, 2, 3}}, {{e, e, e, e}}, g));
  auto nu = nu_diagram(2, 1, 2, t, g);
  EXPECT_EQ(*nu.gamma(R(1), R(2), g), t);
  EXPECT_EQ(*nu.gamma(L(1), L(2), g), t);
  EXPECT_EQ(*nu.gamma(L(1), R(1), g), e);
  EXPECT_EQ(*nu.gamma(L(2), R(2), g), e);
  EXPECT_THROW(nu_diagram(2, 2, 1, t, g), Error);
  EXPECT_THROW(nu_diagram(2, 1, 3, t, g), Error);
}

TEST(Diagram, Include) {
  auto g = cyclic(2);
  EXPECT_EQ(include_diagram(identity_diagram(2, g), g), identity_diagram(3, g));
  EXPECT_EQ(include_diagram(mu_diagram(2, 1, 2, g), g), mu_diagram(3, 1, 2, g));
  DiagramBasis b(2, g);
  for (const auto& d : b.diagrams()) {
    auto i = include_diagram(d, g);
    EXPECT_EQ(i.is_permutation(), d.is_permutation());
    EXPECT_EQ(i.block_count(), d.block_count() + 1);
  }
}
