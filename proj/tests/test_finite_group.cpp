#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "l2mult/character_table.hpp"
#include "l2mult/error.hpp"
#include "l2mult/finite_group.hpp"

using namespace l2mult;

namespace {

std::vector<std::size_t> sorted_class_sizes(const GroupPtr& g) {
  std::vector<std::size_t> s;
  for (std::size_t k = 0; k < g->class_count(); ++k) s.push_back(g->class_size(k));
  std::sort(s.begin(), s.end());
  return s;
}

std::vector<long> degrees(const CharacterTable& t) {
  std::vector<long> d;
  for (const auto& c : t.characters()) d.push_back(c.degree_int());
  return d;
}

}  // namespace

TEST(FiniteGroup, OrdersOfBuiltins) {
  EXPECT_EQ(groups::cyclic(7)->order(), 7u);
  EXPECT_EQ(groups::dihedral(5)->order(), 10u);
  EXPECT_EQ(groups::symmetric(4)->order(), 24u);
  EXPECT_EQ(groups::alternating(4)->order(), 12u);
  EXPECT_EQ(groups::alternating(5)->order(), 60u);
  EXPECT_EQ(groups::quaternion()->order(), 8u);
  EXPECT_EQ(groups::special_linear_2(3)->order(), 24u);
  EXPECT_EQ(groups::general_linear_2(3)->order(), 48u);
  EXPECT_EQ(groups::abelian({2, 4})->order(), 8u);
  EXPECT_EQ(groups::direct_product(groups::cyclic(2), groups::symmetric(3))->order(), 12u);
}

TEST(FiniteGroup, SmallGroupsAreAssociativeWithInverses) {
  for (const auto& g : {groups::symmetric(4), groups::quaternion(), groups::dihedral(6), groups::special_linear_2(3)}) {
    EXPECT_TRUE(g->associative_exhaustive());
    for (Element a = 0; a < g->order(); ++a) {
      EXPECT_EQ(g->mul(a, g->inv(a)), 0u);
      EXPECT_EQ(g->mul(0, a), a);
    }
  }
}

TEST(FiniteGroup, TableAndPermutationProductsAgree) {
  // S5 keeps a table; compare with direct composition of the permutations.
  auto g = groups::symmetric(5);
  ASSERT_TRUE(g->has_table());
  for (Element a = 0; a < g->order(); a += 7)
    for (Element b = 0; b < g->order(); b += 5) {
      const auto& pa = *g->permutation(a);
      const auto& pb = *g->permutation(b);
      const auto& pab = *g->permutation(g->mul(a, b));
      for (std::size_t x = 0; x < pa.size(); ++x) EXPECT_EQ(pab[x], pa[pb[x]]);
    }
}

TEST(FiniteGroup, LargePermutationGroupWithoutTable) {
  auto g = groups::symmetric(7);
  EXPECT_EQ(g->order(), 5040u);
  EXPECT_FALSE(g->has_table());
  EXPECT_EQ(g->class_count(), 15u);
}

TEST(FiniteGroup, ClosureCapIsEnforced) {
  Permutation a{1, 0, 2, 3, 4, 5}, b{1, 2, 3, 4, 5, 0};
  try {
    FiniteGroup::from_generators({a, b}, 100);
    FAIL() << "expected ClosureTooLarge";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ClosureTooLarge);
  }
}

TEST(FiniteGroup, ClassesPartitionTheGroup) {
  for (const auto& g : {groups::symmetric(4), groups::dihedral(8), groups::general_linear_2(3)}) {
    std::size_t total = 0;
    for (std::size_t k = 0; k < g->class_count(); ++k) {
      total += g->class_size(k);
      EXPECT_EQ(g->class_rep(k), g->class_members(k).front());
      // brute force: the class of the representative
      std::set<Element> cls;
      for (Element t = 0; t < g->order(); ++t) cls.insert(g->conj(g->class_rep(k), t));
      EXPECT_EQ(cls.size(), g->class_size(k));
    }
    EXPECT_EQ(total, g->order());
    EXPECT_EQ(g->class_rep(0), 0u);
  }
}

TEST(FiniteGroup, ClassSizesOfKnownGroups) {
  EXPECT_EQ(sorted_class_sizes(groups::symmetric(4)), (std::vector<std::size_t>{1, 3, 6, 6, 8}));
  EXPECT_EQ(sorted_class_sizes(groups::quaternion()), (std::vector<std::size_t>{1, 1, 2, 2, 2}));
  EXPECT_EQ(groups::alternating(5)->class_count(), 5u);
}

TEST(FiniteGroup, DihedralReflectionCentralizers) {
  // dihedral(m): reflections split into two classes of size m/2 for even m.
  for (std::size_t m : {4u, 8u, 16u, 32u}) {
    auto g = groups::dihedral(m);
    const Element s = static_cast<Element>(m);
    EXPECT_EQ(g->centralizer_index(s), m / 2);
    EXPECT_EQ(g->centralizer_order(s), 4u);
    EXPECT_EQ(g->centralizer_index(1), 2u);
  }
  auto odd = groups::dihedral(5);
  EXPECT_EQ(odd->centralizer_index(5), 5u);
}

TEST(FiniteGroup, SubgroupsAndCosets) {
  auto g = groups::symmetric(4);
  auto s3 = FiniteSubgroup::generated(g, {g->generators()[0], g->mul(g->generators()[0], g->generators()[1])});
  EXPECT_EQ(s3.order() * s3.index(), 24u);
  EXPECT_EQ(s3.left_coset_reps().size(), s3.index());
  for (Element x = 0; x < g->order(); ++x) {
    const Element rep = s3.left_coset_reps()[s3.left_coset_of(x)];
    EXPECT_TRUE(s3.contains(g->mul(g->inv(rep), x)));
  }
  auto whole = FiniteSubgroup::whole(g);
  EXPECT_TRUE(whole.is_normal());
  auto v4 = FiniteSubgroup::generated(g, {});
  EXPECT_TRUE(v4.is_normal());
  EXPECT_EQ(s3.abstract_group()->order(), s3.order());
}

TEST(FiniteGroup, NormalityAgainstBruteForce) {
  auto g = groups::dihedral(6);
  for (Element a = 0; a < g->order(); ++a) {
    auto h = FiniteSubgroup::generated(g, {a});
    bool normal = true;
    for (Element t = 0; t < g->order(); ++t)
      for (auto x : h.elements())
        if (!h.contains(g->conj(x, t))) normal = false;
    EXPECT_EQ(h.is_normal(), normal) << a;
  }
}

TEST(GroupHom, GeneratorImagesExtendOrFail) {
  auto d4 = groups::dihedral(4);
  auto c2 = groups::cyclic(2);
  // t -> 0, s -> 1 is the sign of the reflection: a homomorphism.
  auto ok = GroupHom::from_generator_images(d4, c2, {0, 1});
  ASSERT_TRUE(ok.has_value());
  EXPECT_TRUE(ok->is_homomorphism());
  EXPECT_TRUE(ok->is_surjective());
  EXPECT_FALSE(ok->is_injective());
  // Z/2 -> Z/3 sending the generator to a^1 is not well defined.
  std::size_t bad = 99;
  auto broken = GroupHom::from_generator_images(groups::cyclic(2), groups::cyclic(3), {1}, &bad);
  EXPECT_FALSE(broken.has_value());
  EXPECT_EQ(bad, 0u);
}

TEST(CharacterTable, DegreesOfKnownGroups) {
  EXPECT_EQ(degrees(CharacterTable::compute(groups::symmetric(3))), (std::vector<long>{1, 1, 2}));
  EXPECT_EQ(degrees(CharacterTable::compute(groups::symmetric(4))), (std::vector<long>{1, 1, 2, 3, 3}));
  EXPECT_EQ(degrees(CharacterTable::compute(groups::quaternion())), (std::vector<long>{1, 1, 1, 1, 2}));
  EXPECT_EQ(degrees(CharacterTable::compute(groups::alternating(5))), (std::vector<long>{1, 3, 3, 4, 5}));
  EXPECT_EQ(degrees(CharacterTable::compute(groups::special_linear_2(3))),
            (std::vector<long>{1, 1, 1, 2, 2, 2, 3}));
}

TEST(CharacterTable, ColumnOrthogonality) {
  for (const auto& g : {groups::symmetric(4), groups::general_linear_2(3), groups::dihedral(7)}) {
    auto t = CharacterTable::compute(g);
    ASSERT_EQ(t.size(), g->class_count());
    for (std::size_t a = 0; a < g->class_count(); ++a)
      for (std::size_t b = 0; b < g->class_count(); ++b) {
        Complex s = 0;
        for (const auto& c : t.characters()) s += c.at_class(a) * std::conj(c.at_class(b));
        const double want = a == b ? static_cast<double>(g->centralizer_order(g->class_rep(a))) : 0.0;
        EXPECT_NEAR(std::abs(s - want), 0.0, 1e-8);
      }
  }
}

TEST(CharacterTable, CyclicGroupMatchesRootsOfUnity) {
  const std::size_t n = 6;
  auto g = groups::cyclic(n);
  auto t = CharacterTable::compute(g);
  std::vector<bool> matched(n, false);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      bool same = true;
      for (Element k = 0; k < n; ++k) {
        Complex want = std::polar(1.0, 2 * M_PI * static_cast<double>(j * k) / static_cast<double>(n));
        if (std::abs(t[i](k) - want) > 1e-9) same = false;
      }
      if (same) matched[j] = true;
    }
  }
  for (bool m : matched) EXPECT_TRUE(m);
  for (Element k = 0; k < n; ++k) EXPECT_NEAR(std::abs(t[0](k) - 1.0), 0.0, 1e-12);
}

TEST(CharacterTable, InducedFromTrivialSubgroupIsRegular) {
  auto g = groups::dihedral(5);
  auto triv = FiniteSubgroup::trivial(g);
  auto t1 = CharacterTable::compute(triv.abstract_group());
  auto reg = induce_ordinary(triv, t1[0]);
  EXPECT_NEAR(reg(0).real(), 10.0, 1e-12);
  for (Element x = 1; x < g->order(); ++x) EXPECT_NEAR(std::abs(reg(x)), 0.0, 1e-12);
  auto t = CharacterTable::compute(g);
  for (const auto& chi : t.characters()) EXPECT_EQ(multiplicity(chi, reg), chi.degree_int());
}

TEST(CharacterTable, InducedTrivialIsCosetPermutationCharacter) {
  auto g = groups::symmetric(4);
  auto h = FiniteSubgroup::generated(g, {g->generators()[1]});
  auto th = CharacterTable::compute(h.abstract_group());
  auto ind = induce_ordinary(h, th[0]);
  for (Element x = 0; x < g->order(); ++x) {
    std::size_t fixed = 0;
    for (auto rep : h.left_coset_reps())
      if (h.left_coset_of(g->mul(x, rep)) == h.left_coset_of(rep)) ++fixed;
    EXPECT_NEAR(ind(x).real(), static_cast<double>(fixed), 1e-9);
  }
}

TEST(CharacterTable, FrobeniusReciprocity) {
  auto g = groups::general_linear_2(3);
  auto tg = CharacterTable::compute(g);
  for (Element a : {Element(3), Element(10), Element(17)}) {
    auto h = FiniteSubgroup::generated(g, {a, g->generators()[0]});
    auto th = CharacterTable::compute(h.abstract_group());
    for (const auto& chi : th.characters())
      for (const auto& theta : tg.characters()) {
        auto r = frobenius_check(h, chi, theta);
        EXPECT_TRUE(r.ok);
        EXPECT_GE(r.induced_side, 0);
      }
  }
}

TEST(CharacterTable, MultiplicityRejectsNonIntegral) {
  auto g = groups::cyclic(3);
  auto t = CharacterTable::compute(g);
  std::vector<Complex> half(g->class_count(), Complex(0.5, 0));
  OrdinaryCharacter f(g, half);
  try {
    multiplicity(t[0], f);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotIntegral);
  }
}
