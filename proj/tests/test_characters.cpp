#include <gtest/gtest.h>

#include <numeric>

#include "l2mult/characters.hpp"
#include "l2mult/error.hpp"

using namespace l2mult;

namespace {

// D_infinity acting on the cosets t^j (m Z semidirect <s>), j mod m.
long fixed_cosets(long k, bool reflection, long m) {
  long count = 0;
  for (long j = 0; j < m; ++j) {
    long image = reflection ? k - j : j + k;
    if (((image - j) % m + m) % m == 0) ++count;
  }
  return count;
}

Word dihedral_word(const BuiltinPtr& d, long k, bool reflection) {
  std::string s = k == 0 ? "" : "t^" + std::to_string(k);
  if (reflection) s += "s";
  return Word::parse(d, s.empty() ? "1" : s);
}

}  // namespace

TEST(Characters, PermutationCharacters) {
  auto g = groups::symmetric(3);
  auto reg = perm_character(GroupAction::regular(g));
  EXPECT_NEAR(std::abs(reg(0) - 1.0), 0, 1e-15);
  for (Element x = 1; x < g->order(); ++x) EXPECT_NEAR(std::abs(reg(x)), 0, 1e-15);
  auto triv = perm_character(GroupAction::trivial(g));
  for (Element x = 0; x < g->order(); ++x) EXPECT_NEAR(std::abs(triv(x) - 1.0), 0, 1e-15);
}

TEST(Characters, BrokenActionIsRejected) {
  auto g = groups::cyclic(3);
  auto a = GroupAction::regular(g);
  std::swap(a.image[1][0], a.image[1][1]);
  try {
    perm_character(a);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotAnAction);
  }
}

TEST(Characters, CosetActionMatchesInducedTrivial) {
  auto g = groups::alternating(4);
  auto h = FiniteSubgroup::generated(g, {g->generators()[0]});
  auto perm = perm_character(GroupAction::on_left_cosets(h));
  auto th = CharacterTable::compute(h.abstract_group());
  auto ind = ind_finite(h, th[0]);
  for (std::size_t k = 0; k < g->class_count(); ++k) EXPECT_NEAR(std::abs(perm.at_class(k) - ind.at_class(k)), 0, 1e-12);
}

TEST(Characters, IndFiniteAgreesAcrossRoutesAndIsPositive) {
  std::mt19937_64 rng(4);
  auto g = groups::general_linear_2(3);
  for (Element a : {Element(5), Element(12), Element(30)}) {
    auto h = FiniteSubgroup::generated(g, {a});
    auto th = CharacterTable::compute(h.abstract_group());
    for (const auto& chi : th.characters()) {
      auto f = ind_finite(h, chi);
      EXPECT_NEAR(std::abs(f(0) - 1.0), 0, 1e-12);
      EXPECT_TRUE(f.positive_type_spot_check(rng));
    }
  }
}

TEST(Characters, IndFromTrivialSubgroupIsDelta) {
  auto g = groups::dihedral(6);
  auto h = FiniteSubgroup::trivial(g);
  auto th = CharacterTable::compute(h.abstract_group());
  auto f = ind_finite(h, th[0]);
  for (Element x = 1; x < g->order(); ++x) EXPECT_NEAR(std::abs(f(x)), 0, 1e-15);
}

TEST(Characters, CannotInduceWhenDenominatorVanishes) {
  auto g = groups::cyclic(2);
  auto h = FiniteSubgroup::whole(g);
  auto psi = i_finite(h);
  for (auto& row : psi.values)
    for (auto& v : row) v = 0;
  auto th = CharacterTable::compute(h.abstract_group());
  try {
    induce_via(psi, th[0]);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CannotInduce);
  }
}

TEST(Characters, PositiveTypeDetectsNonCharacters) {
  std::mt19937_64 rng(1);
  auto g = groups::cyclic(5);
  std::vector<Complex> v(5, Complex(2.0, 0));
  v[0] = 1.0;
  FiniteCharacter bad(g, v, true);
  EXPECT_FALSE(bad.positive_type_spot_check(rng, 5));
}

TEST(Biset, DihedralFixedCosetCounts) {
  auto d = BuiltinGroup::dihedral_infinite();
  auto triv = finite_subgroup(d, {});
  for (long m : {2L, 4L, 8L, 16L, 32L}) {
    auto chain = chains::dihedral({static_cast<std::size_t>(m)}, chains::DihedralFiber::Reflection);
    const auto& lvl = chain.level(0);
    auto psi = biset_character(lvl, triv);
    for (long k = -2 * m; k <= 2 * m; ++k)
      for (bool refl : {false, true}) {
        const Word w = dihedral_word(d, k, refl);
        const Rational count = psi.value(lvl.quotient()->evaluate(w), 0) * Rational(m);
        EXPECT_EQ(count, fixed_cosets(k, refl, m)) << "m=" << m << " k=" << k << " refl=" << refl;
        long want = refl ? ((k % std::gcd(2L, m) == 0) ? std::gcd(2L, m) : 0) : (k % m == 0 ? m : 0);
        EXPECT_EQ(count, want);
      }
  }
}

TEST(Biset, RelativeDeviationAtReflection) {
  auto d = BuiltinGroup::dihedral_infinite();
  auto h = finite_subgroup(d, {Word::parse(d, "s")});
  const Word one = Word::identity(d), s = Word::parse(d, "s");
  const Element s_local = h.generator_elements[0];
  for (std::size_t m : {2u, 4u, 8u, 16u, 32u}) {
    auto refl = chains::dihedral({m}, chains::DihedralFiber::Reflection);
    auto psi = biset_character(refl.level(0), h);
    EXPECT_EQ(psi.value(refl.level(0).quotient()->evaluate(one), s_local), 1);
    EXPECT_EQ(limit_biset_value(d, one, s, false), 0);

    auto kern = chains::dihedral({m}, chains::DihedralFiber::Kernel);
    auto psik = biset_character(kern.level(0), h);
    const Rational v = psik.value(kern.level(0).quotient()->evaluate(s), s_local);
    // |C_Q(s)| / |Q| = 4 / 2m
    Rational want(2, static_cast<unsigned long>(m));
    want.canonicalize();
    EXPECT_EQ(v, want);
  }
}

TEST(Biset, NonNormalizingHIsRejected) {
  auto d = BuiltinGroup::dihedral_infinite();
  auto h = finite_subgroup(d, {Word::parse(d, "ts")});
  auto chain = chains::dihedral({4}, chains::DihedralFiber::Reflection);
  try {
    biset_character(chain.level(0), h);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::HNotNormalizing);
  }
}

TEST(Biset, KernelChainAgreesWithFiniteBiset) {
  // With K trivial, psi(g, h) = i_Q(g, h).
  auto d = BuiltinGroup::dihedral_infinite();
  auto h = finite_subgroup(d, {Word::parse(d, "s")});
  auto chain = chains::dihedral({6}, chains::DihedralFiber::Kernel);
  auto psi = biset_character(chain.level(0), h);
  auto q = chain.level(0).target();
  auto sub = FiniteSubgroup::generated(q, {6});
  auto ref = i_finite(sub);
  for (std::size_t c = 0; c < q->class_count(); ++c)
    for (Element x = 0; x < 2; ++x) {
      const Element hq = psi.h_image[x];
      EXPECT_EQ(psi.values[c][x], ref.values[c][sub.local(hq)]);
    }
}

TEST(Limits, ValuesOnInfiniteGroups) {
  auto z = BuiltinGroup::free_abelian(1);
  const Complex w = std::polar(1.0, 0.7);
  auto circle = LimitCharacterSpec::circle_point(z, w);
  EXPECT_NEAR(std::abs(limit_value(circle, Word::parse(z, "a^3")) - std::pow(w, 3.0)), 0, 1e-12);
  auto reg = LimitCharacterSpec::regular(z);
  EXPECT_EQ(limit_value(reg, Word::parse(z, "a")), Complex(0.0));
  EXPECT_EQ(limit_value(reg, Word::parse(z, "1")), Complex(1.0));

  auto d = BuiltinGroup::dihedral_infinite();
  auto h = finite_subgroup(d, {Word::parse(d, "s")});
  auto t = CharacterTable::compute(h.group);
  auto sign = LimitCharacterSpec::induced_from_finite(d, h, t[1], false);
  EXPECT_NEAR(std::abs(limit_value(sign, Word::identity(d)) - 1.0), 0, 1e-15);
  EXPECT_NEAR(std::abs(limit_value(sign, Word::parse(d, "s"))), 0, 1e-15);
  EXPECT_NEAR(std::abs(limit_value(sign, Word::parse(d, "t^2"))), 0, 1e-15);
  EXPECT_EQ(limit_biset_value(d, Word::parse(d, "t'"), Word::parse(d, "t"), false), Rational(1, 2));
}

TEST(Limits, FreeByFiniteNeedsAssertion) {
  auto g = BuiltinGroup::free_by_finite_signed(2, groups::cyclic(2), {{-1, -2}});
  auto h = finite_subgroup(g, {Word::parse(g, "c")});
  try {
    limit_biset_value(g, Word::identity(g), Word::parse(g, "c"), false);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnsupportedFamily);
  }
  EXPECT_EQ(limit_biset_value(g, Word::identity(g), Word::parse(g, "c"), true), 0);
}

TEST(Limits, CirclePointConvergenceOnCyclicQuotients) {
  // phi_N(a^k) = exp(2 pi i j k / N) with j/N -> theta.
  auto chain = chains::cyclic({8, 16, 32, 64});
  auto z = chain.group();
  const double theta = 0.25;
  auto spec = LimitCharacterSpec::circle_point(z, std::polar(1.0, 2 * M_PI * theta));
  std::vector<Word> probes{Word::parse(z, "a"), Word::parse(z, "a^3")};
  auto rows = convergence_report(chain, spec, probes, [&](std::size_t n) {
    auto q = chain.level(n).target();
    const std::size_t big = q->order();
    const double j = std::round(theta * static_cast<double>(big));
    std::vector<Complex> v(q->class_count());
    for (std::size_t c = 0; c < v.size(); ++c)
      v[c] = std::polar(1.0, 2 * M_PI * j * q->class_rep(c) / static_cast<double>(big));
    return FiniteCharacter(q, v, true);
  });
  ASSERT_EQ(rows.size(), 8u);
  for (const auto& r : rows) EXPECT_LT(r.deviation, 1e-12);
}
