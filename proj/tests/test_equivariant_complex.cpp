#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "l2mult/character_table.hpp"
#include "l2mult/equivariant_complex.hpp"
#include "l2mult/error.hpp"
#include "l2mult/finite_group.hpp"
#include "l2mult/quotient.hpp"

using namespace l2mult;

namespace {

/// Index of the character of a two-element group with chi(x) = value.
std::size_t z2_char(const CharacterTable& t, Element x, double value) {
  for (std::size_t k = 0; k < t.size(); ++k)
    if (std::abs(t[k](x).real() - value) < 1e-9) return k;
  ADD_FAILURE() << "character not found";
  return 0;
}

BuiltinFiniteSubgroup reflection_subgroup(const BuiltinPtr& d) { return finite_subgroup(d, {Word::parse(d, "s")}); }

/// Cayley graph of a finite group: one free vertex, one free edge per generator.
FiniteEquivariantComplex cayley_complex(const GroupPtr& g) {
  FiniteEquivariantComplex fc;
  fc.group = g;
  const auto triv = FiniteSubgroup::trivial(g);
  fc.stabilizers = {{triv}, {}};
  fc.labels = {{"v"}, {}};
  GroupAlgebraMatrix d1(g, 1, g->generators().size());
  for (std::size_t i = 0; i < g->generators().size(); ++i) {
    fc.stabilizers[1].push_back(triv);
    fc.labels[1].push_back("e" + std::to_string(i));
    add_term(d1.at(0, i), 0, 1);
    add_term(d1.at(0, i), g->generators()[i], -1);
  }
  fc.boundaries = {GroupAlgebraMatrix(g, 0, 1), d1};
  return fc;
}

}  // namespace

TEST(EquivariantComplex, BuiltinsValidate) {
  EXPECT_NO_THROW(EquivariantCWData::line_Z().validate());
  EXPECT_NO_THROW(EquivariantCWData::line_Dinf().validate());
  EXPECT_NO_THROW(EquivariantCWData::rose_free(3).validate());
  EXPECT_NO_THROW(EquivariantCWData::tree_free_by_finite(2, groups::cyclic(2), {{-1, -2}}).validate());
  EXPECT_NO_THROW(EquivariantCWData::tree_free_by_finite(2, groups::cyclic(2), {{2, 1}}).validate());
  EXPECT_NO_THROW(EquivariantCWData::tree_free_by_finite(2, groups::cyclic(4), {{2, -1}}).validate());
}

TEST(EquivariantComplex, NonInvariantBoundaryRejected) {
  auto cw = EquivariantCWData::line_Dinf();
  // An edge fixed by s would need both endpoints fixed by s.
  cw.cells[1][0].stabilizer = {Word::parse(cw.group, "s")};
  EXPECT_THROW(cw.validate(), Error);
}

TEST(EquivariantComplex, OrbifoldEuler) {
  EXPECT_EQ(EquivariantCWData::line_Z().orbifold_euler(), Rational(0));
  EXPECT_EQ(EquivariantCWData::line_Dinf().orbifold_euler(), Rational(0));
  EXPECT_EQ(EquivariantCWData::rose_free(3).orbifold_euler(), Rational(-2));
  // chi(F_2 x| Z/2) = chi(F_2) / 2.
  EXPECT_EQ(EquivariantCWData::tree_free_by_finite(2, groups::cyclic(2), {{-1, -2}}).orbifold_euler(),
            Rational(-1, 2));
  EXPECT_EQ(EquivariantCWData::tree_free_by_finite(2, groups::cyclic(4), {{2, -1}}).orbifold_euler(),
            Rational(-1, 4));
}

TEST(QuotientComplex, LineModNIsCycle) {
  for (std::size_t n : {1u, 2u, 5u, 12u}) {
    auto chain = chains::cyclic({n});
    auto cw = EquivariantCWData::line_Z();
    auto qc = quotient_complex(cw, chain.level(0), finite_subgroup(cw.group, {}));
    EXPECT_EQ(qc.cells, (std::vector<std::size_t>{n, n}));
    EXPECT_EQ(homology(qc), (std::vector<std::size_t>{1, 1}));
    EXPECT_EQ(qc.euler_characteristic(), 0);
    EXPECT_EQ(qc.check_invariants(), "");
  }
}

TEST(QuotientComplex, DihedralCircleTraces) {
  auto cw = EquivariantCWData::line_Dinf();
  const auto h = reflection_subgroup(cw.group);
  const auto table = CharacterTable::compute(h.group);
  const Element s = h.generator_elements[0];
  const std::size_t triv = z2_char(table, s, 1), sign = z2_char(table, s, -1);
  for (std::size_t m : {1u, 2u, 3u, 4u, 8u, 16u}) {
    auto chain = chains::dihedral({m}, chains::DihedralFiber::Kernel);
    auto qc = quotient_complex(cw, chain.level(0), h);
    EXPECT_EQ(qc.check_invariants(), "") << m;
    EXPECT_EQ(homology(qc), (std::vector<std::size_t>{1, 1})) << m;
    EXPECT_EQ(action_trace(qc, s, 0), Rational(1));
    EXPECT_EQ(action_trace(qc, s, 1), Rational(-1)) << m;
    auto rep = multiplicities(qc, table);
    EXPECT_EQ(rep.multiplicity[0][triv], 1);
    EXPECT_EQ(rep.multiplicity[0][sign], 0);
    EXPECT_EQ(rep.multiplicity[1][triv], 0);
    EXPECT_EQ(rep.multiplicity[1][sign], 1) << m;
  }
}

TEST(QuotientComplex, ReflectionFiberIsNotFree) {
  auto cw = EquivariantCWData::line_Dinf();
  auto chain = chains::dihedral({4}, chains::DihedralFiber::Reflection);
  try {
    quotient_complex(cw, chain.level(0), finite_subgroup(cw.group, {}));
    FAIL() << "expected NotFree";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotFree);
  }
}

TEST(QuotientComplex, HMustNormalizeFiber) {
  auto g = groups::dihedral(4);
  auto fc = cayley_complex(g);
  auto fiber = FiniteSubgroup::generated(g, {4});
  try {
    build_quotient(fc, fiber, groups::cyclic(4), {0, 1, 2, 3});
    FAIL() << "expected HNotNormalizing";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::HNotNormalizing);
  }
}

TEST(QuotientComplex, RoseCoversAreGraphs) {
  auto cw = EquivariantCWData::rose_free(2);
  for (std::size_t n : {2u, 3u, 5u}) {
    auto chain = chains::abelianized_mod(cw.group, {n});
    auto qc = quotient_complex(cw, chain.level(0), finite_subgroup(cw.group, {}));
    EXPECT_EQ(qc.cells, (std::vector<std::size_t>{n * n, 2 * n * n}));
    EXPECT_EQ(homology(qc), (std::vector<std::size_t>{1, n * n + 1}));
  }
}

namespace {

/// Independent count on the torus Cayley graph of (Z/N)^2 with v -> -v:
/// Lefschetz with the fixed cells, H_0 trivial.
long torus_trace(long n) {
  long fixed_vertices = 0, reversed_edges = 0;
  for (long a = 0; a < n; ++a)
    for (long b = 0; b < n; ++b) {
      if ((2 * a) % n == 0 && (2 * b) % n == 0) ++fixed_vertices;
      // Edge v -> v + x is sent to -v -> -v - x, the same edge reversed when
      // -v - x = v.
      if (((2 * a + 1) % n == 0) && (2 * b) % n == 0) ++reversed_edges;
      if ((2 * a) % n == 0 && ((2 * b + 1) % n == 0)) ++reversed_edges;
    }
  return 1 - fixed_vertices - reversed_edges;
}

}  // namespace

TEST(QuotientComplex, TorusWithInversionMatchesOracle) {
  auto g = BuiltinGroup::free_by_finite_signed(2, groups::cyclic(2), {{-1, -2}});
  auto cw = EquivariantCWData::tree_free_by_finite(g);
  const auto h = finite_subgroup(g, {Word(g, g->h_word(1))});
  const Element sigma = h.generator_elements[0];
  const auto table = CharacterTable::compute(h.group);
  const std::size_t triv = z2_char(table, sigma, 1), sign = z2_char(table, sigma, -1);
  for (std::size_t n : {1u, 2u, 3u, 4u, 5u}) {
    auto chain = chains::abelianized_mod(g, {n});
    auto qc = quotient_complex(cw, chain.level(0), h);
    EXPECT_EQ(qc.check_invariants(), "");
    const auto nn = n * n;
    // Barycentric subdivision of the torus graph.
    EXPECT_EQ(qc.cells, (std::vector<std::size_t>{3 * nn, 4 * nn})) << n;
    EXPECT_EQ(homology(qc), (std::vector<std::size_t>{1, nn + 1})) << n;
    const long tr = torus_trace(static_cast<long>(n));
    EXPECT_EQ(action_trace(qc, sigma, 1), Rational(tr)) << n;
    EXPECT_NEAR(action_trace_hodge(qc, sigma, 1), static_cast<double>(tr), 1e-8) << n;
    auto rep = multiplicities(qc, table);
    EXPECT_EQ(rep.multiplicity[1][triv], (static_cast<long>(nn) + 1 + tr) / 2);
    EXPECT_EQ(rep.multiplicity[1][sign], (static_cast<long>(nn) + 1 - tr) / 2);
  }
}

TEST(QuotientComplex, MoebiusTraceMatchesHodge) {
  auto g = BuiltinGroup::free_by_finite_signed(2, groups::cyclic(4), {{2, -1}});
  auto cw = EquivariantCWData::tree_free_by_finite(g);
  const auto h = finite_subgroup(g, {Word(g, g->h_word(1))});
  for (std::size_t n : {2u, 3u, 4u}) {
    auto chain = chains::abelianized_mod(g, {n});
    auto qc = quotient_complex(cw, chain.level(0), h);
    EXPECT_EQ(qc.check_invariants(), "");
    for (Element x = 0; x < h.group->order(); ++x)
      for (std::size_t p = 0; p <= 1; ++p)
        EXPECT_NEAR(to_double(action_trace(qc, x, p)), action_trace_hodge(qc, x, p), 1e-8) << n << " " << x << " " << p;
  }
}

TEST(QuotientComplex, MultiplicitySumRule) {
  auto g = BuiltinGroup::free_by_finite_signed(2, groups::cyclic(4), {{2, -1}});
  auto cw = EquivariantCWData::tree_free_by_finite(g);
  const auto h = finite_subgroup(g, {Word(g, g->h_word(1))});
  const auto table = CharacterTable::compute(h.group);
  auto chain = chains::abelianized_mod(g, {3});
  auto qc = quotient_complex(cw, chain.level(0), h);
  auto rep = multiplicities(qc, table);
  for (std::size_t p = 0; p < rep.betti.size(); ++p) {
    long sum = 0;
    for (std::size_t k = 0; k < table.size(); ++k) sum += rep.multiplicity[p][k] * table[k].degree_int();
    EXPECT_EQ(sum, static_cast<long>(rep.betti[p]));
  }
  // Euler characteristic of the cover: index times the orbifold Euler characteristic.
  EXPECT_EQ(Rational(qc.euler_characteristic()), Rational(static_cast<long>(qc.index)) * cw.orbifold_euler());
}

TEST(Crosscheck, CycleWithHalfTurn) {
  auto chain = chains::cyclic({4});
  auto fc = push_complex(EquivariantCWData::line_Z(), *chain.level(0).quotient());
  auto h = FiniteSubgroup::generated(fc.group, {2});
  const auto table = CharacterTable::compute(h.abstract_group());
  for (const auto& chi : table.characters()) {
    auto rows = finite_group_crosscheck(fc, h, chi);
    ASSERT_EQ(rows.size(), 2u);
    for (const auto& r : rows) EXPECT_TRUE(r.ok);
  }
}

TEST(Crosscheck, SymmetricCayleyGraph) {
  auto g = groups::symmetric(3);
  auto fc = cayley_complex(g);
  for (const auto& h : {FiniteSubgroup::whole(g), FiniteSubgroup::generated(g, {g->generators()[0]})}) {
    const auto table = CharacterTable::compute(h.abstract_group());
    for (const auto& chi : table.characters())
      for (const auto& r : finite_group_crosscheck(fc, h, chi)) EXPECT_TRUE(r.ok) << r.p;
  }
}

TEST(Crosscheck, ComplexCharacterOfThreeCycle) {
  auto g = groups::alternating(4);
  auto fc = cayley_complex(g);
  Element c = 0;
  for (Element x = 0; x < g->order(); ++x)
    if (g->element_order(x) == 3) {
      c = x;
      break;
    }
  auto h = FiniteSubgroup::generated(g, {c});
  const auto table = CharacterTable::compute(h.abstract_group());
  for (const auto& chi : table.characters())
    for (const auto& r : finite_group_crosscheck(fc, h, chi)) EXPECT_NEAR(r.l2_side, r.homology_side, 1e-7);
}

TEST(Crosscheck, DihedralLineWithStabilizers) {
  auto chain = chains::dihedral({3}, chains::DihedralFiber::Kernel);
  auto fc = push_complex(EquivariantCWData::line_Dinf(), *chain.level(0).quotient());
  for (const auto& h : {FiniteSubgroup::whole(fc.group), FiniteSubgroup::generated(fc.group, {1})}) {
    const auto table = CharacterTable::compute(h.abstract_group());
    for (const auto& chi : table.characters())
      for (const auto& r : finite_group_crosscheck(fc, h, chi)) EXPECT_TRUE(r.ok);
  }
}

TEST(EquivariantComplex, JsonRoundTrip) {
  auto cw = EquivariantCWData::tree_free_by_finite(2, groups::cyclic(4), {{2, -1}});
  auto j = cw.to_json("cyclic(4)");
  auto back = EquivariantCWData::from_json(j);
  EXPECT_EQ(back.to_json("cyclic(4)"), j);
  EXPECT_EQ(back.orbifold_euler(), cw.orbifold_euler());

  auto line = EquivariantCWData::from_json(nlohmann::json{{"builtin", "line_Dinf"}});
  EXPECT_EQ(line.to_json(), EquivariantCWData::line_Dinf().to_json());
  auto rose = EquivariantCWData::from_json(nlohmann::json{{"builtin", "rose_free"}, {"rank", 2}});
  EXPECT_EQ(rose.cells[1].size(), 2u);
  EXPECT_THROW(EquivariantCWData::from_json(nlohmann::json{{"builtin", "sphere"}}), Error);
  EXPECT_THROW(EquivariantCWData::from_json(nlohmann::json{{"group", "free(1)"}}), Error);
}

TEST(QuotientComplex, BoundaryCsv) {
  auto chain = chains::cyclic({3});
  auto cw = EquivariantCWData::line_Z();
  auto qc = quotient_complex(cw, chain.level(0), finite_subgroup(cw.group, {}));
  std::ostringstream out;
  write_boundary_csv(qc, 1, out);
  const std::string s = out.str();
  EXPECT_EQ(s.substr(0, 14), "row,col,value\n");
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 7);
}
