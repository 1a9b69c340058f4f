/**
 * @file acceptance.cpp
 * @brief Acceptance checks: one PASS/FAIL line per criterion, with the
 * tolerances and time limits fixed below.  Exit code 1 if any line fails.
 */
#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "l2mult/approx_runner.hpp"
#include "l2mult/character_table.hpp"
#include "l2mult/equivariant_complex.hpp"
#include "l2mult/error.hpp"
#include "l2mult/spectral.hpp"

using namespace l2mult;

namespace {

const std::filesystem::path kSource = L2MULT_SOURCE_DIR;

constexpr double kCrosscheckTol = 1e-7;
constexpr double kPullbackTol = 1e-7;
constexpr double kDeepestTol = 0.002;
constexpr std::size_t kPropertyCases = 200;
constexpr std::size_t kRandomDetCases = 50;
constexpr std::size_t kMaxPermDegree = 200;

struct Outcome {
  bool ok = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& title, double limit_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs > limit_seconds) {
    out.ok = false;
    out.detail += (out.detail.empty() ? "" : "; ") + std::string("over the time limit");
  }
  if (!out.ok) ++failures;
  std::cout << (out.ok ? "PASS" : "FAIL") << " [" << id << "] " << title << " (" << std::fixed << std::setprecision(2)
            << secs << " s / " << limit_seconds << " s)" << std::defaultfloat;
  if (!out.detail.empty()) std::cout << ": " << out.detail;
  std::cout << std::endl;
}

Rational frac(long a, long b) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

/// Index of the trivial character of a table.
std::size_t trivial_index(const CharacterTable& t) {
  for (std::size_t k = 0; k < t.size(); ++k) {
    bool all_one = true;
    for (const auto& v : t[k].values()) all_one = all_one && std::abs(v - Complex(1)) < 1e-9;
    if (all_one) return k;
  }
  return 0;
}

// ---------------------------------------------------------------- 1 and 2

Outcome z_approximation() {
  const auto z = BuiltinGroup::free(1);
  const auto b = GroupRingMatrix::parse(z, {{"1 - a"}});
  const auto a = b.adjoint() * b;
  std::vector<std::size_t> moduli;
  for (std::size_t n = 1; n <= 10; ++n) moduli.push_back(std::size_t{1} << n);
  const auto chain = chains::cyclic(moduli);
  for (std::size_t n = 0; n < chain.size(); ++n) {
    const auto& q = *chain.level(n).quotient();
    const auto rho = FiniteRep::regular(q.target());
    const auto ra = rank_nullity(q.push_matrix(a), rho);
    const auto rb = rank_nullity(q.push_matrix(b), rho);
    const long m = static_cast<long>(moduli[n]);
    if (!ra.exact || !rb.exact) return {false, "non-exact rank at N=" + std::to_string(m)};
    if (ra.nullity != frac(1, m) || rb.rank != frac(m - 1, m) || ra.rank != rb.rank)
      return {false, "N=" + std::to_string(m) + ": nullity " + to_string(ra.nullity) + ", rank " + to_string(rb.rank)};
  }
  return {true, "nullity 1/2^n and rank 1 - 1/2^n exactly for n = 1..10"};
}

Outcome fk_integrality(std::uint64_t seed) {
  // Regular representations of Z/N.
  const auto z = BuiltinGroup::free(1);
  const auto b = GroupRingMatrix::parse(z, {{"1 - a"}});
  const auto a = b.adjoint() * b;
  std::vector<std::size_t> moduli(64);
  std::iota(moduli.begin(), moduli.end(), 1);
  for (std::size_t n : moduli) {
    const auto q = chains::cyclic({n}).level(0).quotient();
    const auto rep = luck_bound_check(q->push_matrix(a), FiniteRep::regular(q->target()), 1);
    if (!rep.exact_det_power || *rep.exact_det_power != Integer(n * n))
      return {false, "det^N != N^2 at N=" + std::to_string(n)};
  }
  // Random integer matrices over Free(2) acting on random point sets.
  std::mt19937_64 rng(seed);
  const auto f = BuiltinGroup::free(2);
  std::uniform_real_distribution<double> unif(0, 1);
  std::uniform_int_distribution<int> coef(-2, 2), len(0, 3), bit(0, 1);
  double min_det = 1e300, max_err = 0;
  std::size_t max_degree = 0;
  for (std::size_t i = 0; i < kRandomDetCases; ++i) {
    const double u = unif(rng);
    const std::size_t d = 2 + static_cast<std::size_t>(std::floor((kMaxPermDegree - 2) * u * u * u));
    max_degree = std::max(max_degree, d);
    PointAction act{f, {}};
    for (int g = 0; g < 2; ++g) {
      std::vector<std::uint32_t> p(d);
      std::iota(p.begin(), p.end(), 0u);
      std::shuffle(p.begin(), p.end(), rng);
      act.images.push_back(p);
    }
    const std::size_t rows = d <= kMaxPermDegree / 2 && bit(rng) ? 2 : 1;
    GroupRingMatrix m(f, rows, rows);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < rows; ++c)
        for (int t = 0; t < 3; ++t) {
          Letters w;
          for (int k = len(rng); k > 0; --k) w.push_back({static_cast<std::uint32_t>(bit(rng)), bit(rng) ? 1 : -1});
          m.at(r, c).add(Word(f, w), Rational(coef(rng)));
        }
    const auto rep = luck_bound_check(m.adjoint() * m, act);
    if (rep.det < 1 - 1e-12 || !rep.integrality_ok)
      return {false, "case " + std::to_string(i) + ": det " + std::to_string(rep.det)};
    min_det = std::min(min_det, rep.det);
    max_err = std::max(max_err, rep.integrality_error);
  }
  std::ostringstream o;
  o << "det^N = N^2 for N <= 64; " << kRandomDetCases << " random cases (degree <= " << max_degree
    << "), min det " << min_det << ", max log error " << max_err;
  return {true, o.str()};
}

// ---------------------------------------------------------------- 3

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

struct CrosscheckCase {
  std::string name;
  FiniteEquivariantComplex fc;
  FiniteSubgroup h;
};

std::vector<CrosscheckCase> crosscheck_corpus() {
  std::vector<CrosscheckCase> cs;
  auto cayley = [&](const std::string& name, const GroupPtr& g, bool whole) {
    auto fc = cayley_complex(g);
    auto h = whole ? FiniteSubgroup::whole(g) : FiniteSubgroup::generated(g, {g->generators()[0]});
    cs.push_back({name, fc, h});
  };
  cayley("S3 Cayley graph, H = S3", groups::symmetric(3), true);
  cayley("S3 Cayley graph, H cyclic", groups::symmetric(3), false);
  cayley("A4 Cayley graph, H cyclic", groups::alternating(4), false);
  cayley("Q8 Cayley graph, H = Q8", groups::quaternion(), true);
  cayley("D12 Cayley graph, H cyclic", groups::dihedral(6), false);
  cayley("S4 Cayley graph, H cyclic", groups::symmetric(4), false);
  cayley("SL(2,3) Cayley graph, H cyclic", groups::special_linear_2(3), false);
  cayley("GL(2,3) Cayley graph, H cyclic", groups::general_linear_2(3), false);
  cayley("Z/2 x Z/4 Cayley graph, H whole", groups::abelian({2, 4}), true);
  {
    auto q = chains::cyclic({4}).level(0).quotient();
    auto fc = push_complex(EquivariantCWData::line_Z(), *q);
    cs.push_back({"Z/4 circle, H = <2>", fc, FiniteSubgroup::generated(fc.group, {2})});
  }
  for (std::size_t m : {3u, 4u}) {
    auto q = chains::dihedral({m}, chains::DihedralFiber::Kernel).level(0).quotient();
    auto fc = push_complex(EquivariantCWData::line_Dinf(), *q);
    cs.push_back({"D" + std::to_string(2 * m) + " line, H whole", fc, FiniteSubgroup::whole(fc.group)});
    const Element s = q->evaluate(Word::parse(q->source(), "s"));
    cs.push_back({"D" + std::to_string(2 * m) + " line, H = <s>", fc, FiniteSubgroup::generated(fc.group, {s})});
  }
  auto tree = [&](const std::string& name, std::size_t r, const GroupPtr& hg, const std::vector<std::vector<int>>& act,
                  std::size_t modulus) {
    auto g = BuiltinGroup::free_by_finite_signed(r, hg, act);
    auto cw = EquivariantCWData::tree_free_by_finite(g);
    auto q = chains::abelianized_mod_quotient(g, modulus);
    auto fc = push_complex(cw, *q);
    const Element x = q->evaluate(Word(g, g->h_word(1)));
    cs.push_back({name, fc, FiniteSubgroup::generated(fc.group, {x})});
  };
  tree("F2 x| Z/2 inversion mod 2", 2, groups::cyclic(2), {{-1, -2}}, 2);
  tree("F2 x| Z/2 swap mod 3", 2, groups::cyclic(2), {{2, 1}}, 3);
  tree("F2 x| Z/4 rotation mod 3", 2, groups::cyclic(4), {{2, -1}}, 3);
  return cs;
}

Outcome finite_crosscheck() {
  std::size_t instances = 0, comparisons = 0;
  double worst = 0;
  for (const auto& c : crosscheck_corpus()) {
    if (c.fc.group->order() > 48) return {false, c.name + ": group order above 48"};
    const auto table = CharacterTable::compute(c.h.abstract_group());
    for (const auto& chi : table.characters())
      for (const auto& r : finite_group_crosscheck(c.fc, c.h, chi)) {
        const double diff = std::abs(r.l2_side - r.homology_side);
        worst = std::max(worst, diff);
        ++comparisons;
        if (diff > kCrosscheckTol) return {false, c.name + ": sides differ by " + std::to_string(diff)};
      }
    ++instances;
  }
  std::ostringstream o;
  o << instances << " instances, " << comparisons << " comparisons, max difference " << worst;
  return {instances >= 10, o.str()};
}

// ---------------------------------------------------------------- 4 and 6

ConvergenceReport dinf_report, inversion_report;
ExperimentConfig dinf_config, inversion_config;

Outcome dinf_experiment() {
  dinf_config = ExperimentConfig::load(kSource / "experiments" / "dinf_line.json");
  dinf_report = run(dinf_config);
  if (dinf_report.has_failures()) return {false, "some level failed"};
  const auto table = CharacterTable::compute(dinf_config.h.group);
  const std::size_t triv = trivial_index(table);
  const std::vector<long> ms{2, 4, 8, 16, 32};
  if (dinf_report.levels.size() != ms.size()) return {false, "expected five levels"};
  for (std::size_t n = 0; n < ms.size(); ++n) {
    const auto& l = dinf_report.levels[n];
    const long m = ms[n];
    if (l.normalizer != static_cast<std::size_t>(2 * m)) return {false, "unexpected index at m=" + std::to_string(m)};
    if (l.multiplicities.size() != 4) return {false, "expected four multiplicities"};
    for (const auto& e : l.multiplicities) {
      const long want = (e.p == 0) == (e.chi == triv) ? 1 : 0;
      if (e.raw != want || e.normalized != frac(want, 2 * m))
        return {false, "m=" + std::to_string(m) + " p=" + std::to_string(e.p) + ": raw " + std::to_string(e.raw)};
      if (abs(e.normalized - Rational(0)) > frac(1, 2 * m)) return {false, "deviation above 1/(2m)"};
    }
  }
  for (const auto& s : dinf_report.multiplicities)
    if (!s.prediction || *s.prediction != 0) return {false, "missing prediction 0"};
  return {true, "raw (1,0,0,1) at m = 2..32, normalized 1/(2m) or 0, prediction 0"};
}

/// Torus graph (Z/N)^2 with edges v -> v + e_i and the involution v -> -v,
/// which reverses edges.  Returns b_1 and Tr(sigma | H_1), by dense linear
/// algebra on the cycle space.
std::pair<long, long> torus_oracle(long n) {
  const long v = n * n, e = 2 * v;
  auto vid = [&](long a, long b) { return ((a % n + n) % n) + n * ((b % n + n) % n); };
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(v, e), s = Eigen::MatrixXd::Zero(e, e);
  for (long a = 0; a < n; ++a)
    for (long b = 0; b < n; ++b)
      for (long i = 0; i < 2; ++i) {
        const long edge = 2 * vid(a, b) + i;
        const long a1 = a + (i == 0), b1 = b + (i == 1);
        d(vid(a1, b1), edge) += 1;
        d(vid(a, b), edge) -= 1;
        // sigma(v -> v + e_i) = (-v -> -v - e_i), the reverse of edge (-v - e_i, i).
        s(2 * vid(-a1, -b1) + i, edge) = -1;
      }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(d);
  const Eigen::MatrixXd k = lu.kernel();
  const Eigen::MatrixXd m = (k.transpose() * k).ldlt().solve(k.transpose() * s * k);
  return {static_cast<long>(k.cols()), std::lround(m.trace())};
}

Outcome inversion_experiment() {
  inversion_config = ExperimentConfig::load(kSource / "experiments" / "free2_inversion.json");
  RunOptions opts;
  opts.parallel = 4;
  inversion_report = run(inversion_config, opts);
  if (inversion_report.has_failures()) return {false, "some level failed"};
  if (inversion_report.levels.size() != 5) return {false, "expected five levels"};
  const auto table = CharacterTable::compute(inversion_config.h.group);
  const std::size_t triv = trivial_index(table);
  const Rational half = frac(1, 2);
  Rational deepest = 0;
  std::ostringstream o;
  for (const auto& l : inversion_report.levels) {
    const long n = 2L << l.level;
    if (l.normalizer != static_cast<std::size_t>(n * n)) return {false, "unexpected normalizer"};
    std::map<std::size_t, long> raw;
    for (const auto& e : l.multiplicities) {
      if (e.p != 1) continue;
      raw[e.chi] = e.raw;
      const Rational dev = abs(e.normalized - half);
      if (dev > frac(2, static_cast<long>(l.normalizer)))
        return {false, "N=" + std::to_string(n) + ": deviation " + to_string(dev) + " above 2/N_n"};
      if (l.level + 1 == inversion_report.levels.size()) deepest = std::max(deepest, dev);
    }
    if (n <= 8) {
      const auto [b1, tr] = torus_oracle(n);
      const long want_triv = (b1 + tr) / 2, want_sign = (b1 - tr) / 2;
      if (static_cast<long>(l.betti.at(1)) != b1 || raw[triv] != want_triv || raw[1 - triv] != want_sign)
        return {false, "oracle disagrees at N=" + std::to_string(n)};
      o << "oracle N=" << n << " (b1 " << b1 << ", Tr " << tr << ") agrees; ";
    }
  }
  o << "deepest deviation " << to_string(deepest) << " = " << to_double(deepest);
  return {to_double(deepest) <= kDeepestTol, o.str()};
}

// ---------------------------------------------------------------- 5

Outcome farber_tables() {
  const std::vector<std::size_t> ms{2, 4, 8, 16, 32};
  const auto refl = chains::dihedral(ms, chains::DihedralFiber::Reflection);
  const auto d = refl.group();
  std::vector<Word> probes;
  std::vector<std::pair<long, bool>> shape;
  for (long k = 0; k <= 4; ++k)
    for (bool r : {false, true}) {
      std::string w = k == 0 ? "" : "t^" + std::to_string(k);
      if (r) w += "s";
      probes.push_back(Word::parse(d, w.empty() ? "1" : w));
      shape.emplace_back(k, r);
    }
  const auto rows = farber_diagnostic(refl, probes);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const long m = static_cast<long>(ms[rows[i].level]);
    const auto [k, r] = shape[i % shape.size()];
    const long g = std::gcd(2L, m);
    const long count = r ? (k % g == 0 ? g : 0) : (k % m == 0 ? m : 0);
    if (rows[i].fraction != frac(count, m)) return {false, "fixed-coset count differs at m=" + std::to_string(m)};
  }
  const auto hs = finite_subgroup(d, {Word::parse(d, "s")});
  for (const auto& r : rel_farber_diagnostic(refl, hs, {Word::identity(d)}))
    if (r.h == "s" && r.deviation != 1) return {false, "reflection chain deviation is not 1"};
  const auto kern = chains::dihedral(ms, chains::DihedralFiber::Kernel);
  std::vector<Rational> dev;
  for (const auto& r : rel_farber_diagnostic(kern, hs, {Word::parse(d, "s")}))
    if (r.h == "s") dev.push_back(r.deviation);
  if (dev.size() != ms.size()) return {false, "missing kernel rows"};
  // Decay like 1/m: m times the deviation is one constant c > 0.
  const Rational c = dev[0] * Rational(static_cast<long>(ms[0]));
  for (std::size_t i = 0; i < ms.size(); ++i)
    if (dev[i] * Rational(static_cast<long>(ms[i])) != c || c <= 0)
      return {false, "kernel deviation not proportional to 1/m at m=" + std::to_string(ms[i])};
  return {true, "count table m / gcd(2,m) / 0 exact; reflection chain deviation 1; kernel chain deviation " +
                    to_string(c) + "/m"};
}

// ---------------------------------------------------------------- 7

GroupAlgebraMatrix random_matrix(const GroupPtr& g, std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::uniform_int_distribution<Element> el(0, static_cast<Element>(g->order() - 1));
  std::uniform_int_distribution<long> co(-3, 3);
  GroupAlgebraMatrix a(g, rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      for (int t = 0; t < 2; ++t) add_term(a.at(i, j), el(rng), Rational(co(rng)));
  return a;
}

std::vector<double> expand(const SpectralMeasure& mu) {
  std::vector<double> v;
  for (const auto& a : mu.atoms) v.insert(v.end(), a.multiplicity, a.value);
  return v;
}

struct Suite {
  std::string name;
  std::size_t cases = 0;
  std::string failure;
};

Outcome property_suites(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::vector<GroupPtr> pool{groups::cyclic(5),    groups::cyclic(6),     groups::dihedral(3),
                                   groups::dihedral(4),  groups::symmetric(3),  groups::alternating(4),
                                   groups::quaternion(), groups::abelian({2, 2})};
  std::map<const FiniteGroup*, CharacterTable> tables;
  for (const auto& g : pool) tables.emplace(g.get(), CharacterTable::compute(g));
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  auto random_rep = [&](const GroupPtr& g) {
    const auto& t = tables.at(g.get());
    return pick(3) == 0 ? FiniteRep::regular(g) : FiniteRep::irreducible(t[pick(t.size())]);
  };

  std::vector<Suite> suites;
  auto run_suite = [&](const std::string& name, const std::function<std::string()>& one) {
    Suite s{name, 0, ""};
    for (; s.cases < kPropertyCases; ++s.cases) {
      s.failure = one();
      if (!s.failure.empty()) break;
    }
    suites.push_back(s);
  };

  run_suite("rank + nullity = n", [&] {
    const auto g = pool[pick(pool.size())];
    const std::size_t cols = 1 + pick(3);
    const auto rn = rank_nullity(random_matrix(g, 1 + pick(3), cols, rng), random_rep(g));
    return rn.rank + rn.nullity == Rational(static_cast<long>(cols)) ? "" : "rank + nullity differs";
  });
  run_suite("moments k <= 6", [&] {
    const auto g = pool[pick(pool.size())];
    const auto b = random_matrix(g, 1 + pick(2), 1 + pick(2), rng);
    moments_check(b.adjoint() * b, random_rep(g), 6);
    return "";
  });
  {
    struct Pair {
      GroupPtr big, small;
      std::vector<Element> images;
    };
    std::vector<Pair> pairs{{groups::dihedral(6), groups::dihedral(3), {1, 3}},
                            {groups::dihedral(4), groups::dihedral(2), {1, 2}},
                            {groups::cyclic(12), groups::cyclic(4), {1}},
                            {groups::cyclic(6), groups::cyclic(3), {1}}};
    std::vector<std::pair<GroupHom, CharacterTable>> homs;
    for (const auto& p : pairs) {
      auto alpha = GroupHom::from_generator_images(p.big, p.small, p.images);
      if (!alpha) return {false, "pullback test homomorphism is not well defined"};
      homs.emplace_back(*alpha, CharacterTable::compute(p.small));
    }
    run_suite("pullback of spectral measures", [&] {
      const auto& [alpha, table] = homs[pick(homs.size())];
      const auto b = random_matrix(alpha.source(), 1 + pick(2), 1 + pick(2), rng);
      const auto a = b.adjoint() * b;
      const auto sigma = FiniteRep::irreducible(table[pick(table.size())]);
      const auto lhs = expand(spectral_measure(push_forward(alpha, a), sigma));
      const auto rhs = expand(spectral_measure(a, sigma.pullback(alpha)));
      if (lhs.size() != rhs.size()) return "measure sizes differ";
      for (std::size_t k = 0; k < lhs.size(); ++k)
        if (std::abs(lhs[k] - rhs[k]) > kPullbackTol) return "atoms differ";
      return "";
    });
  }
  {
    // Random quotient complexes with H-action: free-by-finite trees and the
    // infinite dihedral line.
    struct Setup {
      EquivariantCWData cw;
      BuiltinFiniteSubgroup h;
      CharacterTable table;
    };
    std::vector<Setup> setups;
    for (const auto& [hg, act] : std::vector<std::pair<GroupPtr, std::vector<std::vector<int>>>>{
             {groups::cyclic(2), {{-1, -2}}}, {groups::cyclic(2), {{2, 1}}}, {groups::cyclic(4), {{2, -1}}}}) {
      auto g = BuiltinGroup::free_by_finite_signed(2, hg, act);
      auto h = finite_subgroup(g, {Word(g, g->h_word(1))});
      setups.push_back({EquivariantCWData::tree_free_by_finite(g), h, CharacterTable::compute(h.group)});
    }
    {
      auto cw = EquivariantCWData::line_Dinf();
      auto h = finite_subgroup(cw.group, {Word::parse(cw.group, "s")});
      setups.push_back({cw, h, CharacterTable::compute(h.group)});
    }
    struct Sample {
      const Setup* setup;
      QuotientComplex qc;
    };
    auto sample = [&]() {
      const auto& st = setups[pick(setups.size())];
      if (st.cw.group->family() == Family::DihedralInfinite) {
        const std::size_t m = 1 + pick(24);
        return Sample{&st, quotient_complex(st.cw, chains::dihedral({m}, chains::DihedralFiber::Kernel).level(0), st.h)};
      }
      const std::size_t n = 1 + pick(4);
      return Sample{&st, quotient_complex(st.cw, chains::abelianized_mod(st.cw.group, {n}).level(0), st.h)};
    };
    run_suite("sum rule", [&] {
      const auto s = sample();
      const auto rep = multiplicities(s.qc, s.setup->table);
      for (std::size_t p = 0; p < rep.betti.size(); ++p) {
        long sum = 0;
        for (std::size_t k = 0; k < s.setup->table.size(); ++k)
          sum += rep.multiplicity[p][k] * s.setup->table[k].degree_int();
        if (sum != static_cast<long>(rep.betti[p])) return "sum of chi(1) m differs from b_p";
      }
      return "";
    });
    run_suite("H-action commutes with boundaries", [&] {
      const auto s = sample();
      return s.qc.check_invariants();
    });
    run_suite("orbifold Euler characteristic", [&] {
      const auto s = sample();
      return Rational(s.qc.euler_characteristic()) == Rational(static_cast<long>(s.qc.index)) * s.setup->cw.orbifold_euler()
                 ? ""
                 : "chi(X / Gamma) differs from index times orbifold chi";
    });
  }
  run_suite("Frobenius reciprocity", [&] {
    const auto g = pool[pick(pool.size())];
    std::vector<Element> gens;
    for (std::size_t k = 1 + pick(2); k > 0; --k) gens.push_back(static_cast<Element>(pick(g->order())));
    const auto h = FiniteSubgroup::generated(g, gens);
    const auto th = CharacterTable::compute(h.abstract_group());
    const auto& tg = tables.at(g.get());
    return frobenius_check(h, th[pick(th.size())], tg[pick(tg.size())]).ok ? "" : "multiplicities differ";
  });

  Outcome out;
  std::ostringstream o;
  for (const auto& s : suites) {
    if (!s.failure.empty() || s.cases < kPropertyCases) {
      out.ok = false;
      o << s.name << " failed at case " << s.cases << " (" << s.failure << "); ";
    }
  }
  o << suites.size() << " suites x " << kPropertyCases << " cases, seed " << seed;
  out.detail = o.str();
  return out;
}

// ---------------------------------------------------------------- 8

Outcome trace_decay() {
  Outcome out;
  std::ostringstream o;
  for (const auto* rep : {&dinf_report, &inversion_report}) {
    if (rep->levels.empty()) {
      out.ok = false;
      o << rep->name << " has no levels; ";
      continue;
    }
    Rational worst = 0;
    std::string where;
    for (const auto& l : rep->levels)
      for (const auto& t : l.traces) {
        if (abs(t.trace) > worst) {
          worst = abs(t.trace);
          where = "N_n=" + std::to_string(l.normalizer) + " p=" + std::to_string(t.p) + " h=" + t.h_label +
                  " Tr=" + to_string(t.trace);
        }
        if (abs(t.normalized) > Rational(2) / Rational(static_cast<long>(l.normalizer))) out.ok = false;
      }
    o << rep->name << ": max |Tr| " << to_string(worst) << (where.empty() ? "" : " at " + where) << "; ";
  }
  out.detail = o.str();
  return out;
}

}  // namespace

int main() {
  const std::uint64_t seed = seed_from_env(20240607);
  criterion(1, "Z-approximation of rank and nullity", 1, z_approximation);
  criterion(2, "Fuglede-Kadison integrality", 30, [&] { return fk_integrality(seed); });
  criterion(3, "finite-group cross-check", 60, finite_crosscheck);
  criterion(4, "infinite dihedral experiment", 5, dinf_experiment);
  criterion(5, "Farber diagnostics", 5, farber_tables);
  criterion(6, "free-by-finite experiment", 600, inversion_experiment);
  criterion(7, "property suites", 600, [&] { return property_suites(seed); });
  criterion(8, "trace decay |Tr(h|H_p)| <= 2", 60, trace_decay);
  std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria fail") << std::endl;
  return failures == 0 ? 0 : 1;
}
