#include "l2mult/equivariant_complex.hpp"

#include <map>
#include <numeric>
#include <ostream>

#include <Eigen/Eigenvalues>

#include "l2mult/error.hpp"
#include "l2mult/group_spec.hpp"

namespace l2mult {

namespace {

constexpr std::uint32_t kUnset = static_cast<std::uint32_t>(-1);

Letters coset_key(const BuiltinPtr& g, const BuiltinFiniteSubgroup& s, const Letters& w) {
  Letters best;
  bool first = true;
  for (const auto& sigma : s.words) {
    Letters l = (sigma * Word(g, w)).letters();
    if (first || l < best) best = std::move(l);
    first = false;
  }
  return best;
}

int mobius(std::size_t n) {
  int m = 1;
  for (std::size_t p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return 0;
      m = -m;
    }
  if (n > 1) m = -m;
  return m;
}

long euler_phi(std::size_t n) {
  std::size_t r = n;
  for (std::size_t p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      r -= r / p;
    }
  if (n > 1) r -= r / n;
  return static_cast<long>(r);
}

std::vector<std::size_t> divisors(std::size_t n) {
  std::vector<std::size_t> d;
  for (std::size_t k = 1; k <= n; ++k)
    if (n % k == 0) d.push_back(k);
  return d;
}

std::vector<std::size_t> ranks_of(const std::vector<SparseRationalMatrix>& b) {
  std::vector<std::size_t> r(b.size() + 1, 0);
  for (std::size_t p = 1; p < b.size(); ++p) r[p] = b[p].rows() == 0 || b[p].cols() == 0 ? 0 : exact_rank(b[p]);
  return r;
}

std::vector<std::size_t> betti_of(const std::vector<std::size_t>& counts, const std::vector<SparseRationalMatrix>& b) {
  const auto r = ranks_of(b);
  std::vector<std::size_t> out(counts.size());
  for (std::size_t p = 0; p < counts.size(); ++p) out[p] = counts[p] - r[p] - r[p + 1];
  return out;
}

/// Betti numbers of the subcomplex of <x>-invariant chains.
std::vector<std::size_t> fixed_betti(const QuotientComplex& qc, Element x) {
  const std::size_t top = qc.cells.size();
  std::vector<std::vector<std::uint32_t>> orbit(top);
  std::vector<std::vector<int>> coef(top);
  std::vector<std::vector<std::vector<std::pair<std::uint32_t, int>>>> members(top);
  std::vector<std::size_t> counts(top, 0);
  for (std::size_t p = 0; p < top; ++p) {
    const auto& perm = qc.action[p][x];
    const auto& sg = qc.sign[p][x];
    orbit[p].assign(qc.cells[p], kUnset);
    coef[p].assign(qc.cells[p], 0);
    std::vector<bool> seen(qc.cells[p], false);
    for (std::uint32_t c = 0; c < qc.cells[p]; ++c) {
      if (seen[c]) continue;
      std::vector<std::pair<std::uint32_t, int>> cyc;
      std::uint32_t cur = c;
      int s = 1;
      do {
        seen[cur] = true;
        cyc.emplace_back(cur, s);
        s *= sg[cur];
        cur = perm[cur];
      } while (cur != c);
      if (s != 1) continue;  // the orbit sum vanishes
      const auto id = static_cast<std::uint32_t>(members[p].size());
      for (auto [cell, sign] : cyc) {
        orbit[p][cell] = id;
        coef[p][cell] = sign;
      }
      members[p].push_back(std::move(cyc));
    }
    counts[p] = members[p].size();
  }
  std::vector<SparseRationalMatrix> b(top);
  b[0] = SparseRationalMatrix(0, counts[0]);
  for (std::size_t p = 1; p < top; ++p) {
    const SparseRationalMatrix cols = qc.boundaries[p].transpose();
    SparseRationalMatrix m(counts[p - 1], counts[p]);
    for (std::size_t o = 0; o < counts[p]; ++o) {
      std::map<std::size_t, Rational> acc;
      for (auto [cell, sign] : members[p][o])
        for (const auto& [row, v] : cols.row(cell)) acc[row] += sign > 0 ? v : Rational(-v);
      for (const auto& [row, v] : acc) {
        if (v == 0) continue;
        // The image is invariant, so reading the coefficient at the orbit
        // representative (coefficient +1) recovers it.
        const auto oid = orbit[p - 1][row];
        if (oid != kUnset && members[p - 1][oid].front().first == row) m.add(oid, o, v);
      }
    }
    b[p] = std::move(m);
  }
  return betti_of(counts, b);
}

/// Free, free abelian and dihedral groups are determined by family and rank.
bool same_group(const BuiltinPtr& a, const BuiltinPtr& b) {
  return a == b || (a->family() != Family::FreeByFinite && a->describe() == b->describe());
}

Eigen::MatrixXd dense(const SparseRationalMatrix& m) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<long>(m.rows()), static_cast<long>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (const auto& [c, v] : m.row(r)) d(static_cast<long>(r), static_cast<long>(c)) = to_double(v);
  return d;
}

}  // namespace

void EquivariantCWData::validate() const {
  if (!group) fail(ErrorKind::InvalidArgument, "complex has no group");
  if (boundaries.size() != cells.size()) fail(ErrorKind::InvalidArgument, "one boundary matrix per dimension required");
  std::vector<std::vector<BuiltinFiniteSubgroup>> stabs(cells.size());
  for (std::size_t p = 0; p < cells.size(); ++p)
    for (const auto& c : cells[p]) {
      for (const auto& w : c.stabilizer)
        if (w.group() != group) fail(ErrorKind::InvalidArgument, "stabilizer word from another group");
      stabs[p].push_back(finite_subgroup(group, c.stabilizer));
    }
  if (!cells.empty() && boundaries[0].cols() != cells[0].size())
    fail(ErrorKind::InvalidArgument, "boundary 0 must have one column per 0-cell orbit");
  for (std::size_t p = 1; p < cells.size(); ++p) {
    const auto& b = boundaries[p];
    if (b.rows() != cells[p - 1].size() || b.cols() != cells[p].size())
      fail(ErrorKind::InvalidArgument, "boundary " + std::to_string(p) + " has the wrong shape");
    for (std::size_t j = 0; j < b.cols(); ++j)
      for (const auto& s : cells[p][j].stabilizer)
        for (std::size_t i = 0; i < b.rows(); ++i) {
          std::map<Letters, Rational> before, after;
          for (const auto& [w, c] : b.at(i, j).terms()) {
            before[coset_key(group, stabs[p - 1][i], w)] += c;
            after[coset_key(group, stabs[p - 1][i], (Word(group, w) * s).letters())] += c;
          }
          std::erase_if(before, [](const auto& kv) { return kv.second == 0; });
          std::erase_if(after, [](const auto& kv) { return kv.second == 0; });
          if (before != after)
            fail(ErrorKind::InvalidArgument, "boundary of " + cells[p][j].label + " is not invariant under its stabilizer");
        }
  }
}

Rational EquivariantCWData::orbifold_euler() const {
  Rational e = 0;
  for (std::size_t p = 0; p < cells.size(); ++p)
    for (const auto& c : cells[p]) {
      const auto order = finite_subgroup(group, c.stabilizer).group->order();
      Rational term(1, static_cast<unsigned long>(order));
      e += p % 2 == 0 ? term : Rational(-term);
    }
  e.canonicalize();
  return e;
}

EquivariantCWData EquivariantCWData::line_Z() {
  auto g = BuiltinGroup::free_abelian(1);
  EquivariantCWData cw;
  cw.group = g;
  cw.cells = {{{"v", {}}}, {{"e", {}}}};
  cw.boundaries = {GroupRingMatrix(g, 0, 1), GroupRingMatrix::parse(g, {{"1 - a"}})};
  return cw;
}

EquivariantCWData EquivariantCWData::line_Dinf() {
  auto g = BuiltinGroup::dihedral_infinite();
  EquivariantCWData cw;
  cw.group = g;
  cw.cells = {{{"v0", {Word::parse(g, "s")}}, {"v1", {Word::parse(g, "ts")}}}, {{"e", {}}}};
  cw.boundaries = {GroupRingMatrix(g, 0, 2), GroupRingMatrix::parse(g, {{"-1"}, {"1"}})};
  return cw;
}

EquivariantCWData EquivariantCWData::rose_free(std::size_t r) {
  auto g = BuiltinGroup::free(r);
  EquivariantCWData cw;
  cw.group = g;
  cw.cells = {{{"v", {}}}, {}};
  std::vector<std::vector<std::string>> row(1);
  for (std::size_t i = 0; i < r; ++i) {
    cw.cells[1].push_back({"e" + g->generator_name(i), {}});
    row[0].push_back("1 - " + g->generator_name(i));
  }
  cw.boundaries = {GroupRingMatrix(g, 0, 1), GroupRingMatrix::parse(g, row)};
  return cw;
}

EquivariantCWData EquivariantCWData::tree_free_by_finite(std::size_t r, const GroupPtr& h,
                                                         const std::vector<std::vector<int>>& signed_images) {
  return tree_free_by_finite(BuiltinGroup::free_by_finite_signed(r, h, signed_images));
}

EquivariantCWData EquivariantCWData::tree_free_by_finite(const BuiltinPtr& g) {
  if (g->family() != Family::FreeByFinite || !g->signed_permutation_action())
    fail(ErrorKind::UnsupportedFamily, "tree complex needs F_r semidirect H with a signed permutation action");
  const std::size_t r = g->rank();
  const auto& h = g->finite_part();
  auto hword = [&](Element x) { return Word(g, g->h_word(x)); };
  auto gen = [&](std::size_t i, int e) { return Word(g, {{static_cast<std::uint32_t>(i), e}}); };
  auto image = [&](Element x, std::size_t i) {
    const auto& w = g->automorphism(x, i);
    return std::pair<std::size_t, int>{w[0].gen, w[0].exp};
  };
  // The vertex uH of the tree; normal forms list free letters first.
  auto vertex = [&](const Word& w) {
    Letters l;
    for (const auto& x : w.letters())
      if (x.gen < r) l.push_back(x);
    return l;
  };

  EquivariantCWData cw;
  cw.group = g;
  cw.cells.resize(2);
  std::vector<Word> hgens;
  for (auto k : h->generators()) hgens.push_back(hword(k));
  cw.cells[0].push_back({"v", hgens});

  std::vector<std::size_t> unsigned_rep(r);
  std::vector<std::size_t> midpoint_row(r, 0);
  for (std::size_t i = 0; i < r; ++i) {
    std::size_t rep = i;
    for (Element x = 0; x < h->order(); ++x) rep = std::min(rep, image(x, i).first);
    unsigned_rep[i] = rep;
    if (rep != i) continue;
    std::vector<Word> stab;
    for (Element x = 0; x < h->order(); ++x) {
      const auto [j, e] = image(x, i);
      if (j != i) continue;
      stab.push_back(e > 0 ? hword(x) : gen(i, 1) * hword(x));
    }
    midpoint_row[i] = cw.cells[0].size();
    cw.cells[0].push_back({"m" + g->generator_name(i), stab});
  }

  struct HalfEdge {
    std::size_t i;
    int e;
  };
  std::vector<HalfEdge> half;
  for (std::size_t i = 0; i < r; ++i)
    for (int e : {1, -1}) {
      bool rep = true;
      for (Element x = 0; x < h->order() && rep; ++x) {
        const auto [j, f] = image(x, i);
        const int ef = e * f;
        if (j < i || (j == i && ef > e)) rep = false;
      }
      if (!rep) continue;
      std::vector<Word> stab;
      // x fixes x_i^e exactly when it fixes x_i.
      for (Element x = 0; x < h->order(); ++x)
        if (image(x, i) == std::pair<std::size_t, int>{i, 1}) stab.push_back(hword(x));
      half.push_back({i, e});
      cw.cells[1].push_back({std::string("f") + g->generator_name(i) + (e < 0 ? "'" : ""), stab});
    }

  GroupRingMatrix d1(g, cw.cells[0].size(), cw.cells[1].size());
  for (std::size_t col = 0; col < half.size(); ++col) {
    const auto [i, e] = half[col];
    const std::size_t i0 = unsigned_rep[i];
    const Letters target_a{}, target_b{Letter{static_cast<std::uint32_t>(i), e}};
    std::optional<Word> found;
    std::vector<Word> prefixes{Word::identity(g)};
    for (std::size_t j = 0; j < r; ++j) {
      prefixes.push_back(gen(j, 1));
      prefixes.push_back(gen(j, -1));
    }
    for (const auto& w : prefixes) {
      for (Element x = 0; x < h->order() && !found; ++x) {
        const Word cand = w * hword(x);
        const Letters p0 = vertex(cand), p1 = vertex(cand * gen(i0, 1));
        if ((p0 == target_a && p1 == target_b) || (p0 == target_b && p1 == target_a)) found = cand;
      }
      if (found) break;
    }
    if (!found) fail(ErrorKind::InvalidArgument, "no element carries the midpoint orbit onto the half-edge");
    d1.at(0, col).add(Word::identity(g), -1);
    d1.at(midpoint_row[i0], col).add(found->inverse(), 1);
  }
  cw.boundaries = {GroupRingMatrix(g, 0, cw.cells[0].size()), d1};
  return cw;
}

EquivariantCWData EquivariantCWData::from_json(const nlohmann::json& j, const BuiltinPtr& group) {
  try {
    if (j.contains("builtin")) {
      const std::string name = j.at("builtin").get<std::string>();
      EquivariantCWData cw;
      if (name == "line_Z") cw = line_Z();
      else if (name == "line_Dinf") cw = line_Dinf();
      else if (name == "rose_free")
        cw = rose_free(group ? group->rank() : j.at("rank").get<std::size_t>());
      else if (name == "tree_free_by_finite")
        return tree_free_by_finite(group ? group : builtin_group_from_json(j.at("group")));
      else
        fail(ErrorKind::ParseError, "unknown built-in complex '" + name + "'");
      if (group) {
        if (!same_group(group, cw.group)) fail(ErrorKind::InvalidArgument, "built-in complex '" + name + "' needs " + cw.group->describe());
        // Rebind the words to the shared group.
        cw.group = group;
        for (auto& dim : cw.cells)
          for (auto& c : dim)
            for (auto& w : c.stabilizer) w = Word(group, w.letters());
        for (auto& b : cw.boundaries) {
          GroupRingMatrix r(group, b.rows(), b.cols());
          for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t k = 0; k < b.cols(); ++k)
              for (const auto& [w, c] : b.at(i, k).terms()) r.at(i, k).add(Word(group, w), c);
          b = std::move(r);
        }
      }
      return cw;
    }
    EquivariantCWData cw;
    cw.group = group ? group : builtin_group_from_json(j.at("group"));
    for (const auto& dim : j.at("cells")) {
      std::vector<OrbitCell> cells;
      for (const auto& c : dim) {
        OrbitCell oc;
        oc.label = c.value("label", "");
        for (const auto& w : c.value("stabilizer", std::vector<std::string>{})) oc.stabilizer.push_back(Word::parse(cw.group, w));
        cells.push_back(std::move(oc));
      }
      cw.cells.push_back(std::move(cells));
    }
    const auto& bs = j.at("boundaries");
    if (bs.size() != cw.cells.size()) fail(ErrorKind::ParseError, "one boundary entry per dimension required");
    cw.boundaries.push_back(GroupRingMatrix(cw.group, 0, cw.cells.empty() ? 0 : cw.cells[0].size()));
    for (std::size_t p = 1; p < bs.size(); ++p) {
      auto rows = bs[p].get<std::vector<std::vector<std::string>>>();
      if (rows.empty()) {
        cw.boundaries.push_back(GroupRingMatrix(cw.group, cw.cells[p - 1].size(), cw.cells[p].size()));
        continue;
      }
      cw.boundaries.push_back(GroupRingMatrix::parse(cw.group, rows));
    }
    cw.validate();
    return cw;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::ParseError, std::string("complex: ") + e.what());
  }
}

nlohmann::json EquivariantCWData::to_json(const std::string& h_spec) const {
  nlohmann::json j;
  j["group"] = builtin_group_to_json(group, h_spec);
  j["cells"] = nlohmann::json::array();
  for (const auto& dim : cells) {
    nlohmann::json d = nlohmann::json::array();
    for (const auto& c : dim) {
      std::vector<std::string> stab;
      for (const auto& w : c.stabilizer) stab.push_back(w.to_string());
      d.push_back({{"label", c.label}, {"stabilizer", stab}});
    }
    j["cells"].push_back(d);
  }
  j["boundaries"] = nlohmann::json::array();
  for (std::size_t p = 0; p < boundaries.size(); ++p)
    j["boundaries"].push_back(p == 0 ? nlohmann::json::array() : nlohmann::json(boundaries[p].to_strings()));
  return j;
}

PhiBettiInput FiniteEquivariantComplex::phi_betti_input(std::size_t p) const {
  auto stabs = [&](std::size_t q) {
    CellStabilizers s;
    for (const auto& sub : stabilizers[q]) s.stabilizers.push_back(sub.elements());
    return s;
  };
  PhiBettiInput in;
  in.cells_p = stabs(p);
  in.boundary_p = p == 0 ? GroupAlgebraMatrix(group, 0, stabilizers[0].size()) : boundaries[p];
  if (p > 0) in.cells_pm1 = stabs(p - 1);
  if (p + 1 < stabilizers.size()) {
    in.boundary_p1 = boundaries[p + 1];
    in.cells_p1 = stabs(p + 1);
  } else {
    in.boundary_p1 = GroupAlgebraMatrix(group, stabilizers[p].size(), 0);
  }
  return in;
}

FiniteEquivariantComplex push_complex(const EquivariantCWData& cw, const QuotientMap& q) {
  if (!same_group(cw.group, q.source())) fail(ErrorKind::InvalidArgument, "quotient map is defined on another group");
  FiniteEquivariantComplex fc;
  fc.group = q.target();
  fc.stabilizers.resize(cw.cells.size());
  fc.labels.resize(cw.cells.size());
  for (std::size_t p = 0; p < cw.cells.size(); ++p)
    for (const auto& c : cw.cells[p]) {
      std::vector<Element> gens;
      for (const auto& w : c.stabilizer) gens.push_back(q.evaluate(w));
      fc.stabilizers[p].push_back(FiniteSubgroup::generated(fc.group, gens));
      fc.labels[p].push_back(c.label);
    }
  for (std::size_t p = 0; p < cw.boundaries.size(); ++p)
    fc.boundaries.push_back(p == 0 ? GroupAlgebraMatrix(fc.group, 0, cw.cells[0].size()) : q.push_matrix(cw.boundaries[p]));
  return fc;
}

QuotientComplex build_quotient(const FiniteEquivariantComplex& fc, const FiniteSubgroup& fiber, const GroupPtr& h,
                               const std::vector<Element>& h_images) {
  const auto& q = *fc.group;
  if (fiber.parent() != fc.group) fail(ErrorKind::InvalidArgument, "fiber is not a subgroup of the complex's group");
  if (h_images.size() != h->order()) fail(ErrorKind::InvalidArgument, "one image per element of H required");
  for (Element x = 0; x < h->order(); ++x)
    if (!fiber.normalized_by(h_images[x]))
      fail(ErrorKind::HNotNormalizing, "H element " + h->label(x) + " does not normalize the fiber");
  for (std::size_t p = 0; p < fc.stabilizers.size(); ++p)
    for (std::size_t i = 0; i < fc.stabilizers[p].size(); ++i)
      for (auto s : fc.stabilizers[p][i].elements()) {
        if (s == 0) continue;
        for (auto c : q.class_members(q.class_of(s)))
          if (fiber.contains(c))
            fail(ErrorKind::NotFree, "stabilizer of " + fc.labels[p][i] + " meets the fiber: " + q.label(c));
      }

  const std::size_t top = fc.stabilizers.size();
  QuotientComplex qc;
  qc.h = h;
  qc.index = q.order() / fiber.order();
  qc.cells.assign(top, 0);
  qc.labels.resize(top);
  std::vector<std::vector<std::vector<std::uint32_t>>> cell_of(top);
  std::vector<std::vector<std::pair<std::size_t, Element>>> rep(top);
  for (std::size_t p = 0; p < top; ++p) {
    cell_of[p].resize(fc.stabilizers[p].size());
    for (std::size_t i = 0; i < fc.stabilizers[p].size(); ++i) {
      auto& co = cell_of[p][i];
      co.assign(q.order(), kUnset);
      for (Element g = 0; g < q.order(); ++g) {
        if (co[g] != kUnset) continue;
        const auto c = static_cast<std::uint32_t>(qc.cells[p]++);
        rep[p].emplace_back(i, g);
        qc.labels[p].push_back(fc.labels[p][i] + "." + q.label(g));
        for (auto s : fc.stabilizers[p][i].elements()) {
          const Element sg = q.mul(s, g);
          for (auto k : fiber.elements()) co[q.mul(sg, k)] = c;
        }
      }
    }
  }

  qc.boundaries.resize(top);
  qc.boundaries[0] = SparseRationalMatrix(0, qc.cells[0]);
  for (std::size_t p = 1; p < top; ++p) {
    SparseRationalMatrix b(qc.cells[p - 1], qc.cells[p]);
    const auto& a = fc.boundaries[p];
    for (std::size_t c = 0; c < qc.cells[p]; ++c) {
      const auto [j, g] = rep[p][c];
      for (std::size_t i = 0; i < a.rows(); ++i)
        for (const auto& [w, coef] : a.at(i, j)) b.add(cell_of[p - 1][i][q.mul(w, g)], c, coef);
    }
    qc.boundaries[p] = std::move(b);
  }
  for (std::size_t p = 1; p + 1 < top; ++p)
    if (!(qc.boundaries[p] * qc.boundaries[p + 1]).is_zero())
      fail(ErrorKind::NotAComplex, "quotient boundaries do not compose to zero in degree " + std::to_string(p));

  qc.action.resize(top);
  qc.sign.resize(top);
  for (std::size_t p = 0; p < top; ++p) {
    qc.action[p].assign(h->order(), std::vector<std::uint32_t>(qc.cells[p]));
    qc.sign[p].assign(h->order(), std::vector<std::int8_t>(qc.cells[p], 1));
    for (Element x = 0; x < h->order(); ++x) {
      const Element inv = q.inv(h_images[x]);
      for (std::size_t c = 0; c < qc.cells[p]; ++c) {
        const auto [i, g] = rep[p][c];
        qc.action[p][x][c] = cell_of[p][i][q.mul(g, inv)];
      }
    }
  }
  return qc;
}

QuotientComplex quotient_complex(const EquivariantCWData& cw, const FiniteIndexSubgroup& gamma,
                                 const BuiltinFiniteSubgroup& h) {
  const auto& q = *gamma.quotient();
  FiniteEquivariantComplex fc = push_complex(cw, q);
  for (std::size_t p = 0; p < cw.cells.size(); ++p)
    for (std::size_t i = 0; i < cw.cells[p].size(); ++i) {
      const auto order = finite_subgroup(cw.group, cw.cells[p][i].stabilizer).group->order();
      if (fc.stabilizers[p][i].order() != order)
        fail(ErrorKind::NotFree, "stabilizer of " + cw.cells[p][i].label + " does not embed into the quotient");
    }
  std::vector<Element> images;
  for (const auto& w : h.words) images.push_back(q.evaluate(w));
  return build_quotient(fc, gamma.fiber(), h.group, images);
}

long QuotientComplex::euler_characteristic() const {
  long e = 0;
  for (std::size_t p = 0; p < cells.size(); ++p) e += (p % 2 == 0 ? 1 : -1) * static_cast<long>(cells[p]);
  return e;
}

SparseRationalMatrix QuotientComplex::action_matrix(std::size_t p, Element x) const {
  SparseRationalMatrix m(cells[p], cells[p]);
  for (std::size_t c = 0; c < cells[p]; ++c) m.add(action[p][x][c], c, sign[p][x][c]);
  return m;
}

std::string QuotientComplex::check_invariants() const {
  for (std::size_t p = 1; p + 1 < cells.size(); ++p)
    if (!(boundaries[p] * boundaries[p + 1]).is_zero()) return "boundaries do not compose to zero in degree " + std::to_string(p);
  for (std::size_t p = 0; p < cells.size(); ++p)
    for (Element x = 0; x < h->order(); ++x) {
      std::vector<bool> hit(cells[p], false);
      for (std::size_t c = 0; c < cells[p]; ++c) {
        if (hit[action[p][x][c]]) return "action is not a permutation";
        hit[action[p][x][c]] = true;
        if (sign[p][x][c] != 1 && sign[p][x][c] != -1) return "action signs must be +-1";
      }
      if (p > 0 && !(boundaries[p] * action_matrix(p, x) == action_matrix(p - 1, x) * boundaries[p]))
        return "action does not commute with the boundary in degree " + std::to_string(p);
      for (auto s : h->generators()) {
        const Element xs = h->mul(x, s);
        if (!(action_matrix(p, x) * action_matrix(p, s) == action_matrix(p, xs))) return "action is not a homomorphism";
      }
    }
  return "";
}

std::vector<std::size_t> homology(const QuotientComplex& qc) { return betti_of(qc.cells, qc.boundaries); }

namespace {

/// Fixed-subcomplex Betti numbers, memoized per element of H.
class FixedBettiCache {
 public:
  explicit FixedBettiCache(const QuotientComplex& qc) : qc_(qc) {}
  const std::vector<std::size_t>& operator()(Element x) {
    auto it = cache_.find(x);
    if (it == cache_.end()) it = cache_.emplace(x, x == 0 ? homology(qc_) : fixed_betti(qc_, x)).first;
    return it->second;
  }

 private:
  const QuotientComplex& qc_;
  std::map<Element, std::vector<std::size_t>> cache_;
};

std::vector<Rational> traces_with(const QuotientComplex& qc, Element x, FixedBettiCache& fixed) {
  const std::size_t n = qc.h->element_order(x);
  std::vector<Rational> tr(qc.cells.size(), Rational(0));
  for (auto d : divisors(n)) {
    std::vector<long> a(qc.cells.size(), 0);
    for (auto e : divisors(d)) {
      const auto& f = fixed(qc.h->pow(x, static_cast<long long>(e)));
      for (std::size_t p = 0; p < a.size(); ++p) a[p] += mobius(d / e) * static_cast<long>(f[p]);
    }
    for (std::size_t p = 0; p < a.size(); ++p) tr[p] += Rational(a[p] * mobius(d), euler_phi(d));
  }
  for (auto& t : tr) t.canonicalize();
  return tr;
}

}  // namespace

std::vector<Rational> action_traces(const QuotientComplex& qc, Element x) {
  FixedBettiCache fixed(qc);
  return traces_with(qc, x, fixed);
}

Rational action_trace(const QuotientComplex& qc, Element x, std::size_t p) { return action_traces(qc, x).at(p); }

double action_trace_hodge(const QuotientComplex& qc, Element x, std::size_t p) {
  const auto n = static_cast<long>(qc.cells[p]);
  if (n == 0) return 0;
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  if (p >= 1) {
    const Eigen::MatrixXd d = dense(qc.boundaries[p]);
    lap += d.transpose() * d;
  }
  if (p + 1 < qc.cells.size()) {
    const Eigen::MatrixXd d = dense(qc.boundaries[p + 1]);
    lap += d * d.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(lap);
  const auto& ev = es.eigenvalues();
  const double tol = 1e-8 * (1.0 + ev.cwiseAbs().maxCoeff());
  Eigen::MatrixXd proj = Eigen::MatrixXd::Zero(n, n);
  for (long k = 0; k < n; ++k)
    if (std::abs(ev(k)) < tol) proj += es.eigenvectors().col(k) * es.eigenvectors().col(k).transpose();
  double tr = 0;
  for (long c = 0; c < n; ++c)
    tr += qc.sign[p][x][static_cast<std::size_t>(c)] * proj(c, static_cast<long>(qc.action[p][x][static_cast<std::size_t>(c)]));
  return tr;
}

namespace {

long multiplicity_from_traces(const FiniteGroup& h, const std::vector<Rational>& class_traces,
                              const OrdinaryCharacter& chi) {
  Complex m = 0;
  for (std::size_t k = 0; k < h.class_count(); ++k)
    m += static_cast<double>(h.class_size(k)) * std::conj(chi.at_class(k)) * to_double(class_traces[k]);
  m /= static_cast<double>(h.order());
  const double r = std::round(m.real());
  if (std::abs(m - Complex(r)) > 1e-6) fail(ErrorKind::NotIntegral, "multiplicity " + std::to_string(m.real()) + " is not an integer");
  return static_cast<long>(r);
}

/// class_traces(qc)[p][k]: trace of the k-th class representative on H_p.
std::vector<std::vector<Rational>> class_traces(const QuotientComplex& qc) {
  FixedBettiCache fixed(qc);
  std::vector<std::vector<Rational>> t(qc.cells.size());
  for (std::size_t k = 0; k < qc.h->class_count(); ++k) {
    const auto tr = traces_with(qc, qc.h->class_rep(k), fixed);
    for (std::size_t p = 0; p < t.size(); ++p) t[p].push_back(tr[p]);
  }
  return t;
}

}  // namespace

HomologyReport multiplicities(const QuotientComplex& qc, const CharacterTable& table) {
  if (table.group() != qc.h) fail(ErrorKind::InvalidArgument, "character table is for another group");
  HomologyReport rep;
  rep.betti = homology(qc);
  const auto ct = class_traces(qc);
  for (std::size_t p = 0; p < qc.cells.size(); ++p) {
    const auto& t = ct[p];
    if (t[0] != static_cast<long>(rep.betti[p])) fail(ErrorKind::CrossCheckFailed, "trace of the identity differs from the Betti number");
    std::vector<long> m;
    for (const auto& chi : table.characters()) m.push_back(multiplicity_from_traces(*qc.h, t, chi));
    rep.multiplicity.push_back(std::move(m));
    std::vector<Rational> all(qc.h->order());
    for (Element x = 0; x < qc.h->order(); ++x) all[x] = t[qc.h->class_of(x)];
    rep.traces.push_back(std::move(all));
  }
  return rep;
}

std::vector<CrosscheckReport> finite_group_crosscheck(const FiniteEquivariantComplex& fc, const FiniteSubgroup& h,
                                                      const OrdinaryCharacter& chi) {
  if (h.parent() != fc.group || chi.group() != h.abstract_group())
    fail(ErrorKind::InvalidArgument, "subgroup or character does not match the complex");
  std::vector<Element> images(h.order());
  for (Element x = 0; x < h.order(); ++x) images[x] = h.embed(x);
  const QuotientComplex qc = build_quotient(fc, FiniteSubgroup::trivial(fc.group), h.abstract_group(), images);
  const FiniteRep rho = induced_rep(h, FiniteRep::irreducible(chi));
  const double deg = chi.degree().real();
  const auto ct = class_traces(qc);
  std::vector<CrosscheckReport> out;
  for (std::size_t p = 0; p < fc.stabilizers.size(); ++p) {
    CrosscheckReport r;
    r.p = p;
    r.l2_side = deg / static_cast<double>(h.order()) * phi_betti(fc.phi_betti_input(p), rho).numeric;
    r.homology_side = static_cast<double>(multiplicity_from_traces(*qc.h, ct[p], chi)) /
                      static_cast<double>(fc.group->order());
    r.ok = std::abs(r.l2_side - r.homology_side) <= 1e-7;
    if (!r.ok)
      fail(ErrorKind::CrossCheckFailed, "degree " + std::to_string(p) + ": L2 side " + std::to_string(r.l2_side) +
                                            ", homology side " + std::to_string(r.homology_side));
    out.push_back(r);
  }
  return out;
}

void write_boundary_csv(const QuotientComplex& qc, std::size_t p, std::ostream& out) {
  out << "row,col,value\n";
  const auto& b = qc.boundaries.at(p);
  for (std::size_t r = 0; r < b.rows(); ++r)
    for (const auto& [c, v] : b.row(r)) out << r << ',' << c << ',' << to_string(v) << '\n';
}

}  // namespace l2mult
