#include "l2mult/characters.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "l2mult/error.hpp"

namespace l2mult {

FiniteCharacter::FiniteCharacter(GroupPtr group, std::vector<Complex> class_values, bool normalized)
    : group_(std::move(group)), values_(std::move(class_values)), normalized_(normalized) {
  if (values_.size() != group_->class_count()) fail(ErrorKind::InvalidArgument, "one value per class required");
}

FiniteCharacter FiniteCharacter::from_ordinary(const OrdinaryCharacter& chi, bool normalize) {
  FiniteCharacter f(chi.group(), chi.values(), false);
  return normalize ? f.normalize() : f;
}

FiniteCharacter FiniteCharacter::normalize() const {
  const Complex d = values_[0];
  if (std::abs(d) < 1e-12) fail(ErrorKind::InvalidArgument, "character vanishes at the identity");
  std::vector<Complex> v(values_);
  for (auto& x : v) x /= d;
  return FiniteCharacter(group_, std::move(v), true);
}

bool FiniteCharacter::positive_type_spot_check(std::mt19937_64& rng, std::size_t sample) const {
  std::uniform_int_distribution<Element> pick(0, static_cast<Element>(group_->order() - 1));
  std::vector<Element> xs;
  for (std::size_t i = 0; i < sample; ++i) xs.push_back(pick(rng));
  const auto n = static_cast<Eigen::Index>(sample);
  Eigen::MatrixXcd gram(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      gram(i, j) = (*this)(group_->mul(group_->inv(xs[static_cast<std::size_t>(i)]), xs[static_cast<std::size_t>(j)]));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff() >= -1e-8;
}

GroupAction GroupAction::regular(const GroupPtr& g) {
  GroupAction a;
  a.group = g;
  a.points = g->order();
  a.image.assign(g->order(), std::vector<std::uint32_t>(g->order()));
  for (Element x = 0; x < g->order(); ++x)
    for (Element y = 0; y < g->order(); ++y) a.image[x][y] = g->mul(x, y);
  return a;
}

GroupAction GroupAction::trivial(const GroupPtr& g) {
  GroupAction a;
  a.group = g;
  a.points = 1;
  a.image.assign(g->order(), std::vector<std::uint32_t>{0});
  return a;
}

GroupAction GroupAction::on_left_cosets(const FiniteSubgroup& k) {
  const auto& g = k.parent();
  GroupAction a;
  a.group = g;
  const auto& reps = k.left_coset_reps();
  a.points = reps.size();
  a.image.assign(g->order(), std::vector<std::uint32_t>(reps.size()));
  for (Element x = 0; x < g->order(); ++x)
    for (std::size_t c = 0; c < reps.size(); ++c)
      a.image[x][c] = static_cast<std::uint32_t>(k.left_coset_of(g->mul(x, reps[c])));
  return a;
}

void GroupAction::validate() const {
  if (image.size() != group->order()) fail(ErrorKind::NotAnAction, "one permutation per group element required");
  for (const auto& row : image) {
    if (row.size() != points) fail(ErrorKind::NotAnAction, "permutation has the wrong number of points");
    std::vector<bool> hit(points, false);
    for (auto y : row) {
      if (y >= points || hit[y]) fail(ErrorKind::NotAnAction, "element does not act by a permutation");
      hit[y] = true;
    }
  }
  for (std::size_t x = 0; x < points; ++x)
    if (image[0][x] != x) fail(ErrorKind::NotAnAction, "identity moves a point");
  for (std::size_t k = 0; k < group->generators().size(); ++k) {
    const Element s = group->generators()[k];
    for (Element g = 0; g < group->order(); ++g) {
      const auto& gs = image[group->right_gen(g, k)];
      for (std::size_t x = 0; x < points; ++x)
        if (gs[x] != image[g][image[s][x]])
          fail(ErrorKind::NotAnAction, "(g s).x != g.(s.x) for g=" + group->label(g));
    }
  }
}

FiniteCharacter perm_character(const GroupAction& action) {
  action.validate();
  const auto& g = action.group;
  std::vector<Complex> values(g->class_count());
  for (std::size_t k = 0; k < g->class_count(); ++k) {
    const auto& row = action.image[g->class_rep(k)];
    std::size_t fixed = 0;
    for (std::size_t x = 0; x < action.points; ++x)
      if (row[x] == x) ++fixed;
    values[k] = static_cast<double>(fixed) / static_cast<double>(action.points);
  }
  return FiniteCharacter(g, std::move(values), true);
}

BisetCharacter i_finite(const FiniteSubgroup& h) {
  BisetCharacter psi;
  psi.q = h.parent();
  psi.h = h.abstract_group();
  for (Element x = 0; x < psi.h->order(); ++x) psi.h_image.push_back(h.embed(x));
  const auto& q = *psi.q;
  psi.values.assign(q.class_count(), std::vector<Rational>(psi.h->order(), 0));
  for (Element x = 0; x < psi.h->order(); ++x) {
    const Element hx = psi.h_image[x];
    psi.values[q.class_of(hx)][x] = Rational(1, static_cast<unsigned long>(q.centralizer_index(hx)));
  }
  return psi;
}

FiniteCharacter induce_via(const BisetCharacter& psi, const OrdinaryCharacter& phi) {
  if (phi.group() != psi.h) fail(ErrorKind::InvalidArgument, "character is not on the biset's H");
  const auto& q = *psi.q;
  std::vector<Complex> raw(q.class_count());
  for (std::size_t k = 0; k < q.class_count(); ++k) {
    Complex s = 0;
    for (Element x = 0; x < psi.h->order(); ++x)
      if (psi.values[k][x] != 0) s += to_double(psi.values[k][x]) * phi(x);
    raw[k] = s;
  }
  const Complex den = raw[0];
  if (std::abs(den) < 1e-10) fail(ErrorKind::CannotInduce, "sum_h psi(1,h) phi(h) vanishes");
  for (auto& v : raw) v /= den;
  return FiniteCharacter(psi.q, std::move(raw), true);
}

FiniteCharacter ind_finite(const FiniteSubgroup& h, const OrdinaryCharacter& chi) {
  FiniteCharacter via = induce_via(i_finite(h), chi);
  OrdinaryCharacter ord = induce_ordinary(h, chi);
  const double scale = chi.degree().real() * static_cast<double>(h.index());
  for (std::size_t k = 0; k < via.values().size(); ++k)
    if (std::abs(via.at_class(k) - ord.at_class(k) / scale) > 1e-9)
      fail(ErrorKind::CrossCheckFailed, "induced character routes disagree at class " + std::to_string(k));
  return via;
}

BisetCharacter biset_character(const FiniteIndexSubgroup& gamma, const BuiltinFiniteSubgroup& h) {
  const auto& qmap = *gamma.quotient();
  const auto& q = *gamma.target();
  const auto& k = gamma.fiber();
  BisetCharacter psi;
  psi.q = gamma.target();
  psi.h = h.group;
  for (const auto& w : h.words) psi.h_image.push_back(qmap.evaluate(w));
  for (auto hx : psi.h_image)
    if (!k.normalized_by(hx)) fail(ErrorKind::HNotNormalizing, "image of H does not normalize the fiber");
  const auto& reps = k.left_coset_reps();
  const Rational inv_index(1, static_cast<unsigned long>(reps.size()));
  psi.values.assign(q.class_count(), std::vector<Rational>(psi.h->order(), 0));
  std::vector<Element> h_inv;
  for (auto hx : psi.h_image) h_inv.push_back(q.inv(hx));
  for (std::size_t c = 0; c < q.class_count(); ++c) {
    const Element g = q.class_rep(c);
    std::vector<unsigned long> count(psi.h->order(), 0);
    for (auto f : reps) {
      const Element x = q.mul(q.inv(f), q.mul(g, f));
      for (std::size_t i = 0; i < h_inv.size(); ++i)
        if (k.contains(q.mul(h_inv[i], x))) ++count[i];
    }
    for (std::size_t i = 0; i < count.size(); ++i) psi.values[c][i] = Rational(count[i]) * inv_index;
  }
  return psi;
}

Rational limit_biset_value(const BuiltinPtr& g, const Word& x, const Word& h, bool infinite_centralizers_asserted) {
  switch (g->family()) {
    case Family::Free:
      // Nontrivial elements have infinite conjugacy classes.
      return (x.is_identity() && h.is_identity()) ? Rational(1) : Rational(0);
    case Family::FreeAbelian: return x == h ? Rational(1) : Rational(0);
    case Family::DihedralInfinite: {
      const auto& l = h.letters();
      const bool reflection = !l.empty() && l.back().gen == 1;
      if (reflection) return 0;
      if (h.is_identity()) return x.is_identity() ? 1 : 0;
      // t^k is conjugate to t^k and t^-k only; the centralizer <t> has index 2.
      return (x == h || x == h.inverse()) ? Rational(1, 2) : Rational(0);
    }
    case Family::FreeByFinite:
      if (!infinite_centralizers_asserted)
        fail(ErrorKind::UnsupportedFamily, "centralizer indices in a free-by-finite group need an explicit assertion");
      return (x.is_identity() && h.is_identity()) ? Rational(1) : Rational(0);
  }
  return 0;
}

LimitCharacterSpec LimitCharacterSpec::regular(BuiltinPtr g) {
  LimitCharacterSpec s;
  s.kind = LimitKind::Regular;
  s.group = std::move(g);
  return s;
}

LimitCharacterSpec LimitCharacterSpec::trivial(BuiltinPtr g) {
  LimitCharacterSpec s;
  s.kind = LimitKind::Trivial;
  s.group = std::move(g);
  return s;
}

LimitCharacterSpec LimitCharacterSpec::circle_point(BuiltinPtr g, Complex z) {
  if (g->family() != Family::FreeAbelian || g->rank() != 1)
    fail(ErrorKind::UnsupportedFamily, "circle points are characters of Z");
  LimitCharacterSpec s;
  s.kind = LimitKind::CirclePoint;
  s.group = std::move(g);
  s.z = z;
  return s;
}

LimitCharacterSpec LimitCharacterSpec::induced_from_finite(BuiltinPtr g, BuiltinFiniteSubgroup h, OrdinaryCharacter chi,
                                                           bool infinite_centralizers_asserted) {
  if (chi.group() != h.group) fail(ErrorKind::InvalidArgument, "character does not live on the given subgroup");
  LimitCharacterSpec s;
  s.kind = LimitKind::InducedFromFinite;
  s.group = std::move(g);
  s.h = std::move(h);
  s.chi = std::move(chi);
  s.infinite_centralizers_asserted = infinite_centralizers_asserted;
  return s;
}

Complex limit_value(const LimitCharacterSpec& spec, const Word& w) {
  switch (spec.kind) {
    case LimitKind::Regular: return w.is_identity() ? 1.0 : 0.0;
    case LimitKind::Trivial: return 1.0;
    case LimitKind::CirclePoint: {
      long long k = 0;
      for (const auto& l : w.letters()) k += l.exp;
      return std::pow(spec.z, static_cast<double>(k));
    }
    case LimitKind::InducedFromFinite: {
      const auto& h = *spec.h;
      const double deg = spec.chi.degree().real();
      Complex s = 0;
      for (Element x = 0; x < h.group->order(); ++x) {
        Rational i = limit_biset_value(spec.group, w, h.words[x], spec.infinite_centralizers_asserted);
        if (i != 0) s += to_double(i) * spec.chi(x) / deg;
      }
      return s;
    }
  }
  return 0.0;
}

std::vector<ConvergenceRow> convergence_report(const QuotientChain& chain, const LimitCharacterSpec& spec,
                                               const std::vector<Word>& probes,
                                               const std::function<FiniteCharacter(std::size_t)>& phi) {
  std::vector<ConvergenceRow> rows;
  for (std::size_t n = 0; n < chain.size(); ++n) {
    FiniteCharacter f = phi(n);
    const auto& q = *chain.level(n).quotient();
    for (const auto& w : probes) {
      ConvergenceRow r;
      r.level = n;
      r.word = w.to_string();
      r.value = f(q.evaluate(w));
      r.limit = limit_value(spec, w);
      r.deviation = std::abs(r.value - r.limit);
      rows.push_back(std::move(r));
    }
  }
  return rows;
}

}  // namespace l2mult
