#include "l2mult/quotient.hpp"

#include <set>

#include "l2mult/error.hpp"

namespace l2mult {

std::optional<GroupHom> hom_from_generating_images(GroupPtr source, GroupPtr target,
                                                   const std::vector<Element>& source_gens,
                                                   const std::vector<Element>& target_images,
                                                   std::size_t* bad_index) {
  constexpr Element unset = static_cast<Element>(-1);
  if (source_gens.size() != target_images.size())
    fail(ErrorKind::InvalidArgument, "one image per generating element required");
  std::vector<Element> img(source->order(), unset);
  img[0] = 0;
  std::vector<Element> queue{0};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Element g = queue[head];
    for (std::size_t k = 0; k < source_gens.size(); ++k) {
      const Element h = source->mul(g, source_gens[k]);
      const Element want = target->mul(img[g], target_images[k]);
      if (img[h] == unset) {
        img[h] = want;
        queue.push_back(h);
      } else if (img[h] != want) {
        if (bad_index) *bad_index = k;
        return std::nullopt;
      }
    }
  }
  if (queue.size() != source->order()) fail(ErrorKind::InvalidArgument, "elements do not generate the source group");
  return GroupHom(std::move(source), std::move(target), std::move(img));
}

QuotientMap::QuotientMap(BuiltinPtr source, GroupPtr target, std::vector<Element> gen_images)
    : source_(std::move(source)), target_(std::move(target)), images_(std::move(gen_images)) {
  const auto& q = *target_;
  if (images_.size() != source_->generator_count())
    fail(ErrorKind::InvalidArgument, "quotient map needs one image per generator");
  for (auto x : images_)
    if (x >= q.order()) fail(ErrorKind::InvalidArgument, "generator image out of range");
  for (auto x : images_) inverse_images_.push_back(q.inv(x));

  switch (source_->family()) {
    case Family::Free: break;
    case Family::FreeAbelian:
      for (std::size_t i = 0; i < images_.size(); ++i)
        for (std::size_t j = i + 1; j < images_.size(); ++j)
          if (q.mul(images_[i], images_[j]) != q.mul(images_[j], images_[i]))
            fail(ErrorKind::InvalidArgument, "images of free abelian generators do not commute");
      break;
    case Family::DihedralInfinite: {
      const Element t = images_[0], s = images_[1];
      if (q.mul(s, s) != 0) fail(ErrorKind::InvalidArgument, "image of s is not an involution");
      if (q.mul(s, q.mul(t, s)) != q.inv(t)) fail(ErrorKind::InvalidArgument, "s t s != t^-1 in the quotient");
      break;
    }
    case Family::FreeByFinite: {
      const auto& h = source_->finite_part();
      const std::size_t r = source_->rank();
      std::vector<Element> h_images(images_.begin() + static_cast<long>(r), images_.end());
      if (!hom_from_generating_images(h, target_, h->generators(), h_images))
        fail(ErrorKind::InvalidArgument, "images of the H generators do not define a homomorphism");
      for (std::size_t k = 0; k < h->generators().size(); ++k) {
        const Element hk = h->generators()[k];
        for (std::size_t i = 0; i < r; ++i) {
          const Element lhs = q.mul(h_images[k], q.mul(images_[i], q.inv(h_images[k])));
          if (lhs != evaluate(source_->automorphism(hk, i)))
            fail(ErrorKind::InvalidArgument, "quotient map does not respect the H action");
        }
      }
      break;
    }
  }
  auto sub = FiniteSubgroup::generated(target_, images_);
  if (sub.order() != q.order()) fail(ErrorKind::InvalidArgument, "quotient map is not surjective");
}

Element QuotientMap::evaluate(const Letters& w) const {
  Element x = 0;
  for (const auto& l : w) {
    if (l.gen >= images_.size()) fail(ErrorKind::InvalidArgument, "letter outside the generating set");
    x = target_->mul(x, l.exp > 0 ? images_[l.gen] : inverse_images_[l.gen]);
  }
  return x;
}

AlgebraElement QuotientMap::push(const GroupRingElement& a) const {
  AlgebraElement r;
  for (const auto& [w, c] : a.terms()) add_term(r, evaluate(w), c);
  return r;
}

GroupAlgebraMatrix QuotientMap::push_matrix(const GroupRingMatrix& a) const {
  GroupAlgebraMatrix m(target_, a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m.at(i, j) = push(a.at(i, j));
  return m;
}

FiniteIndexSubgroup::FiniteIndexSubgroup(QuotientPtr quotient, FiniteSubgroup fiber)
    : quotient_(std::move(quotient)), fiber_(std::move(fiber)) {
  if (fiber_.parent() != quotient_->target()) fail(ErrorKind::InvalidArgument, "fiber is not a subgroup of the quotient");
}

FiniteIndexSubgroup FiniteIndexSubgroup::kernel(QuotientPtr quotient) {
  auto fiber = FiniteSubgroup::trivial(quotient->target());
  return FiniteIndexSubgroup(std::move(quotient), std::move(fiber));
}

QuotientChain::QuotientChain(std::vector<FiniteIndexSubgroup> levels) : levels_(std::move(levels)) {
  if (levels_.empty()) fail(ErrorKind::InvalidArgument, "empty chain");
  for (std::size_t n = 0; n + 1 < levels_.size(); ++n) {
    const auto& lo = levels_[n];
    const auto& hi = levels_[n + 1];
    if (lo.quotient()->source() != hi.quotient()->source())
      fail(ErrorKind::ChainBroken, "levels use different groups", static_cast<int>(n));
    std::size_t bad = 0;
    auto hom = hom_from_generating_images(hi.target(), lo.target(), hi.quotient()->images(), lo.quotient()->images(),
                                          &bad);
    if (!hom)
      fail(ErrorKind::ChainBroken,
           "connector Q_" + std::to_string(n + 2) + " -> Q_" + std::to_string(n + 1) + " not well defined at generator " +
               group()->generator_name(bad),
           static_cast<int>(n));
    for (auto k : hi.fiber().elements())
      if (!lo.fiber().contains((*hom)(k)))
        fail(ErrorKind::ChainBroken, "level " + std::to_string(n + 2) + " is not contained in level " + std::to_string(n + 1),
             static_cast<int>(n));
    connectors_.push_back(std::move(*hom));
  }
}

ChainValidation validate_chain(const QuotientChain& chain, std::size_t max_radius, std::size_t max_ball) {
  ChainValidation out;
  const auto& g = chain.group();
  const std::size_t levels = chain.size();
  out.levels.resize(levels);
  std::vector<bool> found(levels, false);
  for (std::size_t n = 0; n < levels; ++n) {
    out.levels[n].index = chain.level(n).index();
    out.levels[n].normal = chain.level(n).is_normal();
    if (n > 0 && out.levels[n].index <= out.levels[n - 1].index) out.indices_increasing = false;
  }
  std::set<Letters> seen{Letters{}};
  std::vector<Letters> frontier{Letters{}};
  std::size_t radius = 0;
  bool exhausted = false;
  while (radius < max_radius) {
    std::vector<Letters> next;
    for (const auto& w : frontier) {
      for (std::uint32_t k = 0; k < g->generator_count(); ++k)
        for (int e : {1, -1}) {
          Letters l = w;
          l.push_back({k, e});
          Letters nf = g->normal_form(l);
          if (seen.insert(nf).second) next.push_back(std::move(nf));
        }
      if (seen.size() > max_ball) {
        exhausted = true;
        break;
      }
    }
    if (exhausted) break;
    ++radius;
    for (std::size_t n = 0; n < levels; ++n) {
      if (found[n]) continue;
      const auto& lvl = chain.level(n);
      for (const auto& w : next)
        if (lvl.fiber().contains(lvl.quotient()->evaluate(w))) {
          found[n] = true;
          out.levels[n].residual_length = radius - 1;
          break;
        }
    }
    frontier = std::move(next);
    if (frontier.empty()) break;
  }
  for (std::size_t n = 0; n < levels; ++n)
    if (!found[n]) {
      out.levels[n].residual_length = radius;
      out.levels[n].radius_exhausted = true;
    }
  return out;
}

namespace chains {

QuotientChain cyclic(const std::vector<std::size_t>& moduli) {
  auto g = BuiltinGroup::free_abelian(1);
  std::vector<FiniteIndexSubgroup> levels;
  for (auto n : moduli) {
    auto q = std::make_shared<const QuotientMap>(g, groups::cyclic(n), std::vector<Element>{n > 1 ? 1u : 0u});
    levels.push_back(FiniteIndexSubgroup::kernel(q));
  }
  return QuotientChain(std::move(levels));
}

QuotientChain dihedral(const std::vector<std::size_t>& ms, DihedralFiber fiber) {
  auto g = BuiltinGroup::dihedral_infinite();
  std::vector<FiniteIndexSubgroup> levels;
  for (auto m : ms) {
    auto target = groups::dihedral(m);
    const Element t = m > 1 ? 1u : 0u;
    const Element s = static_cast<Element>(m);
    auto q = std::make_shared<const QuotientMap>(g, target, std::vector<Element>{t, s});
    if (fiber == DihedralFiber::Kernel)
      levels.push_back(FiniteIndexSubgroup::kernel(q));
    else
      levels.emplace_back(q, FiniteSubgroup::generated(target, {s}));
  }
  return QuotientChain(std::move(levels));
}

QuotientPtr abelianized_mod_quotient(const BuiltinPtr& g, std::size_t modulus) {
  const std::size_t r = g->rank();
  std::vector<Element> images;
  std::size_t scale = 1;
  for (std::size_t i = 0; i < r; ++i) {
    images.push_back(modulus > 1 ? static_cast<Element>(scale) : 0u);
    scale *= modulus;
  }
  switch (g->family()) {
    case Family::Free:
    case Family::FreeAbelian: {
      auto target = groups::abelian(std::vector<std::size_t>(r, modulus));
      return std::make_shared<const QuotientMap>(g, target, images);
    }
    case Family::FreeByFinite: {
      const auto& h = g->finite_part();
      std::vector<std::vector<long long>> action;
      for (Element x = 0; x < h->order(); ++x) action.push_back(g->abelianized_action(x));
      auto target = groups::abelian_semidirect(modulus, r, h, action);
      for (auto k : h->generators()) images.push_back(static_cast<Element>(k * scale));
      return std::make_shared<const QuotientMap>(g, target, images);
    }
    case Family::DihedralInfinite: break;
  }
  fail(ErrorKind::UnsupportedFamily, "abelianized chain needs a free, free abelian or free-by-finite group");
}

QuotientChain abelianized_mod(const BuiltinPtr& g, const std::vector<std::size_t>& moduli) {
  std::vector<FiniteIndexSubgroup> levels;
  for (auto n : moduli) levels.push_back(FiniteIndexSubgroup::kernel(abelianized_mod_quotient(g, n)));
  return QuotientChain(std::move(levels));
}

}  // namespace chains

}  // namespace l2mult
