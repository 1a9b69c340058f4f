/**
 * @file quotient.hpp
 * @brief Finite quotients of built-in groups and chains of finite-index
 * subgroups.
 *
 * A finite-index subgroup is presented as the preimage of a subgroup K (the
 * fiber) under a surjection G -> Q onto a finite group.
 */
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "l2mult/finite_group.hpp"
#include "l2mult/group_algebra.hpp"
#include "l2mult/group_ring.hpp"
#include "l2mult/word_group.hpp"

namespace l2mult {

class QuotientMap {
 public:
  /// One image per generator of `source`.  Checks the defining relations of
  /// the family and surjectivity.
  QuotientMap(BuiltinPtr source, GroupPtr target, std::vector<Element> gen_images);

  const BuiltinPtr& source() const { return source_; }
  const GroupPtr& target() const { return target_; }
  const std::vector<Element>& images() const { return images_; }

  Element evaluate(const Letters& w) const;
  Element evaluate(const Word& w) const { return evaluate(w.letters()); }
  AlgebraElement push(const GroupRingElement& a) const;
  GroupAlgebraMatrix push_matrix(const GroupRingMatrix& a) const;

 private:
  BuiltinPtr source_;
  GroupPtr target_;
  std::vector<Element> images_;
  std::vector<Element> inverse_images_;
};

using QuotientPtr = std::shared_ptr<const QuotientMap>;

/// Preimage of `fiber` under `quotient`.
class FiniteIndexSubgroup {
 public:
  FiniteIndexSubgroup(QuotientPtr quotient, FiniteSubgroup fiber);
  /// Kernel of the quotient map.
  static FiniteIndexSubgroup kernel(QuotientPtr quotient);

  const QuotientPtr& quotient() const { return quotient_; }
  const GroupPtr& target() const { return quotient_->target(); }
  const FiniteSubgroup& fiber() const { return fiber_; }
  std::size_t index() const { return fiber_.index(); }
  bool is_normal() const { return fiber_.is_normal(); }
  bool contains(const Word& w) const { return fiber_.contains(quotient_->evaluate(w)); }

 private:
  QuotientPtr quotient_;
  FiniteSubgroup fiber_;
};

/// Decreasing chain Gamma_1 > Gamma_2 > ... with connecting maps
/// Q_{n+1} -> Q_n compatible with the projections.
class QuotientChain {
 public:
  /// Derives the connecting maps; throws ChainBroken(level) when
  /// Q_{n+1} -> Q_n is not well defined or Gamma_{n+1} is not inside Gamma_n.
  explicit QuotientChain(std::vector<FiniteIndexSubgroup> levels);

  const BuiltinPtr& group() const { return levels_.front().quotient()->source(); }
  std::size_t size() const { return levels_.size(); }
  const FiniteIndexSubgroup& level(std::size_t n) const { return levels_[n]; }
  const std::vector<FiniteIndexSubgroup>& levels() const { return levels_; }
  /// Map Q_{n+1} -> Q_n.
  const GroupHom& connector(std::size_t n) const { return connectors_[n]; }

 private:
  std::vector<FiniteIndexSubgroup> levels_;
  std::vector<GroupHom> connectors_;
};

struct LevelCheck {
  std::size_t index = 0;
  bool normal = false;
  /// Largest L such that no nontrivial element of word length <= L lies in
  /// the level; `radius_exhausted` is set when the search hit its limit.
  std::size_t residual_length = 0;
  bool radius_exhausted = false;
};

struct ChainValidation {
  std::vector<LevelCheck> levels;
  bool indices_increasing = true;
};

/// Connector and containment checks happen at construction; this adds the
/// per-level diagnostics.
ChainValidation validate_chain(const QuotientChain& chain, std::size_t max_radius = 10,
                               std::size_t max_ball = 200000);

/// Homomorphism between finite groups given on a generating list of the
/// source; nullopt when not well defined.
std::optional<GroupHom> hom_from_generating_images(GroupPtr source, GroupPtr target,
                                                   const std::vector<Element>& source_gens,
                                                   const std::vector<Element>& target_images,
                                                   std::size_t* bad_index = nullptr);

namespace chains {

/// Z -> Z/N for each N.
QuotientChain cyclic(const std::vector<std::size_t>& moduli);

enum class DihedralFiber { Kernel, Reflection };

/// D_infinity -> dihedral(2m); fiber trivial (normal chain m Z) or the
/// reflection subgroup <s> (non-normal chain m Z semidirect <s>).
QuotientChain dihedral(const std::vector<std::size_t>& ms, DihedralFiber fiber);

/// Free, free abelian or free-by-finite group onto (Z/N)^r (semidirect H),
/// kernel levels.
QuotientChain abelianized_mod(const BuiltinPtr& g, const std::vector<std::size_t>& moduli);

/// The quotient map used by `abelianized_mod` at a single modulus.
QuotientPtr abelianized_mod_quotient(const BuiltinPtr& g, std::size_t modulus);

}  // namespace chains

}  // namespace l2mult
