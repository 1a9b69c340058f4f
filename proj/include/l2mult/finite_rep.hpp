/**
 * @file finite_rep.hpp
 * @brief Unitary representations of finite groups in block-monomial form.
 */
#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "l2mult/character_table.hpp"
#include "l2mult/characters.hpp"
#include "l2mult/finite_group.hpp"

namespace l2mult {

using ComplexMatrix = Eigen::MatrixXcd;

/// rho(g) sends block j to block perm(g, j), acting there by a
/// block_dim x block_dim unitary matrix.  Permutation and induced
/// representations are stored this way without expanding to dense form.
class FiniteRep {
 public:
  FiniteRep() = default;

  /// Permutation representation on functions of X; NotAnAction on a bad action.
  static FiniteRep from_action(const GroupAction& action);
  static FiniteRep regular(const GroupPtr& g);
  static FiniteRep trivial(const GroupPtr& g);
  /// Exact for linear characters.  Higher degrees are realized numerically
  /// by splitting the isotypic part of the regular representation.
  static FiniteRep irreducible(const OrdinaryCharacter& chi, std::uint64_t seed = 0x1e4);
  /// Dense unitary matrices, one per element, block_dim = dim.
  static FiniteRep from_matrices(GroupPtr g, std::vector<ComplexMatrix> mats, unsigned arithmetic_degree);

  const GroupPtr& group() const { return group_; }
  std::size_t dim() const { return blocks_ * block_dim_; }
  std::size_t blocks() const { return blocks_; }
  std::size_t block_dim() const { return block_dim_; }
  /// Every rho(g) is a signed permutation matrix.
  bool is_rational() const { return signed_; }
  unsigned arithmetic_degree() const { return degree_; }

  std::uint32_t block_target(Element g, std::size_t j) const { return perm_[g][j]; }
  /// Entry (r, c) of the block sending block j to block_target(g, j).
  Complex block_entry(Element g, std::size_t j, std::size_t r, std::size_t c) const {
    return data_[g][(j * block_dim_ + r) * block_dim_ + c];
  }
  /// +1 or -1; only meaningful when is_rational().
  int sign(Element g, std::size_t j) const { return data_[g][j].real() < 0 ? -1 : 1; }

  ComplexMatrix matrix(Element g) const;
  Complex trace(Element g) const;
  /// Class function g -> trace(rho(g)).
  OrdinaryCharacter character() const;

  /// max |rho(g) rho(h) - rho(gh)| and max |rho(g) rho(g)^* - 1| over
  /// generators g and all h.
  double multiplicativity_defect() const;
  double unitarity_defect() const;

  /// rho composed with alpha: source(alpha) -> group().
  FiniteRep pullback(const GroupHom& alpha) const;

  friend FiniteRep induced_rep(const FiniteSubgroup& h, const FiniteRep& rho_h);

 private:
  GroupPtr group_;
  std::size_t blocks_ = 0;
  std::size_t block_dim_ = 1;
  bool signed_ = false;
  unsigned degree_ = 1;
  std::vector<std::vector<std::uint32_t>> perm_;
  std::vector<std::vector<Complex>> data_;
};

/// Ind_H^Q of a representation of the abstract group of H.  The character
/// is compared against ordinary induction; CharacterMismatch beyond 1e-8.
FiniteRep induced_rep(const FiniteSubgroup& h, const FiniteRep& rho_h);

}  // namespace l2mult
