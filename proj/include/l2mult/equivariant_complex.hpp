/**
 * @file equivariant_complex.hpp
 * @brief Equivariant cellular chain complexes, their finite quotients with
 * the residual H-action, exact homology, traces and multiplicities.
 *
 * Cells of degree p form orbits G/S_i.  The orbit of cell i is modelled as
 * the permutation module Q[S_i \ G] with G acting on the right, so the
 * geometric cell g.c_i is the coset S_i g^{-1}.  A boundary entry (i, j) is
 * a sum of c * w with d(S_j g) = sum c S_i w g.
 */
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "l2mult/character_table.hpp"
#include "l2mult/group_algebra.hpp"
#include "l2mult/group_ring.hpp"
#include "l2mult/quotient.hpp"
#include "l2mult/sparse_rational.hpp"
#include "l2mult/spectral.hpp"

namespace l2mult {

struct OrbitCell {
  std::string label;
  /// Generators of the (finite) stabilizer.
  std::vector<Word> stabilizer;
};

struct EquivariantCWData {
  BuiltinPtr group;
  /// cells[p] lists the orbits of p-cells.
  std::vector<std::vector<OrbitCell>> cells;
  /// boundaries[p] maps degree p to p-1 (rows: (p-1)-orbits); entry 0 is
  /// an empty 0 x cells[0] matrix.
  std::vector<GroupRingMatrix> boundaries;

  std::size_t dimension() const { return cells.empty() ? 0 : cells.size() - 1; }

  /// Stabilizers are finite (closure cap 10000) and every boundary entry is
  /// invariant under right multiplication by the source stabilizer.
  /// InvalidArgument otherwise.
  void validate() const;
  /// sum_p (-1)^p sum_i 1/|S_i|.
  Rational orbifold_euler() const;

  static EquivariantCWData line_Z();
  static EquivariantCWData line_Dinf();
  static EquivariantCWData rose_free(std::size_t r);
  /// Barycentric subdivision of the Cayley tree of F_r, acted on by
  /// F_r semidirect H.  UnsupportedFamily unless the H action permutes the
  /// free generators up to inversion.
  static EquivariantCWData tree_free_by_finite(const BuiltinPtr& g);
  static EquivariantCWData tree_free_by_finite(std::size_t r, const GroupPtr& h,
                                               const std::vector<std::vector<int>>& signed_images);

  /// {"group": ..., "cells": [[{"label", "stabilizer": [words]}...]...],
  ///  "boundaries": [[], [[entry, ...] per row], ...]}, or {"builtin": name}
  /// with name one of line_Z, line_Dinf, rose_free(r), tree_free_by_finite
  /// (the latter two reading "rank" / "group").  A non-null `group`
  /// replaces the "group" entry, so words resolve in a group shared with
  /// other objects.
  static EquivariantCWData from_json(const nlohmann::json& j, const BuiltinPtr& group = nullptr);
  nlohmann::json to_json(const std::string& h_spec = "") const;
};

/// Complex of permutation modules Q[S_i \ Q] over a finite group Q.
struct FiniteEquivariantComplex {
  GroupPtr group;
  std::vector<std::vector<FiniteSubgroup>> stabilizers;
  std::vector<std::vector<std::string>> labels;
  /// Same layout as EquivariantCWData::boundaries.
  std::vector<GroupAlgebraMatrix> boundaries;

  std::size_t dimension() const { return stabilizers.empty() ? 0 : stabilizers.size() - 1; }
  /// Boundaries and stabilizers around degree p for phi_betti.
  PhiBettiInput phi_betti_input(std::size_t p) const;
};

/// Pushes the complex through a quotient map; stabilizers map to their images.
FiniteEquivariantComplex push_complex(const EquivariantCWData& cw, const QuotientMap& q);

struct QuotientComplex {
  std::vector<std::size_t> cells;
  /// Minimal double coset representative, "<orbit label>.<element label>".
  std::vector<std::vector<std::string>> labels;
  /// boundaries[p]: cells[p-1] x cells[p]; boundaries[0] has no rows.
  std::vector<SparseRationalMatrix> boundaries;
  GroupPtr h;
  /// action[p][x][c], sign[p][x][c]: element x of h sends cell c to
  /// sign * cell action[p][x][c].
  std::vector<std::vector<std::vector<std::uint32_t>>> action;
  std::vector<std::vector<std::vector<std::int8_t>>> sign;
  /// |Q| / |K|, the index of Gamma in G.
  std::size_t index = 1;

  std::size_t dimension() const { return cells.empty() ? 0 : cells.size() - 1; }
  long euler_characteristic() const;
  SparseRationalMatrix action_matrix(std::size_t p, Element x) const;
  /// Boundaries compose to zero, every action matrix is a signed
  /// permutation commuting with the boundaries, and the action is a
  /// homomorphism.  Returns a description of the first violation, or "".
  std::string check_invariants() const;
};

/// Cells S_i \ Q / K for the fiber K, with H (given by images in Q) acting
/// by h.(S q K) = S q h^{-1} K.  NotFree if a conjugate of a nontrivial
/// stabilizer element lies in K; HNotNormalizing if an image of H does not
/// normalize K; NotAComplex if the boundaries do not compose to zero.
QuotientComplex build_quotient(const FiniteEquivariantComplex& fc, const FiniteSubgroup& fiber, const GroupPtr& h,
                               const std::vector<Element>& h_images);

/// X / Gamma with the action of the finite subgroup H of G.  Stabilizers
/// that do not embed into Q also raise NotFree.
QuotientComplex quotient_complex(const EquivariantCWData& cw, const FiniteIndexSubgroup& gamma,
                                 const BuiltinFiniteSubgroup& h);

/// b_p = dim C_p - rank d_p - rank d_{p+1}.
std::vector<std::size_t> homology(const QuotientComplex& qc);

/// Exact Tr(x | H_p), from the dimensions of the invariants of the cyclic
/// subgroups <x^e> (homology of the fixed subcomplexes) by Moebius inversion.
Rational action_trace(const QuotientComplex& qc, Element x, std::size_t p);
/// The same for every degree at once.
std::vector<Rational> action_traces(const QuotientComplex& qc, Element x);

/// Tr(P A_x) with P the orthogonal projection onto harmonic p-chains;
/// dense, for cross-checking.
double action_trace_hodge(const QuotientComplex& qc, Element x, std::size_t p);

struct HomologyReport {
  std::vector<std::size_t> betti;
  /// multiplicity[p][k] for the k-th irreducible of the table.
  std::vector<std::vector<long>> multiplicity;
  /// traces[p][x] for every element x of H.
  std::vector<std::vector<Rational>> traces;
};

/// m(chi, H_p) = (1/|H|) sum_x conj(chi(x)) Tr(x | H_p); NotIntegral if
/// the value is more than 1e-6 from an integer.
HomologyReport multiplicities(const QuotientComplex& qc, const CharacterTable& table);

struct CrosscheckReport {
  std::size_t p = 0;
  /// (chi(1)/|H|) * b^phi_p with phi = Ind_H^G chi, normalized.
  double l2_side = 0;
  /// m(chi, H_p(C)|_H) / |G|.
  double homology_side = 0;
  bool ok = false;
};

/// Both sides for every degree; CrossCheckFailed when they differ by more
/// than 1e-7.
std::vector<CrosscheckReport> finite_group_crosscheck(const FiniteEquivariantComplex& fc, const FiniteSubgroup& h,
                                                      const OrdinaryCharacter& chi);

/// One line "row,col,value" per nonzero entry of boundaries[p].
void write_boundary_csv(const QuotientComplex& qc, std::size_t p, std::ostream& out);

}  // namespace l2mult
