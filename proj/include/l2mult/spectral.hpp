/**
 * @file spectral.hpp
 * @brief Operators of group-algebra matrices under finite representations:
 * spectral measures, ranks, Fuglede-Kadison determinants, moment and
 * determinant-bound checks, and phi-Betti numbers.
 */
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "l2mult/finite_rep.hpp"
#include "l2mult/group_algebra.hpp"
#include "l2mult/group_ring.hpp"
#include "l2mult/int_linalg.hpp"
#include "l2mult/sparse_rational.hpp"

namespace l2mult {

/// alpha applied coefficientwise.
GroupAlgebraMatrix push_forward(const GroupHom& alpha, const GroupAlgebraMatrix& a);

/// l_A acting on V^cols: block (i, j) is sum_g a_ij(g) rho(g).
ComplexMatrix operator_matrix(const GroupAlgebraMatrix& a, const FiniteRep& rho);

/// Same operator with exact entries; requires rho.is_rational().
SparseRationalMatrix operator_matrix_exact(const GroupAlgebraMatrix& a, const FiniteRep& rho);

/// (1/dim V) trace of operator_matrix(a), read off the character of rho.
Rational normalized_trace_exact(const GroupAlgebraMatrix& a, const FiniteRep& rho);
double normalized_trace(const GroupAlgebraMatrix& a, const FiniteRep& rho);

struct Atom {
  double value = 0;
  std::size_t multiplicity = 0;
};

struct SpectralMeasure {
  /// Ascending by value.
  std::vector<Atom> atoms;
  std::size_t normalizer = 1;
  std::size_t matrix_size = 0;
  /// The zero atom was sized by exact elimination, so every other atom is
  /// nonzero regardless of its magnitude.
  bool exact_zero = false;

  std::size_t total_multiplicity() const;
  /// int t^k dmu = (1/normalizer) sum m_i v_i^k.
  double moment(unsigned k) const;
  /// Mass of the atom at 0, i.e. multiplicity / normalizer, or 0.
  double zero_mass() const;
};

inline constexpr double kAtomTolerance = 1e-7;

/// Eigenvalues of operator_matrix(a, rho) grouped into atoms.  NotHermitian
/// when the operator is not self-adjoint within 1e-9.  For rational reps the
/// zero atom is sized by exact elimination.
SpectralMeasure spectral_measure(const GroupAlgebraMatrix& a, const FiniteRep& rho);

/// Groups sorted eigenvalues; a new atom starts more than `tol` above the
/// first value of the current one.  `exact_nullity`, when given, fixes the
/// multiplicity of the atom at 0.
SpectralMeasure cluster_eigenvalues(std::vector<double> eigenvalues, std::size_t normalizer, std::size_t matrix_size,
                                    std::optional<std::size_t> exact_nullity = std::nullopt,
                                    double tol = kAtomTolerance);

struct RankNullity {
  Rational rank;
  Rational nullity;
  bool exact = false;
};

/// Kernel of operator_matrix on V^cols, normalized by dim V.
RankNullity rank_nullity(const GroupAlgebraMatrix& a, const FiniteRep& rho);

/// Rank of operator_matrix (not normalized); exact for rational reps.
std::size_t operator_rank(const GroupAlgebraMatrix& a, const FiniteRep& rho);

/// (prod over nonzero atoms of |value|^multiplicity)^(1/normalizer); 1 for an
/// empty product.  Atoms within kAtomTolerance of 0 count as zero.
double fk_det(const SpectralMeasure& mu);
double log_fk_det(const SpectralMeasure& mu);

struct MomentRow {
  unsigned k = 0;
  double moment = 0;
  double trace = 0;
  double tolerance = 0;
};

/// Compares moments of the spectral measure with normalized traces of
/// powers of `a`; MomentMismatch (level k) on the first failure.
std::vector<MomentRow> moments_check(const GroupAlgebraMatrix& a, const FiniteRep& rho, unsigned kmax);

struct LuckReport {
  double det = 0;
  double log_det = 0;
  /// c_A^{-(d-1) n}, as its logarithm.
  double log_bound = 0;
  bool bound_ok = false;
  /// Present for rational reps with d = 1: exact product of the nonzero
  /// eigenvalues of the operator, i.e. the expected value of det^{dim V}.
  std::optional<Integer> exact_det_power;
  /// |dim V * log det - log exact|, when the exact value is present.
  double integrality_error = 0;
  bool integrality_ok = true;
};

/// Determinant lower bound for integral positive `a`.  BoundViolated if
/// det < c_A^{-(d-1)n}, or, when checked, det^{dim V} differs from the exact
/// integer by more than 1e-6 in log scale.
LuckReport luck_bound_check(const GroupAlgebraMatrix& a, const FiniteRep& rho, unsigned d);

/// Integer form of operator_matrix for integral `a` and rational rho.
IntMatrix operator_matrix_integer(const GroupAlgebraMatrix& a, const FiniteRep& rho);

/// Action of a built-in group on the points 0..n-1: `images[i][x]` is the
/// image of x under generator i.  Free groups accept any permutations; free
/// abelian images must commute and infinite dihedral ones must satisfy
/// s^2 = (ts)^2 = 1.  Free-by-finite groups are not supported.
struct PointAction {
  BuiltinPtr group;
  std::vector<std::vector<std::uint32_t>> images;

  /// InvalidArgument or UnsupportedFamily.
  void validate() const;
  std::size_t points() const { return images.empty() ? 0 : images.front().size(); }
  /// w . x, with the rightmost letter acting first.
  std::uint32_t apply(const Letters& w, std::uint32_t x) const;
};

/// Integer operator of `a` on Z[points]^rows; entry g sends e_x to e_{g.x}.
IntMatrix operator_matrix_integer(const GroupRingMatrix& a, const PointAction& act);

/// Determinant bound and det^n integrality (n = number of points) for an
/// integral self-adjoint `a` acting through `act`.  Same tolerances and
/// errors as the finite-group version with d = 1.
LuckReport luck_bound_check(const GroupRingMatrix& a, const PointAction& act);

/// Cells of one degree: stabilizer subgroups as element lists.
struct CellStabilizers {
  std::vector<std::vector<Element>> stabilizers;
};

/// e_{S_i} a_ij e_{S_j}.
GroupAlgebraMatrix compress(const GroupAlgebraMatrix& a, const CellStabilizers& rows, const CellStabilizers& cols);

/// Diagonal matrix of stabilizer idempotents.
GroupAlgebraMatrix idempotent_matrix(const GroupPtr& g, const CellStabilizers& cells);

struct PhiBettiInput {
  /// Boundary from degree p to p-1; rows index (p-1)-cells.  May have zero
  /// rows for p = 0.
  GroupAlgebraMatrix boundary_p;
  /// Boundary from degree p+1 to p.  May have zero columns at the top.
  GroupAlgebraMatrix boundary_p1;
  CellStabilizers cells_pm1, cells_p, cells_p1;
};

struct PhiBetti {
  Rational value;
  bool exact = false;
  double numeric = 0;
};

/// null(compressed boundary_p on the image of P_p) - rank(compressed
/// boundary_p1), all normalized by dim V.  NotAComplex unless the compressed
/// boundaries compose to zero.
PhiBetti phi_betti(const PhiBettiInput& in, const FiniteRep& rho);

}  // namespace l2mult
