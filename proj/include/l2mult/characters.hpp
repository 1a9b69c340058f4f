/**
 * @file characters.hpp
 * @brief Characters of finite quotients, biset characters psi(g, h) and
 * induction through them, plus reference values on the infinite groups.
 */
#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "l2mult/character_table.hpp"
#include "l2mult/quotient.hpp"
#include "l2mult/rational.hpp"
#include "l2mult/word_group.hpp"

namespace l2mult {

/// Class function on a finite group, values per conjugacy class.  When
/// `normalized()` holds the value at the identity is 1.
class FiniteCharacter {
 public:
  FiniteCharacter() = default;
  FiniteCharacter(GroupPtr group, std::vector<Complex> class_values, bool normalized);
  static FiniteCharacter from_ordinary(const OrdinaryCharacter& chi, bool normalize);

  const GroupPtr& group() const { return group_; }
  Complex operator()(Element g) const { return values_[group_->class_of(g)]; }
  Complex at_class(std::size_t k) const { return values_[k]; }
  const std::vector<Complex>& values() const { return values_; }
  bool normalized() const { return normalized_; }
  FiniteCharacter normalize() const;

  /// Gram matrix [phi(g_i^{-1} g_j)] on a random sample is positive
  /// semidefinite up to 1e-8.
  bool positive_type_spot_check(std::mt19937_64& rng, std::size_t sample = 12) const;

 private:
  GroupPtr group_;
  std::vector<Complex> values_;
  bool normalized_ = false;
};

/// Left action of a finite group on {0, ..., points-1}.
struct GroupAction {
  GroupPtr group;
  std::size_t points = 0;
  /// image[g][x] = g . x
  std::vector<std::vector<std::uint32_t>> image;

  static GroupAction regular(const GroupPtr& g);
  static GroupAction trivial(const GroupPtr& g);
  /// Action on left cosets qK by left multiplication.
  static GroupAction on_left_cosets(const FiniteSubgroup& k);
  /// Throws NotAnAction unless (g s).x = g.(s.x) for all g, generators s
  /// and points x, and the identity acts trivially.
  void validate() const;
};

/// Normalized permutation character: fixed points / |X|.
FiniteCharacter perm_character(const GroupAction& action);

/// psi(g, h) for g in a finite group Q and h in a finite group H mapped
/// into Q.  Values are stored per (Q class, h).
struct BisetCharacter {
  GroupPtr q;
  GroupPtr h;
  std::vector<Element> h_image;
  std::vector<std::vector<Rational>> values;

  const Rational& value(Element g, Element hh) const { return values[q->class_of(g)][hh]; }
};

/// i(g, h) = 1/[Q : C_Q(h)] when g ~ h in Q, else 0, for H <= Q.
BisetCharacter i_finite(const FiniteSubgroup& h);

/// sum_h psi(g,h) phi(h) / sum_h psi(1,h) phi(h); CannotInduce when the
/// denominator is below 1e-10 in absolute value.
FiniteCharacter induce_via(const BisetCharacter& psi, const OrdinaryCharacter& phi);

/// Normalized induced character, computed through `i_finite` and through
/// ordinary induction; CrossCheckFailed if they differ by more than 1e-9.
FiniteCharacter ind_finite(const FiniteSubgroup& h, const OrdinaryCharacter& chi);

/// psi_Gamma(g, h) = |{fK in Q/K : f^{-1} g f in hK}| / [Q : K] for the
/// finite subgroup H of G acting through its image in Q = G/N.
/// HNotNormalizing unless every image of H normalizes K.
BisetCharacter biset_character(const FiniteIndexSubgroup& gamma, const BuiltinFiniteSubgroup& h);

/// i_G(g, h) on the infinite group.  For free-by-finite groups the value is
/// only available when every nontrivial h has infinite conjugacy class,
/// which the caller asserts; otherwise UnsupportedFamily.
Rational limit_biset_value(const BuiltinPtr& g, const Word& x, const Word& h, bool infinite_centralizers_asserted);

enum class LimitKind { Regular, Trivial, CirclePoint, InducedFromFinite };

struct LimitCharacterSpec {
  LimitKind kind = LimitKind::Regular;
  BuiltinPtr group;
  /// CirclePoint: character of Z sending the generator to z.
  Complex z = 1.0;
  /// InducedFromFinite: the finite subgroup and an irreducible character
  /// of its abstract group.
  std::optional<BuiltinFiniteSubgroup> h;
  OrdinaryCharacter chi;
  bool infinite_centralizers_asserted = false;

  static LimitCharacterSpec regular(BuiltinPtr g);
  static LimitCharacterSpec trivial(BuiltinPtr g);
  static LimitCharacterSpec circle_point(BuiltinPtr g, Complex z);
  static LimitCharacterSpec induced_from_finite(BuiltinPtr g, BuiltinFiniteSubgroup h, OrdinaryCharacter chi,
                                                bool infinite_centralizers_asserted);
};

Complex limit_value(const LimitCharacterSpec& spec, const Word& w);

struct ConvergenceRow {
  std::size_t level = 0;
  std::string word;
  Complex value;
  Complex limit;
  double deviation = 0;
};

/// |phi_n(image of w) - limit(w)| for every level and probe word; `phi`
/// supplies the character at each level.
std::vector<ConvergenceRow> convergence_report(const QuotientChain& chain, const LimitCharacterSpec& spec,
                                               const std::vector<Word>& probes,
                                               const std::function<FiniteCharacter(std::size_t)>& phi);

}  // namespace l2mult
