#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "l2mult/finite_group.hpp"

namespace l2mult {

using Complex = std::complex<double>;

/// Class function given by its values on conjugacy classes (class order of
/// the group).  Degree is the value at the identity class.
class OrdinaryCharacter {
 public:
  OrdinaryCharacter() = default;
  OrdinaryCharacter(GroupPtr group, std::vector<Complex> class_values);

  const GroupPtr& group() const { return group_; }
  Complex operator()(Element g) const { return values_[group_->class_of(g)]; }
  Complex at_class(std::size_t k) const { return values_[k]; }
  const std::vector<Complex>& values() const { return values_; }
  Complex degree() const { return values_[0]; }
  long degree_int() const;

 private:
  GroupPtr group_;
  std::vector<Complex> values_;
};

/// Irreducible characters via Burnside-Dixon: eigenvectors of a random
/// combination of class-multiplication matrices.  Row 0 is the trivial
/// character; the rest are sorted by degree, then by values.
class CharacterTable {
 public:
  static constexpr std::size_t kOrderCap = 2000;

  static CharacterTable compute(GroupPtr group, std::uint64_t seed = 0x5eedull);

  const GroupPtr& group() const { return group_; }
  std::size_t size() const { return chars_.size(); }
  const OrdinaryCharacter& operator[](std::size_t i) const { return chars_[i]; }
  const std::vector<OrdinaryCharacter>& characters() const { return chars_; }

 private:
  GroupPtr group_;
  std::vector<OrdinaryCharacter> chars_;
};

/// (1/|G|) sum_g a(g) conj(b(g)).
Complex inner_product(const OrdinaryCharacter& a, const OrdinaryCharacter& b);

/// <theta, chi> rounded to an integer; NotIntegral when the value is more
/// than 1e-6 from an integer.
long multiplicity(const OrdinaryCharacter& chi, const OrdinaryCharacter& theta);

/// chi lives on `h.abstract_group()`; result lives on `h.parent()`.
OrdinaryCharacter induce_ordinary(const FiniteSubgroup& h, const OrdinaryCharacter& chi);
OrdinaryCharacter restrict_to(const OrdinaryCharacter& theta, const FiniteSubgroup& h);

struct FrobeniusReport {
  long induced_side = 0;    // m(Ind chi, theta)
  long restricted_side = 0; // m(chi, Res theta)
  bool ok = false;
};

FrobeniusReport frobenius_check(const FiniteSubgroup& h, const OrdinaryCharacter& chi,
                                const OrdinaryCharacter& theta);

}  // namespace l2mult
