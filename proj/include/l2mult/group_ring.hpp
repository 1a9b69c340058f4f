#pragma once

#include <map>
#include <string>
#include <vector>

#include "l2mult/rational.hpp"
#include "l2mult/word_group.hpp"

namespace l2mult {

/// Finitely supported element of Q[G] for a built-in group G, keyed by
/// normal forms.  Text form: "3/2*ab' + -1*1".
class GroupRingElement {
 public:
  GroupRingElement() = default;
  explicit GroupRingElement(BuiltinPtr group) : group_(std::move(group)) {}
  static GroupRingElement parse(BuiltinPtr group, const std::string& text);
  static GroupRingElement of(const Word& w, const Rational& c = 1);

  const BuiltinPtr& group() const { return group_; }
  const std::map<Letters, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add(const Word& w, const Rational& c);
  GroupRingElement operator+(const GroupRingElement& o) const;
  GroupRingElement operator-(const GroupRingElement& o) const;
  GroupRingElement operator*(const GroupRingElement& o) const;
  GroupRingElement scaled(const Rational& c) const;
  /// sum c_g g  ->  sum c_g g^{-1}.
  GroupRingElement adjoint() const;
  /// sum |c_g|.
  Rational l1_norm() const;
  std::string to_string() const;
  bool operator==(const GroupRingElement& o) const { return terms_ == o.terms_; }

 private:
  void add_letters(const Letters& nf, const Rational& c);
  BuiltinPtr group_;
  std::map<Letters, Rational> terms_;
};

class GroupRingMatrix {
 public:
  GroupRingMatrix() = default;
  GroupRingMatrix(BuiltinPtr group, std::size_t rows, std::size_t cols);
  static GroupRingMatrix parse(BuiltinPtr group, const std::vector<std::vector<std::string>>& entries);
  static GroupRingMatrix identity(BuiltinPtr group, std::size_t n);

  const BuiltinPtr& group() const { return group_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  GroupRingElement& at(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const GroupRingElement& at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  GroupRingMatrix operator*(const GroupRingMatrix& o) const;
  GroupRingMatrix operator+(const GroupRingMatrix& o) const;
  /// Conjugate transpose: entrywise adjoint of the transpose.
  GroupRingMatrix adjoint() const;
  /// sum of |coefficients| over all entries; bounds the operator norm under
  /// every unitary representation.
  Rational sup_norm_bound() const;
  bool is_zero() const;
  bool operator==(const GroupRingMatrix& o) const;
  std::vector<std::vector<std::string>> to_strings() const;

 private:
  BuiltinPtr group_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<GroupRingElement> entries_;
};

}  // namespace l2mult
