#pragma once

#include <map>
#include <string>
#include <vector>

#include "l2mult/finite_group.hpp"
#include "l2mult/rational.hpp"

namespace l2mult {

/// Element of Q[Q] for a finite group Q.
using AlgebraElement = std::map<Element, Rational>;

void add_term(AlgebraElement& a, Element g, const Rational& c);
AlgebraElement algebra_mul(const FiniteGroup& g, const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement algebra_adjoint(const FiniteGroup& g, const AlgebraElement& a);
/// e_S = (1/|S|) sum_{s in S} s.
AlgebraElement averaging_idempotent(const std::vector<Element>& s);

/// Matrix over Q[Q] for a finite group Q.
class GroupAlgebraMatrix {
 public:
  GroupAlgebraMatrix() = default;
  GroupAlgebraMatrix(GroupPtr group, std::size_t rows, std::size_t cols);
  static GroupAlgebraMatrix identity(GroupPtr group, std::size_t n);

  const GroupPtr& group() const { return group_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  AlgebraElement& at(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const AlgebraElement& at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  GroupAlgebraMatrix operator*(const GroupAlgebraMatrix& o) const;
  GroupAlgebraMatrix operator+(const GroupAlgebraMatrix& o) const;
  GroupAlgebraMatrix adjoint() const;
  GroupAlgebraMatrix power(unsigned k) const;
  Rational sup_norm_bound() const;
  bool is_zero() const;
  /// All coefficients are integers.
  bool is_integral() const;
  bool operator==(const GroupAlgebraMatrix& o) const;

 private:
  GroupPtr group_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<AlgebraElement> entries_;
};

}  // namespace l2mult
