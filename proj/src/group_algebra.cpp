#include "l2mult/group_algebra.hpp"

#include "l2mult/error.hpp"

namespace l2mult {

void add_term(AlgebraElement& a, Element g, const Rational& c) {
  if (c == 0) return;
  auto it = a.find(g);
  if (it == a.end()) {
    a.emplace(g, c);
  } else {
    it->second += c;
    if (it->second == 0) a.erase(it);
  }
}

AlgebraElement algebra_mul(const FiniteGroup& g, const AlgebraElement& a, const AlgebraElement& b) {
  AlgebraElement r;
  for (const auto& [x, cx] : a)
    for (const auto& [y, cy] : b) add_term(r, g.mul(x, y), cx * cy);
  return r;
}

AlgebraElement algebra_adjoint(const FiniteGroup& g, const AlgebraElement& a) {
  AlgebraElement r;
  for (const auto& [x, c] : a) add_term(r, g.inv(x), c);
  return r;
}

AlgebraElement averaging_idempotent(const std::vector<Element>& s) {
  AlgebraElement r;
  const Rational w(1, static_cast<unsigned long>(s.size()));
  for (auto x : s) add_term(r, x, w);
  return r;
}

GroupAlgebraMatrix::GroupAlgebraMatrix(GroupPtr group, std::size_t rows, std::size_t cols)
    : group_(std::move(group)), rows_(rows), cols_(cols), entries_(rows * cols) {}

GroupAlgebraMatrix GroupAlgebraMatrix::identity(GroupPtr group, std::size_t n) {
  GroupAlgebraMatrix m(std::move(group), n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i)[0] = 1;
  return m;
}

GroupAlgebraMatrix GroupAlgebraMatrix::operator*(const GroupAlgebraMatrix& o) const {
  if (cols_ != o.rows_) fail(ErrorKind::InvalidArgument, "group algebra matrix shape mismatch");
  GroupAlgebraMatrix r(group_, rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < o.cols_; ++j) {
      AlgebraElement acc;
      for (std::size_t k = 0; k < cols_; ++k)
        for (const auto& [x, cx] : at(i, k))
          for (const auto& [y, cy] : o.at(k, j)) add_term(acc, group_->mul(x, y), cx * cy);
      r.at(i, j) = std::move(acc);
    }
  return r;
}

GroupAlgebraMatrix GroupAlgebraMatrix::operator+(const GroupAlgebraMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) fail(ErrorKind::InvalidArgument, "group algebra matrix shape mismatch");
  GroupAlgebraMatrix r = *this;
  for (std::size_t i = 0; i < entries_.size(); ++i)
    for (const auto& [x, c] : o.entries_[i]) add_term(r.entries_[i], x, c);
  return r;
}

GroupAlgebraMatrix GroupAlgebraMatrix::adjoint() const {
  GroupAlgebraMatrix r(group_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = algebra_adjoint(*group_, at(i, j));
  return r;
}

GroupAlgebraMatrix GroupAlgebraMatrix::power(unsigned k) const {
  if (rows_ != cols_) fail(ErrorKind::InvalidArgument, "power of a non-square matrix");
  GroupAlgebraMatrix r = identity(group_, rows_);
  for (unsigned i = 0; i < k; ++i) r = r * *this;
  return r;
}

Rational GroupAlgebraMatrix::sup_norm_bound() const {
  Rational s = 0;
  for (const auto& e : entries_)
    for (const auto& [x, c] : e) s += abs(c);
  return s;
}

bool GroupAlgebraMatrix::is_zero() const {
  for (const auto& e : entries_)
    if (!e.empty()) return false;
  return true;
}

bool GroupAlgebraMatrix::is_integral() const {
  for (const auto& e : entries_)
    for (const auto& [x, c] : e)
      if (c.get_den() != 1) return false;
  return true;
}

bool GroupAlgebraMatrix::operator==(const GroupAlgebraMatrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && entries_ == o.entries_;
}

}  // namespace l2mult
