#pragma once

#include <cstddef>
#include <unordered_map>
#include <utility>
#include <vector>

#include "l2mult/rational.hpp"

namespace l2mult {

/// Sparse row vector with strictly increasing column indices and no zeros.
using SparseRow = std::vector<std::pair<std::size_t, Rational>>;

class SparseRationalMatrix {
 public:
  SparseRationalMatrix() = default;
  SparseRationalMatrix(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  /// Adds `value` to entry (r, c).
  void add(std::size_t r, std::size_t c, const Rational& value);
  Rational at(std::size_t r, std::size_t c) const;
  const SparseRow& row(std::size_t r) const { return data_[r]; }

  std::size_t nonzeros() const;
  bool is_zero() const;

  SparseRationalMatrix transpose() const;
  SparseRationalMatrix operator*(const SparseRationalMatrix& other) const;
  bool operator==(const SparseRationalMatrix& other) const;

  /// Restriction to the given row and column index lists, in that order.
  SparseRationalMatrix submatrix(const std::vector<std::size_t>& rows,
                                 const std::vector<std::size_t>& cols) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<SparseRow> data_;
};

/// Incremental row echelon form over Q.  Rows are reduced against stored
/// pivots keyed by leading column.
class Echelon {
 public:
  /// Returns true when `row` was independent of the rows inserted so far.
  bool insert(SparseRow row);
  std::size_t rank() const { return pivots_.size(); }

 private:
  std::unordered_map<std::size_t, SparseRow> pivots_;
};

/// a - f * b for sparse rows.
SparseRow axpy_row(const SparseRow& a, const Rational& f, const SparseRow& b);

/// Exact rank; eliminates along whichever orientation has sparser rows.
std::size_t exact_rank(const SparseRationalMatrix& m);

}  // namespace l2mult
