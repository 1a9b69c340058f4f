#include "l2mult/sparse_rational.hpp"

#include <algorithm>
#include <map>

#include "l2mult/error.hpp"

namespace l2mult {

SparseRationalMatrix::SparseRationalMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows) {}

void SparseRationalMatrix::add(std::size_t r, std::size_t c, const Rational& value) {
  if (r >= rows_ || c >= cols_) fail(ErrorKind::InvalidArgument, "sparse index out of range");
  if (value == 0) return;
  auto& row = data_[r];
  auto it = std::lower_bound(row.begin(), row.end(), c,
                             [](const auto& e, std::size_t col) { return e.first < col; });
  if (it != row.end() && it->first == c) {
    it->second += value;
    if (it->second == 0) row.erase(it);
  } else {
    row.insert(it, {c, value});
  }
}

Rational SparseRationalMatrix::at(std::size_t r, std::size_t c) const {
  const auto& row = data_.at(r);
  auto it = std::lower_bound(row.begin(), row.end(), c,
                             [](const auto& e, std::size_t col) { return e.first < col; });
  if (it != row.end() && it->first == c) return it->second;
  return 0;
}

std::size_t SparseRationalMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& r : data_) n += r.size();
  return n;
}

bool SparseRationalMatrix::is_zero() const { return nonzeros() == 0; }

SparseRationalMatrix SparseRationalMatrix::transpose() const {
  SparseRationalMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (const auto& [c, v] : data_[r]) t.data_[c].push_back({r, v});
  return t;
}

SparseRationalMatrix SparseRationalMatrix::operator*(const SparseRationalMatrix& other) const {
  if (cols_ != other.rows_) fail(ErrorKind::InvalidArgument, "sparse product shape mismatch");
  SparseRationalMatrix out(rows_, other.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    std::map<std::size_t, Rational> acc;
    for (const auto& [k, a] : data_[r])
      for (const auto& [c, b] : other.data_[k]) acc[c] += a * b;
    for (auto& [c, v] : acc)
      if (v != 0) out.data_[r].push_back({c, v});
  }
  return out;
}

bool SparseRationalMatrix::operator==(const SparseRationalMatrix& other) const {
  return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
}

SparseRationalMatrix SparseRationalMatrix::submatrix(const std::vector<std::size_t>& rows,
                                                     const std::vector<std::size_t>& cols) const {
  std::vector<std::size_t> col_pos(cols_, static_cast<std::size_t>(-1));
  for (std::size_t j = 0; j < cols.size(); ++j) col_pos.at(cols[j]) = j;
  SparseRationalMatrix out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (const auto& [c, v] : data_.at(rows[i]))
      if (col_pos[c] != static_cast<std::size_t>(-1)) out.add(i, col_pos[c], v);
  return out;
}

SparseRow axpy_row(const SparseRow& a, const Rational& f, const SparseRow& b) {
  SparseRow out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back({b[j].first, -f * b[j].second});
      ++j;
    } else {
      Rational v = a[i].second - f * b[j].second;
      if (v != 0) out.push_back({a[i].first, std::move(v)});
      ++i;
      ++j;
    }
  }
  return out;
}

bool Echelon::insert(SparseRow row) {
  while (!row.empty()) {
    auto it = pivots_.find(row.front().first);
    if (it == pivots_.end()) {
      Rational lead = row.front().second;
      for (auto& e : row) e.second /= lead;
      const std::size_t key = row.front().first;
      pivots_.emplace(key, std::move(row));
      return true;
    }
    Rational f = row.front().second;
    row = axpy_row(row, f, it->second);
  }
  return false;
}

std::size_t exact_rank(const SparseRationalMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  const SparseRationalMatrix t = m.transpose();
  auto max_row = [](const SparseRationalMatrix& a) {
    std::size_t best = 0;
    for (std::size_t r = 0; r < a.rows(); ++r) best = std::max(best, a.row(r).size());
    return best;
  };
  const SparseRationalMatrix& use = max_row(t) < max_row(m) ? t : m;
  std::vector<std::size_t> order(use.rows());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return use.row(a).size() < use.row(b).size();
  });
  Echelon e;
  const std::size_t cap = std::min(m.rows(), m.cols());
  for (std::size_t r : order) {
    e.insert(use.row(r));
    if (e.rank() == cap) break;
  }
  return e.rank();
}

}  // namespace l2mult
