#include "l2mult/group_ring.hpp"

#include <cctype>

#include "l2mult/error.hpp"

namespace l2mult {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

bool looks_numeric(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c)) && c != '/' && c != '.' && c != '-' && c != '+') return false;
  return true;
}

}  // namespace

void GroupRingElement::add_letters(const Letters& nf, const Rational& c) {
  if (c == 0) return;
  auto it = terms_.find(nf);
  if (it == terms_.end()) {
    terms_.emplace(nf, c);
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void GroupRingElement::add(const Word& w, const Rational& c) { add_letters(w.letters(), c); }

GroupRingElement GroupRingElement::of(const Word& w, const Rational& c) {
  GroupRingElement e(w.group());
  e.add(w, c);
  return e;
}

GroupRingElement GroupRingElement::parse(BuiltinPtr group, const std::string& text) {
  GroupRingElement out(group);
  std::string s = trim(text);
  if (s.empty()) fail(ErrorKind::ParseError, "empty group ring element");
  if (s == "0") return out;
  // Split on '+' and on binary '-' (a '-' that follows a term).
  std::vector<std::string> terms;
  std::string cur;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '+') {
      terms.push_back(cur);
      cur.clear();
    } else if (c == '-' && !trim(cur).empty() && trim(cur).back() != '*' && trim(cur).back() != '^') {
      terms.push_back(cur);
      cur = "-";
    } else {
      cur.push_back(c);
    }
  }
  terms.push_back(cur);
  for (auto raw : terms) {
    std::string t = trim(raw);
    if (t.empty()) fail(ErrorKind::ParseError, "empty term in '" + text + "'");
    Rational coef = 1;
    std::string word;
    const auto star = t.find('*');
    if (star != std::string::npos) {
      coef = parse_rational(t.substr(0, star));
      word = trim(t.substr(star + 1));
    } else if (looks_numeric(t) && t != "1" && t != "-1" && t != "+1") {
      coef = parse_rational(t);
      word = "1";
    } else {
      if (t[0] == '-') {
        coef = -1;
        t = trim(t.substr(1));
      }
      word = t;
    }
    out.add(Word::parse(group, word), coef);
  }
  return out;
}

GroupRingElement GroupRingElement::operator+(const GroupRingElement& o) const {
  GroupRingElement r = *this;
  if (!r.group_) r.group_ = o.group_;
  for (const auto& [w, c] : o.terms_) r.add_letters(w, c);
  return r;
}

GroupRingElement GroupRingElement::operator-(const GroupRingElement& o) const { return *this + o.scaled(-1); }

GroupRingElement GroupRingElement::operator*(const GroupRingElement& o) const {
  GroupRingElement r(group_ ? group_ : o.group_);
  for (const auto& [a, ca] : terms_)
    for (const auto& [b, cb] : o.terms_) {
      Letters l = a;
      l.insert(l.end(), b.begin(), b.end());
      r.add_letters(r.group_->normal_form(l), ca * cb);
    }
  return r;
}

GroupRingElement GroupRingElement::scaled(const Rational& c) const {
  GroupRingElement r(group_);
  if (c == 0) return r;
  for (const auto& [w, v] : terms_) r.terms_.emplace(w, v * c);
  return r;
}

GroupRingElement GroupRingElement::adjoint() const {
  GroupRingElement r(group_);
  for (const auto& [w, c] : terms_) r.add_letters(group_->inverse(w), c);
  return r;
}

Rational GroupRingElement::l1_norm() const {
  Rational s = 0;
  for (const auto& [w, c] : terms_) s += abs(c);
  return s;
}

std::string GroupRingElement::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [w, c] : terms_) {
    if (!out.empty()) out += " + ";
    out += l2mult::to_string(c) + "*" + letters_to_string(*group_, w);
  }
  return out;
}

GroupRingMatrix::GroupRingMatrix(BuiltinPtr group, std::size_t rows, std::size_t cols)
    : group_(group), rows_(rows), cols_(cols), entries_(rows * cols, GroupRingElement(group)) {}

GroupRingMatrix GroupRingMatrix::parse(BuiltinPtr group, const std::vector<std::vector<std::string>>& entries) {
  const std::size_t rows = entries.size();
  const std::size_t cols = rows ? entries[0].size() : 0;
  GroupRingMatrix m(group, rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (entries[i].size() != cols) fail(ErrorKind::ParseError, "ragged group ring matrix");
    for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = GroupRingElement::parse(group, entries[i][j]);
  }
  return m;
}

GroupRingMatrix GroupRingMatrix::identity(BuiltinPtr group, std::size_t n) {
  GroupRingMatrix m(group, n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i).add(Word::identity(group), 1);
  return m;
}

GroupRingMatrix GroupRingMatrix::operator*(const GroupRingMatrix& o) const {
  if (cols_ != o.rows_) fail(ErrorKind::InvalidArgument, "group ring matrix shape mismatch");
  GroupRingMatrix r(group_, rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < o.cols_; ++j)
      for (std::size_t k = 0; k < cols_; ++k) r.at(i, j) = r.at(i, j) + at(i, k) * o.at(k, j);
  return r;
}

GroupRingMatrix GroupRingMatrix::operator+(const GroupRingMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) fail(ErrorKind::InvalidArgument, "group ring matrix shape mismatch");
  GroupRingMatrix r = *this;
  for (std::size_t i = 0; i < entries_.size(); ++i) r.entries_[i] = r.entries_[i] + o.entries_[i];
  return r;
}

GroupRingMatrix GroupRingMatrix::adjoint() const {
  GroupRingMatrix r(group_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j).adjoint();
  return r;
}

Rational GroupRingMatrix::sup_norm_bound() const {
  Rational s = 0;
  for (const auto& e : entries_) s += e.l1_norm();
  return s;
}

bool GroupRingMatrix::is_zero() const {
  for (const auto& e : entries_)
    if (!e.is_zero()) return false;
  return true;
}

bool GroupRingMatrix::operator==(const GroupRingMatrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && entries_ == o.entries_;
}

std::vector<std::vector<std::string>> GroupRingMatrix::to_strings() const {
  std::vector<std::vector<std::string>> out(rows_, std::vector<std::string>(cols_));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out[i][j] = at(i, j).to_string();
  return out;
}

}  // namespace l2mult
