#include "l2mult/word_group.hpp"

#include <cctype>
#include <cstdlib>
#include <map>

#include "l2mult/error.hpp"

namespace l2mult {

const char* to_string(Family f) {
  switch (f) {
    case Family::Free: return "Free";
    case Family::FreeAbelian: return "FreeAbelian";
    case Family::DihedralInfinite: return "DihedralInfinite";
    case Family::FreeByFinite: return "FreeByFinite";
  }
  return "?";
}

void free_reduce_append(Letters& w, const Letter& x) {
  if (!w.empty() && w.back().gen == x.gen && w.back().exp == -x.exp)
    w.pop_back();
  else
    w.push_back(x);
}

namespace {

Letters invert_letters(const Letters& w) {
  Letters out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back({it->gen, -it->exp});
  return out;
}

}  // namespace

BuiltinPtr BuiltinGroup::free(std::size_t rank) {
  std::shared_ptr<BuiltinGroup> g(new BuiltinGroup());
  g->family_ = Family::Free;
  g->rank_ = rank;
  g->generator_count_ = rank;
  return g;
}

BuiltinPtr BuiltinGroup::free_abelian(std::size_t rank) {
  std::shared_ptr<BuiltinGroup> g(new BuiltinGroup());
  g->family_ = Family::FreeAbelian;
  g->rank_ = rank;
  g->generator_count_ = rank;
  return g;
}

BuiltinPtr BuiltinGroup::dihedral_infinite() {
  std::shared_ptr<BuiltinGroup> g(new BuiltinGroup());
  g->family_ = Family::DihedralInfinite;
  g->rank_ = 1;
  g->generator_count_ = 2;
  return g;
}

Letters BuiltinGroup::substitute(Element h, const Letters& w) const {
  Letters out;
  for (const auto& x : w) {
    const Letters& img = alpha_[h][x.gen];
    if (x.exp > 0)
      for (const auto& y : img) free_reduce_append(out, y);
    else
      for (const auto& y : invert_letters(img)) free_reduce_append(out, y);
  }
  return out;
}

BuiltinPtr BuiltinGroup::free_by_finite(std::size_t rank, GroupPtr h, std::vector<std::vector<Letters>> gen_images) {
  if (gen_images.size() != h->generators().size())
    fail(ErrorKind::InvalidArgument, "one automorphism per generator of H required");
  std::shared_ptr<BuiltinGroup> g(new BuiltinGroup());
  g->family_ = Family::FreeByFinite;
  g->rank_ = rank;
  g->generator_count_ = rank + h->generators().size();
  g->h_ = h;
  for (auto& images : gen_images) {
    if (images.size() != rank) fail(ErrorKind::InvalidArgument, "automorphism must list one image per free generator");
    for (auto& w : images) {
      Letters reduced;
      for (const auto& x : w) {
        if (x.gen >= rank) fail(ErrorKind::InvalidArgument, "automorphism image uses a non-free letter");
        free_reduce_append(reduced, x);
      }
      w = reduced;
    }
  }
  const std::size_t n = h->order();
  std::vector<bool> set(n, false);
  g->alpha_.assign(n, std::vector<Letters>(rank));
  g->h_words_.assign(n, {});
  for (std::size_t i = 0; i < rank; ++i) g->alpha_[0][i] = {Letter{static_cast<std::uint32_t>(i), 1}};
  set[0] = true;
  std::vector<Element> queue{0};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Element cur = queue[head];
    for (std::size_t k = 0; k < h->generators().size(); ++k) {
      const Element next = h->right_gen(cur, k);
      std::vector<Letters> cand(rank);
      for (std::size_t i = 0; i < rank; ++i) cand[i] = g->substitute(cur, gen_images[k][i]);
      if (!set[next]) {
        set[next] = true;
        g->alpha_[next] = std::move(cand);
        g->h_words_[next] = g->h_words_[cur];
        g->h_words_[next].push_back({static_cast<std::uint32_t>(rank + k), 1});
        queue.push_back(next);
      } else if (g->alpha_[next] != cand) {
        fail(ErrorKind::InvalidArgument, "H action on the free group is not a homomorphism");
      }
    }
  }
  return g;
}

BuiltinPtr BuiltinGroup::free_by_finite_signed(std::size_t rank, GroupPtr h,
                                               const std::vector<std::vector<int>>& signed_images) {
  std::vector<std::vector<Letters>> images;
  for (const auto& perm : signed_images) {
    if (perm.size() != rank) fail(ErrorKind::InvalidArgument, "signed permutation has wrong length");
    std::vector<Letters> imgs;
    for (int v : perm) {
      const int j = std::abs(v) - 1;
      if (v == 0 || j >= static_cast<int>(rank)) fail(ErrorKind::InvalidArgument, "bad signed permutation entry");
      imgs.push_back({Letter{static_cast<std::uint32_t>(j), v > 0 ? 1 : -1}});
    }
    images.push_back(std::move(imgs));
  }
  return free_by_finite(rank, std::move(h), std::move(images));
}

std::string BuiltinGroup::generator_name(std::size_t i) const {
  if (i >= generator_count_) fail(ErrorKind::InvalidArgument, "generator index out of range");
  if (family_ == Family::DihedralInfinite) return i == 0 ? "t" : "s";
  return std::string(1, static_cast<char>('a' + i));
}

std::string BuiltinGroup::describe() const {
  switch (family_) {
    case Family::Free: return "Free(" + std::to_string(rank_) + ")";
    case Family::FreeAbelian: return "FreeAbelian(" + std::to_string(rank_) + ")";
    case Family::DihedralInfinite: return "DihedralInfinite";
    case Family::FreeByFinite:
      return "FreeByFinite(" + std::to_string(rank_) + ", |H|=" + std::to_string(h_->order()) + ")";
  }
  return "?";
}

bool BuiltinGroup::signed_permutation_action() const {
  if (family_ != Family::FreeByFinite) return false;
  for (const auto& a : alpha_)
    for (const auto& w : a)
      if (w.size() != 1) return false;
  return true;
}

std::vector<long long> BuiltinGroup::abelianized_action(Element h) const {
  std::vector<long long> m(rank_ * rank_, 0);
  for (std::size_t i = 0; i < rank_; ++i)
    for (const auto& x : alpha_[h][i]) m[x.gen * rank_ + i] += x.exp;
  return m;
}

Letters BuiltinGroup::inverse(const Letters& w) const { return normal_form(invert_letters(w)); }

Letters BuiltinGroup::normal_form(const Letters& w) const {
  for (const auto& x : w)
    if (x.gen >= generator_count_ || (x.exp != 1 && x.exp != -1))
      fail(ErrorKind::InvalidArgument, "letter outside the generating set");
  switch (family_) {
    case Family::Free: {
      Letters out;
      for (const auto& x : w) free_reduce_append(out, x);
      return out;
    }
    case Family::FreeAbelian: {
      std::vector<long long> e(rank_, 0);
      for (const auto& x : w) e[x.gen] += x.exp;
      Letters out;
      for (std::size_t i = 0; i < rank_; ++i)
        for (long long k = 0; k < std::llabs(e[i]); ++k)
          out.push_back({static_cast<std::uint32_t>(i), e[i] > 0 ? 1 : -1});
      return out;
    }
    case Family::DihedralInfinite: {
      // t^k s^e; t^k s^e t^d = t^(k + (e ? -d : d)) s^e.
      long long k = 0;
      int e = 0;
      for (const auto& x : w) {
        if (x.gen == 0)
          k += e ? -x.exp : x.exp;
        else
          e ^= 1;
      }
      Letters out;
      for (long long i = 0; i < std::llabs(k); ++i) out.push_back({0, k > 0 ? 1 : -1});
      if (e) out.push_back({1, 1});
      return out;
    }
    case Family::FreeByFinite: {
      // (w, h) stands for w * h; (w, h) * x = (w alpha_h(x), h).
      Letters free_part;
      Element h = 0;
      for (const auto& x : w) {
        if (x.gen < rank_) {
          const Letters& img = alpha_[h][x.gen];
          if (x.exp > 0)
            for (const auto& y : img) free_reduce_append(free_part, y);
          else
            for (const auto& y : invert_letters(img)) free_reduce_append(free_part, y);
        } else {
          const Element s = h_->generators()[x.gen - rank_];
          h = h_->mul(h, x.exp > 0 ? s : h_->inv(s));
        }
      }
      for (const auto& y : h_words_[h]) free_part.push_back(y);
      return free_part;
    }
  }
  return w;
}

Letters parse_letters(const BuiltinGroup& g, const std::string& text) {
  Letters out;
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) fail(ErrorKind::ParseError, "empty word");
  if (s == "1") return out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i++];
    std::uint32_t gen;
    if (g.family() == Family::DihedralInfinite && c == 't')
      gen = 0;
    else if (g.family() == Family::DihedralInfinite && c == 's')
      gen = 1;
    else if (c >= 'a' && c < static_cast<char>('a' + g.generator_count()))
      gen = static_cast<std::uint32_t>(c - 'a');
    else
      fail(ErrorKind::ParseError, std::string("unknown generator '") + c + "' in '" + text + "'");
    int sign = 1;
    while (i < s.size() && s[i] == '\'') {
      sign = -sign;
      ++i;
    }
    long long power = 1;
    if (i < s.size() && s[i] == '^') {
      ++i;
      std::size_t start = i;
      if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      if (i == start || (i == start + 1 && !std::isdigit(static_cast<unsigned char>(s[start]))))
        fail(ErrorKind::ParseError, "bad exponent in '" + text + "'");
      power = std::stoll(s.substr(start, i - start));
    }
    const int e = power < 0 ? -sign : sign;
    for (long long k = 0; k < std::llabs(power); ++k) out.push_back({gen, e});
  }
  return out;
}

std::string letters_to_string(const BuiltinGroup& g, const Letters& w) {
  if (w.empty()) return "1";
  std::string out;
  for (const auto& x : w) {
    out += g.generator_name(x.gen);
    if (x.exp < 0) out += '\'';
  }
  return out;
}

Word::Word(BuiltinPtr group, const Letters& letters) : group_(std::move(group)) {
  letters_ = group_->normal_form(letters);
}

Word Word::parse(BuiltinPtr group, const std::string& text) {
  Letters l = parse_letters(*group, text);
  return Word(std::move(group), l);
}

Word Word::generator(BuiltinPtr group, std::size_t i) {
  return Word(std::move(group), {Letter{static_cast<std::uint32_t>(i), 1}});
}

Word Word::operator*(const Word& other) const {
  Letters l = letters_;
  l.insert(l.end(), other.letters_.begin(), other.letters_.end());
  return Word(group_, l);
}

Word Word::inverse() const { return Word(group_, invert_letters(letters_)); }

std::string Word::to_string() const { return letters_to_string(*group_, letters_); }

BuiltinFiniteSubgroup finite_subgroup(const BuiltinPtr& g, const std::vector<Word>& gens, std::size_t cap) {
  BuiltinFiniteSubgroup out;
  std::map<Letters, Element> index;
  out.words.push_back(Word::identity(g));
  index.emplace(Letters{}, 0);
  for (std::size_t head = 0; head < out.words.size(); ++head)
    for (const auto& s : gens) {
      Word w = out.words[head] * s;
      if (index.count(w.letters())) continue;
      if (out.words.size() >= cap)
        fail(ErrorKind::InvalidArgument, "words do not generate a finite subgroup of order <= " + std::to_string(cap));
      index.emplace(w.letters(), static_cast<Element>(out.words.size()));
      out.words.push_back(std::move(w));
    }
  for (const auto& s : gens) out.generator_elements.push_back(index.at(s.letters()));
  std::vector<std::string> labels;
  for (const auto& w : out.words) labels.push_back(w.to_string());
  const auto& words = out.words;
  out.group = FiniteGroup::from_multiplication(
      words.size(), [&](Element a, Element b) { return index.at((words[a] * words[b]).letters()); },
      out.generator_elements, labels);
  return out;
}

}  // namespace l2mult
