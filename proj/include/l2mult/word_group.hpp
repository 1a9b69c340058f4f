/**
 * @file word_group.hpp
 * @brief Built-in infinite groups with solvable word problem.
 *
 * Generators are letters 'a', 'b', ... in order; an apostrophe marks an
 * inverse and "1" is the empty word.  For the infinite dihedral group
 * a = t (translation) and b = s (reflection); "t" and "s" are accepted as
 * aliases.  For F_r semidirect H the first r letters are the free
 * generators and the remaining letters are the generators of H.
 */
#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "l2mult/finite_group.hpp"

namespace l2mult {

enum class Family { Free, FreeAbelian, DihedralInfinite, FreeByFinite };

const char* to_string(Family f);

struct Letter {
  std::uint32_t gen = 0;
  int exp = 1;  // +1 or -1
  auto operator<=>(const Letter&) const = default;
};
using Letters = std::vector<Letter>;

class BuiltinGroup;
using BuiltinPtr = std::shared_ptr<const BuiltinGroup>;

class BuiltinGroup {
 public:
  static BuiltinPtr free(std::size_t rank);
  static BuiltinPtr free_abelian(std::size_t rank);
  static BuiltinPtr dihedral_infinite();
  /// `gen_images[k][i]` is the image of free generator i under the k-th
  /// generator of H, as a word in the free generators.  The assignment must
  /// extend to a homomorphism H -> Aut(F_r).
  static BuiltinPtr free_by_finite(std::size_t rank, GroupPtr h, std::vector<std::vector<Letters>> gen_images);
  /// Signed permutation action: `signed_images[k][i] = +-(j+1)` sends x_i to
  /// x_j or its inverse.
  static BuiltinPtr free_by_finite_signed(std::size_t rank, GroupPtr h,
                                          const std::vector<std::vector<int>>& signed_images);

  Family family() const { return family_; }
  /// Free rank r (1 for the infinite dihedral group's translation part).
  std::size_t rank() const { return rank_; }
  std::size_t generator_count() const { return generator_count_; }
  std::string generator_name(std::size_t i) const;
  std::string describe() const;

  Letters normal_form(const Letters& w) const;
  Letters inverse(const Letters& w) const;

  /// FreeByFinite only.
  const GroupPtr& finite_part() const { return h_; }
  /// alpha_h(x_i) as a reduced word in the free generators.
  const Letters& automorphism(Element h, std::size_t i) const { return alpha_[h][i]; }
  /// True when every alpha_h permutes the free generators up to inversion.
  bool signed_permutation_action() const;
  /// Integer matrix of alpha_h on the abelianization, row major; column i
  /// holds the exponent sums of alpha_h(x_i).
  std::vector<long long> abelianized_action(Element h) const;
  /// Shortest word of h in the H letters (BFS over the Cayley graph of H).
  const Letters& h_word(Element h) const { return h_words_[h]; }

 private:
  BuiltinGroup() = default;
  Letters substitute(Element h, const Letters& w) const;

  Family family_ = Family::Free;
  std::size_t rank_ = 0;
  std::size_t generator_count_ = 0;
  GroupPtr h_;
  std::vector<std::vector<Letters>> alpha_;
  std::vector<Letters> h_words_;
};

/// Freely reduces `w` in place of a stack.
void free_reduce_append(Letters& w, const Letter& x);

class Word {
 public:
  Word() = default;
  Word(BuiltinPtr group, const Letters& letters);
  static Word parse(BuiltinPtr group, const std::string& text);
  static Word identity(BuiltinPtr group) { return Word(std::move(group), {}); }
  static Word generator(BuiltinPtr group, std::size_t i);

  const BuiltinPtr& group() const { return group_; }
  const Letters& letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  bool is_identity() const { return letters_.empty(); }

  Word operator*(const Word& other) const;
  Word inverse() const;
  std::string to_string() const;

  bool operator==(const Word& other) const { return letters_ == other.letters_; }
  bool operator<(const Word& other) const { return letters_ < other.letters_; }

 private:
  BuiltinPtr group_;
  Letters letters_;
};

/// Parses letters without normalizing.
Letters parse_letters(const BuiltinGroup& g, const std::string& text);
std::string letters_to_string(const BuiltinGroup& g, const Letters& w);

/// The finite subgroup of a built-in group generated by `gens`, as an
/// abstract group; element i corresponds to `words[i]` (0 = identity).
struct BuiltinFiniteSubgroup {
  GroupPtr group;
  std::vector<Word> words;
  /// Local index of the word for each generator passed in.
  std::vector<Element> generator_elements;
};

/// Throws InvalidArgument when the closure exceeds `cap` elements.
BuiltinFiniteSubgroup finite_subgroup(const BuiltinPtr& g, const std::vector<Word>& gens, std::size_t cap = 10000);

}  // namespace l2mult
