/**
 * @file finite_group.hpp
 * @brief Finite groups with indexed elements, subgroups and homomorphisms.
 *
 * Element 0 is always the identity.  Groups of order at most
 * FiniteGroup::kTableLimit keep a full multiplication table; larger groups
 * built from permutations multiply by composing permutations.
 */
#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace l2mult {

using Element = std::uint32_t;
using Permutation = std::vector<std::uint32_t>;

class FiniteGroup;
using GroupPtr = std::shared_ptr<const FiniteGroup>;

class FiniteGroup {
 public:
  static constexpr std::size_t kTableLimit = 4096;
  static constexpr std::size_t kDefaultCap = 1000000;

  /// Closure of the given permutations.  Product is composition
  /// (a*b)(x) = a(b(x)).  Throws ClosureTooLarge past `cap` elements.
  static GroupPtr from_generators(const std::vector<Permutation>& gens, std::size_t cap = kDefaultCap);

  /// `table[a * order + b]` is the index of a*b.  Validated with Light's
  /// associativity test against the generators.
  static GroupPtr from_table(std::size_t order, std::vector<Element> table, std::vector<Element> generators,
                             std::vector<std::string> labels = {});

  /// Builds the table by calling `mul` on every pair.
  static GroupPtr from_multiplication(std::size_t order, const std::function<Element(Element, Element)>& mul,
                                      std::vector<Element> generators, std::vector<std::string> labels = {});

  std::size_t order() const { return order_; }
  Element identity() const { return 0; }
  Element mul(Element a, Element b) const;
  Element inv(Element a) const { return inverse_[a]; }
  Element pow(Element a, long long e) const;
  /// Conjugate a^b = b^{-1} a b.
  Element conj(Element a, Element b) const { return mul(inv(b), mul(a, b)); }
  std::size_t element_order(Element a) const;
  const std::vector<Element>& generators() const { return generators_; }
  /// g * s for the k-th generator s.
  Element right_gen(Element g, std::size_t k) const { return right_gen_[k][g]; }
  std::string label(Element a) const;
  bool has_table() const { return !table_.empty(); }
  const Permutation* permutation(Element a) const { return perms_.empty() ? nullptr : &perms_[a]; }

  std::size_t class_count() const { return class_reps_.size(); }
  std::size_t class_of(Element a) const { return class_of_[a]; }
  Element class_rep(std::size_t k) const { return class_reps_[k]; }
  std::size_t class_size(std::size_t k) const { return class_sizes_[k]; }
  const std::vector<Element>& class_members(std::size_t k) const { return class_members_[k]; }
  /// [G : C_G(h)], the size of the conjugacy class of h.
  std::size_t centralizer_index(Element h) const { return class_sizes_[class_of_[h]]; }
  std::size_t centralizer_order(Element h) const { return order_ / centralizer_index(h); }
  bool conjugate(Element a, Element b) const { return class_of_[a] == class_of_[b]; }

  /// Full associativity scan, O(n^3); intended for small groups.
  bool associative_exhaustive() const;

 private:
  FiniteGroup() = default;
  void finish(std::vector<std::string> labels);
  void build_classes();

  struct PermHash {
    std::size_t operator()(const Permutation& p) const;
  };

  std::size_t order_ = 0;
  std::vector<Element> table_;
  std::vector<Permutation> perms_;
  std::unordered_map<Permutation, Element, PermHash> perm_index_;
  std::vector<Element> inverse_;
  std::vector<Element> generators_;
  std::vector<std::vector<Element>> right_gen_;
  std::vector<std::string> labels_;
  std::vector<std::size_t> class_of_;
  std::vector<Element> class_reps_;
  std::vector<std::size_t> class_sizes_;
  std::vector<std::vector<Element>> class_members_;
};

/// Subgroup of a finite group, stored as its sorted member list.
class FiniteSubgroup {
 public:
  static FiniteSubgroup generated(GroupPtr parent, const std::vector<Element>& gens);
  static FiniteSubgroup trivial(GroupPtr parent) { return generated(std::move(parent), {}); }
  static FiniteSubgroup whole(GroupPtr parent);

  const GroupPtr& parent() const { return parent_; }
  const std::vector<Element>& elements() const { return elements_; }
  const std::vector<Element>& generators() const { return generators_; }
  bool contains(Element g) const { return member_[g]; }
  std::size_t order() const { return elements_.size(); }
  std::size_t index() const { return parent_->order() / elements_.size(); }
  bool is_normal() const;
  /// True when g K g^{-1} = K.
  bool normalized_by(Element g) const;

  /// The subgroup as a group in its own right; `embed[i]` is the parent
  /// element for local element i.  Local generators mirror `generators()`.
  const GroupPtr& abstract_group() const { return abstract_; }
  Element embed(Element local) const { return embed_[local]; }
  /// Local index of a parent element lying in the subgroup.
  Element local(Element g) const;

  /// Minimal representatives of the left cosets gK, ascending.
  const std::vector<Element>& left_coset_reps() const { return coset_reps_; }
  /// Position in `left_coset_reps()` of the coset gK.
  std::size_t left_coset_of(Element g) const { return coset_of_[g]; }

 private:
  GroupPtr parent_;
  std::vector<Element> generators_;
  std::vector<Element> elements_;
  std::vector<bool> member_;
  GroupPtr abstract_;
  std::vector<Element> embed_;
  std::unordered_map<Element, Element> local_;
  std::vector<Element> coset_reps_;
  std::vector<std::size_t> coset_of_;
};

class GroupHom {
 public:
  GroupHom() = default;
  GroupHom(GroupPtr source, GroupPtr target, std::vector<Element> images);

  /// Extends generator images along the Cayley graph of `source`.  Returns
  /// nullopt if the assignment is not a homomorphism; `bad_generator` then
  /// receives the index of the generator where a conflict surfaced.
  static std::optional<GroupHom> from_generator_images(GroupPtr source, GroupPtr target,
                                                       const std::vector<Element>& gen_images,
                                                       std::size_t* bad_generator = nullptr);

  Element operator()(Element g) const { return images_[g]; }
  const GroupPtr& source() const { return source_; }
  const GroupPtr& target() const { return target_; }
  const std::vector<Element>& images() const { return images_; }
  /// f(g s) = f(g) f(s) for all g and generators s; complete by induction.
  bool is_homomorphism() const;
  bool is_injective() const;
  bool is_surjective() const;

 private:
  GroupPtr source_;
  GroupPtr target_;
  std::vector<Element> images_;
};

namespace groups {

GroupPtr cyclic(std::size_t n);
/// Dihedral group of order 2m; element t^k s^e has index k + m e.
GroupPtr dihedral(std::size_t m);
GroupPtr symmetric(std::size_t n);
GroupPtr alternating(std::size_t n);
/// Z/n_1 x ... x Z/n_k, mixed radix with the first factor fastest.
GroupPtr abelian(const std::vector<std::size_t>& moduli);
GroupPtr direct_product(const GroupPtr& a, const GroupPtr& b);
/// Quaternion group of order 8.
GroupPtr quaternion();
/// SL(2,p) or GL(2,p) acting on nonzero vectors of F_p^2.
GroupPtr special_linear_2(std::size_t p);
GroupPtr general_linear_2(std::size_t p);

/// (Z/N)^r semidirect H where h acts by the integer matrix `action[h]`
/// (row major r x r, taken mod N).  Element (v, h) has index
/// h * N^r + sum v_i N^i.
GroupPtr abelian_semidirect(std::size_t modulus, std::size_t rank, const GroupPtr& h,
                            const std::vector<std::vector<long long>>& action);

}  // namespace groups

}  // namespace l2mult
