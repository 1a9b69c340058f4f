#include "l2mult/finite_group.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <sstream>

#include "l2mult/error.hpp"

namespace l2mult {

namespace {

constexpr Element kUnset = std::numeric_limits<Element>::max();

Permutation compose(const Permutation& a, const Permutation& b) {
  Permutation out(a.size());
  for (std::size_t x = 0; x < a.size(); ++x) out[x] = a[b[x]];
  return out;
}

Permutation invert(const Permutation& a) {
  Permutation out(a.size());
  for (std::size_t x = 0; x < a.size(); ++x) out[a[x]] = static_cast<std::uint32_t>(x);
  return out;
}

std::string cycle_string(const Permutation& p) {
  std::vector<bool> seen(p.size(), false);
  std::ostringstream os;
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (seen[x] || p[x] == x) continue;
    os << '(';
    std::size_t y = x;
    bool first = true;
    while (!seen[y]) {
      seen[y] = true;
      if (!first) os << ' ';
      os << y;
      first = false;
      y = p[y];
    }
    os << ')';
  }
  std::string s = os.str();
  return s.empty() ? "()" : s;
}

}  // namespace

std::size_t FiniteGroup::PermHash::operator()(const Permutation& p) const {
  std::size_t h = 1469598103934665603ull;
  for (auto v : p) {
    h ^= v;
    h *= 1099511628211ull;
  }
  return h;
}

GroupPtr FiniteGroup::from_generators(const std::vector<Permutation>& gens, std::size_t cap) {
  std::size_t degree = gens.empty() ? 0 : gens.front().size();
  for (const auto& g : gens) {
    if (g.size() != degree) fail(ErrorKind::InvalidArgument, "generators have different degrees");
    std::vector<bool> hit(degree, false);
    for (auto v : g) {
      if (v >= degree || hit[v]) fail(ErrorKind::InvalidArgument, "generator is not a permutation");
      hit[v] = true;
    }
  }
  std::shared_ptr<FiniteGroup> grp(new FiniteGroup());
  Permutation id(degree);
  for (std::size_t x = 0; x < degree; ++x) id[x] = static_cast<std::uint32_t>(x);
  grp->perms_.push_back(id);
  grp->perm_index_.emplace(id, 0);
  grp->right_gen_.assign(gens.size(), {});
  std::vector<Element> parent{0};
  std::vector<std::size_t> parent_gen{0};
  for (std::size_t head = 0; head < grp->perms_.size(); ++head) {
    for (std::size_t k = 0; k < gens.size(); ++k) {
      Permutation next = compose(grp->perms_[head], gens[k]);
      auto it = grp->perm_index_.find(next);
      Element idx;
      if (it == grp->perm_index_.end()) {
        if (grp->perms_.size() >= cap)
          fail(ErrorKind::ClosureTooLarge, "closure exceeds " + std::to_string(cap) + " elements");
        idx = static_cast<Element>(grp->perms_.size());
        grp->perm_index_.emplace(next, idx);
        grp->perms_.push_back(std::move(next));
        parent.push_back(static_cast<Element>(head));
        parent_gen.push_back(k);
      } else {
        idx = it->second;
      }
      auto& rg = grp->right_gen_[k];
      if (rg.size() <= head) rg.resize(head + 1, kUnset);
      rg[head] = idx;
    }
  }
  const std::size_t n = grp->perms_.size();
  grp->order_ = n;
  for (auto& rg : grp->right_gen_) rg.resize(n, kUnset);
  for (std::size_t k = 0; k < gens.size(); ++k) grp->generators_.push_back(grp->perm_index_.at(gens[k]));

  if (n <= kTableLimit) {
    // a * b = (a * parent(b)) * s_b, filled in BFS order of b.
    grp->table_.assign(n * n, 0);
    for (std::size_t a = 0; a < n; ++a) grp->table_[a * n] = static_cast<Element>(a);
    for (std::size_t b = 1; b < n; ++b)
      for (std::size_t a = 0; a < n; ++a)
        grp->table_[a * n + b] = grp->right_gen_[parent_gen[b]][grp->table_[a * n + parent[b]]];
  }
  grp->inverse_.resize(n);
  for (std::size_t a = 0; a < n; ++a) grp->inverse_[a] = grp->perm_index_.at(invert(grp->perms_[a]));
  std::vector<std::string> labels;
  labels.reserve(n);
  for (const auto& p : grp->perms_) labels.push_back(cycle_string(p));
  grp->finish(std::move(labels));
  return grp;
}

GroupPtr FiniteGroup::from_table(std::size_t order, std::vector<Element> table, std::vector<Element> generators,
                                 std::vector<std::string> labels) {
  if (order == 0 || table.size() != order * order) fail(ErrorKind::InvalidArgument, "table has wrong size");
  std::shared_ptr<FiniteGroup> grp(new FiniteGroup());
  grp->order_ = order;
  grp->table_ = std::move(table);
  const auto& t = grp->table_;
  for (std::size_t a = 0; a < order; ++a) {
    if (t[a] != a || t[a * order] != a) fail(ErrorKind::InvalidArgument, "element 0 is not the identity");
    std::vector<bool> row(order, false), col(order, false);
    for (std::size_t b = 0; b < order; ++b) {
      Element r = t[a * order + b], c = t[b * order + a];
      if (r >= order || c >= order || row[r] || col[c]) fail(ErrorKind::InvalidArgument, "table is not a Latin square");
      row[r] = col[c] = true;
    }
  }
  for (auto g : generators)
    if (g >= order) fail(ErrorKind::InvalidArgument, "generator out of range");
  grp->generators_ = std::move(generators);
  grp->right_gen_.resize(grp->generators_.size());
  for (std::size_t k = 0; k < grp->generators_.size(); ++k) {
    auto& rg = grp->right_gen_[k];
    rg.resize(order);
    for (std::size_t a = 0; a < order; ++a) rg[a] = t[a * order + grp->generators_[k]];
  }
  std::vector<bool> seen(order, false);
  std::deque<Element> queue{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!queue.empty()) {
    Element g = queue.front();
    queue.pop_front();
    for (const auto& rg : grp->right_gen_)
      if (!seen[rg[g]]) {
        seen[rg[g]] = true;
        ++reached;
        queue.push_back(rg[g]);
      }
  }
  if (reached != order) fail(ErrorKind::InvalidArgument, "generators do not generate the table group");
  for (auto s : grp->generators_)
    for (std::size_t x = 0; x < order; ++x)
      for (std::size_t y = 0; y < order; ++y)
        if (t[t[x * order + s] * order + y] != t[x * order + t[s * order + y]])
          fail(ErrorKind::InvalidArgument, "table is not associative");
  grp->inverse_.resize(order);
  for (std::size_t a = 0; a < order; ++a)
    for (std::size_t b = 0; b < order; ++b)
      if (t[a * order + b] == 0) {
        grp->inverse_[a] = static_cast<Element>(b);
        break;
      }
  grp->finish(std::move(labels));
  return grp;
}

GroupPtr FiniteGroup::from_multiplication(std::size_t order, const std::function<Element(Element, Element)>& mul,
                                          std::vector<Element> generators, std::vector<std::string> labels) {
  std::vector<Element> table(order * order);
  for (std::size_t a = 0; a < order; ++a)
    for (std::size_t b = 0; b < order; ++b)
      table[a * order + b] = mul(static_cast<Element>(a), static_cast<Element>(b));
  return from_table(order, std::move(table), std::move(generators), std::move(labels));
}

void FiniteGroup::finish(std::vector<std::string> labels) {
  if (!labels.empty() && labels.size() != order_) fail(ErrorKind::InvalidArgument, "label count mismatch");
  labels_ = std::move(labels);
  build_classes();
}

void FiniteGroup::build_classes() {
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  class_of_.assign(order_, none);
  std::vector<Element> gen_inv;
  for (auto s : generators_) gen_inv.push_back(inverse_[s]);
  for (std::size_t g = 0; g < order_; ++g) {
    if (class_of_[g] != none) continue;
    const std::size_t k = class_reps_.size();
    std::vector<Element> members{static_cast<Element>(g)};
    class_of_[g] = k;
    for (std::size_t head = 0; head < members.size(); ++head) {
      for (std::size_t i = 0; i < generators_.size(); ++i) {
        Element c = mul(gen_inv[i], mul(members[head], generators_[i]));
        if (class_of_[c] == none) {
          class_of_[c] = k;
          members.push_back(c);
        }
      }
    }
    std::sort(members.begin(), members.end());
    class_reps_.push_back(static_cast<Element>(g));
    class_sizes_.push_back(members.size());
    class_members_.push_back(std::move(members));
  }
}

Element FiniteGroup::mul(Element a, Element b) const {
  if (!table_.empty()) return table_[static_cast<std::size_t>(a) * order_ + b];
  return perm_index_.at(compose(perms_[a], perms_[b]));
}

Element FiniteGroup::pow(Element a, long long e) const {
  if (e < 0) {
    a = inv(a);
    e = -e;
  }
  Element r = 0;
  Element base = a;
  while (e) {
    if (e & 1) r = mul(r, base);
    base = mul(base, base);
    e >>= 1;
  }
  return r;
}

std::size_t FiniteGroup::element_order(Element a) const {
  std::size_t k = 1;
  Element x = a;
  while (x != 0) {
    x = mul(x, a);
    ++k;
  }
  return k;
}

std::string FiniteGroup::label(Element a) const {
  if (!labels_.empty()) return labels_[a];
  return "g" + std::to_string(a);
}

bool FiniteGroup::associative_exhaustive() const {
  for (Element a = 0; a < order_; ++a)
    for (Element b = 0; b < order_; ++b) {
      Element ab = mul(a, b);
      for (Element c = 0; c < order_; ++c)
        if (mul(ab, c) != mul(a, mul(b, c))) return false;
    }
  return true;
}

// ---------------------------------------------------------------------------

FiniteSubgroup FiniteSubgroup::generated(GroupPtr parent, const std::vector<Element>& gens) {
  FiniteSubgroup s;
  const std::size_t n = parent->order();
  s.parent_ = std::move(parent);
  s.generators_ = gens;
  s.member_.assign(n, false);
  s.member_[0] = true;
  std::vector<Element> elems{0};
  for (std::size_t head = 0; head < elems.size(); ++head)
    for (auto g : gens) {
      Element x = s.parent_->mul(elems[head], g);
      if (!s.member_[x]) {
        s.member_[x] = true;
        elems.push_back(x);
      }
    }
  std::sort(elems.begin(), elems.end());
  s.elements_ = elems;
  s.embed_ = elems;
  for (std::size_t i = 0; i < elems.size(); ++i) s.local_.emplace(elems[i], static_cast<Element>(i));

  std::vector<Element> local_gens;
  for (auto g : gens) local_gens.push_back(s.local_.at(g));
  const auto& par = s.parent_;
  const auto& emb = s.embed_;
  const auto& loc = s.local_;
  std::vector<std::string> labels;
  for (auto e : elems) labels.push_back(par->label(e));
  s.abstract_ = FiniteGroup::from_multiplication(
      elems.size(), [&](Element a, Element b) { return loc.at(par->mul(emb[a], emb[b])); }, local_gens,
      std::move(labels));

  s.coset_of_.assign(n, std::numeric_limits<std::size_t>::max());
  for (Element g = 0; g < n; ++g) {
    if (s.coset_of_[g] != std::numeric_limits<std::size_t>::max()) continue;
    const std::size_t idx = s.coset_reps_.size();
    s.coset_reps_.push_back(g);
    for (auto k : elems) s.coset_of_[s.parent_->mul(g, k)] = idx;
  }
  return s;
}

FiniteSubgroup FiniteSubgroup::whole(GroupPtr parent) {
  auto gens = parent->generators();
  return generated(std::move(parent), gens);
}

Element FiniteSubgroup::local(Element g) const {
  auto it = local_.find(g);
  if (it == local_.end()) fail(ErrorKind::InvalidArgument, "element not in subgroup");
  return it->second;
}

bool FiniteSubgroup::normalized_by(Element g) const {
  for (auto k : generators_)
    if (!member_[parent_->mul(g, parent_->mul(k, parent_->inv(g)))]) return false;
  return true;
}

bool FiniteSubgroup::is_normal() const {
  for (auto s : parent_->generators())
    if (!normalized_by(s) || !normalized_by(parent_->inv(s))) return false;
  return true;
}

// ---------------------------------------------------------------------------

GroupHom::GroupHom(GroupPtr source, GroupPtr target, std::vector<Element> images)
    : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
  if (images_.size() != source_->order()) fail(ErrorKind::InvalidArgument, "image list has wrong length");
}

std::optional<GroupHom> GroupHom::from_generator_images(GroupPtr source, GroupPtr target,
                                                        const std::vector<Element>& gen_images,
                                                        std::size_t* bad_generator) {
  const auto& gens = source->generators();
  if (gen_images.size() != gens.size()) fail(ErrorKind::InvalidArgument, "one image per generator required");
  std::vector<Element> img(source->order(), kUnset);
  img[0] = 0;
  std::vector<Element> queue{0};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    Element g = queue[head];
    for (std::size_t k = 0; k < gens.size(); ++k) {
      Element h = source->right_gen(g, k);
      Element want = target->mul(img[g], gen_images[k]);
      if (img[h] == kUnset) {
        img[h] = want;
        queue.push_back(h);
      } else if (img[h] != want) {
        if (bad_generator) *bad_generator = k;
        return std::nullopt;
      }
    }
  }
  return GroupHom(std::move(source), std::move(target), std::move(img));
}

bool GroupHom::is_homomorphism() const {
  if (images_[0] != 0) return false;
  const auto& gens = source_->generators();
  for (std::size_t k = 0; k < gens.size(); ++k)
    for (Element g = 0; g < source_->order(); ++g)
      if (images_[source_->right_gen(g, k)] != target_->mul(images_[g], images_[gens[k]])) return false;
  return true;
}

bool GroupHom::is_injective() const {
  for (std::size_t g = 1; g < images_.size(); ++g)
    if (images_[g] == 0) return false;
  return true;
}

bool GroupHom::is_surjective() const {
  std::vector<bool> hit(target_->order(), false);
  std::size_t count = 0;
  for (auto x : images_)
    if (!hit[x]) {
      hit[x] = true;
      ++count;
    }
  return count == target_->order();
}

// ---------------------------------------------------------------------------

namespace groups {

GroupPtr cyclic(std::size_t n) {
  if (n == 0) fail(ErrorKind::InvalidArgument, "cyclic group of order 0");
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < n; ++k) labels.push_back(k == 0 ? "1" : "a^" + std::to_string(k));
  std::vector<Element> gens;
  if (n > 1) gens.push_back(1);
  return FiniteGroup::from_multiplication(
      n, [n](Element a, Element b) { return static_cast<Element>((a + b) % n); }, gens, labels);
}

GroupPtr dihedral(std::size_t m) {
  if (m == 0) fail(ErrorKind::InvalidArgument, "dihedral group needs m >= 1");
  const std::size_t n = 2 * m;
  std::vector<std::string> labels;
  for (std::size_t idx = 0; idx < n; ++idx) {
    std::size_t k = idx % m, e = idx / m;
    std::string s = k == 0 ? "" : (k == 1 ? "t" : "t^" + std::to_string(k));
    if (e) s += "s";
    labels.push_back(s.empty() ? "1" : s);
  }
  auto mul = [m](Element a, Element b) {
    std::size_t k1 = a % m, e1 = a / m, k2 = b % m, e2 = b / m;
    std::size_t k = e1 ? (k1 + m - k2) % m : (k1 + k2) % m;
    return static_cast<Element>(k + m * (e1 ^ e2));
  };
  std::vector<Element> gens;
  if (m > 1) gens.push_back(1);
  gens.push_back(static_cast<Element>(m));
  return FiniteGroup::from_multiplication(n, mul, gens, labels);
}

GroupPtr symmetric(std::size_t n) {
  if (n <= 1) return FiniteGroup::from_generators({});
  Permutation swap(n), cycle(n);
  for (std::size_t i = 0; i < n; ++i) {
    swap[i] = static_cast<std::uint32_t>(i);
    cycle[i] = static_cast<std::uint32_t>((i + 1) % n);
  }
  std::swap(swap[0], swap[1]);
  if (n == 2) return FiniteGroup::from_generators({swap});
  return FiniteGroup::from_generators({swap, cycle});
}

GroupPtr alternating(std::size_t n) {
  if (n <= 2) return FiniteGroup::from_generators({});
  std::vector<Permutation> gens;
  for (std::size_t i = 2; i < n; ++i) {
    Permutation p(n);
    for (std::size_t x = 0; x < n; ++x) p[x] = static_cast<std::uint32_t>(x);
    p[0] = 1;
    p[1] = static_cast<std::uint32_t>(i);
    p[i] = 0;
    gens.push_back(p);
  }
  return FiniteGroup::from_generators(gens);
}

GroupPtr abelian(const std::vector<std::size_t>& moduli) {
  std::size_t n = 1;
  for (auto m : moduli) {
    if (m == 0) fail(ErrorKind::InvalidArgument, "zero modulus");
    n *= m;
  }
  auto decode = [moduli](Element x) {
    std::vector<std::size_t> v;
    for (auto m : moduli) {
      v.push_back(x % m);
      x /= static_cast<Element>(m);
    }
    return v;
  };
  auto encode = [moduli](const std::vector<std::size_t>& v) {
    std::size_t x = 0, scale = 1;
    for (std::size_t i = 0; i < moduli.size(); ++i) {
      x += v[i] * scale;
      scale *= moduli[i];
    }
    return static_cast<Element>(x);
  };
  std::vector<Element> gens;
  std::size_t scale = 1;
  for (auto m : moduli) {
    if (m > 1) gens.push_back(static_cast<Element>(scale));
    scale *= m;
  }
  std::vector<std::string> labels;
  for (Element x = 0; x < n; ++x) {
    auto v = decode(x);
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    labels.push_back(s + ")");
  }
  return FiniteGroup::from_multiplication(
      n,
      [&](Element a, Element b) {
        auto va = decode(a), vb = decode(b);
        for (std::size_t i = 0; i < va.size(); ++i) va[i] = (va[i] + vb[i]) % moduli[i];
        return encode(va);
      },
      gens, labels);
}

GroupPtr direct_product(const GroupPtr& a, const GroupPtr& b) {
  const std::size_t na = a->order(), nb = b->order();
  std::vector<Element> gens;
  for (auto g : a->generators()) gens.push_back(g);
  for (auto h : b->generators()) gens.push_back(static_cast<Element>(h * na));
  std::vector<std::string> labels;
  for (std::size_t x = 0; x < na * nb; ++x)
    labels.push_back("(" + a->label(static_cast<Element>(x % na)) + "," + b->label(static_cast<Element>(x / na)) + ")");
  return FiniteGroup::from_multiplication(
      na * nb,
      [&](Element x, Element y) {
        return static_cast<Element>(a->mul(static_cast<Element>(x % na), static_cast<Element>(y % na)) +
                                    na * b->mul(static_cast<Element>(x / na), static_cast<Element>(y / na)));
      },
      gens, labels);
}

GroupPtr quaternion() {
  // unit u in {1,i,j,k} and sign bit: index u + 4 * sign.
  static const int unit_mul[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static const int sign_mul[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
  static const char* names[4] = {"1", "i", "j", "k"};
  std::vector<std::string> labels;
  for (int x = 0; x < 8; ++x) labels.push_back(std::string(x >= 4 ? "-" : "") + names[x % 4]);
  return FiniteGroup::from_multiplication(
      8,
      [](Element a, Element b) {
        int u = unit_mul[a % 4][b % 4];
        int s = (a / 4) ^ (b / 4) ^ sign_mul[a % 4][b % 4];
        return static_cast<Element>(u + 4 * s);
      },
      {1, 2}, labels);
}

namespace {

GroupPtr linear_2(std::size_t p, bool general) {
  // points: nonzero vectors (x, y) -> x + p y - 1.
  const std::size_t pts = p * p - 1;
  auto act = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
    Permutation perm(pts);
    for (std::size_t v = 1; v <= pts; ++v) {
      std::size_t x = v % p, y = v / p;
      std::size_t nx = (a * x + b * y) % p, ny = (c * x + d * y) % p;
      perm[v - 1] = static_cast<std::uint32_t>(nx + p * ny - 1);
    }
    return perm;
  };
  std::vector<Permutation> gens{act(1, 1, 0, 1), act(1, 0, 1, 1)};
  if (general) {
    std::size_t g = 2;
    for (; g < p; ++g) {
      std::size_t x = g, k = 1;
      while (x != 1) {
        x = x * g % p;
        ++k;
      }
      if (k == p - 1) break;
    }
    if (p > 2) gens.push_back(act(g, 0, 0, 1));
  }
  return FiniteGroup::from_generators(gens);
}

}  // namespace

GroupPtr special_linear_2(std::size_t p) { return linear_2(p, false); }
GroupPtr general_linear_2(std::size_t p) { return linear_2(p, true); }

GroupPtr abelian_semidirect(std::size_t modulus, std::size_t rank, const GroupPtr& h,
                            const std::vector<std::vector<long long>>& action) {
  if (action.size() != h->order()) fail(ErrorKind::InvalidArgument, "one action matrix per element of H");
  for (const auto& m : action)
    if (m.size() != rank * rank) fail(ErrorKind::InvalidArgument, "action matrix has wrong size");
  std::size_t vsize = 1;
  for (std::size_t i = 0; i < rank; ++i) vsize *= modulus;
  const std::size_t n = vsize * h->order();
  const long long N = static_cast<long long>(modulus);
  std::vector<std::vector<long long>> reduced = action;
  for (auto& m : reduced)
    for (auto& v : m) v = ((v % N) + N) % N;

  auto decode = [&](std::size_t x) {
    std::vector<long long> v(rank);
    for (std::size_t i = 0; i < rank; ++i) {
      v[i] = static_cast<long long>(x % modulus);
      x /= modulus;
    }
    return v;
  };
  auto encode = [&](const std::vector<long long>& v) {
    std::size_t x = 0, scale = 1;
    for (std::size_t i = 0; i < rank; ++i) {
      x += static_cast<std::size_t>(v[i]) * scale;
      scale *= modulus;
    }
    return x;
  };
  std::vector<std::vector<long long>> vecs(vsize);
  for (std::size_t x = 0; x < vsize; ++x) vecs[x] = decode(x);

  std::vector<Element> gens;
  std::size_t scale = 1;
  for (std::size_t i = 0; i < rank; ++i) {
    if (modulus > 1) gens.push_back(static_cast<Element>(scale));
    scale *= modulus;
  }
  for (auto g : h->generators()) gens.push_back(static_cast<Element>(g * vsize));
  std::vector<std::string> labels;
  for (std::size_t x = 0; x < n; ++x) {
    const auto& v = vecs[x % vsize];
    std::string s = "(";
    for (std::size_t i = 0; i < rank; ++i) s += (i ? "," : "") + std::to_string(v[i]);
    labels.push_back(s + ";" + h->label(static_cast<Element>(x / vsize)) + ")");
  }
  std::vector<long long> tmp(rank);
  return FiniteGroup::from_multiplication(
      n,
      [&](Element a, Element b) {
        const std::size_t ha = a / vsize, hb = b / vsize;
        const auto& va = vecs[a % vsize];
        const auto& vb = vecs[b % vsize];
        const auto& m = reduced[ha];
        for (std::size_t i = 0; i < rank; ++i) {
          long long acc = va[i];
          for (std::size_t j = 0; j < rank; ++j) acc += m[i * rank + j] * vb[j];
          tmp[i] = acc % N;
        }
        return static_cast<Element>(encode(tmp) + vsize * h->mul(static_cast<Element>(ha), static_cast<Element>(hb)));
      },
      gens, labels);
}

}  // namespace groups

}  // namespace l2mult
