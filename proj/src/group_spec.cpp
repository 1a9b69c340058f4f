#include "l2mult/group_spec.hpp"

#include <cctype>

#include "l2mult/error.hpp"

namespace l2mult {

namespace {

struct SpecParser {
  const std::string& s;
  std::size_t pos = 0;

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorKind::ParseError, "group spec '" + s + "': " + what + " at position " + std::to_string(pos));
  }
  std::string name() {
    skip();
    const std::size_t start = pos;
    while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) ++pos;
    if (start == pos) error("expected a name");
    return s.substr(start, pos - start);
  }
  std::size_t number() {
    skip();
    const std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (start == pos) error("expected a number");
    return std::stoul(s.substr(start, pos - start));
  }
  bool accept(char c) {
    skip();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) error(std::string("expected '") + c + "'");
  }

  GroupPtr group() {
    const std::string n = name();
    if (n == "quaternion" || n == "Q8") return groups::quaternion();
    if (n == "product") {
      expect('(');
      auto a = group();
      expect(',');
      auto b = group();
      expect(')');
      return groups::direct_product(a, b);
    }
    expect('(');
    std::vector<std::size_t> args{number()};
    while (accept(',')) args.push_back(number());
    expect(')');
    auto one = [&] {
      if (args.size() != 1) error(n + " takes one argument");
      if (args[0] == 0) error("argument must be positive");
      return args[0];
    };
    if (n == "cyclic") return groups::cyclic(one());
    if (n == "dihedral") return groups::dihedral(one());
    if (n == "symmetric") return groups::symmetric(one());
    if (n == "alternating") return groups::alternating(one());
    if (n == "sl2") return groups::special_linear_2(one());
    if (n == "gl2") return groups::general_linear_2(one());
    if (n == "abelian") return groups::abelian(args);
    error("unknown group '" + n + "'");
  }
};

}  // namespace

GroupPtr finite_group_from_spec(const std::string& spec) {
  SpecParser p{spec};
  auto g = p.group();
  p.skip();
  if (p.pos != spec.size()) p.error("trailing characters");
  return g;
}

BuiltinPtr builtin_group_from_json(const nlohmann::json& j) {
  try {
    if (j.is_string()) {
      const std::string s = j.get<std::string>();
      if (s == "dihedral_infinite") return BuiltinGroup::dihedral_infinite();
      SpecParser p{s};
      const std::string n = p.name();
      p.expect('(');
      const std::size_t r = p.number();
      p.expect(')');
      if (n == "free") return BuiltinGroup::free(r);
      if (n == "free_abelian") return BuiltinGroup::free_abelian(r);
      fail(ErrorKind::ParseError, "unknown built-in group '" + s + "'");
    }
    if (!j.is_object()) fail(ErrorKind::ParseError, "built-in group must be a string or an object");
    const std::string family = j.at("family").get<std::string>();
    if (family == "free") return BuiltinGroup::free(j.at("rank").get<std::size_t>());
    if (family == "free_abelian") return BuiltinGroup::free_abelian(j.at("rank").get<std::size_t>());
    if (family == "dihedral_infinite") return BuiltinGroup::dihedral_infinite();
    if (family == "free_by_finite") {
      auto h = finite_group_from_spec(j.at("h").get<std::string>());
      return BuiltinGroup::free_by_finite_signed(j.at("rank").get<std::size_t>(), h,
                                                 j.at("action").get<std::vector<std::vector<int>>>());
    }
    fail(ErrorKind::ParseError, "unknown family '" + family + "'");
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::ParseError, std::string("built-in group: ") + e.what());
  }
}

nlohmann::json builtin_group_to_json(const BuiltinPtr& g, const std::string& h_spec) {
  switch (g->family()) {
    case Family::Free: return "free(" + std::to_string(g->rank()) + ")";
    case Family::FreeAbelian: return "free_abelian(" + std::to_string(g->rank()) + ")";
    case Family::DihedralInfinite: return "dihedral_infinite";
    case Family::FreeByFinite: {
      if (h_spec.empty() || !g->signed_permutation_action())
        fail(ErrorKind::InvalidArgument, "free-by-finite group needs its H spec and a signed action to serialize");
      nlohmann::json action = nlohmann::json::array();
      const auto& h = g->finite_part();
      for (auto k : h->generators()) {
        std::vector<int> row;
        for (std::size_t i = 0; i < g->rank(); ++i) {
          const auto& w = g->automorphism(k, i);
          row.push_back(w[0].exp * static_cast<int>(w[0].gen + 1));
        }
        action.push_back(row);
      }
      return {{"family", "free_by_finite"}, {"rank", g->rank()}, {"h", h_spec}, {"action", action}};
    }
  }
  return {};
}

}  // namespace l2mult
