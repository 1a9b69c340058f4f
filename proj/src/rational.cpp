#include "l2mult/rational.hpp"

#include <cctype>

#include "l2mult/error.hpp"

namespace l2mult {

std::string to_string(const Rational& q) {
  Rational c(q);
  c.canonicalize();
  return c.get_str();
}

std::string to_string(const Integer& z) { return z.get_str(); }

namespace {

bool all_digits(const std::string& s, std::size_t from) {
  if (from >= s.size()) return false;
  for (std::size_t i = from; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace

Rational parse_rational(const std::string& raw) {
  std::string s;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) fail(ErrorKind::ParseError, "empty rational");
  std::size_t sign_end = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  const bool negative = s[0] == '-';
  std::string body = s.substr(sign_end);

  Rational out;
  const auto dot = body.find('.');
  const auto slash = body.find('/');
  if (dot != std::string::npos) {
    std::string whole = body.substr(0, dot);
    std::string frac = body.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole, 0)) || (!frac.empty() && !all_digits(frac, 0)) ||
        (whole.empty() && frac.empty()))
      fail(ErrorKind::ParseError, "bad decimal '" + raw + "'");
    Integer num(whole.empty() ? "0" : whole);
    Integer den = 1;
    for (char c : frac) {
      num = num * 10 + (c - '0');
      den *= 10;
    }
    out = Rational(num, den);
  } else if (slash != std::string::npos) {
    std::string a = body.substr(0, slash);
    std::string b = body.substr(slash + 1);
    if (!all_digits(a, 0) || !all_digits(b, 0)) fail(ErrorKind::ParseError, "bad fraction '" + raw + "'");
    Integer den(b);
    if (den == 0) fail(ErrorKind::ParseError, "zero denominator in '" + raw + "'");
    out = Rational(Integer(a), den);
  } else {
    if (!all_digits(body, 0)) fail(ErrorKind::ParseError, "bad integer '" + raw + "'");
    out = Rational(Integer(body));
  }
  out.canonicalize();
  if (negative) out = -out;
  return out;
}

}  // namespace l2mult
