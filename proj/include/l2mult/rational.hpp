#pragma once

#include <gmpxx.h>

#include <string>

namespace l2mult {

using Rational = mpq_class;
using Integer = mpz_class;

/// "p/q" in lowest terms, or "p" when the denominator is 1.
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

/// Accepts "p", "p/q" and plain decimals such as "-0.25".
Rational parse_rational(const std::string& text);

inline double to_double(const Rational& q) { return q.get_d(); }

}  // namespace l2mult
