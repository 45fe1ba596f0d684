#pragma once

#include <gmpxx.h>

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lopc {

// Exact rational. Probabilities, message weights and rates all live here;
// only log-based measures drop to double.
using Rational = mpq_class;
using Prob = mpq_class;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Accepts "num/den", plain integers and finite decimals ("0.4" -> 2/5).
Rational parse_rational(std::string_view text);

// Comma separated list of rationals, e.g. "1/3,1/3,1/3".
std::vector<Rational> parse_rational_list(std::string_view text);

// Canonical "num/den" ("1" and "0" for integers).
std::string to_string(const Rational& r);

Rational sum(std::span<const Rational> values);

// Canonicalized num/den.
Rational frac(long num, long den);

// Base-2 logarithm of a positive rational, in double precision. Works for
// values far outside the double range (e.g. 3^64 / 4^64).
double log2_of(const Rational& r);

// -p log2 p with 0 log 0 := 0.
double plogp(const Rational& p);

}  // namespace lopc
