#include "lopc/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace lopc {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

Rational parse_decimal(std::string_view s, std::string_view original) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  const auto dot = s.find('.');
  std::string_view whole = s.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
  if (whole.empty() && frac.empty())
    throw ParseError("malformed rational '" + std::string(original) + "'");
  if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)))
    throw ParseError("malformed rational '" + std::string(original) + "'");
  std::string digits = std::string(whole) + std::string(frac);
  if (digits.empty()) digits = "0";
  mpz_class num(digits, 10);
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
  Rational r(num, den);
  r.canonicalize();
  return negative ? Rational(-r) : r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) throw ParseError("empty rational");
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) return parse_decimal(s, text);

  std::string_view num = trim(s.substr(0, slash));
  std::string_view den = trim(s.substr(slash + 1));
  bool negative = false;
  if (!num.empty() && (num.front() == '-' || num.front() == '+')) {
    negative = num.front() == '-';
    num.remove_prefix(1);
  }
  if (!all_digits(num) || !all_digits(den))
    throw ParseError("malformed rational '" + std::string(text) + "'");
  mpz_class d(std::string(den), 10);
  if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  Rational r(mpz_class(std::string(num), 10), d);
  r.canonicalize();
  return negative ? Rational(-r) : r;
}

std::vector<Rational> parse_rational_list(std::string_view text) {
  std::vector<Rational> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto end = comma == std::string_view::npos ? text.size() : comma;
    out.push_back(parse_rational(text.substr(start, end - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rational sum(std::span<const Rational> values) {
  Rational total = 0;
  for (const auto& v : values) total += v;
  return total;
}

Rational frac(long num, long den) {
  if (den == 0) throw std::domain_error("zero denominator");
  Rational r{mpz_class(num), mpz_class(den)};
  r.canonicalize();
  return r;
}

double log2_of(const Rational& r) {
  if (sgn(r) <= 0) throw std::domain_error("log2 of non-positive rational");
  long exp_num = 0;
  long exp_den = 0;
  const double mant_num = mpz_get_d_2exp(&exp_num, r.get_num_mpz_t());
  const double mant_den = mpz_get_d_2exp(&exp_den, r.get_den_mpz_t());
  return std::log2(mant_num) - std::log2(mant_den) + static_cast<double>(exp_num - exp_den);
}

double plogp(const Rational& p) {
  if (sgn(p) == 0) return 0.0;
  return -p.get_d() * log2_of(p);
}

}  // namespace lopc
