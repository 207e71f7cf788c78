#include <cctype>

#include "majolat/scalar.hpp"

namespace majolat {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

Rational pow10(long e) {
  Rational r(1);
  for (long i = 0; i < e; ++i) r *= 10;
  return r;
}

// [+-]digits[.digits][(e|E)[+-]digits]
Rational parse_decimal(const std::string& text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) negative = text[pos++] == '-';

  std::string digits;
  long scale = 0;
  bool seen_digit = false;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    digits += text[pos++];
    seen_digit = true;
  }
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      digits += text[pos++];
      ++scale;
      seen_digit = true;
    }
  }
  if (!seen_digit) throw Error(ErrorCode::ParseError, "not a number: '" + text + "'");

  long exponent = 0;
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    bool exp_negative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      exp_negative = text[pos++] == '-';
    }
    const std::string exp_digits = text.substr(pos);
    if (!all_digits(exp_digits) || exp_digits.size() > 6) {
      throw Error(ErrorCode::ParseError, "bad exponent in '" + text + "'");
    }
    exponent = std::stol(exp_digits);
    if (exp_negative) exponent = -exponent;
    pos = text.size();
  }
  if (pos != text.size()) throw Error(ErrorCode::ParseError, "not a number: '" + text + "'");

  // a leading zero would make the GMP string parser read octal
  const auto first = digits.find_first_not_of('0');
  digits = first == std::string::npos ? "0" : digits.substr(first);
  Rational value{boost::multiprecision::mpz_int(digits)};
  const long shift = exponent - scale;
  if (shift > 1000 || shift < -1000) {
    throw Error(ErrorCode::ParseError, "exponent out of range in '" + text + "'");
  }
  if (shift >= 0) {
    value *= pow10(shift);
  } else {
    value /= pow10(-shift);
  }
  return negative ? Rational(-value) : value;
}

}  // namespace

Rational parse_rational(const std::string& raw) {
  std::string text;
  for (char c : raw) {
    if (!std::isspace(static_cast<unsigned char>(c))) text += c;
  }
  const auto slash = text.find('/');
  if (slash == std::string::npos) return parse_decimal(text);

  const Rational num = parse_decimal(text.substr(0, slash));
  const Rational den = parse_decimal(text.substr(slash + 1));
  if (den == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + raw + "'");
  return num / den;
}

std::string format_rational(const Rational& x) {
  const auto num = numerator(x);
  const auto den = denominator(x);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace majolat
