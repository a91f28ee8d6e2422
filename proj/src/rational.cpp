#include "ckn/rational.hpp"

#include <cctype>
#include <limits>

namespace ckn {

namespace {

std::string_view strip_sign(std::string_view text, bool& negative) {
  negative = false;
  if (text.starts_with("\xE2\x88\x92")) {  // U+2212 minus sign
    negative = true;
    return text.substr(3);
  }
  if (!text.empty() && (text[0] == '-' || text[0] == '+')) {
    negative = text[0] == '-';
    return text.substr(1);
  }
  return text;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s)
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  return true;
}

}  // namespace

Rational::Rational(long long num, long long den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  v_ = Big(num) / Big(den);
}

Rational Rational::parse(std::string_view text) {
  std::string_view original = text;
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  bool negative = false;
  std::string_view body = strip_sign(text, negative);
  if (body.find_first_of(".eE") != std::string_view::npos)
    throw ParseError("'" + std::string(original) + "' is not an exact rational; write it as num/den");
  auto slash = body.find('/');
  std::string_view num = body.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den))
    throw ParseError("'" + std::string(original) + "' is not a rational of the form num/den");
  boost::multiprecision::cpp_int n{std::string(num)};
  boost::multiprecision::cpp_int d{std::string(den)};
  if (d == 0) throw ParseError("'" + std::string(original) + "' has a zero denominator");
  if (negative) n = -n;
  return Rational(Big(n) / Big(d));
}

std::string Rational::str() const {
  auto num = boost::multiprecision::numerator(v_);
  auto den = boost::multiprecision::denominator(v_);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double Rational::to_double() const { return v_.convert_to<double>(); }

bool Rational::is_integer() const { return boost::multiprecision::denominator(v_) == 1; }

Rational Rational::reciprocal() const {
  if (is_zero()) throw std::domain_error("reciprocal of zero");
  return Rational(Big(1) / v_);
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("rational division by zero");
  v_ /= o.v_;
  return *this;
}

const Rational& ExtRational::value() const {
  if (!v_) throw std::logic_error("value() of infinite ExtRational");
  return *v_;
}

double ExtRational::to_double() const {
  return v_ ? v_->to_double() : std::numeric_limits<double>::infinity();
}

ExtRational max(const ExtRational& a, const ExtRational& b) { return a < b ? b : a; }
ExtRational min(const ExtRational& a, const ExtRational& b) { return b < a ? b : a; }

}  // namespace ckn
