#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ckn {

struct ParseError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Exact rational in lowest terms with a positive denominator.
class Rational {
 public:
  using Big = boost::multiprecision::cpp_rational;

  Rational() = default;
  Rational(long long n) : v_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(long long num, long long den);
  explicit Rational(Big v) : v_(std::move(v)) {}

  // Accepts "7", "-3/4", "+5/2". Decimal and exponent forms are rejected.
  static Rational parse(std::string_view text);

  std::string str() const;
  double to_double() const;
  const Big& big() const { return v_; }

  int sign() const { return v_.sign(); }
  bool is_zero() const { return v_.is_zero(); }
  bool is_integer() const;
  Rational reciprocal() const;

  Rational operator-() const { return Rational(Big(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (a.v_ < b.v_) return std::strong_ordering::less;
    if (a.v_ > b.v_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  Big v_;
};

inline Rational abs(const Rational& x) { return x.sign() < 0 ? -x : x; }
inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }

// Rational or +infinity. Every finite value orders below infinity.
class ExtRational {
 public:
  ExtRational(Rational v) : v_(std::move(v)) {}  // NOLINT(google-explicit-constructor)
  static ExtRational infinity() { return ExtRational(); }

  bool is_infinite() const { return !v_.has_value(); }
  const Rational& value() const;
  std::string str() const { return v_ ? v_->str() : "inf"; }
  double to_double() const;

  friend bool operator==(const ExtRational& a, const ExtRational& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b);

 private:
  ExtRational() = default;
  std::optional<Rational> v_;
};

inline std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b) {
  if (a.is_infinite() || b.is_infinite())
    return static_cast<int>(a.is_infinite()) <=> static_cast<int>(b.is_infinite());
  return a.value() <=> b.value();
}

ExtRational max(const ExtRational& a, const ExtRational& b);
ExtRational min(const ExtRational& a, const ExtRational& b);

}  // namespace ckn
