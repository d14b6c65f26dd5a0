#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "transforma/error.hpp"

namespace transforma {

/// Exact rational p/q with 64-bit parts, always reduced and with q > 0.
/// Scenario inputs keep this form so rendering a scenario back out is exact.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t value) : num_(value) {}  // NOLINT(implicit)

  Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw Error(ErrorKind::Parse, "rational with zero denominator");
    assign(static_cast<__int128>(num), static_cast<__int128>(den));
  }

  std::int64_t numerator() const noexcept { return num_; }
  std::int64_t denominator() const noexcept { return den_; }

  double to_double() const noexcept {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend bool operator==(const Rational&, const Rational&) = default;

  friend Rational operator+(const Rational& a, const Rational& b) {
    Rational r;
    r.assign(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
             static_cast<__int128>(a.den_) * b.den_);
    return r;
  }
  friend Rational operator-(const Rational& a) {
    Rational r;
    r.assign(-static_cast<__int128>(a.num_), a.den_);
    return r;
  }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    Rational r;
    r.assign(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
    return r;
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw Error(ErrorKind::Parse, "rational division by zero");
    Rational r;
    r.assign(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
    return r;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

  /// Parses "p/q", an integer, or a decimal literal with optional exponent
  /// ("0.125", "-3", "1.5e-2"). Decimals are converted exactly.
  static Rational parse(std::string_view text);

  /// Exact rational for the shortest decimal that round-trips `value`.
  static Rational from_double(double value);

 private:
  void assign(__int128 num, __int128 den) {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    __int128 a = num < 0 ? -num : num;
    __int128 b = den;
    while (b != 0) {
      const __int128 t = a % b;
      a = b;
      b = t;
    }
    const __int128 g = a == 0 ? 1 : a;
    num /= g;
    den /= g;
    constexpr __int128 lim = std::numeric_limits<std::int64_t>::max();
    if (num > lim || num < -lim || den > lim)
      throw Error(ErrorKind::Parse, "rational value out of 64-bit range");
    num_ = static_cast<std::int64_t>(num);
    den_ = static_cast<std::int64_t>(den);
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

inline Rational parse_decimal(std::string_view s, std::string_view original) {
  auto fail = [&]() -> Rational {
    throw Error(ErrorKind::Parse, "malformed number '" + std::string(original) + "'");
  };
  if (s.empty()) return fail();
  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  std::int64_t exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = s.substr(e + 1);
    if (!exp_text.empty() && exp_text.front() == '+') exp_text.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(exp_text.data(), exp_text.data() + exp_text.size(), exponent);
    if (ec != std::errc{} || ptr != exp_text.data() + exp_text.size() || exp_text.empty()) return fail();
    s = s.substr(0, e);
  }
  __int128 mantissa = 0;
  bool digits = false;
  bool seen_point = false;
  for (char ch : s) {
    if (ch == '.') {
      if (seen_point) return fail();
      seen_point = true;
      continue;
    }
    if (ch < '0' || ch > '9') return fail();
    digits = true;
    if (mantissa > (static_cast<__int128>(1) << 100)) {
      throw Error(ErrorKind::Parse, "too many digits in '" + std::string(original) + "'");
    }
    mantissa = mantissa * 10 + (ch - '0');
    if (seen_point) --exponent;
  }
  if (!digits) return fail();
  // Strip trailing zeros so the power of ten stays small.
  while (mantissa != 0 && mantissa % 10 == 0 && exponent < 0) {
    mantissa /= 10;
    ++exponent;
  }
  if (exponent > 18 || exponent < -18) {
    throw Error(ErrorKind::Parse, "exponent out of range in '" + std::string(original) + "'");
  }
  std::int64_t pow10 = 1;
  for (std::int64_t i = 0; i < (exponent < 0 ? -exponent : exponent); ++i) pow10 *= 10;
  constexpr __int128 lim = std::numeric_limits<std::int64_t>::max();
  if (exponent >= 0) {
    const __int128 value = mantissa * pow10;
    if (value > lim) throw Error(ErrorKind::Parse, "number out of range: " + std::string(original));
    const auto v = static_cast<std::int64_t>(value);
    return Rational(negative ? -v : v, 1);
  }
  if (mantissa > lim) throw Error(ErrorKind::Parse, "number out of range: " + std::string(original));
  const auto m = static_cast<std::int64_t>(mantissa);
  return Rational(negative ? -m : m, pow10);
}

}  // namespace detail

inline Rational Rational::parse(std::string_view text) {
  const std::string_view s = detail::trim(text);
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    const Rational p = detail::parse_decimal(detail::trim(s.substr(0, slash)), text);
    const Rational q = detail::parse_decimal(detail::trim(s.substr(slash + 1)), text);
    if (q.numerator() == 0) throw Error(ErrorKind::Parse, "zero denominator in '" + std::string(text) + "'");
    return p / q;
  }
  return detail::parse_decimal(s, text);
}

inline Rational Rational::from_double(double value) {
  if (!std::isfinite(value)) throw Error(ErrorKind::Parse, "non-finite number");
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw Error(ErrorKind::Parse, "cannot format number");
  return parse(std::string_view(buf, static_cast<std::size_t>(ptr - buf)));
}

}  // namespace transforma
