#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

#include "hahnforge/errors.hpp"

namespace hahnforge {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

/// Precision cap of a truncated series. `std::nullopt` means the series is exact.
using Cap = std::optional<Rat>;

inline Int num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int den(const Rat& r) { return boost::multiprecision::denominator(r); }

inline Int floor_div(const Int& a, const Int& b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
  return q;
}

inline Int floor(const Rat& r) { return floor_div(num(r), den(r)); }
inline Int ceil(const Rat& r) { return -floor_div(-num(r), den(r)); }

/// Fractional part in [0, 1).
inline Rat frac(const Rat& r) { return r - Rat(floor(r)); }

inline bool is_integer(const Rat& r) { return den(r) == 1; }

inline Rat make_rat(const Int& n, const Int& d) {
  if (d == 0) throw Error(ErrorKind::DivisionByZero, "rational with zero denominator");
  return Rat(n, d);
}

inline std::string to_string(const Int& n) { return n.str(); }

/// `a/b`, or `a` when the denominator is one.
inline std::string to_string(const Rat& r) {
  if (den(r) == 1) return num(r).str();
  return num(r).str() + "/" + den(r).str();
}

inline Int ipow(const Int& base, unsigned long exp) {
  return boost::multiprecision::pow(base, static_cast<unsigned>(exp));
}

/// p-adic valuation of a nonzero integer.
inline long vp(Int n, const Int& p) {
  if (n == 0) throw Error(ErrorKind::DomainError, "p-adic valuation of zero");
  if (n < 0) n = -n;
  long v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

/// p-adic valuation of a nonzero rational.
inline long vp(const Rat& r, const Int& p) { return vp(num(r), p) - vp(den(r), p); }

inline Cap min_cap(const Cap& a, const Cap& b) {
  if (!a) return b;
  if (!b) return a;
  return *a < *b ? a : b;
}

inline Cap add_cap(const Cap& a, const Rat& shift) {
  if (!a) return std::nullopt;
  return *a + shift;
}

inline std::string cap_to_string(const Cap& c) { return c ? to_string(*c) : std::string("inf"); }

/// Value in Q ∪ {+∞}; used for valuations.
class Valuation {
 public:
  Valuation() = default;  // +∞
  Valuation(Rat v) : value_(std::move(v)) {}  // NOLINT(implicit)

  static Valuation infinity() { return {}; }

  bool is_infinite() const { return !value_.has_value(); }
  const Rat& value() const {
    if (!value_) throw Error(ErrorKind::DomainError, "valuation is +inf");
    return *value_;
  }

  friend bool operator==(const Valuation& a, const Valuation& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Valuation& a, const Valuation& b) {
    if (a.is_infinite() && b.is_infinite()) return std::strong_ordering::equal;
    if (a.is_infinite()) return std::strong_ordering::greater;
    if (b.is_infinite()) return std::strong_ordering::less;
    if (*a.value_ < *b.value_) return std::strong_ordering::less;
    if (*a.value_ > *b.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  std::string str() const { return value_ ? to_string(*value_) : std::string("+inf"); }

 private:
  std::optional<Rat> value_;
};

inline std::ostream& operator<<(std::ostream& os, const Valuation& v) { return os << v.str(); }

/// Parses `a`, `-a`, `a/b`. Throws SyntaxError.
inline Rat parse_rat(std::string_view text) {
  auto fail = [&] { throw Error(ErrorKind::SyntaxError, "malformed rational '" + std::string(text) + "'"); };
  if (text.empty()) fail();
  auto slash = text.find('/');
  auto parse_int = [&](std::string_view s, bool allow_sign) {
    if (s.empty()) fail();
    std::size_t i = 0;
    if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
    if (i == s.size()) fail();
    for (std::size_t j = i; j < s.size(); ++j)
      if (s[j] < '0' || s[j] > '9') fail();
    return Int(std::string(s[0] == '+' ? s.substr(1) : s));
  };
  if (slash == std::string_view::npos) return Rat(parse_int(text, true));
  Int n = parse_int(text.substr(0, slash), true);
  Int d = parse_int(text.substr(slash + 1), false);
  if (d == 0) fail();
  return Rat(n, d);
}

}  // namespace hahnforge
