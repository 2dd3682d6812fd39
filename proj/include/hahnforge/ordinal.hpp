#pragma once

// Ordinals below epsilon_0 in Cantor normal form.

#include <compare>
#include <string>
#include <string_view>
#include <vector>

#include "hahnforge/errors.hpp"
#include "hahnforge/rational.hpp"

namespace hahnforge {

struct OrdinalTerm;

/// w^{b_1} c_1 + ... + w^{b_k} c_k with b_1 > ... > b_k and c_i >= 1; empty is 0.
class Ordinal {
 public:
  Ordinal() = default;
  static Ordinal from_int(const Int& n);
  static Ordinal omega();
  /// w^e c
  static Ordinal omega_pow(const Ordinal& e, const Int& c = 1);

  const std::vector<OrdinalTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_finite() const;
  /// Value of a finite ordinal.
  Int finite_value() const;
  /// b_1, the leading exponent (0 for finite ordinals).
  Ordinal leading_exponent() const;
  /// Nesting depth of exponents: 0 for finite ordinals, 1 below w^w, ...
  int depth() const;

  friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b);
  friend bool operator==(const Ordinal& a, const Ordinal& b) { return (a <=> b) == 0; }

  friend Ordinal operator+(const Ordinal& a, const Ordinal& b);
  friend Ordinal operator*(const Ordinal& a, const Ordinal& b);

 private:
  std::vector<OrdinalTerm> terms_;
};

struct OrdinalTerm {
  Ordinal exponent;
  Int coeff;
};

inline Ordinal Ordinal::from_int(const Int& n) {
  if (n < 0) throw Error(ErrorKind::DomainError, "negative ordinal");
  Ordinal o;
  if (n > 0) o.terms_.push_back(OrdinalTerm{Ordinal(), n});
  return o;
}

inline Ordinal Ordinal::omega_pow(const Ordinal& e, const Int& c) {
  if (c < 0) throw Error(ErrorKind::DomainError, "negative ordinal coefficient");
  Ordinal o;
  if (c > 0) o.terms_.push_back(OrdinalTerm{e, c});
  return o;
}

inline Ordinal Ordinal::omega() { return omega_pow(from_int(1)); }

inline bool Ordinal::is_finite() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent.is_zero()); }

inline Int Ordinal::finite_value() const {
  if (!is_finite()) throw Error(ErrorKind::DomainError, "ordinal is infinite");
  return terms_.empty() ? Int(0) : terms_[0].coeff;
}

inline Ordinal Ordinal::leading_exponent() const { return terms_.empty() ? Ordinal() : terms_[0].exponent; }

inline int Ordinal::depth() const {
  int d = 0;
  for (const auto& t : terms_)
    if (!t.exponent.is_zero()) d = std::max(d, 1 + t.exponent.depth());
  return d;
}

inline std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
  const std::size_t n = std::min(a.terms_.size(), b.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = a.terms_[i].exponent <=> b.terms_[i].exponent; c != 0) return c;
    if (a.terms_[i].coeff != b.terms_[i].coeff) return a.terms_[i].coeff < b.terms_[i].coeff ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  return a.terms_.size() <=> b.terms_.size();
}

/// Terms of a below the leading exponent of b are absorbed.
inline Ordinal operator+(const Ordinal& a, const Ordinal& b) {
  if (b.is_zero()) return a;
  const Ordinal& e = b.terms_[0].exponent;
  Ordinal r;
  for (const auto& t : a.terms_) {
    const auto c = t.exponent <=> e;
    if (c > 0) {
      r.terms_.push_back(t);
    } else {
      if (c == 0) {
        r.terms_.push_back(OrdinalTerm{e, t.coeff + b.terms_[0].coeff});
        r.terms_.insert(r.terms_.end(), b.terms_.begin() + 1, b.terms_.end());
        return r;
      }
      break;
    }
  }
  r.terms_.insert(r.terms_.end(), b.terms_.begin(), b.terms_.end());
  return r;
}

/// Right distribution over the terms of b: a w^e = w^{b_1 + e} for e > 0 and
/// a c = w^{b_1} c_1 c + (rest of a) for finite c.
inline Ordinal operator*(const Ordinal& a, const Ordinal& b) {
  if (a.is_zero() || b.is_zero()) return Ordinal();
  const Ordinal& lead = a.terms_[0].exponent;
  Ordinal r;
  for (const auto& t : b.terms_) {
    Ordinal part;
    if (t.exponent.is_zero()) {
      part.terms_ = a.terms_;
      part.terms_[0].coeff *= t.coeff;
    } else {
      part.terms_.push_back(OrdinalTerm{lead + t.exponent, t.coeff});
    }
    r = r + part;
  }
  return r;
}

inline Ordinal cnf_add(const Ordinal& a, const Ordinal& b) { return a + b; }
inline Ordinal cnf_mul(const Ordinal& a, const Ordinal& b) { return a * b; }
inline std::strong_ordering cnf_cmp(const Ordinal& a, const Ordinal& b) { return a <=> b; }

/// Order type of sum_{t in N} x p^{Nt} when supp x has order type alpha: alpha w = w^{b_1 + 1}.
inline Ordinal replication_order_type(const Ordinal& alpha) {
  if (alpha.is_zero()) throw Error(ErrorKind::ZeroOrderType, "alpha must be nonzero");
  return alpha * Ordinal::omega();
}

enum class Prediction { Consistent, Contradicts };

/// A support of order type alpha replicates to alpha w. That product is finite
/// only for alpha = 0, equals w only for finite alpha >= 1, and is never w^w.
inline Prediction prediction_filter(const Ordinal& alpha) {
  if (alpha.is_zero()) return Prediction::Consistent;
  const Ordinal rep = replication_order_type(alpha);
  return rep == Ordinal::omega() ? Prediction::Consistent : Prediction::Contradicts;
}

inline std::string prediction_name(Prediction p) { return p == Prediction::Consistent ? "consistent" : "contradicts"; }

/// `w^(e)·c + ...`; exponent 1 prints as `w`, coefficient 1 is omitted.
inline std::string format_ordinal(const Ordinal& a) {
  if (a.is_zero()) return "0";
  std::string out;
  for (const auto& t : a.terms()) {
    if (!out.empty()) out += " + ";
    if (t.exponent.is_zero()) {
      out += t.coeff.str();
      continue;
    }
    out += "w";
    if (!(t.exponent == Ordinal::from_int(1))) out += "^(" + format_ordinal(t.exponent) + ")";
    if (t.coeff != 1) out += "·" + t.coeff.str();
  }
  return out;
}

namespace detail {

class OrdinalParser {
 public:
  OrdinalParser(std::string_view s, int max_depth) : s_(s), max_depth_(max_depth) {}

  Ordinal parse() {
    Ordinal r = sum(0);
    skip();
    if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
    return r;
  }

 private:
  Ordinal sum(int depth) {
    if (depth > max_depth_) throw Error(ErrorKind::DomainError, "ordinal nesting exceeds depth " + std::to_string(max_depth_));
    Ordinal r = term(depth);
    while (true) {
      skip();
      if (i_ < s_.size() && s_[i_] == '+') {
        ++i_;
        r = r + term(depth);
      } else {
        return r;
      }
    }
  }

  Ordinal term(int depth) {
    skip();
    if (i_ < s_.size() && (s_[i_] >= '0' && s_[i_] <= '9')) return Ordinal::from_int(integer());
    if (i_ >= s_.size() || (s_[i_] != 'w' && s_[i_] != 'W')) fail("expected an integer or 'w'");
    ++i_;
    Ordinal e = Ordinal::from_int(1);
    skip();
    if (i_ < s_.size() && s_[i_] == '^') {
      ++i_;
      skip();
      if (i_ < s_.size() && s_[i_] == '(') {
        ++i_;
        e = sum(depth + 1);
        skip();
        if (i_ >= s_.size() || s_[i_] != ')') fail("expected ')'");
        ++i_;
      } else {
        e = Ordinal::from_int(integer());
      }
    }
    Int c = 1;
    skip();
    if (s_.substr(i_, 2) == "\xC2\xB7") {
      i_ += 2;
      c = integer();
    } else if (i_ < s_.size() && s_[i_] == '*') {
      ++i_;
      c = integer();
    }
    return Ordinal::omega_pow(e, c);
  }

  Int integer() {
    skip();
    const std::size_t start = i_;
    while (i_ < s_.size() && s_[i_] >= '0' && s_[i_] <= '9') ++i_;
    if (start == i_) fail("expected an integer");
    return Int(std::string(s_.substr(start, i_ - start)));
  }

  void skip() {
    while (i_ < s_.size() && s_[i_] == ' ') ++i_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::SyntaxError, "ordinal at column " + std::to_string(i_ + 1) + ": " + what);
  }

  std::string_view s_;
  std::size_t i_ = 0;
  int max_depth_;
};

}  // namespace detail

/// Accepts `·` or `*` before coefficients, `w^n` or `w^(ordinal)`, and sums in any order.
inline Ordinal parse_ordinal(std::string_view s, int max_depth = 8) { return detail::OrdinalParser(s, max_depth).parse(); }

}  // namespace hahnforge
