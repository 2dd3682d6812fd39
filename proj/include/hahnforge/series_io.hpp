#pragma once

// Text and JSON forms of series and polynomials.
//
//   series := ['+'|'-'] term (('+'|'-') term)*
//   term   := coeff ['*'] base [exp] | coeff | base [exp] | 'O' '(' base [exp] ')'
//   coeff  := '[' fq ']' | int
//   exp    := '^' ( '(' rat ')' | ['-'] int )
//   rat    := ['-'] int ['/' int]
//
//   poly   := ['+'|'-'] pterm (('+'|'-') pterm)*
//   pterm  := factor ('*' factor)*
//   factor := int | '[' fq ']' | base [exp] | 'X' ['^' int] | '(' series ')'

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

#include "hahnforge/eq_hahn.hpp"
#include "hahnforge/errors.hpp"
#include "hahnforge/fq.hpp"
#include "hahnforge/padic_hahn.hpp"
#include "hahnforge/rational.hpp"

namespace hahnforge {

struct SeriesTermAst {
  int sign = 1;
  std::optional<std::string> bracket;  // `[...]` text
  Int integer{1};                      // integer coefficient when no bracket
  std::optional<char> base;            // absent for constants
  Rat exponent{0};

  friend bool operator==(const SeriesTermAst&, const SeriesTermAst&) = default;
};

struct SeriesAst {
  std::vector<SeriesTermAst> terms;
  std::optional<char> base;
  Cap cap;

  friend bool operator==(const SeriesAst&, const SeriesAst&) = default;
};

struct PolyFactor {
  std::variant<Int, std::string, std::pair<char, Rat>, unsigned, SeriesAst> v;  // int, [fq], base^e, X^n, (series)
};

struct PolyTermAst {
  int sign = 1;
  std::vector<PolyFactor> factors;
};

struct PolyAst {
  std::vector<PolyTermAst> terms;
};

namespace detail {

class ExprParser {
 public:
  explicit ExprParser(std::string_view s) : s_(s) {}

  SeriesAst series_only() {
    SeriesAst a = series();
    end();
    return a;
  }

  PolyAst poly_only() {
    PolyAst a = poly();
    end();
    return a;
  }

 private:
  SeriesAst series() {
    SeriesAst out;
    int sign = 1;
    skip();
    if (peek('+') || peek('-')) sign = take() == '-' ? -1 : 1;
    while (true) {
      series_term(out, sign);
      skip();
      if (peek('+') || peek('-')) {
        sign = take() == '-' ? -1 : 1;
        continue;
      }
      return out;
    }
  }

  void series_term(SeriesAst& out, int sign) {
    skip();
    if (peek('O')) {
      if (sign < 0) fail("a cap term cannot be negated");
      if (out.cap) fail("a second cap term");
      take();
      expect('(');
      const char b = base();
      note_base(out, b);
      const Rat e = opt_exponent();
      expect(')');
      out.cap = e;
      return;
    }
    if (out.cap) fail("terms after the cap term");
    SeriesTermAst t;
    t.sign = sign;
    bool have_coeff = false;
    if (peek('[')) {
      t.bracket = bracket();
      have_coeff = true;
    } else if (digit()) {
      t.integer = integer();
      have_coeff = true;
    }
    skip();
    if (have_coeff && peek('*')) {
      take();
      skip();
      if (!peek('t') && !peek('p')) fail("expected 't' or 'p'");
    }
    skip();
    if (peek('t') || peek('p')) {
      t.base = base();
      note_base(out, *t.base);
      t.exponent = opt_exponent();
    } else if (!have_coeff) {
      fail("expected a coefficient, 't', 'p' or 'O('");
    }
    out.terms.push_back(std::move(t));
  }

  PolyAst poly() {
    PolyAst out;
    int sign = 1;
    skip();
    if (peek('+') || peek('-')) sign = take() == '-' ? -1 : 1;
    while (true) {
      PolyTermAst t;
      t.sign = sign;
      t.factors.push_back(factor());
      while (true) {
        skip();
        if (!peek('*')) break;
        take();
        t.factors.push_back(factor());
      }
      out.terms.push_back(std::move(t));
      skip();
      if (peek('+') || peek('-')) {
        sign = take() == '-' ? -1 : 1;
        continue;
      }
      return out;
    }
  }

  PolyFactor factor() {
    skip();
    if (peek('[')) return PolyFactor{bracket()};
    if (digit()) return PolyFactor{integer()};
    if (peek('t') || peek('p')) {
      const char b = base();
      return PolyFactor{std::pair<char, Rat>{b, opt_exponent()}};
    }
    if (peek('X')) {
      take();
      skip();
      unsigned n = 1;
      if (peek('^')) {
        take();
        skip();
        bool paren = peek('(');
        if (paren) take();
        const Int k = integer();
        if (paren) expect(')');
        if (k > 4096) fail("degree too large");
        n = static_cast<unsigned>(k);
      }
      return PolyFactor{n};
    }
    if (peek('(')) {
      take();
      SeriesAst a = series();
      expect(')');
      return PolyFactor{std::move(a)};
    }
    fail("expected a number, '[', 't', 'p', 'X' or '('");
  }

  void note_base(SeriesAst& out, char b) {
    if (out.base && *out.base != b) fail("mixed bases 't' and 'p'");
    out.base = b;
  }

  char base() {
    skip();
    if (!peek('t') && !peek('p')) fail("expected 't' or 'p'");
    return take();
  }

  Rat opt_exponent() {
    skip();
    if (!peek('^')) return Rat(1);
    take();
    skip();
    if (peek('(')) {
      take();
      const Rat r = rational();
      expect(')');
      return r;
    }
    bool neg = false;
    if (peek('-')) {
      take();
      neg = true;
    }
    const Int n = integer();
    return Rat(neg ? -n : n);
  }

  Rat rational() {
    skip();
    bool neg = false;
    if (peek('-')) {
      take();
      neg = true;
    }
    const Int a = integer();
    Int b = 1;
    skip();
    if (peek('/')) {
      take();
      b = integer();
      if (b == 0) fail("zero denominator");
    }
    return Rat(neg ? -a : a, b);
  }

  Int integer() {
    skip();
    const std::size_t start = i_;
    while (digit()) ++i_;
    if (start == i_) fail("expected an integer");
    if (i_ - start > 200) fail("integer literal too long");
    return Int(std::string(s_.substr(start, i_ - start)));
  }

  std::string bracket() {
    expect('[');
    const std::size_t start = i_;
    while (i_ < s_.size() && s_[i_] != ']') ++i_;
    if (i_ >= s_.size()) fail("expected ']'");
    std::string body(s_.substr(start, i_ - start));
    ++i_;
    return body;
  }

  void expect(char c) {
    skip();
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    ++i_;
  }

  void end() {
    skip();
    if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
  }

  bool digit() const { return i_ < s_.size() && s_[i_] >= '0' && s_[i_] <= '9'; }
  bool peek(char c) const { return i_ < s_.size() && s_[i_] == c; }
  char take() { return s_[i_++]; }
  void skip() {
    while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\t')) ++i_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::SyntaxError, "line 1, col " + std::to_string(i_ + 1) + ": " + what);
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

inline void require_base(const std::optional<char>& b, char want) {
  if (b && *b != want)
    throw Error(ErrorKind::UsageError, std::string("base '") + *b + "' in a series over base '" + want + "'");
}

}  // namespace detail

inline SeriesAst parse_series(std::string_view s) { return detail::ExprParser(s).series_only(); }
inline PolyAst parse_poly(std::string_view s) { return detail::ExprParser(s).poly_only(); }

inline EqHahn eq_from_ast(const SeriesAst& a, const FieldPtr& F) {
  detail::require_base(a.base, 't');
  EqHahn s = EqHahn::zero(F, a.cap);
  for (const auto& t : a.terms) {
    FqElem c = t.bracket ? F->parse(*t.bracket) : F->from_int(static_cast<std::int64_t>(t.integer % F->p()));
    if (t.sign < 0) c = F->neg(c);
    s = s + EqHahn::monomial(F, c, t.base ? t.exponent : Rat(0));
  }
  return s;
}

inline PHahn padic_from_ast(const SeriesAst& a, const FieldPtr& F, const NormalizeOptions& opt = {}) {
  detail::require_base(a.base, 'p');
  RawTermBag bag;
  for (const auto& t : a.terms) {
    const Rat e = t.base ? t.exponent : Rat(0);
    if (t.bracket) {
      bag.push_back(RawTerm{e, TeichTerm{F->parse(*t.bracket), Int(t.sign)}});
    } else {
      bag.push_back(RawTerm{e, TeichTerm{F->one(), t.integer * t.sign}});
    }
  }
  return ph_normalize(F, bag, a.cap, opt);
}

inline EqHahn parse_eq(std::string_view s, const FieldPtr& F) { return eq_from_ast(parse_series(s), F); }
inline PHahn parse_padic(std::string_view s, const FieldPtr& F, const NormalizeOptions& opt = {}) {
  return padic_from_ast(parse_series(s), F, opt);
}

inline std::vector<EqHahn> eq_poly_from_ast(const PolyAst& a, const FieldPtr& F) {
  std::map<unsigned, EqHahn> by_deg;
  for (const auto& t : a.terms) {
    EqHahn c = EqHahn::one(F);
    unsigned deg = 0;
    for (const auto& f : t.factors) {
      if (const auto* n = std::get_if<Int>(&f.v)) {
        c = c.scaled(F->from_int(static_cast<std::int64_t>(*n % F->p())));
      } else if (const auto* b = std::get_if<std::string>(&f.v)) {
        c = c.scaled(F->parse(*b));
      } else if (const auto* bp = std::get_if<std::pair<char, Rat>>(&f.v)) {
        detail::require_base(bp->first, 't');
        c = c * EqHahn::monomial(F, F->one(), bp->second);
      } else if (const auto* x = std::get_if<unsigned>(&f.v)) {
        deg += *x;
      } else {
        c = c * eq_from_ast(std::get<SeriesAst>(f.v), F);
      }
    }
    if (t.sign < 0) c = -c;
    auto [it, fresh] = by_deg.try_emplace(deg, c);
    if (!fresh) it->second = it->second + c;
  }
  const unsigned top = by_deg.empty() ? 0 : by_deg.rbegin()->first;
  std::vector<EqHahn> f(top + 1, EqHahn::zero(F));
  for (auto& [d, c] : by_deg) f[d] = c;
  return f;
}

/// Coefficients are normalized below `coeff_cap` (exact when absent, which may
/// fail for sums that carry forever).
inline std::vector<PHahn> padic_poly_from_ast(const PolyAst& a, const FieldPtr& F, const Cap& coeff_cap,
                                              const NormalizeOptions& opt = {}) {
  std::map<unsigned, RawTermBag> bags;
  std::map<unsigned, Cap> caps;
  for (const auto& t : a.terms) {
    Int scalar = t.sign;
    FqElem digit = F->one();
    Rat e = 0;
    unsigned deg = 0;
    const SeriesAst* series = nullptr;
    for (const auto& f : t.factors) {
      if (const auto* n = std::get_if<Int>(&f.v)) {
        scalar *= *n;
      } else if (const auto* b = std::get_if<std::string>(&f.v)) {
        digit = F->mul(digit, F->parse(*b));
      } else if (const auto* bp = std::get_if<std::pair<char, Rat>>(&f.v)) {
        detail::require_base(bp->first, 'p');
        e += bp->second;
      } else if (const auto* x = std::get_if<unsigned>(&f.v)) {
        deg += *x;
      } else {
        if (series) throw Error(ErrorKind::UsageError, "at most one parenthesized series per p-adic term");
        series = &std::get<SeriesAst>(f.v);
      }
    }
    auto& bag = bags[deg];
    auto& cap = caps.try_emplace(deg, coeff_cap).first->second;
    if (!series) {
      bag.push_back(RawTerm{e, TeichTerm{digit, scalar}});
      continue;
    }
    const PHahn s = padic_from_ast(*series, F, opt);
    for (const auto& [se, sd] : s.digits()) bag.push_back(RawTerm{e + se, TeichTerm{F->mul(digit, sd), scalar}});
    if (s.cap()) cap = min_cap(cap, *s.cap() + e);
  }
  const unsigned top = bags.empty() ? 0 : bags.rbegin()->first;
  std::vector<PHahn> f(top + 1, PHahn::zero(F));
  for (const auto& [d, bag] : bags) f[d] = ph_normalize(F, bag, caps[d], opt);
  return f;
}

/// Prints an AST so that parse_series gives it back; every coefficient is written out.
inline std::string format_series_ast(const SeriesAst& a) {
  std::string out;
  for (const auto& t : a.terms) {
    if (out.empty()) {
      if (t.sign < 0) out += "-";
    } else {
      out += t.sign < 0 ? " - " : " + ";
    }
    out += t.bracket ? "[" + *t.bracket + "]" : t.integer.str();
    if (t.base) out += std::string("*") + *t.base + "^(" + to_string(t.exponent) + ")";
  }
  if (a.cap) {
    if (!out.empty()) out += " + ";
    out += std::string("O(") + (a.base ? *a.base : 't') + "^(" + to_string(*a.cap) + "))";
  }
  return out.empty() ? "0" : out;
}

namespace detail {

inline bool in_prime_field(const FqElem& c) {
  for (std::size_t i = 1; i < c.c.size(); ++i)
    if (c.c[i] != 0) return false;
  return true;
}

inline std::string cap_suffix(char base, const Cap& cap, bool first) {
  if (!cap) return "";
  return std::string(first ? "" : " + ") + "O(" + base + "^(" + to_string(*cap) + "))";
}

}  // namespace detail

/// Canonical text: coefficient 1 prints bare, prime-field coefficients as
/// integers, others in brackets; exponents always parenthesized.
inline std::string format_eq(const EqHahn& s) {
  const FqField& F = *s.field();
  std::string out;
  for (const auto& [e, c] : s.terms()) {
    if (!out.empty()) out += " + ";
    if (!(c == F.one())) out += (detail::in_prime_field(c) ? std::to_string(c.c[0]) : "[" + F.format(c) + "]") + "*";
    out += "t^(" + to_string(e) + ")";
  }
  out += detail::cap_suffix('t', s.cap(), out.empty());
  return out.empty() ? "0" : out;
}

/// Canonical text: every digit as `[d]*p^(e)`.
inline std::string format_padic(const PHahn& s) {
  const FqField& F = *s.field();
  std::string out;
  for (const auto& [e, d] : s.digits()) {
    if (!out.empty()) out += " + ";
    out += "[" + F.format(d) + "]*p^(" + to_string(e) + ")";
  }
  out += detail::cap_suffix('p', s.cap(), out.empty());
  return out.empty() ? "0" : out;
}

inline nlohmann::json rat_json(const Rat& r) {
  auto small = [](const Int& x) -> nlohmann::json {
    if (x > Int(std::numeric_limits<std::int64_t>::max()) || x < Int(std::numeric_limits<std::int64_t>::min())) return x.str();
    return static_cast<std::int64_t>(x);
  };
  return nlohmann::json::array({small(num(r)), small(den(r))});
}

/// {"digits": [[num, den, "coeff"], ...], "cap": [num, den] | null}
inline nlohmann::json terms_json(const FqField& F, const std::map<Rat, FqElem>& terms, const Cap& cap) {
  nlohmann::json digits = nlohmann::json::array();
  for (const auto& [e, c] : terms) {
    nlohmann::json row = rat_json(e);
    row.push_back(F.format(c));
    digits.push_back(std::move(row));
  }
  nlohmann::json out;
  out["digits"] = std::move(digits);
  out["cap"] = cap ? rat_json(*cap) : nlohmann::json(nullptr);
  return out;
}

inline nlohmann::json series_json(const EqHahn& s) { return terms_json(*s.field(), s.terms(), s.cap()); }
inline nlohmann::json series_json(const PHahn& s) { return terms_json(*s.field(), s.digits(), s.cap()); }

}  // namespace hahnforge
