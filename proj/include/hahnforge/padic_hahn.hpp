#pragma once

// p-adic Hahn series W(F_q)((p^Q)) in standard expansion sum [r_g] p^g,
// truncated below a rational cap.

#include <map>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "hahnforge/errors.hpp"
#include "hahnforge/fq.hpp"
#include "hahnforge/rational.hpp"
#include "hahnforge/witt.hpp"

namespace hahnforge {

/// scalar * [digit]
struct TeichTerm {
  FqElem digit;
  Int scalar{1};
};

/// An element of Z[g]/(modulus) given by integer coefficients of any sign.
struct WittTerm {
  std::vector<Int> poly;
};

/// coeff * p^exponent, not yet normalized.
struct RawTerm {
  Rat exponent;
  std::variant<TeichTerm, WittTerm> coeff;
};

using RawTermBag = std::vector<RawTerm>;

struct NormalizeOptions {
  int guard = 2;         // extra Witt digits carried past the cap
  int max_length = 256;  // largest Witt length any bucket may request
};

class PHahn {
 public:
  using Digits = std::map<Rat, FqElem>;

  PHahn() = default;
  explicit PHahn(FieldPtr field, Cap cap = std::nullopt) : field_(std::move(field)), cap_(std::move(cap)) {}

  /// Takes digits that already form a standard expansion.
  PHahn(FieldPtr field, const Digits& digits, Cap cap) : field_(std::move(field)), cap_(std::move(cap)) {
    for (const auto& [e, d] : digits) put(e, d);
  }

  static PHahn zero(FieldPtr f, Cap cap = std::nullopt) { return PHahn(std::move(f), std::move(cap)); }
  static PHahn teich_monomial(FieldPtr f, const FqElem& d, const Rat& e, Cap cap = std::nullopt) {
    PHahn r(std::move(f), std::move(cap));
    r.put(e, d);
    return r;
  }
  static PHahn one(FieldPtr f) { return teich_monomial(f, f->one(), Rat(0)); }

  const FieldPtr& field() const { return field_; }
  const Digits& digits() const { return digits_; }
  const Cap& cap() const { return cap_; }
  bool is_exact() const { return !cap_; }
  bool empty() const { return digits_.empty(); }
  bool is_exact_zero() const { return digits_.empty() && !cap_; }

  Valuation val() const {
    if (!digits_.empty()) return Valuation(digits_.begin()->first);
    if (!cap_) return Valuation::infinity();
    throw Error(ErrorKind::PrecisionLoss, "valuation of O(p^" + to_string(*cap_) + ") is unresolved");
  }
  Valuation val_lower_bound() const {
    if (!digits_.empty()) return Valuation(digits_.begin()->first);
    return cap_ ? Valuation(*cap_) : Valuation::infinity();
  }
  const FqElem& leading_coefficient() const {
    if (digits_.empty()) throw Error(ErrorKind::PrecisionLoss, "no leading digit");
    return digits_.begin()->second;
  }
  FqElem coefficient(const Rat& e) const {
    auto it = digits_.find(e);
    return it == digits_.end() ? field_->zero() : it->second;
  }

  PHahn truncated(const Cap& c) const {
    PHahn r(field_, min_cap(cap_, c));
    for (const auto& [e, d] : digits_) r.put(e, d);
    return r;
  }
  /// Multiplication by p^s: exact, no carries.
  PHahn shifted(const Rat& s) const {
    PHahn r(field_, add_cap(cap_, s));
    for (const auto& [e, d] : digits_) r.digits_.emplace(e + s, d);
    return r;
  }

  RawTermBag to_bag() const {
    RawTermBag bag;
    bag.reserve(digits_.size());
    for (const auto& [e, d] : digits_) bag.push_back(RawTerm{e, TeichTerm{d, 1}});
    return bag;
  }

  bool agrees_below(const PHahn& other, const Rat& c) const {
    auto below = [&](const PHahn& s) {
      Digits out;
      for (const auto& [e, d] : s.digits_)
        if (e < c) out.emplace(e, d);
      return out;
    };
    return below(*this) == below(other);
  }

  friend bool operator==(const PHahn& a, const PHahn& b) { return a.digits_ == b.digits_ && a.cap_ == b.cap_; }

 private:
  void put(const Rat& e, const FqElem& d) {
    if (d.is_zero()) return;
    if (cap_ && e >= *cap_) return;
    digits_[e] = d;
  }

  FieldPtr field_;
  Digits digits_;
  Cap cap_;

  friend PHahn ph_normalize(const FieldPtr&, const RawTermBag&, const Cap&, const NormalizeOptions&);
};

namespace detail {

// Exact sums whose bucket value is a rational integer N: only [0], [1] and, for
// odd p, [-1] are integers, so N has a finite expansion iff repeatedly peeling
// the digit N mod p in {0, 1, p-1} reaches zero.
inline void normalize_exact_integer_bucket(const FieldPtr& F, const Rat& q,
                                           const std::vector<std::pair<Int, const RawTerm*>>& items, PHahn::Digits& out) {
  const std::int64_t p = F->p();
  const Int P(p);
  auto fail = [] { throw Error(ErrorKind::PrecisionLoss, "carrying sum of exact operands needs a finite cap"); };
  Int n_min = items.front().first;
  for (const auto& it : items) n_min = std::min(n_min, it.first);
  Int N = 0;
  for (const auto& [n, term] : items) {
    const auto* t = std::get_if<TeichTerm>(&term->coeff);
    if (!t) fail();
    for (std::size_t i = 1; i < t->digit.c.size(); ++i)
      if (t->digit.c[i] != 0) fail();
    Int lift;
    if (t->digit.c[0] == 1) {
      lift = 1;
    } else if (t->digit.c[0] == p - 1) {
      lift = -1;
    } else {
      fail();
    }
    N += t->scalar * lift * ipow(P, static_cast<unsigned long>(n - n_min));
  }
  if (p == 2 && N < 0) fail();  // -1 = sum of all powers of 2
  for (Int i = n_min; N != 0; ++i) {
    Int d = N % P;
    if (d < 0) d += P;
    if (d == 1) {
      out.emplace(q + Rat(i), F->one());
      N -= 1;
    } else if (d == P - 1 && p != 2) {
      out.emplace(q + Rat(i), F->from_int(-1));
      N += 1;
    } else if (d != 0) {
      fail();
    }
    N /= P;
  }
}

// Digits of sum_j coeff_j p^{n_j} (one fractional-part class), placed at q + n.
inline void normalize_bucket(const FieldPtr& F, const Rat& q, const std::vector<std::pair<Int, const RawTerm*>>& items,
                             const Cap& cap, const NormalizeOptions& opt, PHahn::Digits& out) {
  const std::int64_t p = F->p();
  // Carry-free fast path: distinct positions, each a plain Teichmüller digit.
  bool trivial = true;
  std::map<Int, FqElem> direct;
  for (const auto& [n, term] : items) {
    const auto* t = std::get_if<TeichTerm>(&term->coeff);
    if (!t) {
      trivial = false;
      break;
    }
    FqElem d;
    if (t->scalar == 1) {
      d = t->digit;
    } else if (t->scalar == -1 && p != 2) {
      d = F->neg(t->digit);  // [-a] = -[a] for odd p
    } else {
      trivial = false;
      break;
    }
    if (!direct.emplace(n, d).second) {
      trivial = false;
      break;
    }
  }
  if (trivial) {
    for (const auto& [n, d] : direct) out.emplace(q + Rat(n), d);
    return;
  }
  if (!cap) {
    normalize_exact_integer_bucket(F, q, items, out);
    return;
  }

  Int n_min = items.front().first;
  for (const auto& it : items) n_min = std::min(n_min, it.first);
  const Int digits_needed = ceil(*cap - q) - n_min;
  if (digits_needed <= 0) return;
  const Int length = digits_needed + opt.guard;
  if (length > opt.max_length)
    throw Error(ErrorKind::PrecisionLoss, "bucket needs " + length.str() + " Witt digits (limit " + std::to_string(opt.max_length) + ")");
  const WittRing W(F, static_cast<int>(length));
  const Int P(p);
  WittElem value = W.zero();
  for (const auto& [n, term] : items) {
    const Int rel = n - n_min;
    if (rel >= length) continue;
    WittElem c;
    if (const auto* t = std::get_if<TeichTerm>(&term->coeff)) {
      c = W.scale(W.teichmueller(t->digit), t->scalar);
    } else {
      c = W.from_poly(std::get<WittTerm>(term->coeff).poly);
    }
    value = W.add(value, W.scale(c, ipow(P, static_cast<unsigned long>(rel))));
  }
  const auto ds = W.digits(value);
  for (Int i = 0; i < digits_needed; ++i) {
    const auto& d = ds[static_cast<std::size_t>(i)];
    if (!d.is_zero()) out.emplace(q + Rat(n_min + i), d);
  }
}

}  // namespace detail

/// Standard expansion of the sum of a bag of raw terms, exact below `cap`.
/// Terms are bucketed by the fractional part of their exponent; each bucket is
/// summed in W_L and split into Teichmüller digits.
inline PHahn ph_normalize(const FieldPtr& F, const RawTermBag& bag, const Cap& cap, const NormalizeOptions& opt = {}) {
  std::map<Rat, std::vector<std::pair<Int, const RawTerm*>>> buckets;
  for (const auto& term : bag) {
    if (cap && term.exponent >= *cap) continue;
    if (const auto* t = std::get_if<TeichTerm>(&term.coeff)) {
      if (t->scalar == 0 || t->digit.is_zero()) continue;
    } else {
      const auto& poly = std::get<WittTerm>(term.coeff).poly;
      bool all_zero = true;
      for (const auto& x : poly) all_zero = all_zero && x == 0;
      if (all_zero) continue;
    }
    const Int n = floor(term.exponent);
    buckets[term.exponent - Rat(n)].emplace_back(n, &term);
  }
  PHahn out(F, cap);
  for (const auto& [q, items] : buckets) detail::normalize_bucket(F, q, items, cap, opt, out.digits_);
  return out;
}

inline PHahn operator+(const PHahn& a, const PHahn& b) {
  const Cap cap = min_cap(a.cap(), b.cap());
  bool collide = false;
  for (const auto& [e, d] : b.digits())
    if (a.digits().count(e)) {
      collide = true;
      break;
    }
  if (!collide) {
    PHahn::Digits merged = a.digits();
    merged.insert(b.digits().begin(), b.digits().end());
    return PHahn(a.field(), merged, cap);
  }
  RawTermBag bag = a.to_bag();
  for (const auto& [e, d] : b.digits()) bag.push_back(RawTerm{e, TeichTerm{d, 1}});
  return ph_normalize(a.field(), bag, cap);
}

inline PHahn operator-(const PHahn& a) {
  if (a.field()->p() != 2) {
    PHahn::Digits neg;
    for (const auto& [e, d] : a.digits()) neg.emplace(e, a.field()->neg(d));
    return PHahn(a.field(), neg, a.cap());
  }
  RawTermBag bag;
  for (const auto& [e, d] : a.digits()) bag.push_back(RawTerm{e, TeichTerm{d, -1}});
  return ph_normalize(a.field(), bag, a.cap());
}

inline PHahn operator-(const PHahn& a, const PHahn& b) {
  if (b.is_exact_zero()) return a;
  RawTermBag bag = a.to_bag();
  for (const auto& [e, d] : b.digits()) bag.push_back(RawTerm{e, TeichTerm{d, -1}});
  return ph_normalize(a.field(), bag, min_cap(a.cap(), b.cap()));
}

/// Digit-pair products [a]p^e [b]p^f = [ab]p^{e+f}, then normalization.
inline PHahn operator*(const PHahn& a, const PHahn& b) {
  if (a.is_exact_zero() || b.is_exact_zero()) return PHahn(a.field());
  const Valuation va = a.val_lower_bound(), vb = b.val_lower_bound();
  Cap cap;
  if (a.cap()) cap = min_cap(cap, *a.cap() + vb.value());
  if (b.cap()) cap = min_cap(cap, *b.cap() + va.value());
  const FqField& F = *a.field();
  RawTermBag bag;
  bag.reserve(a.digits().size() * b.digits().size());
  for (const auto& [ea, da] : a.digits())
    for (const auto& [eb, db] : b.digits()) {
      Rat e = ea + eb;
      if (cap && e >= *cap) continue;
      bag.push_back(RawTerm{std::move(e), TeichTerm{F.mul(da, db), 1}});
    }
  return ph_normalize(a.field(), bag, cap);
}

inline PHahn ph_pow(const PHahn& a, unsigned n) {
  PHahn r = PHahn::one(a.field());
  for (unsigned i = 0; i < n; ++i) r = r * a;
  return r;
}

/// One coordinate: value * p^offset, value a unit known mod p^length.
struct FracEntry {
  Int offset;
  WittElem value;
  int length = 0;

  friend bool operator==(const FracEntry&, const FracEntry&) = default;
};

/// Map from q in [0,1) to the coefficient c_q of p^q.
using FracDecomp = std::map<Rat, FracEntry>;

inline FracDecomp ph_decompose(const PHahn& a) {
  std::map<Rat, std::map<Int, FqElem>> classes;
  for (const auto& [e, d] : a.digits()) {
    const Int n = floor(e);
    classes[e - Rat(n)].emplace(n, d);
  }
  FracDecomp out;
  const Int P(a.field()->p());
  for (const auto& [q, ds] : classes) {
    const Int offset = ds.begin()->first;
    const Int len = a.cap() ? ceil(*a.cap() - q) - offset : ds.rbegin()->first - offset + 1;
    const WittRing W(a.field(), static_cast<int>(len));
    WittElem v = W.zero();
    for (const auto& [n, d] : ds) v = W.add(v, W.scale(W.teichmueller(d), ipow(P, static_cast<unsigned long>(n - offset))));
    out.emplace(q, FracEntry{offset, v, static_cast<int>(len)});
  }
  return out;
}

inline PHahn ph_recompose(const FieldPtr& F, const FracDecomp& d, const Cap& cap) {
  PHahn::Digits digits;
  for (const auto& [q, entry] : d) {
    const WittRing W(F, entry.length);
    const auto ds = W.digits(entry.value);
    for (int i = 0; i < entry.length; ++i) {
      const auto& digit = ds[static_cast<std::size_t>(i)];
      if (!digit.is_zero()) digits.emplace(q + Rat(entry.offset + i), digit);
    }
  }
  return PHahn(F, digits, cap);
}

/// Standard expansion of an integer. Without a cap this succeeds only when the
/// expansion is finite (digits [0], [1], [-1]).
inline PHahn ph_from_integer(const FieldPtr& F, const Int& n, const Cap& cap) {
  return ph_normalize(F, RawTermBag{RawTerm{Rat(0), TeichTerm{F->one(), n}}}, cap);
}

/// Digits [1] at -1/p^k. Without `depth` the cap must be negative and all k with
/// -1/p^k < cap are taken; with `depth` only k <= depth (the partial sum).
inline PHahn ph_frakA(const FieldPtr& F, const Cap& cap, std::optional<int> depth = std::nullopt) {
  if (!depth && (!cap || *cap >= 0))
    throw Error(ErrorKind::PrecisionLoss, "infinitely many digits of the series lie below the cap; give a depth");
  PHahn::Digits ds;
  Int pk = 1;
  for (int k = 1;; ++k) {
    pk *= F->p();
    if (depth && k > *depth) break;
    const Rat e(Int(-1), pk);
    if (cap && e >= *cap) {
      if (depth) continue;
      break;
    }
    ds.emplace(e, F->one());
  }
  return PHahn(F, ds, cap);
}

}  // namespace hahnforge
