#pragma once

// Equal-characteristic Hahn series F_q((t^Q)) truncated below a rational cap.

#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "hahnforge/errors.hpp"
#include "hahnforge/fq.hpp"
#include "hahnforge/rational.hpp"

namespace hahnforge {

/// Finite sum of c_e t^e with every stored exponent below the cap. Terms at or
/// above the cap are unknown. An absent cap marks an exact (finite) series.
class EqHahn {
 public:
  using Terms = std::map<Rat, FqElem>;

  EqHahn() = default;
  explicit EqHahn(FieldPtr field, Cap cap = std::nullopt) : field_(std::move(field)), cap_(std::move(cap)) {}
  EqHahn(FieldPtr field, Terms terms, Cap cap) : field_(std::move(field)), cap_(std::move(cap)) {
    for (auto& [e, c] : terms) insert(e, c);
  }

  static EqHahn zero(FieldPtr f, Cap cap = std::nullopt) { return EqHahn(std::move(f), std::move(cap)); }
  static EqHahn one(FieldPtr f) { return monomial(f, f->one(), Rat(0)); }
  static EqHahn monomial(FieldPtr f, const FqElem& c, const Rat& e, Cap cap = std::nullopt) {
    EqHahn r(std::move(f), std::move(cap));
    r.insert(e, c);
    return r;
  }

  const FieldPtr& field() const { return field_; }
  const Terms& terms() const { return terms_; }
  const Cap& cap() const { return cap_; }
  bool is_exact() const { return !cap_.has_value(); }
  bool empty() const { return terms_.empty(); }
  bool is_exact_zero() const { return terms_.empty() && !cap_; }

  /// min Supp; +inf for the exact zero. A capped series with no stored terms
  /// has an unresolved valuation.
  Valuation val() const {
    if (!terms_.empty()) return Valuation(terms_.begin()->first);
    if (!cap_) return Valuation::infinity();
    throw Error(ErrorKind::PrecisionLoss, "valuation of O(t^" + to_string(*cap_) + ") is unresolved");
  }

  /// Lower bound on the valuation: the least exponent, the cap for a capped zero.
  Valuation val_lower_bound() const {
    if (!terms_.empty()) return Valuation(terms_.begin()->first);
    return cap_ ? Valuation(*cap_) : Valuation::infinity();
  }

  const FqElem& leading_coefficient() const {
    if (terms_.empty()) throw Error(ErrorKind::PrecisionLoss, "no leading term");
    return terms_.begin()->second;
  }

  FqElem coefficient(const Rat& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? field_->zero() : it->second;
  }

  /// Drops terms at or above `c` and lowers the cap to `c`.
  EqHahn truncated(const Cap& c) const {
    EqHahn r(field_, min_cap(cap_, c));
    for (const auto& [e, v] : terms_) r.insert(e, v);
    return r;
  }

  EqHahn shifted(const Rat& s) const {
    EqHahn r(field_, add_cap(cap_, s));
    for (const auto& [e, v] : terms_) r.insert(e + s, v);
    return r;
  }

  friend EqHahn operator+(const EqHahn& a, const EqHahn& b) {
    EqHahn r(a.field_, min_cap(a.cap_, b.cap_));
    r.terms_ = a.terms_;
    for (const auto& [e, v] : b.terms_) r.accumulate(e, v);
    r.trim();
    return r;
  }

  EqHahn operator-() const {
    EqHahn r(field_, cap_);
    for (const auto& [e, v] : terms_) r.terms_.emplace(e, field_->neg(v));
    return r;
  }

  friend EqHahn operator-(const EqHahn& a, const EqHahn& b) { return a + (-b); }

  /// Convolution; cap = min(cap_a + v(b), cap_b + v(a)).
  friend EqHahn operator*(const EqHahn& a, const EqHahn& b) {
    if (a.is_exact_zero() || b.is_exact_zero()) return EqHahn(a.field_);
    const Valuation va = a.val_lower_bound(), vb = b.val_lower_bound();
    Cap cap;
    if (a.cap_) cap = min_cap(cap, *a.cap_ + vb.value());
    if (b.cap_) cap = min_cap(cap, *b.cap_ + va.value());
    EqHahn r(a.field_, cap);
    const FqField& F = *a.field_;
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Rat e = ea + eb;
        if (cap && e >= *cap) continue;
        r.accumulate(e, F.mul(ca, cb));
      }
    r.trim();
    return r;
  }

  EqHahn scaled(const FqElem& c) const {
    EqHahn r(field_, cap_);
    if (c.is_zero()) return r;
    for (const auto& [e, v] : terms_) r.terms_.emplace(e, field_->mul(v, c));
    return r;
  }

  /// Exponents times p, coefficients to the p-th power.
  EqHahn frobenius() const {
    const Rat p(field_->p());
    EqHahn r(field_, cap_ ? Cap(*cap_ * p) : Cap());
    for (const auto& [e, v] : terms_) r.terms_.emplace(e * p, field_->frobenius(v));
    return r;
  }

  /// Inverse with every term below `target_cap` exact, by peeling the leading
  /// monomial and summing the geometric series of the unit part.
  EqHahn inv(const Rat& target_cap) const {
    if (terms_.empty()) {
      if (!cap_) throw Error(ErrorKind::DivisionByZero, "inverse of zero");
      throw Error(ErrorKind::PrecisionLoss, "inverse of a series with unknown leading term");
    }
    const FqField& F = *field_;
    const Rat v = terms_.begin()->first;
    const FqElem lead_inv = F.inv(terms_.begin()->second);
    // a = lead t^v (1 + u) with v(u) > 0.
    EqHahn u(field_, add_cap(cap_, -v));
    for (auto it = std::next(terms_.begin()); it != terms_.end(); ++it) u.insert(it->first - v, F.mul(it->second, lead_inv));
    const Rat need = target_cap + v;  // exponents of the unit inverse below `need`
    if (u.cap_ && *u.cap_ < need) {
      throw Error(ErrorKind::PrecisionLoss, "operand cap " + to_string(*cap_) + " cannot support inverse to " + to_string(target_cap));
    }
    const EqHahn neg_u = (-u).truncated(Cap(need));
    EqHahn sum = one(field_).truncated(Cap(need));
    if (!u.empty()) {
      EqHahn power = one(field_);
      while (true) {
        power = (power * neg_u).truncated(Cap(need));
        if (power.terms_.empty()) break;
        sum = sum + power;
      }
    } else if (!u.cap_) {
      sum = one(field_);  // monomial: the inverse is exact
    }
    EqHahn r = sum.scaled(lead_inv).shifted(-v);
    if (!u.empty() || u.cap_) r = r.truncated(Cap(target_cap));
    return r;
  }

  /// Equality of all coefficients below `c` (and below both caps).
  bool agrees_below(const EqHahn& other, const Rat& c) const {
    auto below = [&](const EqHahn& s) {
      Terms out;
      for (const auto& [e, v] : s.terms_)
        if (e < c) out.emplace(e, v);
      return out;
    };
    return below(*this) == below(other);
  }

  friend bool operator==(const EqHahn& a, const EqHahn& b) { return a.terms_ == b.terms_ && a.cap_ == b.cap_; }

 private:
  void insert(const Rat& e, const FqElem& c) {
    if (c.is_zero()) return;
    if (cap_ && e >= *cap_) return;
    accumulate(e, c);
  }
  void accumulate(const Rat& e, const FqElem& c) {
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) it->second = field_->add(it->second, c);
  }
  void trim() {
    for (auto it = terms_.begin(); it != terms_.end();) {
      if (it->second.is_zero() || (cap_ && it->first >= *cap_)) {
        it = terms_.erase(it);
      } else {
        ++it;
      }
    }
  }

  FieldPtr field_;
  Terms terms_;
  Cap cap_;
};

/// Polynomial over EqHahn, coefficients lowest degree first.
using EqPoly = std::vector<EqHahn>;

/// Horner evaluation.
template <class Series>
Series eval_poly(const std::vector<Series>& f, const Series& x) {
  if (f.empty()) throw Error(ErrorKind::ZeroPolynomial, "empty polynomial");
  Series acc = f.back();
  for (std::size_t i = f.size() - 1; i-- > 0;) acc = acc * x + f[i];
  return acc;
}

/// Coefficients of f(x0 + X) by repeated synthetic division.
template <class Series>
std::vector<Series> taylor_shift(std::vector<Series> c, const Series& x0) {
  const std::size_t n = c.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = n - 1; j-- > i;) c[j] = c[j] + x0 * c[j + 1];
  return c;
}

/// S_K = sum_{k=1..K} t^{shift - 1/p^k}.
inline EqHahn abhyankar_partial_sum(const FieldPtr& F, int K, const Rat& shift = Rat(0)) {
  EqHahn s(F);
  Int pk = 1;
  for (int k = 1; k <= K; ++k) {
    pk *= F->p();
    s = s + EqHahn::monomial(F, F->one(), shift - Rat(Int(1), pk));
  }
  return s;
}

}  // namespace hahnforge
