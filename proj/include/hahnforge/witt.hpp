#pragma once

// Truncated unramified Witt ring W_L(F_{p^r}) realised as Z[x]/(p^L, modulus).

#include <string>
#include <utility>
#include <vector>

#include "hahnforge/errors.hpp"
#include "hahnforge/fq.hpp"
#include "hahnforge/rational.hpp"

namespace hahnforge {

/// r integer coefficients in [0, p^L), lowest degree first.
struct WittElem {
  std::vector<Int> c;

  bool is_zero() const {
    for (const auto& x : c)
      if (x != 0) return false;
    return true;
  }
  friend bool operator==(const WittElem&, const WittElem&) = default;
};

class WittRing {
 public:
  WittRing(FieldPtr field, int length) : field_(std::move(field)), length_(length) {
    if (length_ < 1) throw Error(ErrorKind::DomainError, "Witt length must be >= 1");
    p_ = Int(field_->p());
    modulus_pl_ = ipow(p_, static_cast<unsigned long>(length_));
    for (auto c : field_->modulus()) poly_modulus_.emplace_back(c);
  }

  const FieldPtr& field() const { return field_; }
  int length() const { return length_; }
  const Int& characteristic_power() const { return modulus_pl_; }
  int degree() const { return field_->degree(); }

  WittElem zero() const { return WittElem{std::vector<Int>(static_cast<std::size_t>(degree()), Int(0))}; }
  WittElem one() const { return from_int(1); }
  WittElem from_int(const Int& n) const {
    WittElem e = zero();
    e.c[0] = mod(n);
    return e;
  }
  /// Reduces an arbitrary integer polynomial (any degree, any sign) into the ring.
  WittElem from_poly(std::vector<Int> f) const {
    reduce_degree(f);
    WittElem e = zero();
    for (std::size_t i = 0; i < f.size() && i < e.c.size(); ++i) e.c[i] = mod(f[i]);
    return e;
  }
  /// Coefficientwise lift of a residue element (not the Teichmüller lift).
  WittElem lift(const FqElem& a) const {
    WittElem e = zero();
    for (std::size_t i = 0; i < e.c.size(); ++i) e.c[i] = Int(a.c[i]);
    return e;
  }
  FqElem residue(const WittElem& a) const {
    FqElem e = field_->zero();
    for (std::size_t i = 0; i < e.c.size(); ++i) e.c[i] = static_cast<std::int64_t>(a.c[i] % p_);
    return e;
  }
  /// Embeds an element of a shorter (or longer) ring by reduction.
  WittElem reduce(const WittElem& a) const { return from_poly(a.c); }

  WittElem add(const WittElem& a, const WittElem& b) const {
    WittElem r = a;
    for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = mod(r.c[i] + b.c[i]);
    return r;
  }
  WittElem sub(const WittElem& a, const WittElem& b) const {
    WittElem r = a;
    for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = mod(r.c[i] - b.c[i]);
    return r;
  }
  WittElem neg(const WittElem& a) const { return sub(zero(), a); }
  WittElem scale(const WittElem& a, const Int& k) const {
    WittElem r = a;
    for (auto& x : r.c) x = mod(x * k);
    return r;
  }
  WittElem mul(const WittElem& a, const WittElem& b) const {
    const std::size_t r = a.c.size();
    if (r == 1) return WittElem{{mod(a.c[0] * b.c[0])}};
    std::vector<Int> prod(2 * r - 1, Int(0));
    for (std::size_t i = 0; i < r; ++i) {
      if (a.c[i] == 0) continue;
      for (std::size_t j = 0; j < r; ++j) prod[i + j] += a.c[i] * b.c[j];
    }
    return from_poly(std::move(prod));
  }
  WittElem pow(WittElem a, Int e) const {
    WittElem r = one();
    while (e > 0) {
      if ((e & 1) != 0) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  bool is_unit(const WittElem& a) const { return !residue(a).is_zero(); }

  /// Newton iteration y <- y(2 - a y) from a residue inverse.
  WittElem inv(const WittElem& a) const {
    const FqElem res = residue(a);
    if (res.is_zero()) throw Error(ErrorKind::NotAUnit, "element is divisible by p");
    WittElem y = lift(field_->inv(res));
    const WittElem two = from_int(2);
    for (int prec = 1; prec < length_; prec *= 2) y = mul(y, sub(two, mul(a, y)));
    return y;
  }

  /// Exact division of an element divisible by p; the result is taken mod p^{L-1}
  /// and embedded back with a zero top digit.
  WittElem divide_by_p(const WittElem& a) const {
    WittElem r = a;
    for (auto& x : r.c) {
      if (x % p_ != 0) throw Error(ErrorKind::DomainError, "element not divisible by p");
      x /= p_;
    }
    return r;
  }

  /// The multiplicative lift [a]: fixpoint of x -> x^{p^r}, reached after L iterations.
  WittElem teichmueller(const FqElem& a) const {
    if (a.is_zero()) return zero();
    const std::uint64_t idx = field_->index(a);
    std::vector<Int> cached;
    if (field_->cached_lift(idx, length_, cached)) return from_poly(std::move(cached));
    const Int q = ipow(p_, static_cast<unsigned long>(degree()));
    WittElem x = lift(a);
    for (int i = 0; i < length_; ++i) x = pow(x, q);
    field_->store_lift(idx, length_, x.c);
    return x;
  }

  /// Digits d_0..d_{L-1} with c = sum [d_i] p^i mod p^L.
  std::vector<FqElem> digits(WittElem c) const {
    std::vector<FqElem> out;
    out.reserve(static_cast<std::size_t>(length_));
    for (int i = 0; i < length_; ++i) {
      FqElem d = residue(c);
      out.push_back(d);
      if (i + 1 == length_) break;
      if (!d.is_zero()) c = sub(c, teichmueller(d));
      c = divide_by_p(c);
    }
    return out;
  }

  /// Inverse of `digits`.
  WittElem recompose(const std::vector<FqElem>& ds) const {
    WittElem acc = zero();
    Int pw = 1;
    for (std::size_t i = 0; i < ds.size() && static_cast<int>(i) < length_; ++i) {
      if (!ds[i].is_zero()) acc = add(acc, scale(teichmueller(ds[i]), pw));
      pw *= p_;
    }
    return acc;
  }

  /// Integer-coefficient polynomial in g, e.g. `26*g+3`.
  std::string format(const WittElem& a) const {
    std::string out;
    for (std::size_t i = a.c.size(); i-- > 0;) {
      if (a.c[i] == 0) continue;
      if (!out.empty()) out += "+";
      if (i == 0) {
        out += a.c[i].str();
      } else {
        if (a.c[i] != 1) out += a.c[i].str() + "*";
        out += "g";
        if (i > 1) out += "^" + std::to_string(i);
      }
    }
    return out.empty() ? "0" : out;
  }

 private:
  Int mod(const Int& x) const {
    Int r = x % modulus_pl_;
    if (r < 0) r += modulus_pl_;
    return r;
  }

  void reduce_degree(std::vector<Int>& f) const {
    const std::size_t r = static_cast<std::size_t>(degree());
    for (std::size_t k = f.size(); k-- > r;) {
      if (f[k] == 0) continue;
      const Int q = f[k];
      for (std::size_t i = 0; i <= r; ++i) f[k - r + i] -= q * poly_modulus_[i];
    }
    if (f.size() > r) f.resize(r);
  }

  FieldPtr field_;
  int length_;
  Int p_;
  Int modulus_pl_;
  std::vector<Int> poly_modulus_;
};

/// Convenience overloads mirroring the operation table of the residue field.
inline WittElem teichmueller(const WittRing& W, const FqElem& a) { return W.teichmueller(a); }
inline std::vector<FqElem> digit_decompose(const WittRing& W, const WittElem& c) { return W.digits(c); }

}  // namespace hahnforge
