#pragma once

// Residue field F_{p^r} in a polynomial basis over F_p.

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hahnforge/errors.hpp"
#include "hahnforge/rational.hpp"

namespace hahnforge {

/// Element of F_{p^r}: r coefficients in [0, p), lowest degree first.
struct FqElem {
  std::vector<std::int64_t> c;

  bool is_zero() const {
    return std::all_of(c.begin(), c.end(), [](std::int64_t x) { return x == 0; });
  }

  friend bool operator==(const FqElem&, const FqElem&) = default;

  // Lexicographic on the coefficient sequence read from the top degree down,
  // which coincides with the numeric order of FqField::index.
  friend std::strong_ordering operator<=>(const FqElem& a, const FqElem& b) {
    for (std::size_t i = a.c.size(); i-- > 0;) {
      if (a.c[i] != b.c[i]) return a.c[i] <=> b.c[i];
    }
    return a.c.size() <=> b.c.size();
  }
};

namespace fp_poly {

// Dense polynomials over F_p, lowest degree first, no trailing zeros.
using Poly = std::vector<std::int64_t>;

inline std::int64_t mod(std::int64_t a, std::int64_t p) {
  a %= p;
  return a < 0 ? a + p : a;
}

inline std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t p) {
  return static_cast<std::int64_t>((static_cast<__int128>(a) * b) % p);
}

inline std::int64_t powmod(std::int64_t a, std::uint64_t e, std::int64_t p) {
  std::int64_t r = 1 % p;
  a = mod(a, p);
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

inline std::int64_t invmod(std::int64_t a, std::int64_t p) {
  if (mod(a, p) == 0) throw Error(ErrorKind::DivisionByZero, "inverse of 0 mod p");
  return powmod(a, static_cast<std::uint64_t>(p - 2), p);
}

inline void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

inline Poly mul(const Poly& a, const Poly& b, std::int64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + mulmod(a[i], b[j], p)) % p;
  trim(r);
  return r;
}

inline Poly rem(Poly a, const Poly& m, std::int64_t p) {
  trim(a);
  const std::int64_t lead_inv = invmod(m.back(), p);
  while (a.size() >= m.size()) {
    const std::int64_t q = mulmod(a.back(), lead_inv, p);
    const std::size_t shift = a.size() - m.size();
    for (std::size_t i = 0; i < m.size(); ++i) a[shift + i] = mod(a[shift + i] - mulmod(q, m[i], p), p);
    trim(a);
  }
  return a;
}

inline Poly gcd(Poly a, Poly b, std::int64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    const std::int64_t inv = invmod(a.back(), p);
    for (auto& x : a) x = mulmod(x, inv, p);
  }
  return a;
}

inline Poly powmod_poly(Poly base, std::uint64_t e, const Poly& m, std::int64_t p) {
  Poly r{1};
  base = rem(base, m, p);
  while (e) {
    if (e & 1) r = rem(mul(r, base, p), m, p);
    base = rem(mul(base, base, p), m, p);
    e >>= 1;
  }
  return r;
}

/// Ben-Or test: f monic of degree r is irreducible iff gcd(x^{p^i} - x, f) = 1 for i <= r/2.
inline bool is_irreducible(const Poly& f, std::int64_t p) {
  const std::size_t r = f.size() - 1;
  if (r == 0) return false;
  if (r == 1) return true;
  Poly h{0, 1};
  for (std::size_t i = 1; i <= r / 2; ++i) {
    h = powmod_poly(h, static_cast<std::uint64_t>(p), f, p);
    Poly d = h;
    if (d.size() < 2) d.resize(2, 0);
    d[1] = mod(d[1] - 1, p);
    trim(d);
    if (gcd(f, d, p).size() != 1) return false;
  }
  return true;
}

}  // namespace fp_poly

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Lexicographically smallest monic irreducible of degree r over F_p, coefficients
/// ordered from x^{r-1} down to x^0. Returned lowest degree first, monic.
inline std::vector<std::int64_t> find_modulus(std::int64_t p, int r) {
  if (!is_prime(p)) throw Error(ErrorKind::DomainError, "p must be prime");
  if (r < 1) throw Error(ErrorKind::DomainError, "extension degree must be >= 1");
  std::vector<std::int64_t> f(static_cast<std::size_t>(r) + 1, 0);
  f[static_cast<std::size_t>(r)] = 1;
  while (true) {
    if (fp_poly::is_irreducible(f, p)) return f;
    // Odometer: x^0 is the least significant position.
    std::size_t i = 0;
    while (i < static_cast<std::size_t>(r)) {
      if (++f[i] < p) break;
      f[i++] = 0;
    }
    if (i == static_cast<std::size_t>(r)) throw Error(ErrorKind::DomainError, "no irreducible polynomial found");
  }
}

class FqField;
using FieldPtr = std::shared_ptr<const FqField>;

/// F_{p^r} = F_p[g]/(modulus). Immutable after construction; the Teichmüller
/// lift cache is internally synchronized.
class FqField {
 public:
  FqField(std::int64_t p, std::vector<std::int64_t> modulus) : p_(p), modulus_(std::move(modulus)) {
    if (!is_prime(p_) || p_ > (std::int64_t{1} << 31)) throw Error(ErrorKind::DomainError, "p must be a prime below 2^31");
    if (modulus_.size() < 2 || modulus_.back() != 1) throw Error(ErrorKind::DomainError, "modulus must be monic of degree >= 1");
    for (auto& x : modulus_) x = fp_poly::mod(x, p_);
    if (!fp_poly::is_irreducible(modulus_, p_)) throw Error(ErrorKind::DomainError, "modulus is reducible mod p");
    size_ = 1;
    for (int i = 0; i < degree(); ++i) {
      if (size_ > (std::uint64_t{1} << 40) / static_cast<std::uint64_t>(p_))
        throw Error(ErrorKind::DomainError, "field too large for exhaustive residue solving");
      size_ *= static_cast<std::uint64_t>(p_);
    }
  }

  static FieldPtr make(std::int64_t p, int r) { return std::make_shared<const FqField>(p, find_modulus(p, r)); }

  std::int64_t p() const { return p_; }
  int degree() const { return static_cast<int>(modulus_.size()) - 1; }
  const std::vector<std::int64_t>& modulus() const { return modulus_; }
  std::uint64_t size() const { return size_; }

  FqElem zero() const { return FqElem{std::vector<std::int64_t>(static_cast<std::size_t>(degree()), 0)}; }
  FqElem one() const { return from_int(1); }
  FqElem gen() const {
    FqElem e = zero();
    if (degree() == 1) {
      e.c[0] = fp_poly::mod(-modulus_[0], p_);
    } else {
      e.c[1] = 1;
    }
    return e;
  }
  FqElem from_int(std::int64_t n) const {
    FqElem e = zero();
    e.c[0] = fp_poly::mod(n, p_);
    return e;
  }
  FqElem from_index(std::uint64_t idx) const {
    FqElem e = zero();
    for (auto& x : e.c) {
      x = static_cast<std::int64_t>(idx % static_cast<std::uint64_t>(p_));
      idx /= static_cast<std::uint64_t>(p_);
    }
    return e;
  }
  std::uint64_t index(const FqElem& e) const {
    std::uint64_t idx = 0;
    for (std::size_t i = e.c.size(); i-- > 0;) idx = idx * static_cast<std::uint64_t>(p_) + static_cast<std::uint64_t>(e.c[i]);
    return idx;
  }

  FqElem add(const FqElem& a, const FqElem& b) const {
    FqElem r = a;
    for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = (r.c[i] + b.c[i]) % p_;
    return r;
  }
  FqElem sub(const FqElem& a, const FqElem& b) const {
    FqElem r = a;
    for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = fp_poly::mod(r.c[i] - b.c[i], p_);
    return r;
  }
  FqElem neg(const FqElem& a) const { return sub(zero(), a); }
  FqElem scale(const FqElem& a, std::int64_t k) const {
    FqElem r = a;
    k = fp_poly::mod(k, p_);
    for (auto& x : r.c) x = fp_poly::mulmod(x, k, p_);
    return r;
  }
  FqElem mul(const FqElem& a, const FqElem& b) const {
    fp_poly::Poly pa(a.c.begin(), a.c.end()), pb(b.c.begin(), b.c.end());
    fp_poly::trim(pa);
    fp_poly::trim(pb);
    return from_poly(fp_poly::rem(fp_poly::mul(pa, pb, p_), modulus_, p_));
  }
  FqElem pow(FqElem a, std::uint64_t e) const {
    FqElem r = one();
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  FqElem inv(const FqElem& a) const {
    if (a.is_zero()) throw Error(ErrorKind::DivisionByZero, "inverse of zero in F_q");
    return pow(a, size_ - 2);
  }
  FqElem div(const FqElem& a, const FqElem& b) const { return mul(a, inv(b)); }
  FqElem frobenius(const FqElem& a) const { return pow(a, static_cast<std::uint64_t>(p_)); }

  FqElem from_poly(const fp_poly::Poly& f) const {
    fp_poly::Poly r = fp_poly::rem(f, modulus_, p_);
    FqElem e = zero();
    for (std::size_t i = 0; i < r.size(); ++i) e.c[i] = r[i];
    return e;
  }

  /// Canonical text: `g^2+2*g+1`, `g`, `0`. For r = 1 a plain integer.
  std::string format(const FqElem& e) const {
    std::string out;
    for (std::size_t i = e.c.size(); i-- > 0;) {
      const std::int64_t k = e.c[i];
      if (k == 0) continue;
      if (!out.empty()) out += "+";
      if (i == 0) {
        out += std::to_string(k);
      } else {
        if (k != 1) out += std::to_string(k) + "*";
        out += "g";
        if (i > 1) out += "^" + std::to_string(i);
      }
    }
    return out.empty() ? "0" : out;
  }

  /// Parses the polynomial-in-g syntax produced by `format`; also accepts
  /// '-', repeated monomials and degrees >= r (reduced by the modulus).
  FqElem parse(std::string_view text) const {
    std::string s;
    for (char ch : text)
      if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    auto fail = [&](const std::string& why) {
      throw Error(ErrorKind::SyntaxError, "bad field element '" + std::string(text) + "': " + why);
    };
    if (s.empty()) fail("empty");
    fp_poly::Poly acc;
    std::size_t i = 0;
    bool first = true;
    while (i < s.size()) {
      std::int64_t sign = 1;
      if (s[i] == '+' || s[i] == '-') {
        sign = s[i] == '-' ? -1 : 1;
        ++i;
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      first = false;
      std::int64_t coeff = 1;
      bool has_num = false;
      Int big = 0;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
        big = big * 10 + (s[i] - '0');
        has_num = true;
        ++i;
      }
      if (has_num) coeff = static_cast<std::int64_t>(big % Int(p_));
      std::size_t deg = 0;
      if (i < s.size() && s[i] == '*') {
        if (!has_num) fail("dangling '*'");
        ++i;
        if (i >= s.size() || s[i] != 'g') fail("expected 'g' after '*'");
      }
      if (i < s.size() && s[i] == 'g') {
        ++i;
        deg = 1;
        if (i < s.size() && s[i] == '^') {
          ++i;
          std::size_t d = 0;
          bool any = false;
          while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            d = d * 10 + static_cast<std::size_t>(s[i] - '0');
            any = true;
            ++i;
            if (d > 4096) fail("degree too large");
          }
          if (!any) fail("expected degree after '^'");
          deg = d;
        }
      } else if (!has_num) {
        fail("expected integer or 'g'");
      }
      if (acc.size() <= deg) acc.resize(deg + 1, 0);
      acc[deg] = fp_poly::mod(acc[deg] + sign * coeff, p_);
    }
    if (degree() == 1) {
      // g denotes the root of the linear modulus.
      FqElem out = zero();
      const std::int64_t root = fp_poly::mod(-modulus_[0], p_);
      std::int64_t val = 0, pw = 1;
      for (std::size_t d = 0; d < acc.size(); ++d) {
        val = (val + fp_poly::mulmod(acc[d], pw, p_)) % p_;
        pw = fp_poly::mulmod(pw, root, p_);
      }
      out.c[0] = val;
      return out;
    }
    return from_poly(acc);
  }

  /// Elements in index order.
  std::vector<FqElem> elements() const {
    std::vector<FqElem> out;
    out.reserve(static_cast<std::size_t>(size_));
    for (std::uint64_t i = 0; i < size_; ++i) out.push_back(from_index(i));
    return out;
  }

  // Teichmüller cache: index -> (length, integer coefficients mod p^length).
  bool cached_lift(std::uint64_t idx, int length, std::vector<Int>& out) const {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = teich_cache_.find(idx);
    if (it == teich_cache_.end() || it->second.first < length) return false;
    out = it->second.second;
    return true;
  }
  void store_lift(std::uint64_t idx, int length, std::vector<Int> coeffs) const {
    std::lock_guard<std::mutex> lock(mutex_);
    auto& slot = teich_cache_[idx];
    if (slot.first < length) slot = {length, std::move(coeffs)};
  }

 private:
  std::int64_t p_;
  std::vector<std::int64_t> modulus_;
  std::uint64_t size_ = 1;
  mutable std::mutex mutex_;
  mutable std::map<std::uint64_t, std::pair<int, std::vector<Int>>> teich_cache_;
};

inline bool same_field(const FqField& a, const FqField& b) {
  return a.p() == b.p() && a.modulus() == b.modulus();
}

/// All roots in F_{p^r} of sum_i coeffs[i] X^i, by exhaustive evaluation, in index order.
inline std::vector<FqElem> fq_poly_roots(const FqField& F, std::span<const FqElem> coeffs) {
  if (std::all_of(coeffs.begin(), coeffs.end(), [](const FqElem& c) { return c.is_zero(); }))
    throw Error(ErrorKind::ZeroPolynomial, "root search on the zero polynomial");
  std::vector<FqElem> roots;
  for (std::uint64_t i = 0; i < F.size(); ++i) {
    const FqElem x = F.from_index(i);
    FqElem acc = F.zero();
    for (std::size_t k = coeffs.size(); k-- > 0;) acc = F.add(F.mul(acc, x), coeffs[k]);
    if (acc.is_zero()) roots.push_back(x);
  }
  return roots;
}

/// Embedding F_{p^r} -> F_{p^{rm}} sending g to the least root of the small
/// field's modulus in the big field.
class FieldEmbedding {
 public:
  FieldEmbedding(FieldPtr small, FieldPtr big) : small_(std::move(small)), big_(std::move(big)) {
    if (small_->p() != big_->p() || big_->degree() % small_->degree() != 0)
      throw Error(ErrorKind::DomainError, "no embedding between these fields");
    std::vector<FqElem> mod;
    for (auto c : small_->modulus()) mod.push_back(big_->from_int(c));
    auto roots = fq_poly_roots(*big_, mod);
    if (roots.empty()) throw Error(ErrorKind::DomainError, "modulus has no root in the target field");
    image_of_gen_ = roots.front();
  }

  FqElem operator()(const FqElem& a) const {
    // Horner in the image of the generator; r = 1 fields store the value directly.
    if (small_->degree() == 1) return big_->from_int(a.c[0]);
    FqElem acc = big_->zero();
    for (std::size_t i = a.c.size(); i-- > 0;) acc = big_->add(big_->mul(acc, image_of_gen_), big_->from_int(a.c[i]));
    return acc;
  }

  const FieldPtr& source() const { return small_; }
  const FieldPtr& target() const { return big_; }

 private:
  FieldPtr small_, big_;
  FqElem image_of_gen_;
};

}  // namespace hahnforge
