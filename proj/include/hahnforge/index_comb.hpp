#pragma once

// Index sequences a = (a_1, a_2, ...) with lambda(a) = -sum a_k / p^k, their
// reduction to entries in [0, p-1], equivalence classes and the multinomial
// expansion of powers of sum_k p^{-1/p^k}.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hahnforge/errors.hpp"
#include "hahnforge/padic_hahn.hpp"
#include "hahnforge/rational.hpp"

namespace hahnforge {

/// Finitely supported sequence; entries[0] is position 1. Trailing zeros are never stored.
class IndexVec {
 public:
  IndexVec() = default;
  IndexVec(std::initializer_list<unsigned long> e) : entries_(e) { trim(); }
  explicit IndexVec(std::vector<unsigned long> e) : entries_(std::move(e)) { trim(); }

  const std::vector<unsigned long>& entries() const { return entries_; }
  std::size_t max_position() const { return entries_.size(); }
  /// Entry at position k >= 1 (zero past the support).
  unsigned long at(std::size_t k) const { return k >= 1 && k <= entries_.size() ? entries_[k - 1] : 0; }
  bool empty() const { return entries_.empty(); }

  friend bool operator==(const IndexVec&, const IndexVec&) = default;
  friend auto operator<=>(const IndexVec& a, const IndexVec& b) { return a.entries_ <=> b.entries_; }

 private:
  void trim() {
    while (!entries_.empty() && entries_.back() == 0) entries_.pop_back();
  }
  std::vector<unsigned long> entries_;
};

inline Rat lambda_of(const IndexVec& a, std::int64_t p) {
  Rat lam = 0;
  Int pk = 1;
  for (unsigned long x : a.entries()) {
    pk *= p;
    if (x != 0) lam -= Rat(Int(x), pk);
  }
  return lam;
}

inline unsigned long sigma_of(const IndexVec& a) {
  unsigned long s = 0;
  for (unsigned long x : a.entries()) s += x;
  return s;
}

/// Largest position whose entry exceeds p - 1; 0 if none.
inline std::size_t kappa_of(const IndexVec& a, std::int64_t p) {
  const auto& e = a.entries();
  for (std::size_t k = e.size(); k > 0; --k)
    if (e[k - 1] > static_cast<unsigned long>(p - 1)) return k;
  return 0;
}

inline bool is_reduced(const IndexVec& a, std::int64_t p) { return kappa_of(a, p) == 0; }

/// Rewrites the top over-full entry as r + p d and moves d one position down
/// (into the integer part at position 1) until every entry is at most p - 1.
inline IndexVec reduce(const IndexVec& a, std::int64_t p) {
  std::vector<unsigned long> e = a.entries();
  const auto P = static_cast<unsigned long>(p);
  for (std::size_t k = e.size(); k > 0; --k) {
    // positions above k are already reduced; carries only move downward
    const unsigned long d = e[k - 1] / P;
    e[k - 1] %= P;
    if (k > 1) e[k - 2] += d;
  }
  return IndexVec(std::move(e));
}

/// lambda(a) - lambda(b) is an integer.
inline bool equivalent(const IndexVec& a, const IndexVec& b, std::int64_t p) {
  return is_integer(lambda_of(a, p) - lambda_of(b, p));
}

/// Position bound for `enumerate_class`: any class member with Sigma <= sigma_max
/// lives in positions <= maxpos(k_red) + max(0, floor((sigma_max - p)/(p-1)) + 1).
inline std::size_t class_position_bound(const IndexVec& k_red, unsigned long sigma_max, std::int64_t p) {
  const long s = static_cast<long>(sigma_max);
  const long extra = s < p ? 0 : (s - p) / (p - 1) + 1;
  return k_red.max_position() + static_cast<std::size_t>(extra);
}

/// All k with Sigma(k) <= sigma_max and reduce(k) = k_red, searched over positions
/// 1..`positions` (default: the class bound). Sorted by (Sigma, entries).
inline std::vector<IndexVec> enumerate_class(const IndexVec& k_red, unsigned long sigma_max, std::int64_t p,
                                             std::optional<std::size_t> positions = std::nullopt) {
  if (!is_reduced(k_red, p)) throw Error(ErrorKind::DomainError, "enumerate_class needs a reduced index");
  const std::size_t M = positions ? *positions : class_position_bound(k_red, sigma_max, p);
  // Scale lambda by p^M: k ~ k_red iff sum a_j p^{M-j} agree mod p^M.
  std::vector<Int> weight(M + 1);
  Int pm = 1;
  for (std::size_t j = M + 1; j-- > 1;) {
    weight[j] = pm;
    pm *= p;
  }
  Int target = 0;
  for (std::size_t j = 1; j <= k_red.max_position() && j <= M; ++j) target += weight[j] * k_red.at(j);
  target %= pm;

  std::vector<IndexVec> out;
  std::vector<unsigned long> cur(M, 0);
  auto dfs = [&](auto&& self, std::size_t j, unsigned long left, const Int& acc) -> void {
    if (j > M) {
      Int r = acc % pm;
      if (r == target) out.emplace_back(cur);
      return;
    }
    for (unsigned long x = 0; x <= left; ++x) {
      cur[j - 1] = x;
      self(self, j + 1, left - x, acc + weight[j] * x);
    }
    cur[j - 1] = 0;
  };
  dfs(dfs, 1, sigma_max, Int(0));
  std::sort(out.begin(), out.end(), [](const IndexVec& a, const IndexVec& b) {
    const auto sa = sigma_of(a), sb = sigma_of(b);
    return sa != sb ? sa < sb : a < b;
  });
  return out;
}

/// i! / prod k_j!
inline Int multinomial(unsigned long i, const IndexVec& k) {
  if (sigma_of(k) != i)
    throw Error(ErrorKind::SigmaMismatch, "Sigma(k) = " + std::to_string(sigma_of(k)) + " differs from i = " + std::to_string(i));
  Int r = 1;
  unsigned long n = 0;
  for (unsigned long x : k.entries())
    for (unsigned long j = 1; j <= x; ++j) {
      ++n;
      r = r * n / j;  // running binomial products stay integral
    }
  return r;
}

/// Calls `fn(k)` for every k over positions 1..K with Sigma(k) = i.
template <class Fn>
void for_each_composition(unsigned long i, std::size_t K, Fn&& fn) {
  std::vector<unsigned long> cur(K, 0);
  auto rec = [&](auto&& self, std::size_t j, unsigned long left) -> void {
    if (j + 1 == K || K == 0) {
      if (K > 0) cur[j] = left;
      if (K > 0 || left == 0) fn(IndexVec(cur));
      if (K > 0) cur[j] = 0;
      return;
    }
    for (unsigned long x = 0; x <= left; ++x) {
      cur[j] = x;
      self(self, j + 1, left - x);
    }
    cur[j] = 0;
  };
  rec(rec, 0, i);
}

struct Certificate {
  std::vector<Int> s;  // s_0 .. s_{n+1}
  unsigned n = 0;
  Rat cap{1};

  void validate() const {
    if (s.size() != n + 2) throw Error(ErrorKind::DomainError, "certificate needs n+2 coefficients");
    if (s.front() == 0 || s.back() == 0) throw Error(ErrorKind::DomainError, "s_0 and s_{n+1} must be nonzero");
  }
};

/// Multinomial terms sum_i s_i sum_{Sigma(k)=i} (i choose k) p^{lambda(k)} over positions <= depth.
inline RawTermBag multinomial_bag(const FieldPtr& F, const std::vector<Int>& s, std::size_t depth, const Cap& cap) {
  RawTermBag bag;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == 0) continue;
    for_each_composition(i, depth, [&](const IndexVec& k) {
      Rat e = lambda_of(k, F->p());
      if (cap && e >= *cap) return;
      bag.push_back(RawTerm{std::move(e), TeichTerm{F->one(), s[i] * multinomial(i, k)}});
    });
  }
  return bag;
}

/// (sum_{k<=depth} p^{-1/p^k})^i by the multinomial expansion.
inline PHahn frakA_power(const FieldPtr& F, unsigned long i, const Cap& cap, std::size_t depth,
                         const NormalizeOptions& opt = {}) {
  std::vector<Int> s(i + 1, Int(0));
  s[i] = 1;
  return ph_normalize(F, multinomial_bag(F, s, depth, cap), cap, opt);
}

/// sum_i s_i A_K^i below the certificate cap, A_K the depth-K partial sum
/// (default K = n + 1).
inline PHahn certificate_residual(const FieldPtr& F, const Certificate& cert, std::optional<std::size_t> depth = std::nullopt,
                                  const NormalizeOptions& opt = {}) {
  cert.validate();
  const std::size_t K = depth ? *depth : cert.n + 1;
  return ph_normalize(F, multinomial_bag(F, cert.s, K, Cap(cert.cap)), Cap(cert.cap), opt);
}

/// lambda(k_red) + delta_0 in [0, 1): the fractional-part class the reduced index contributes to.
inline Rat class_bucket(const IndexVec& k_red, std::int64_t p) {
  const Rat lam = lambda_of(k_red, p);
  return k_red.empty() ? lam : lam + 1;
}

/// sum over the class of k_red (Sigma <= n+1) of s_{Sigma(k)} (Sigma(k) choose k) p^{lambda(k) - lambda(k_red)}.
/// The offsets are integers but may be negative, so the value lies in Z[1/p].
inline Rat grouped_sum(const IndexVec& k_red, const Certificate& cert, std::int64_t p) {
  cert.validate();
  const Rat base = lambda_of(k_red, p);
  Rat total = 0;
  for (const IndexVec& k : enumerate_class(k_red, cert.n + 1, p)) {
    const unsigned long sig = sigma_of(k);
    const Int& si = cert.s[sig];
    if (si == 0) continue;
    const Int off = num(lambda_of(k, p) - base);
    Rat term(si * multinomial(sig, k));
    if (off >= 0) {
      term *= Rat(ipow(Int(p), static_cast<unsigned long>(off)));
    } else {
      term /= Rat(ipow(Int(p), static_cast<unsigned long>(-off)));
    }
    total += term;
  }
  return total;
}

/// k* = (1, ..., 1) with m ones.
inline IndexVec all_ones(std::size_t m) { return IndexVec(std::vector<unsigned long>(m, 1)); }

inline std::string format_index(const IndexVec& a) {
  std::string out = "(";
  for (std::size_t i = 0; i < a.entries().size(); ++i) {
    if (i) out += ",";
    out += std::to_string(a.entries()[i]);
  }
  return out + ")";
}

/// `(a1,a2,...)`, spaces allowed; `()` is the empty index.
inline IndexVec parse_index(std::string_view s) {
  auto bad = [&] { return Error(ErrorKind::SyntaxError, "bad index vector '" + std::string(s) + "'"); };
  std::vector<unsigned long> e;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < s.size() && s[i] == ' ') ++i;
  };
  skip();
  if (i >= s.size() || s[i] != '(') throw bad();
  ++i;
  skip();
  if (i < s.size() && s[i] == ')') {
    ++i;
  } else {
    while (true) {
      skip();
      if (i >= s.size() || s[i] < '0' || s[i] > '9') throw bad();
      unsigned long v = 0;
      while (i < s.size() && s[i] >= '0' && s[i] <= '9') {
        if (v > 100000000UL) throw bad();
        v = v * 10 + static_cast<unsigned long>(s[i++] - '0');
      }
      e.push_back(v);
      skip();
      if (i < s.size() && s[i] == ',') {
        ++i;
        continue;
      }
      if (i < s.size() && s[i] == ')') {
        ++i;
        break;
      }
      throw bad();
    }
  }
  skip();
  if (i != s.size()) throw bad();
  return IndexVec(std::move(e));
}

}  // namespace hahnforge
