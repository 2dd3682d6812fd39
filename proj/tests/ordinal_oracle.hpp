#pragma once

// Order types below w^3 from explicit finite well-order approximations. Each
// w-block is truncated to M points followed by a limit token of level l; a
// scanner walks the tokens keeping the position as a triple (a, b, c) meaning
// w^2 a + w b + c, using only "+1" for points and "round up to a multiple of
// w^l" for limit tokens.

#include <array>
#include <cstdint>
#include <vector>

#include "hahnforge/ordinal.hpp"

namespace oracle {

using Triple = std::array<std::int64_t, 3>;  // (a, b, c)

/// 0 is a point; l >= 1 is a limit token of level l.
using Stream = std::vector<int>;

inline int max_level(const Stream& s) {
  int m = 0;
  for (int t : s) m = std::max(m, t);
  return m;
}

/// w^k truncated: M copies of the w^{k-1} stream, then a level-k limit.
inline Stream omega_power_stream(int k, int M) {
  if (k == 0) return Stream{0};
  const Stream inner = omega_power_stream(k - 1, M);
  Stream out;
  for (int i = 0; i < M; ++i) out.insert(out.end(), inner.begin(), inner.end());
  out.push_back(k);
  return out;
}

/// w^2 a + w b + c as a concatenation of blocks.
inline Stream stream_of(const Triple& t, int M) {
  Stream out;
  for (int k = 2; k >= 0; --k) {
    const Stream blk = omega_power_stream(k, M);
    for (std::int64_t i = 0; i < t[static_cast<std::size_t>(2 - k)]; ++i) out.insert(out.end(), blk.begin(), blk.end());
  }
  return out;
}

inline Stream concat(const Stream& a, const Stream& b) {
  Stream out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

/// Lexicographic product (b copies of a): each point of b becomes a copy of a; a
/// limit of b of level l becomes a limit of level l + (largest level in a).
inline Stream product(const Stream& a, const Stream& b) {
  const int shift = max_level(a);
  Stream out;
  for (int t : b) {
    if (t == 0) {
      out.insert(out.end(), a.begin(), a.end());
    } else {
      out.push_back(t + shift);
    }
  }
  return out;
}

inline Triple scan(const Stream& s) {
  Triple pos{0, 0, 0};
  for (int t : s) {
    if (t == 0) {
      ++pos[2];
    } else if (t == 1) {
      if (pos[2] != 0) {
        ++pos[1];
        pos[2] = 0;
      }
    } else if (t == 2) {
      if (pos[1] != 0 || pos[2] != 0) {
        ++pos[0];
        pos[1] = pos[2] = 0;
      }
    } else {
      throw std::out_of_range("limit level beyond w^3");
    }
  }
  return pos;
}

inline hahnforge::Ordinal to_ordinal(const Triple& t) {
  using hahnforge::Int;
  using hahnforge::Ordinal;
  return Ordinal::omega_pow(Ordinal::from_int(2), Int(t[0])) + Ordinal::omega_pow(Ordinal::from_int(1), Int(t[1])) +
         Ordinal::from_int(Int(t[2]));
}

}  // namespace oracle
