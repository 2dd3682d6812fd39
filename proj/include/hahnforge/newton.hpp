#pragma once

// Newton-polygon root expansion over EqHahn and PHahn coefficients.

#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "hahnforge/eq_hahn.hpp"
#include "hahnforge/errors.hpp"
#include "hahnforge/fq.hpp"
#include "hahnforge/padic_hahn.hpp"
#include "hahnforge/rational.hpp"

namespace hahnforge {

struct NewtonOptions {
  std::size_t max_terms = 8;       // terms per branch before the limit stage
  int max_field_degree = 6;        // largest r the residue field may be extended to
  int stall_limit = 3;             // steps without residual growth before NoProgress
  std::size_t omega_depth = 6;     // p-adic: terms inspected for a geometric exponent pattern
  std::size_t max_limit_terms = 8; // p-adic: terms added after the limit point
  bool separate = true;            // equal characteristic: report roots sharing the final prefix
};

struct NewtonSegment {
  std::size_t i0 = 0, i1 = 0;
  Rat slope;

  Rat root_valuation() const { return -slope; }
  std::size_t multiplicity() const { return i1 - i0; }
};

/// Lower convex hull of (i, v(a_i)).
struct NewtonPolygon {
  std::vector<std::pair<std::size_t, Rat>> vertices;
  std::vector<NewtonSegment> segments;

  /// Multiplicity of the root 0: the index of the lowest nonzero coefficient.
  std::size_t zero_root_multiplicity() const { return vertices.empty() ? 0 : vertices.front().first; }
};

/// Coefficients without stored terms are treated as absent; a capped one whose
/// cap lies below the hull makes the polygon undetermined.
template <class Series>
NewtonPolygon polygon_of(const std::vector<Series>& f) {
  std::vector<std::pair<std::size_t, Rat>> pts;
  std::vector<std::pair<std::size_t, Rat>> unknown;
  for (std::size_t j = 0; j < f.size(); ++j) {
    if (!f[j].empty()) {
      pts.emplace_back(j, f[j].val().value());
    } else if (f[j].cap()) {
      unknown.emplace_back(j, *f[j].cap());
    }
  }
  if (pts.empty()) {
    if (!unknown.empty()) throw Error(ErrorKind::PrecisionLoss, "every coefficient is below precision");
    throw Error(ErrorKind::ZeroPolynomial, "polygon of the zero polynomial");
  }
  NewtonPolygon poly;
  auto& h = poly.vertices;
  auto slope = [](const std::pair<std::size_t, Rat>& a, const std::pair<std::size_t, Rat>& b) {
    return (b.second - a.second) / Rat(static_cast<long>(b.first - a.first));
  };
  for (const auto& pt : pts) {
    while (h.size() >= 2 && slope(h[h.size() - 2], h.back()) >= slope(h.back(), pt)) h.pop_back();
    h.push_back(pt);
  }
  for (std::size_t i = 0; i + 1 < h.size(); ++i) poly.segments.push_back(NewtonSegment{h[i].first, h[i + 1].first, slope(h[i], h[i + 1])});
  for (const auto& [j, c] : unknown) {
    if (j < h.front().first || j > h.back().first)
      throw Error(ErrorKind::PrecisionLoss, "coefficient " + std::to_string(j) + " is below precision outside the hull");
    for (const auto& s : poly.segments) {
      if (j < s.i0 || j > s.i1) continue;
      const Rat on_hull = f[s.i0].val().value() + s.slope * Rat(static_cast<long>(j - s.i0));
      if (c < on_hull)
        throw Error(ErrorKind::PrecisionLoss, "coefficient " + std::to_string(j) + " is known only below O(" + to_string(c) + ")");
    }
  }
  return poly;
}

/// sum of lead(a_j) c^{j - i0} over the points lying on the segment.
template <class Series>
std::vector<FqElem> residue_polynomial(const std::vector<Series>& f, const NewtonSegment& s, const FqField& F) {
  std::vector<FqElem> r(s.i1 - s.i0 + 1, F.zero());
  const Rat base = f[s.i0].val().value();
  for (std::size_t j = s.i0; j <= s.i1; ++j) {
    if (f[j].empty()) continue;
    if (f[j].val().value() == base + s.slope * Rat(static_cast<long>(j - s.i0))) r[j - s.i0] = f[j].leading_coefficient();
  }
  return r;
}

/// Geometric continuation after a run of terms e_{k+1} - e_k = d rho^k, all with
/// the same coefficient; `point` is the limit of the exponents.
struct LimitStage {
  Rat point;
  Rat ratio;
  Rat increment;  // last increment inside the pattern
  std::size_t depth = 0;
  FqElem coefficient;
  Cap window_end;  // digits of the residual are trusted below this
};

struct RootBranch {
  std::vector<std::pair<Rat, FqElem>> terms;
  Valuation residual_bound;
  int field_degree = 1;
  FieldPtr field;
  std::optional<LimitStage> limit;
};

/// Terms of the branch with the geometric pattern continued to `pattern_depth`
/// terms (no-op without a limit stage or when pattern_depth <= depth).
inline std::vector<std::pair<Rat, FqElem>> branch_terms(const RootBranch& b, std::size_t pattern_depth = 0) {
  if (!b.limit || pattern_depth <= b.limit->depth) return b.terms;
  const auto& L = *b.limit;
  std::vector<std::pair<Rat, FqElem>> out(b.terms.begin(), b.terms.begin() + static_cast<std::ptrdiff_t>(L.depth));
  Rat e = out.back().first, d = L.increment;
  for (std::size_t k = L.depth; k < pattern_depth; ++k) {
    d *= L.ratio;
    e += d;
    out.emplace_back(e, L.coefficient);
  }
  out.insert(out.end(), b.terms.begin() + static_cast<std::ptrdiff_t>(L.depth), b.terms.end());
  return out;
}

template <class Series>
struct SeriesTraits;

template <>
struct SeriesTraits<EqHahn> {
  static EqHahn monomial(const FieldPtr& F, const FqElem& c, const Rat& e) { return EqHahn::monomial(F, c, e); }
  static EqHahn embed(const EqHahn& s, const FieldEmbedding& phi) {
    EqHahn::Terms t;
    for (const auto& [e, c] : s.terms()) t.emplace(e, phi(c));
    return EqHahn(phi.target(), t, s.cap());
  }
};

template <>
struct SeriesTraits<PHahn> {
  static PHahn monomial(const FieldPtr& F, const FqElem& c, const Rat& e) { return PHahn::teich_monomial(F, c, e); }
  static PHahn embed(const PHahn& s, const FieldEmbedding& phi) {
    PHahn::Digits d;
    for (const auto& [e, c] : s.digits()) d.emplace(e, phi(c));
    return PHahn(phi.target(), d, s.cap());
  }
};

/// sum c t^e (or [c] p^e) over strictly increasing exponents.
template <class Series>
Series series_of_terms(const FieldPtr& F, const std::vector<std::pair<Rat, FqElem>>& terms) {
  Series s(F);
  for (const auto& [e, c] : terms) s = s + SeriesTraits<Series>::monomial(F, c, e);
  return s;
}

/// Exact valuation of f(prefix), checked against `expected_bound`.
template <class Series>
Valuation verify_root(const std::vector<Series>& f, const Series& prefix, const Rat& expected_bound) {
  const Series r = eval_poly(f, prefix);
  const Valuation v = r.val_lower_bound();
  if (r.empty() && r.cap() && v < Valuation(expected_bound))
    throw Error(ErrorKind::PrecisionLoss, "residual known only below O(" + to_string(*r.cap()) + ")");
  if (v < Valuation(expected_bound))
    throw Error(ErrorKind::BoundViolation, "residual valuation " + v.str() + " is below the bound " + to_string(expected_bound));
  return v;
}

namespace detail {

template <class Series>
struct ExpandState {
  FieldPtr field;
  std::vector<Series> f;
  std::vector<std::pair<Rat, FqElem>> terms;
  std::optional<LimitStage> limit;
  int stalls = 0;
  std::optional<Rat> last_residual;
};

struct SegmentChoice {
  Rat v;
  std::vector<FqElem> residue;
  std::vector<FqElem> roots;  // nonzero roots in the current field, index order
};

template <class Series, class Admit>
std::vector<SegmentChoice> admissible_segments(const std::vector<Series>& g, const FqField& F, Admit&& admit) {
  std::vector<SegmentChoice> out;
  for (const auto& s : polygon_of(g).segments) {
    const Rat v = s.root_valuation();
    if (!admit(v)) continue;
    SegmentChoice c{v, residue_polynomial(g, s, F), {}};
    for (auto& x : fq_poly_roots(F, c.residue))
      if (!x.is_zero()) c.roots.push_back(std::move(x));
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const SegmentChoice& a, const SegmentChoice& b) { return a.v < b.v; });
  return out;
}

/// Smallest F_{p^{rm}} (rm <= max_degree) where `poly` has a root, with the embedding.
inline FieldEmbedding extension_for(const FieldPtr& F, const std::vector<FqElem>& poly, int max_degree) {
  for (int m = 2; F->degree() * m <= max_degree; ++m) {
    auto big = FqField::make(F->p(), F->degree() * m);
    FieldEmbedding phi(F, big);
    std::vector<FqElem> lifted;
    for (const auto& c : poly) lifted.push_back(phi(c));
    for (const auto& x : fq_poly_roots(*big, lifted))
      if (!x.is_zero()) return phi;
  }
  throw Error(ErrorKind::FieldExtensionExceeded,
              "residue equation has no root over F_" + std::to_string(F->p()) + "^r for r <= " + std::to_string(max_degree));
}

template <class Series>
ExpandState<Series> embed_state(const ExpandState<Series>& st, const FieldEmbedding& phi) {
  ExpandState<Series> out = st;
  out.field = phi.target();
  for (auto& c : out.f) c = SeriesTraits<Series>::embed(c, phi);
  for (auto& t : out.terms) t.second = phi(t.second);
  if (out.limit) out.limit->coefficient = phi(out.limit->coefficient);
  return out;
}

template <class Series>
void note_residual(ExpandState<Series>& st, const Rat& r, int stall_limit) {
  if (st.last_residual && r <= *st.last_residual) {
    if (++st.stalls >= stall_limit)
      throw Error(ErrorKind::NoProgress, "residual valuation stuck at " + to_string(r) + " for " + std::to_string(st.stalls) + " steps");
  } else {
    st.stalls = 0;
  }
  st.last_residual = r;
}

template <class Series>
RootBranch make_branch(const ExpandState<Series>& st, Valuation bound) {
  return RootBranch{st.terms, bound, st.field->degree(), st.field, st.limit};
}

class EqExpander {
 public:
  explicit EqExpander(const NewtonOptions& opt) : opt_(opt) {}

  void run(ExpandState<EqHahn> st, const std::optional<Rat>& only_v = std::nullopt) {
    const EqHahn x0 = series_of_terms<EqHahn>(st.field, st.terms);
    auto g = taylor_shift(st.f, x0);
    if (st.terms.size() >= opt_.max_terms) {
      finish(st, g);
      return;
    }
    if (g[0].empty()) {
      out.push_back(make_branch(st, g[0].val_lower_bound()));
      return;
    }
    if (!only_v) note_residual(st, g[0].val().value(), opt_.stall_limit);
    const std::optional<Rat> last = st.terms.empty() ? std::nullopt : std::optional<Rat>(st.terms.back().first);
    const auto segs = admissible_segments(g, *st.field, [&](const Rat& v) { return !last || v > *last; });
    if (segs.empty()) throw Error(ErrorKind::NoProgress, "no Newton segment continues the expansion");
    for (const auto& seg : segs) {
      if (only_v && seg.v != *only_v) continue;
      if (seg.roots.empty()) {
        run(embed_state(st, extension_for(st.field, seg.residue, opt_.max_field_degree)), seg.v);
        continue;
      }
      for (const auto& c : seg.roots) {
        auto child = st;
        child.terms.emplace_back(seg.v, c);
        run(std::move(child));
      }
    }
  }

  std::vector<RootBranch> out;

 private:
  // Emits the branch, then the other roots that agree with it on every term:
  // nonzero roots c t^v of g - g(0) with v past the last exponent.
  void finish(const ExpandState<EqHahn>& st, std::vector<EqHahn> g) {
    out.push_back(make_branch(st, g[0].val_lower_bound()));
    if (!opt_.separate || g[0].empty() || st.terms.empty()) return;
    g[0] = EqHahn::zero(st.field);
    const Rat last = st.terms.back().first;
    for (const auto& seg : admissible_segments(g, *st.field, [&](const Rat& v) { return v > last; })) {
      for (const auto& c : seg.roots) {
        auto child = st;
        child.terms.emplace_back(seg.v, c);
        const EqHahn r = eval_poly(child.f, series_of_terms<EqHahn>(child.field, child.terms));
        out.push_back(make_branch(child, r.val_lower_bound()));
      }
    }
  }

  NewtonOptions opt_;
};

class PadicExpander {
 public:
  PadicExpander(const NewtonOptions& opt, Rat cap) : opt_(opt), cap_(std::move(cap)) {}

  void run(ExpandState<PHahn> st, const std::optional<Rat>& only_v = std::nullopt) {
    const PHahn x0 = series_of_terms<PHahn>(st.field, st.terms);
    auto g = taylor_shift(st.f, x0);
    const std::size_t post = st.limit ? st.terms.size() - st.limit->depth : 0;
    if ((!st.limit && st.terms.size() >= opt_.max_terms) || post >= opt_.max_limit_terms) {
      emit(st, g[0]);
      return;
    }
    const PHahn residual = g[0];
    PHahn g0 = g[0];
    if (st.limit) {
      auto [filtered, end] = window(st);
      g0 = std::move(filtered);
      st.limit->window_end = end;
    }
    if (g0.empty() || g0.val().value() >= cap_) {
      emit(st, residual);
      return;
    }
    if (!only_v) note_residual(st, g0.val().value(), opt_.stall_limit);
    g[0] = g0;
    const std::optional<Rat> last =
        (st.terms.empty() || (post == 0 && st.limit)) ? std::nullopt : std::optional<Rat>(st.terms.back().first);
    auto admit = [&](const Rat& v) {
      if (last && v <= *last) return false;
      if (st.limit && v < st.limit->point) return false;
      if (st.limit && st.limit->window_end && v >= *st.limit->window_end) return false;
      return v < cap_;
    };
    const auto segs = admissible_segments(g, *st.field, admit);
    if (segs.empty()) {
      if (st.limit) {
        emit(st, residual);
        return;
      }
      throw Error(ErrorKind::NoProgress, "no Newton segment continues the expansion");
    }
    for (const auto& seg : segs) {
      if (only_v && seg.v != *only_v) continue;
      if (seg.roots.empty()) {
        run(embed_state(st, extension_for(st.field, seg.residue, opt_.max_field_degree)), seg.v);
        continue;
      }
      for (const auto& c : seg.roots) {
        auto child = st;
        child.terms.emplace_back(seg.v, c);
        if (!child.limit && child.terms.size() >= opt_.omega_depth) child.limit = detect_pattern(child.terms);
        run(std::move(child));
      }
    }
  }

  std::vector<RootBranch> out;

 private:
  void emit(const ExpandState<PHahn>& st, const PHahn& residual) { out.push_back(make_branch(st, residual.val_lower_bound())); }

  /// Last four terms share a coefficient and their exponent increments a ratio in (0, 1).
  static std::optional<LimitStage> detect_pattern(const std::vector<std::pair<Rat, FqElem>>& t) {
    const std::size_t n = t.size();
    if (n < 4) return std::nullopt;
    for (std::size_t i = n - 4; i < n; ++i)
      if (!(t[i].second == t.back().second)) return std::nullopt;
    const Rat d1 = t[n - 3].first - t[n - 4].first, d2 = t[n - 2].first - t[n - 3].first, d3 = t[n - 1].first - t[n - 2].first;
    const Rat rho = d2 / d1;
    if (d3 / d2 != rho || rho <= 0 || rho >= 1) return std::nullopt;
    return LimitStage{t.back().first + d3 * rho / (Rat(1) - rho), rho, d3, n, t.back().second, std::nullopt};
  }

  /// Residual digits at or past the limit point that do not move when the
  /// pattern is continued by one or two more terms.
  std::pair<PHahn, Cap> window(const ExpandState<PHahn>& st) const {
    const LimitStage& L = *st.limit;
    RootBranch b{st.terms, Valuation(), st.field->degree(), st.field, L};
    std::vector<PHahn> res;
    for (std::size_t extra = 0; extra < 3; ++extra)
      res.push_back(eval_poly(st.f, series_of_terms<PHahn>(st.field, branch_terms(b, L.depth + extra))));
    Cap end;
    for (const auto& r : res) end = min_cap(end, r.cap());
    std::map<Rat, int> exps;
    for (const auto& r : res)
      for (const auto& [e, d] : r.digits()) exps.emplace(e, 0);
    for (const auto& [e, unused] : exps) {
      if (e < L.point) continue;
      if (end && e >= *end) break;
      if (!(res[0].coefficient(e) == res[1].coefficient(e)) || !(res[0].coefficient(e) == res[2].coefficient(e))) {
        end = e;
        break;
      }
    }
    PHahn::Digits kept;
    for (const auto& [e, d] : res[0].digits())
      if (e >= L.point && (!end || e < *end)) kept.emplace(e, d);
    return {PHahn(st.field, kept, end), end};
  }

  NewtonOptions opt_;
  Rat cap_;
};

}  // namespace detail

/// Root expansions of f over F_q((t^Q)), one branch per residue root choice.
inline std::vector<RootBranch> expand_roots_eq(const EqPoly& f, const NewtonOptions& opt = {}) {
  if (f.size() < 2) throw Error(ErrorKind::DomainError, "polynomial of degree < 1");
  detail::ExpandState<EqHahn> st{f.front().field(), f, {}, std::nullopt, 0, std::nullopt};
  detail::EqExpander ex(opt);
  ex.run(std::move(st));
  return std::move(ex.out);
}

/// Root expansions of f over W(F_q)((p^Q)) with residuals resolved below `cap`.
/// After `omega_depth` terms a geometric exponent pattern is continued to its
/// limit and expansion resumes past it on the stable part of the residual.
inline std::vector<RootBranch> expand_root_padic(const std::vector<PHahn>& f, const Rat& cap, const NewtonOptions& opt = {}) {
  if (f.size() < 2) throw Error(ErrorKind::DomainError, "polynomial of degree < 1");
  const FieldPtr& F = f.front().field();
  // Working precision: enough that f(x0) is resolved below cap for |x0| <= p^{-v_min}.
  Rat shrink = 0;
  for (const auto& s : polygon_of(f).segments) shrink = std::max(shrink, -s.root_valuation());
  const Rat work = cap + Rat(static_cast<long>(f.size() - 1)) * shrink + 1;
  std::vector<PHahn> fw;
  for (const auto& c : f) fw.push_back(c.truncated(Cap(work)));
  detail::ExpandState<PHahn> st{F, fw, {}, std::nullopt, 0, std::nullopt};
  detail::PadicExpander ex(opt, cap);
  ex.run(std::move(st));
  return std::move(ex.out);
}

}  // namespace hahnforge
