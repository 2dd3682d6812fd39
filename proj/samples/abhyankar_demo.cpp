// Partial sums of the Artin-Schreier root sum_k t^{-1/p^k} and their residuals.

#include <iostream>

#include "hahnforge/eq_hahn.hpp"
#include "hahnforge/newton.hpp"
#include "hahnforge/series_io.hpp"

using namespace hahnforge;

int main() {
  for (std::int64_t p : {2, 3, 5}) {
    const auto F = FqField::make(p, 1);
    const EqPoly f = eq_poly_from_ast(parse_poly("X^" + std::to_string(p) + " - X - t^(-1)"), F);
    std::cout << "p = " << p << "\n";
    for (int K = 1; K <= 4; ++K) {
      const EqHahn x = abhyankar_partial_sum(F, K);
      std::cout << "  K = " << K << ": f(" << format_eq(x) << ") = " << format_eq(eval_poly(f, x)) << "\n";
    }
    NewtonOptions opt;
    opt.max_terms = 5;
    for (const auto& b : expand_roots_eq(f, opt))
      std::cout << "  newton: " << format_eq(series_of_terms<EqHahn>(b.field, b.terms)) << "\n";
  }
}
