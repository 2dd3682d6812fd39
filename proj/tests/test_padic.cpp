#include <gtest/gtest.h>

#include <random>

#include "generators.hpp"
#include "hahnforge/padic_hahn.hpp"
#include "oracles.hpp"

using namespace hahnforge;

namespace {

PHahn::Digits one_digits(const FieldPtr& F, std::initializer_list<Rat> es) {
  PHahn::Digits d;
  for (const auto& e : es) d.emplace(e, F->one());
  return d;
}

PHahn::Digits below(const PHahn::Digits& d, const Rat& c) {
  PHahn::Digits out;
  for (const auto& [e, v] : d)
    if (e < c) out.emplace(e, v);
  return out;
}

}  // namespace

TEST(PHahn, NormalizeExamples) {
  auto F2 = FqField::make(2, 1);
  RawTermBag two_halves{RawTerm{Rat(-1, 2), TeichTerm{F2->one(), 1}}, RawTerm{Rat(-1, 2), TeichTerm{F2->one(), 1}}};
  EXPECT_EQ(ph_normalize(F2, two_halves, std::nullopt).digits(), one_digits(F2, {Rat(1, 2)}));
  EXPECT_EQ(ph_normalize(F2, two_halves, Cap(Rat(3))).digits(), one_digits(F2, {Rat(1, 2)}));

  auto F3 = FqField::make(3, 1);
  RawTermBag ones{RawTerm{Rat(0), TeichTerm{F3->one(), 1}}, RawTerm{Rat(0), TeichTerm{F3->one(), 1}}};
  const PHahn two = ph_normalize(F3, ones, Cap(Rat(4)));
  EXPECT_EQ(two.digits(), (PHahn::Digits{{Rat(0), F3->from_int(2)}, {Rat(1), F3->one()}}));
  EXPECT_EQ(ph_normalize(F3, ones, std::nullopt).digits(), two.digits());

  EXPECT_TRUE(ph_normalize(F3, {}, std::nullopt).is_exact_zero());
}

TEST(PHahn, ExactCarryWithoutFiniteExpansionNeedsCap) {
  auto F5 = FqField::make(5, 1);
  try {
    ph_from_integer(F5, Int(2), std::nullopt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PrecisionLoss);
  }
  auto F2 = FqField::make(2, 1);
  EXPECT_THROW(ph_from_integer(F2, Int(-1), std::nullopt), Error);
  // -1 = sum of all powers of two
  const PHahn m1 = ph_from_integer(F2, Int(-1), Cap(Rat(5)));
  EXPECT_EQ(m1.digits(), one_digits(F2, {Rat(0), Rat(1), Rat(2), Rat(3), Rat(4)}));
}

TEST(PHahn, BucketLengthLimit) {
  auto F3 = FqField::make(3, 1);
  RawTermBag ones{RawTerm{Rat(0), TeichTerm{F3->from_int(2), 1}}, RawTerm{Rat(0), TeichTerm{F3->from_int(2), 1}}};
  NormalizeOptions opt;
  opt.max_length = 8;
  EXPECT_NO_THROW(ph_normalize(F3, ones, Cap(Rat(6)), opt));
  try {
    ph_normalize(F3, ones, Cap(Rat(7)), opt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PrecisionLoss);
  }
}

TEST(PHahn, ProductExamples) {
  auto F3 = FqField::make(3, 1);
  const PHahn a = PHahn::teich_monomial(F3, F3->one(), Rat(1, 3));
  const PHahn b = PHahn::teich_monomial(F3, F3->one(), Rat(2, 3));
  EXPECT_EQ((a * b).digits(), one_digits(F3, {Rat(1)}));
  EXPECT_EQ(a * PHahn::one(F3), a);
  EXPECT_EQ(a + PHahn::zero(F3), a);

  // Truncation of the 2-adic series squared, checked against the coordinate oracle.
  auto F2 = FqField::make(2, 1);
  const PHahn A2(F2, one_digits(F2, {Rat(-1, 2), Rat(-1, 4)}), Cap(Rat(2)));
  const PHahn sq = A2 * A2;
  ASSERT_EQ(sq.cap(), Cap(Rat(3, 2)));
  EXPECT_EQ(sq.digits(), oracle::frac_mul(A2, A2, Rat(3, 2)));
  // 2 p^{-3/4} = p^{1/4}; p^{-1} + p^{-1/2}
  EXPECT_EQ(sq.digits(), one_digits(F2, {Rat(-1), Rat(-1, 2), Rat(1, 4)}));
}

TEST(PHahn, Valuation) {
  auto F2 = FqField::make(2, 1);
  const PHahn A2(F2, one_digits(F2, {Rat(-1, 2), Rat(-1, 4)}), std::nullopt);
  EXPECT_EQ(A2.val(), Valuation(Rat(-1, 2)));
  EXPECT_TRUE(PHahn::zero(F2).val().is_infinite());
  EXPECT_THROW(PHahn::zero(F2, Cap(Rat(1))).val(), Error);
  for (std::int64_t p : {2, 3, 5}) {
    auto F = FqField::make(p, 1);
    const PHahn t = ph_frakA(F, std::nullopt, 4);
    EXPECT_EQ(t.val(), Valuation(Rat(-1, p)));
    EXPECT_EQ(t.shifted(Rat(1)).val(), Valuation(Rat(1) - Rat(1, p)));
  }
}

TEST(PHahn, DecomposeExamples) {
  auto F2 = FqField::make(2, 1);
  const auto d = ph_decompose(PHahn::teich_monomial(F2, F2->one(), Rat(-1, 2)));
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d.begin()->first, Rat(1, 2));
  EXPECT_EQ(d.begin()->second.offset, Int(-1));
  EXPECT_EQ(d.begin()->second.value.c[0], Int(1));
  EXPECT_TRUE(ph_decompose(PHahn::zero(F2)).empty());

  auto F3 = FqField::make(3, 1);
  const PHahn x(F3, {{Rat(0), F3->from_int(2)}, {Rat(1), F3->one()}}, std::nullopt);
  const auto dx = ph_decompose(x);
  ASSERT_EQ(dx.size(), 1u);
  EXPECT_EQ(dx.at(Rat(0)).offset, Int(0));
  EXPECT_EQ(dx.at(Rat(0)).value.c[0], Int(2));
}

TEST(PHahn, FromIntegerExamples) {
  auto F2 = FqField::make(2, 1);
  EXPECT_EQ(ph_from_integer(F2, Int(3), std::nullopt).digits(), one_digits(F2, {Rat(0), Rat(1)}));
  auto F3 = FqField::make(3, 1);
  // 2 = [2] + [1] 3 exactly, since [2] = -1.
  EXPECT_EQ(oracle::digits_brute(2, 3, 4), (std::vector<std::int64_t>{2, 1, 0, 0}));
  const PHahn::Digits two{{Rat(0), F3->from_int(2)}, {Rat(1), F3->one()}};
  EXPECT_EQ(ph_from_integer(F3, Int(2), Cap(Rat(4))).digits(), two);
  EXPECT_EQ(ph_from_integer(F3, Int(2), std::nullopt).digits(), two);
  EXPECT_TRUE(ph_from_integer(F3, Int(0), std::nullopt).is_exact_zero());
  // agrees with brute force digits for p = 5
  auto F5 = FqField::make(5, 1);
  for (int n = 1; n < 125; n += 11) {
    const auto expect = oracle::digits_brute(n, 5, 3);
    const PHahn got = ph_from_integer(F5, Int(n), Cap(Rat(3)));
    for (int i = 0; i < 3; ++i) EXPECT_EQ(got.coefficient(Rat(i)).c[0], expect[static_cast<std::size_t>(i)]) << n;
  }
}

TEST(PHahn, FrakAExamples) {
  auto F2 = FqField::make(2, 1);
  EXPECT_EQ(ph_frakA(F2, Cap(Rat(-1, 8))).digits(), one_digits(F2, {Rat(-1, 2), Rat(-1, 4)}));
  EXPECT_TRUE(ph_frakA(F2, Cap(Rat(-1, 2))).empty());
  auto F3 = FqField::make(3, 1);
  EXPECT_TRUE(ph_frakA(F3, Cap(Rat(-1, 2))).empty());
  EXPECT_THROW(ph_frakA(F3, Cap(Rat(0))), Error);
  EXPECT_EQ(ph_frakA(F3, Cap(Rat(0)), 3).digits().size(), 3u);
}

TEST(PHahn, RoundTripAndIdempotence) {
  std::mt19937_64 rng(3);
  for (auto [p, r] : std::vector<std::pair<int, int>>{{2, 1}, {2, 2}, {3, 1}, {3, 2}}) {
    auto F = FqField::make(p, r);
    for (int i = 0; i < 150; ++i) {
      const Cap cap = (i % 5 == 0) ? Cap() : Cap(gen::exponent(rng, p, 2) + 3);
      const PHahn a = gen::phahn(rng, F, 6, 2, cap);
      EXPECT_EQ(ph_recompose(F, ph_decompose(a), a.cap()), a);
      EXPECT_EQ(ph_normalize(F, a.to_bag(), a.cap()), a);
    }
  }
}

TEST(PHahn, MultiplicationMatchesCoordinateOracle) {
  std::mt19937_64 rng(5);
  for (auto [p, r] : std::vector<std::pair<int, int>>{{2, 1}, {2, 2}, {3, 1}, {5, 1}}) {
    auto F = FqField::make(p, r);
    for (int i = 0; i < 40; ++i) {
      const PHahn a = gen::phahn(rng, F, 5, 2, Cap(Rat(3)));
      const PHahn b = gen::phahn(rng, F, 5, 2, Cap(Rat(3)));
      const PHahn c = a * b;
      ASSERT_TRUE(c.cap());
      EXPECT_EQ(c.digits(), oracle::frac_mul(a, b, *c.cap()));
    }
  }
}

TEST(PHahn, RingAxiomsBelowCommonCap) {
  std::mt19937_64 rng(9);
  for (auto [p, r] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {3, 2}}) {
    auto F = FqField::make(p, r);
    for (int i = 0; i < 40; ++i) {
      const PHahn a = gen::phahn(rng, F, 4, 1, Cap(Rat(4)));
      const PHahn b = gen::phahn(rng, F, 4, 1, Cap(Rat(4)));
      const PHahn c = gen::phahn(rng, F, 4, 1, Cap(Rat(4)));
      const Rat common(1);
      EXPECT_TRUE((a + b).agrees_below(b + a, common));
      EXPECT_TRUE(((a + b) + c).agrees_below(a + (b + c), common));
      EXPECT_TRUE((a * b).agrees_below(b * a, common));
      EXPECT_TRUE(((a * b) * c).agrees_below(a * (b * c), common));
      EXPECT_TRUE((a * (b + c)).agrees_below(a * b + a * c, common));
      EXPECT_TRUE((a - a).agrees_below(PHahn::zero(F), common));
      EXPECT_EQ((a * b).val(), Valuation(a.val().value() + b.val().value()));
    }
  }
}

TEST(PHahn, ReplicationIdentity) {
  std::mt19937_64 rng(13);
  for (std::int64_t p : {2, 3}) {
    auto F = FqField::make(p, 1);
    for (int N = 1; N <= 2; ++N) {
      for (int i = 0; i < 10; ++i) {
        const Rat cap(4);
        const PHahn x = gen::phahn(rng, F, 3, 1, Cap(cap));
        const PHahn one_minus = ph_from_integer(F, Int(1) - ipow(Int(p), static_cast<unsigned long>(N)), Cap(cap + 2));
        const int T = static_cast<int>(ceil((cap - x.val().value()) / N)) + 1;
        PHahn sum = PHahn::zero(F, Cap(cap + 2));
        for (int t = 0; t < T; ++t) sum = sum + x.shifted(Rat(N * t));
        const PHahn prod = one_minus * sum;
        EXPECT_EQ(below(prod.digits(), cap), x.digits()) << "p=" << p << " N=" << N;
      }
    }
  }
}
