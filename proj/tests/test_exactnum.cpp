#include <gtest/gtest.h>

#include <random>

#include "hahnforge/fq.hpp"
#include "hahnforge/witt.hpp"
#include "oracles.hpp"

using namespace hahnforge;

namespace {

WittElem witt_int(const WittRing& W, long n) { return W.from_int(Int(n)); }

}  // namespace

TEST(Fq, CharacteristicTwoAddition) {
  auto F = FqField::make(2, 1);
  EXPECT_EQ(F->add(F->one(), F->one()), F->zero());
}

TEST(Fq, InverseModThree) {
  auto F = FqField::make(3, 1);
  EXPECT_EQ(F->inv(F->from_int(2)), F->from_int(2));
  EXPECT_THROW(F->inv(F->zero()), Error);
}

TEST(Fq, GeneratorSquaredInF4) {
  auto F = FqField::make(2, 2);
  ASSERT_EQ(F->modulus(), (std::vector<std::int64_t>{1, 1, 1}));
  const FqElem g = F->gen();
  EXPECT_EQ(F->mul(g, g), F->add(g, F->one()));
  EXPECT_EQ(F->format(F->mul(g, g)), "g+1");
}

TEST(Fq, FindModulusMatchesBruteForceScan) {
  EXPECT_EQ(find_modulus(2, 1), (std::vector<std::int64_t>{0, 1}));
  EXPECT_EQ(find_modulus(2, 2), (std::vector<std::int64_t>{1, 1, 1}));
  EXPECT_EQ(find_modulus(3, 2), (std::vector<std::int64_t>{1, 0, 1}));
  // Oracle: first irreducible in the same enumeration order, tested by trial division.
  for (std::int64_t p : {2, 3, 5}) {
    for (int r = 1; r <= 4; ++r) {
      if (p == 5 && r > 3) continue;
      std::vector<std::int64_t> f(static_cast<std::size_t>(r) + 1, 0);
      f.back() = 1;
      while (!oracle::irreducible_brute(f, p)) {
        std::size_t i = 0;
        while (++f[i] == p) f[i++] = 0;
      }
      EXPECT_EQ(find_modulus(p, r), f) << "p=" << p << " r=" << r;
    }
  }
}

TEST(Fq, FrobeniusHasOrderExactlyR) {
  for (std::int64_t p : {2, 3, 5}) {
    for (int r = 1; r <= 4; ++r) {
      if (p == 5 && r == 4) continue;
      auto F = FqField::make(p, r);
      const auto elems = F->elements();
      for (int k = 1; k <= r; ++k) {
        bool identity = true;
        for (const auto& a : elems) {
          FqElem x = a;
          for (int i = 0; i < k; ++i) x = F->frobenius(x);
          identity = identity && x == a;
        }
        EXPECT_EQ(identity, k == r) << "p=" << p << " r=" << r << " k=" << k;
      }
      // fixes F_p
      for (std::int64_t c = 0; c < p; ++c) EXPECT_EQ(F->frobenius(F->from_int(c)), F->from_int(c));
    }
  }
}

TEST(Fq, FieldAxiomsExhaustiveF9) {
  auto F = FqField::make(3, 2);
  const auto el = F->elements();
  for (const auto& a : el) {
    if (!a.is_zero()) EXPECT_EQ(F->mul(a, F->inv(a)), F->one());
    for (const auto& b : el) {
      EXPECT_EQ(F->mul(a, b), F->mul(b, a));
      EXPECT_EQ(F->sub(F->add(a, b), b), a);
      for (const auto& c : {el[1], el[4], el[8]}) EXPECT_EQ(F->mul(a, F->add(b, c)), F->add(F->mul(a, b), F->mul(a, c)));
    }
  }
}

TEST(Fq, PolyRoots) {
  auto F2 = FqField::make(2, 1);
  auto F3 = FqField::make(3, 1);
  std::vector<FqElem> x2x{F2->zero(), F2->one(), F2->one()};
  EXPECT_EQ(fq_poly_roots(*F2, x2x), (std::vector<FqElem>{F2->zero(), F2->one()}));
  std::vector<FqElem> x2p1{F3->one(), F3->zero(), F3->one()};
  EXPECT_TRUE(fq_poly_roots(*F3, x2p1).empty());
  std::vector<FqElem> x2x1{F2->one(), F2->one(), F2->one()};
  EXPECT_TRUE(fq_poly_roots(*F2, x2x1).empty());
  std::vector<FqElem> zero{F2->zero(), F2->zero()};
  try {
    fq_poly_roots(*F2, zero);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroPolynomial);
  }
}

TEST(Fq, ParseFormatRoundTrip) {
  auto F = FqField::make(3, 3);
  for (const auto& a : F->elements()) EXPECT_EQ(F->parse(F->format(a)), a);
  EXPECT_EQ(F->parse("g^3"), F->mul(F->gen(), F->mul(F->gen(), F->gen())));
  EXPECT_THROW(F->parse("g+"), Error);
  EXPECT_THROW(F->parse("2**g"), Error);
}

TEST(Fq, EmbeddingIsAHomomorphism) {
  auto small = FqField::make(2, 2);
  auto big = FqField::make(2, 4);
  FieldEmbedding phi(small, big);
  for (const auto& a : small->elements())
    for (const auto& b : small->elements()) {
      EXPECT_EQ(phi(small->mul(a, b)), big->mul(phi(a), phi(b)));
      EXPECT_EQ(phi(small->add(a, b)), big->add(phi(a), phi(b)));
    }
}

TEST(Witt, SmallArithmetic) {
  auto F3 = FqField::make(3, 1);
  WittRing W3(F3, 3);
  EXPECT_EQ(W3.add(witt_int(W3, 1), witt_int(W3, 1)), witt_int(W3, 2));

  auto F2 = FqField::make(2, 1);
  WittRing W2(F2, 4);
  EXPECT_EQ(W2.mul(witt_int(W2, 3), witt_int(W2, 5)), witt_int(W2, 15));

  auto F5 = FqField::make(5, 1);
  WittRing W5(F5, 3);
  EXPECT_EQ(oracle::inv_mod(2, 125), 63);
  EXPECT_EQ(W5.inv(witt_int(W5, 2)), witt_int(W5, 63));
  try {
    W5.inv(witt_int(W5, 10));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotAUnit);
  }
}

TEST(Witt, InverseRoundTripF9) {
  auto F = FqField::make(3, 2);
  WittRing W(F, 5);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    WittElem a = W.from_poly({Int(rng() % 243), Int(rng() % 243)});
    if (!W.is_unit(a)) continue;
    EXPECT_EQ(W.mul(a, W.inv(a)), W.one());
  }
}

TEST(Witt, TeichmuellerValues) {
  auto F3 = FqField::make(3, 1);
  WittRing W(F3, 2);
  EXPECT_EQ(oracle::teich_int(2, 3, 2), 8);
  EXPECT_EQ(W.teichmueller(F3->from_int(2)), witt_int(W, 8));
  EXPECT_EQ(W.teichmueller(F3->zero()), W.zero());
  auto F2 = FqField::make(2, 1);
  for (int L = 1; L < 8; ++L) EXPECT_EQ(WittRing(F2, L).teichmueller(F2->one()), WittRing(F2, L).one());
}

TEST(Witt, TeichmuellerIsMultiplicativeExhaustive) {
  for (auto [p, r] : std::vector<std::pair<int, int>>{{2, 1}, {2, 2}, {2, 3}, {2, 4}, {3, 1}, {3, 2}, {5, 1}, {5, 2}}) {
    auto F = FqField::make(p, r);
    WittRing W(F, 4);
    const auto el = F->elements();
    for (const auto& a : el) {
      const WittElem ta = W.teichmueller(a);
      EXPECT_EQ(W.residue(ta), a);
      EXPECT_EQ(W.pow(ta, ipow(Int(p), static_cast<unsigned long>(r))), ta);
      for (const auto& b : el) EXPECT_EQ(W.mul(ta, W.teichmueller(b)), W.teichmueller(F->mul(a, b)));
    }
  }
}

TEST(Witt, DigitDecomposition) {
  auto F3 = FqField::make(3, 1);
  WittRing W3(F3, 3);
  EXPECT_EQ(oracle::digits_brute(2, 3, 3), (std::vector<std::int64_t>{2, 1, 0}));
  EXPECT_EQ(W3.digits(witt_int(W3, 2)), (std::vector<FqElem>{F3->from_int(2), F3->from_int(1), F3->from_int(0)}));
  EXPECT_EQ(W3.digits(W3.zero()), std::vector<FqElem>(3, F3->zero()));
  auto F2 = FqField::make(2, 1);
  WittRing W2(F2, 3);
  EXPECT_EQ(W2.digits(witt_int(W2, 2)), (std::vector<FqElem>{F2->zero(), F2->one(), F2->zero()}));
  // all residues mod 5^3 against brute force
  auto F5 = FqField::make(5, 1);
  WittRing W5(F5, 3);
  for (long c = 0; c < 125; c += 7) {
    auto expect = oracle::digits_brute(c, 5, 3);
    auto got = W5.digits(witt_int(W5, c));
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(got[i].c[0], expect[i]) << c;
  }
}

TEST(Witt, RecomposeInvertsDigitsRandomized) {
  std::mt19937_64 rng(11);
  for (auto [p, r, L] : std::vector<std::tuple<int, int, int>>{{2, 1, 6}, {2, 2, 5}, {3, 2, 4}, {5, 1, 4}, {7, 2, 3}}) {
    auto F = FqField::make(p, r);
    WittRing W(F, L);
    const Int m = W.characteristic_power();
    for (int i = 0; i < 250; ++i) {
      std::vector<Int> poly;
      for (int k = 0; k < r; ++k) poly.push_back(Int(rng()) % m);
      WittElem c = W.from_poly(poly);
      EXPECT_EQ(W.recompose(W.digits(c)), c);
    }
  }
}
