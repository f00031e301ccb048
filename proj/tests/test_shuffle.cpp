#include <gtest/gtest.h>

#include <chrono>
#include <functional>
#include <random>

#include "khall/error.hpp"
#include "khall/shuffle.hpp"

using namespace khall;

namespace {

RingPtr Z() { return presets::integers(); }
LaurentPoly z(int i, int k = 1) { return LaurentPoly::variable(Z(), "z" + std::to_string(i), k); }
ShuffleElement gen(int a) { return ShuffleElement::generator(a); }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::UsageError;
}

// Degree (1,1) products by the explicit two-term symmetrization over the
// common denominator z2 - z1:
// z1^a z2^b z2/(z2 - z1) + z2^a z1^b z1/(z1 - z2) = (z1^a z2^{b+1} - z1^{b+1} z2^a)/(z2 - z1)
LaurentPoly pair_oracle(int a, int b) {
  LaurentPoly num = z(1, a) * z(2, b + 1) - z(1, b + 1) * z(2, a);
  auto q = num.divide_exact(z(2) - z(1));
  EXPECT_TRUE(q.has_value());
  return q->compact();
}

}  // namespace

namespace khall {
void PrintTo(const ShuffleElement& e, std::ostream* os) { *os << "deg " << e.degree() << ": " << e.to_string(); }
}  // namespace khall

TEST(Shuffle, DegreeOneProducts) {
  const auto one = gen(0);
  EXPECT_EQ(shuffle_mul(one, one).value(), LaurentPoly::constant(Z(), 1));
  EXPECT_TRUE(shuffle_mul(gen(1), one).is_zero());
  EXPECT_EQ(shuffle_mul(one, gen(1)).value(), z(1) + z(2));
  EXPECT_EQ(shuffle_mul(one, gen(1)).degree(), 2);
  EXPECT_NE(shuffle_mul(gen(1), one), shuffle_mul(one, gen(1)));
}

TEST(Shuffle, PairOracle) {
  for (int a = -3; a <= 3; ++a)
    for (int b = -3; b <= 3; ++b) EXPECT_EQ(shuffle_mul(gen(a), gen(b)).value(), pair_oracle(a, b)) << a << " " << b;
}

TEST(Shuffle, Canonicalize) {
  EXPECT_EQ(canonicalize(z(1) + z(2), 2).degree(), 2);
  EXPECT_EQ(code_of([] { (void)canonicalize(z(1), 2); }), ErrorCode::NotSymmetric);
  EXPECT_EQ(code_of([] { (void)canonicalize(z(3), 2); }), ErrorCode::NotSymmetric);
  auto five = canonicalize(LaurentPoly::constant(Z(), 5), 0);
  EXPECT_EQ(five.degree(), 0);
  EXPECT_EQ(five.to_string(), "5");
  EXPECT_EQ(code_of([] { (void)canonicalize(LaurentPoly::variable(presets::projective_plane(), "z1"), 1); }),
            ErrorCode::RingMismatch);
}

TEST(Shuffle, Unit) {
  const auto e = ShuffleElement::scalar(1);
  auto f = canonicalize(z(1, 2) * z(2, -1) + z(2, 2) * z(1, -1) + LaurentPoly::constant(Z(), 3), 2);
  EXPECT_EQ(shuffle_mul(e, f), f);
  EXPECT_EQ(shuffle_mul(f, e), f);
  EXPECT_EQ(shuffle_mul(ShuffleElement::scalar(3), gen(2)), 3 * gen(2));
}

TEST(Shuffle, Bilinear) {
  auto a = gen(1) + gen(-2), b = gen(0) - gen(2);
  EXPECT_EQ(shuffle_mul(a, b),
            shuffle_mul(gen(1), gen(0)) - shuffle_mul(gen(1), gen(2)) + shuffle_mul(gen(-2), gen(0)) -
                shuffle_mul(gen(-2), gen(2)));
  EXPECT_EQ(shuffle_mul(2 * a, b), 2 * shuffle_mul(a, b));
}

TEST(Shuffle, AssociativityDegreeOne) {
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b)
      for (int c = -2; c <= 2; ++c)
        EXPECT_EQ(shuffle_mul(shuffle_mul(gen(a), gen(b)), gen(c)), shuffle_mul(gen(a), shuffle_mul(gen(b), gen(c))))
            << a << b << c;
}

TEST(Shuffle, AssociativityMixedDegrees) {
  auto f = shuffle_mul(gen(2), gen(-1));
  auto g = shuffle_mul(gen(0), gen(2));
  auto h = gen(-1);
  EXPECT_EQ(shuffle_mul(shuffle_mul(f, g), h), shuffle_mul(f, shuffle_mul(g, h)));
  EXPECT_EQ(shuffle_mul(f, g), shuffle_mul(shuffle_mul(f, gen(0)), gen(2)));
}

TEST(Shuffle, DegreeSixTiming) {
  auto f = shuffle_mul(shuffle_mul(gen(-2), gen(-2)), gen(2));
  auto g = shuffle_mul(shuffle_mul(gen(2), gen(-2)), gen(-2));
  const auto start = std::chrono::steady_clock::now();
  auto p = shuffle_mul(f, g);
  EXPECT_EQ(p.degree(), 6);
  EXPECT_FALSE(f.is_zero() || g.is_zero() || p.is_zero());
  EXPECT_EQ(p, shuffle_mul(shuffle_mul(shuffle_mul(f, gen(2)), gen(-2)), gen(-2)));
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(30));
}

TEST(Shuffle, Json) {
  auto j = shuffle_mul(gen(0), gen(1)).to_json();
  EXPECT_EQ(j["degree"], 2);
  ASSERT_EQ(j["terms"].size(), 2u);
  EXPECT_EQ(j["terms"][0]["exponents"], nlohmann::json({1, 0}));
  EXPECT_EQ(j["terms"][0]["coefficient"], "1");
}
