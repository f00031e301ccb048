#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "khall/error.hpp"
#include "khall/lambda.hpp"

using namespace khall;

namespace {

RingPtr R() {
  static const RingPtr r = adjoin_units(presets::integers(), {"l", "q", "u", "u1", "u2", "u3", "v"});
  return r;
}

UnitMonomial U(const std::string& g, int k = 1) { return UnitMonomial::generator(g, k); }
LaurentPoly cst(int c) { return LaurentPoly::constant(R(), c); }
RingElement el(const UnitMonomial& u) { return u.to_element(R()); }
RingElement one() { return RingElement::constant(R(), 1); }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::UsageError;
}

// i-th elementary / complete symmetric polynomial by direct enumeration.
RingElement elementary(const std::vector<UnitMonomial>& xs, int i) {
  RingElement s(R());
  const int n = static_cast<int>(xs.size());
  for (int mask = 0; mask < (1 << n); ++mask) {
    if (__builtin_popcount(mask) != i) continue;
    RingElement p = one();
    for (int j = 0; j < n; ++j)
      if (mask & (1 << j)) p *= el(xs[j]);
    s += p;
  }
  return s;
}

RingElement complete(const std::vector<UnitMonomial>& xs, int i, std::size_t from = 0) {
  if (i == 0) return one();
  RingElement s(R());
  for (std::size_t j = from; j < xs.size(); ++j) s += el(xs[j]) * complete(xs, i - 1, j);
  return s;
}

KClass random_rank0(std::mt19937& rng) {
  std::uniform_int_distribution<int> n(1, 3), g(0, 4), e(-1, 2);
  const char* names[] = {"u1", "u2", "u3", "v", "q"};
  KClass k;
  const int m = n(rng);
  for (int i = 0; i < m; ++i) k = k + KClass::line(U(names[g(rng)], e(rng) == 0 ? 2 : e(rng)));
  for (int i = 0; i < m; ++i) k = k - KClass::line(i % 2 ? U(names[g(rng)], -1) : UnitMonomial::one());
  return k;
}

}  // namespace

TEST(KClass, Basics) {
  auto k = KClass::line(U("u")) - KClass::trivial();
  EXPECT_EQ(k.rank(), 0);
  EXPECT_EQ(k.det(), U("u"));
  EXPECT_EQ(k.to_string(), "K[-1,+u]");
  auto kv = KClass::line(U("u")) + KClass::line(U("v"));
  EXPECT_EQ(kv.rank(), 2);
  EXPECT_EQ(kv.det(), U("u") * U("v"));
  EXPECT_EQ(KClass::trivial().rank(), 1);
  EXPECT_TRUE(KClass::trivial().det().is_one());
  EXPECT_TRUE((k - k).is_zero());
}

TEST(KClass, Dual) {
  auto k = KClass::line(U("u")) - KClass::line(U("v"));
  EXPECT_EQ(k.dual(), KClass::line(U("u", -1)) - KClass::line(U("v", -1)));
  EXPECT_EQ(k.dual().dual(), k);
  EXPECT_EQ(KClass::trivial().dual(), KClass::trivial());
}

TEST(Wedge, Examples) {
  auto k = KClass::line(U("u")) - KClass::trivial();
  auto f = wedge_series(R(), k, "x");
  auto x = LaurentPoly::variable(R(), "x");
  EXPECT_EQ(f, RatFun::quotient(cst(1) - LaurentPoly::constant(el(U("u"))) * x, cst(1) - x));
  EXPECT_EQ(wedge_series(R(), KClass{}, "x"), RatFun(cst(1)));
  ScaledMonomial scale{U("q", -1), {}};
  auto g = wedge_series(R(), KClass::line(U("u")), ScaledMonomial::var("w", -1) * scale);
  EXPECT_EQ(g.to_string(), "1 - q^-1*u*w^-1");
}

TEST(Wedge, WhitneyAndInverse) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    auto a = random_rank0(rng) + KClass::line(U("u"));
    auto b = random_rank0(rng) - KClass::line(U("v", 2));
    EXPECT_EQ(wedge_series(R(), a + b, "x"), wedge_series(R(), a, "x") * wedge_series(R(), b, "x"));
    EXPECT_EQ(wedge_series(R(), a, "x") * wedge_series(R(), -a, "x"), RatFun(cst(1)));
  }
}

TEST(Wedge, ElementarySymmetric) {
  std::vector<UnitMonomial> xs{U("u1"), U("u2", -1), U("u3") * U("q")};
  for (std::size_t r = 1; r <= 3; ++r) {
    std::vector<UnitMonomial> sub(xs.begin(), xs.begin() + r);
    KClass k;
    for (const auto& u : sub) k = k + KClass::line(u);
    auto s = expand(wedge_series(R(), k, "x"), "x", Direction::AtZero, 8);
    for (int i = 0; i <= 8; ++i) {
      RingElement expect = elementary(sub, i);
      if (i % 2) expect = -expect;
      EXPECT_EQ(s.body.coefficient(Monomial::var("x", i)), expect) << r << " " << i;
    }
  }
}

TEST(Wedge, SymmetricSeriesExpansions) {
  std::vector<UnitMonomial> xs{U("u1"), U("u2") * U("q", -1), U("u3", 2)};
  const int N = 8;
  for (std::size_t r = 1; r <= 3; ++r) {
    std::vector<UnitMonomial> sub(xs.begin(), xs.begin() + r);
    std::vector<UnitMonomial> dual;
    KClass k;
    UnitMonomial det;
    for (const auto& u : sub) {
      k = k + KClass::line(u);
      dual.push_back(u.inverse());
      det = det * u;
    }
    auto f = sym_series(R(), k, ScaledMonomial::var("x"));
    auto zero = expand(f, "x", Direction::AtZero, N);
    auto inf = expand(f, "x", Direction::AtInfinity, N);
    for (int i = 0; i <= N; ++i) EXPECT_EQ(zero.body.coefficient(Monomial::var("x", i)), complete(sub, i));
    // (-1)^r det^-1 x^-r Sym(P^dual / x)
    RingElement pre = el(det.inverse());
    if (r % 2) pre = -pre;
    for (int i = 0; i + static_cast<int>(r) <= N; ++i)
      EXPECT_EQ(inf.body.coefficient(Monomial::var("x", -static_cast<int>(r) - i)), pre * complete(dual, i));
    for (int k2 = -static_cast<int>(r) + 1; k2 <= N; ++k2)
      EXPECT_TRUE(inf.body.coefficient(Monomial::var("x", k2)).is_zero());
  }
}

TEST(Twisted, LineMinusTrivial) {
  auto k = KClass::line(U("u")) - KClass::trivial();
  auto c = check_twisted_expansion(R(), k, U("l"), 8);
  EXPECT_TRUE(c.pass);
  // by hand: (1 - l^-1)(u^-1 - 1) and (l - 1)(u - 1)
  EXPECT_EQ(c.coefficient_minus, (one() - el(U("l", -1))) * (el(U("u", -1)) - one()));
  EXPECT_EQ(c.coefficient_plus, (el(U("l")) - one()) * (el(U("u")) - one()));
}

TEST(Twisted, ZeroClass) {
  EXPECT_TRUE(twisted_expansion(R(), KClass{}, U("l"), 8).is_zero());
  EXPECT_EQ(code_of([&] { (void)twisted_expansion(R(), KClass::line(U("u")), U("l"), 8); }), ErrorCode::RankNotZero);
}

TEST(Twisted, RandomRankZero) {
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> e(-2, 2);
  for (int trial = 0; trial < 25; ++trial) {
    auto k = random_rank0(rng);
    UnitMonomial l = U("l", e(rng) == 0 ? 1 : e(rng)) * U("q", e(rng));
    EXPECT_TRUE(check_twisted_expansion(R(), k, l, 8).pass) << k.to_string() << " " << l.to_string();
  }
}

TEST(Chi, P2Values) {
  const auto& t = ChiTable::preset("P2");
  auto r = presets::projective_plane();
  EXPECT_EQ(chi_integer(t, RingElement::constant(r, 1)), 1);
  EXPECT_EQ(chi_integer(t, RingElement::from_named(r, {{"t", -1}})), 0);
  EXPECT_EQ(chi_integer(t, RingElement(r)), 0);
  // h^0 oracle for k >= 0, Serre duality chi(O(k)) = chi(O(-3-k)) for k < 0
  for (int k = -9; k <= 9; ++k) {
    const int kk = k >= 0 ? k : -3 - k;
    const long expect = kk >= 0 ? (kk + 1L) * (kk + 2) / 2 : 0;
    EXPECT_EQ(chi_integer(t, RingElement::from_named(r, {{"t", k}})), expect) << k;
  }
}

TEST(Chi, P1xP1Values) {
  const auto& t = ChiTable::preset("P1xP1");
  auto r = presets::p1xp1();
  for (int j = -3; j <= 3; ++j)
    for (int k = -3; k <= 3; ++k)
      EXPECT_EQ(chi_integer(t, RingElement::from_named(r, {{"a", j}, {"b", k}})), (j + 1L) * (k + 1)) << j << k;
}

TEST(Chi, UnknownMonomial) {
  ChiTable partial = ChiTable::preset("P2");
  partial.values.erase({{"t", 2}});
  auto r = presets::projective_plane();
  EXPECT_EQ(code_of([&] { (void)chi(partial, RingElement::from_named(r, {{"t", 2}})); }), ErrorCode::UnknownMonomial);
}
