#include <gtest/gtest.h>

#include <functional>

#include "khall/error.hpp"
#include "khall/laurent.hpp"

using namespace khall;

namespace {

RingPtr free_ring() {
  static const RingPtr r = adjoin_units(presets::integers(), {"q", "u"});
  return r;
}

LaurentPoly var(const std::string& v, int k = 1) { return LaurentPoly::variable(free_ring(), v, k); }
LaurentPoly one() { return LaurentPoly::constant(free_ring(), 1); }
LaurentPoly unit(const std::string& g) { return LaurentPoly::from(free_ring(), ScaledMonomial{UnitMonomial::generator(g), {}}); }
RatFun rf(const LaurentPoly& p) { return RatFun(p); }
RatFun inv_binomial(const ScaledMonomial& a) { return RatFun(one(), {Binomial{a}}); }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::UsageError;
}

}  // namespace

TEST(Laurent, GeometricPairSumsToOne) {
  auto a = inv_binomial(ScaledMonomial::var("x"));
  auto b = inv_binomial(ScaledMonomial::var("x", -1));
  auto s = a + b;
  EXPECT_EQ(s, rf(one()));
  EXPECT_TRUE(s.factors().empty());
  EXPECT_EQ(as_polynomial(s), one());
}

TEST(Laurent, SelfDifferenceAndInverse) {
  auto f = inv_binomial(ScaledMonomial{UnitMonomial::generator("u"), Monomial::var("x")});
  EXPECT_TRUE((f - f).is_zero());
  auto g = rf(one() - unit("u") * var("x"));
  EXPECT_EQ(as_polynomial(g * f), one());
  EXPECT_EQ(as_polynomial(g / g), one());
  EXPECT_EQ(code_of([&] { (void)(f / rf(LaurentPoly(free_ring()))); }), ErrorCode::DivisionByZero);
}

TEST(Laurent, Substitution) {
  auto f = inv_binomial(ScaledMonomial::var("x"));
  ScaledMonomial qz{UnitMonomial::generator("q"), Monomial::var("z")};
  EXPECT_EQ(f.substitute("x", qz), inv_binomial(qz));
  EXPECT_EQ(as_polynomial(rf(var("x")).substitute("x", ScaledMonomial{})), one());
  // 1/(y/x - 1) at y = x
  auto g = RatFun::quotient(one(), var("y") * var("x", -1) - one());
  EXPECT_TRUE(g.factored());
  EXPECT_EQ(code_of([&] { (void)g.substitute("y", ScaledMonomial::var("x")); }), ErrorCode::DenominatorVanishes);
}

TEST(Laurent, Symmetrize) {
  ScaledMonomial ratio{{}, Monomial::var("z1") * Monomial::var("z2", -1)};
  EXPECT_EQ(symmetrize(inv_binomial(ratio), {"z1", "z2"}), rf(one()));
  auto s = var("z1") + var("z2");
  EXPECT_EQ(as_polynomial(symmetrize(rf(s), {"z1", "z2"})), s * LaurentPoly::constant(free_ring(), 2));
  auto h = rf(var("z1")) * inv_binomial(ratio);
  EXPECT_TRUE(symmetrize(h, {"z1", "z2"}).is_zero());
}

TEST(Laurent, SymmetrizeInvariance) {
  ScaledMonomial a{UnitMonomial::generator("q"), Monomial::var("z1") * Monomial::var("z3", -1)};
  auto f = rf(var("z1", 2) * var("z2")) * inv_binomial(a);
  VarList vs{"z1", "z2", "z3"};
  auto s = symmetrize(f, vs);
  for (std::size_t i = 0; i + 1 < vs.size(); ++i)
    EXPECT_EQ(s.rename({{vs[i], vs[i + 1]}, {vs[i + 1], vs[i]}}), s);
  EXPECT_EQ(symmetrize(s, vs), s * RatFun::constant(free_ring(), 6));
}

TEST(Laurent, AsPolynomial) {
  auto num = var("z2", 2) - var("z1", 2);
  auto den = var("z2") - var("z1");
  EXPECT_EQ(as_polynomial(RatFun::quotient(num, den)), var("z1") + var("z2"));
  EXPECT_EQ(code_of([&] { (void)as_polynomial(inv_binomial(ScaledMonomial::var("x"))); }), ErrorCode::NotPolynomial);
  auto six = LaurentPoly::constant(free_ring(), 6), two = LaurentPoly::constant(free_ring(), 2);
  EXPECT_EQ(as_polynomial(RatFun::quotient(six, two)), LaurentPoly::constant(free_ring(), 3));
  EXPECT_EQ(as_polynomial(rf(num)), num);
}

TEST(Laurent, UnfactoredQuotientsCompare) {
  auto den = var("x", 2) + var("x") + one();
  auto f = RatFun::quotient(var("x"), den);
  EXPECT_FALSE(f.factored());
  auto g = RatFun::quotient(var("x") * LaurentPoly::constant(free_ring(), -2), den * LaurentPoly::constant(free_ring(), -2));
  EXPECT_EQ(f, g);
  EXPECT_EQ(g.num(), var("x"));
}

TEST(Laurent, Printing) {
  auto p = var("x", 2) * unit("q") - LaurentPoly::constant(free_ring(), 5) + var("x", -1);
  EXPECT_EQ(p.to_string(), "q*x^2 - 5 + x^-1");
  auto f = inv_binomial(ScaledMonomial{UnitMonomial::generator("q", -1), Monomial::var("x", -1)});
  EXPECT_EQ(f.factors().size(), 1u);
  EXPECT_EQ(f.factors()[0].to_string(), "(1 - q*x)");
}

TEST(Laurent, ExponentOverflow) {
  auto big = var("x", 2000000000);
  EXPECT_EQ(code_of([&] { (void)(big * big); }), ErrorCode::ExponentOverflow);
}

TEST(Laurent, DivisionOverRelationRing) {
  auto r = adjoin_units(presets::projective_plane(), {"u"});
  auto x = LaurentPoly::variable(r, "x");
  auto t = LaurentPoly::term(Monomial{}, RingElement::generator(r, "t"));
  auto d = x - t;
  auto p = d * (x * x + t);
  auto q = p.divide_exact(d);
  ASSERT_TRUE(q);
  EXPECT_EQ(*q, x * x + t);
}
