#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "khall/distcalc.hpp"
#include "khall/error.hpp"

using namespace khall;

namespace {

RingPtr R() {
  static const RingPtr r = adjoin_units(presets::integers(), {"q", "u"});
  return r;
}

LaurentPoly var(const std::string& v, int k = 1) { return LaurentPoly::variable(R(), v, k); }
LaurentPoly cst(int c) { return LaurentPoly::constant(R(), c); }
ScaledMonomial sm(const std::string& unit, int up, const std::string& v, int vp) {
  ScaledMonomial m;
  if (!unit.empty()) m.unit = UnitMonomial::generator(unit, up);
  if (!v.empty()) m.mono = Monomial::var(v, vp);
  return m;
}
RatFun inv(const ScaledMonomial& a) { return RatFun(cst(1), {Binomial{a}}); }
LaurentPoly lp(const ScaledMonomial& m) { return LaurentPoly::from(R(), m); }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::UsageError;
}

// Brute-force geometric sum sum_{j=j0}^{j1} a^j as an independent oracle.
LaurentPoly geometric(const ScaledMonomial& a, int j0, int j1) {
  LaurentPoly s(R());
  for (int j = j0; j <= j1; ++j) s += lp(a.pow(j));
  return s;
}

// Random f(v) = +-v^k / prod (1 - c v^{+-1}) with at most two factors.
RatFun random_rational(std::mt19937& rng, const std::string& v) {
  std::uniform_int_distribution<int> nf(0, 2), pick(0, 4), sgn(0, 1), ex(-1, 1);
  std::vector<Binomial> factors;
  const int n = nf(rng);
  for (int i = 0; i < n; ++i) {
    ScaledMonomial a = ScaledMonomial::var(v, sgn(rng) ? 1 : -1);
    switch (pick(rng)) {
      case 0: break;
      case 1: a.unit = UnitMonomial::generator("q"); break;
      case 2: a.unit = UnitMonomial::generator("q", -1); break;
      case 3: a.unit = UnitMonomial::generator("u"); break;
      default: a.unit.sign = -1; break;
    }
    factors.push_back(Binomial{a});
  }
  return RatFun(var(v, ex(rng)) * cst(sgn(rng) ? 1 : -1), factors);
}

}  // namespace

TEST(Expand, GeometricAtZero) {
  auto f = inv(sm("u", 1, "x", 1));
  auto s = expand(f, "x", Direction::AtZero, 3);
  EXPECT_EQ(s.window(3), geometric(sm("u", 1, "x", 1), 0, 3));
  EXPECT_EQ(s.window(3).to_string(), "u^3*x^3 + u^2*x^2 + u*x + 1");
}

TEST(Expand, GeometricAtInfinity) {
  auto f = inv(sm("u", 1, "x", 1));
  auto s = expand(f, "x", Direction::AtInfinity, 3);
  EXPECT_EQ(s.window(3), -geometric(sm("u", -1, "x", -1), 1, 3));
}

TEST(Expand, PolynomialIsItsOwnExpansion) {
  auto p = var("x", 2) - cst(5);
  auto s = expand(RatFun(p), "x", Direction::AtInfinity, 3);
  EXPECT_TRUE(s.exact);
  EXPECT_EQ(s.body, p);
}

TEST(Expand, UnfactoredDenominator) {
  auto f = RatFun::quotient(var("x"), var("x", 2) + var("x") + cst(1));
  EXPECT_EQ(code_of([&] { (void)expand(f, "x", Direction::AtZero, 3); }), ErrorCode::UnfactoredDenominator);
}

TEST(Expand, MultiFactorAgainstProductOfSeries) {
  // 1/((1-x)(1-q/x)) at zero: product of sum x^j and -sum_{j>=1} (x/q)^j
  RatFun f(cst(1), {Binomial{sm("", 0, "x", 1)}, Binomial{sm("q", 1, "x", -1)}});
  const int N = 6;
  auto s = expand(f, "x", Direction::AtZero, N);
  auto brute = (geometric(sm("", 0, "x", 1), 0, N) * -geometric(sm("q", -1, "x", 1), 1, N)).restrict_window({"x"}, N);
  EXPECT_EQ(s.window(N), brute);
}

TEST(TwoSided, DeltaDefinition) {
  auto f = RatFun::quotient(cst(1), var("x") - cst(1));
  auto d = two_sided(f, "x", 8);
  ASSERT_EQ(d.terms().size(), 1u);
  EXPECT_EQ(d.to_string(), "delta(x)");
  EXPECT_TRUE(window_equal(d, FormalDist::from_poly(geometric(sm("", 0, "x", 1), -8, 8)), 8));
}

TEST(TwoSided, PolynomialsVanish) {
  auto p = var("x", 3) - cst(2) + var("x", -1);
  EXPECT_TRUE(two_sided(RatFun(p), "x", 8).is_zero());
}

TEST(TwoSided, MinusDelta) {
  auto d = two_sided(inv(sm("", 0, "x", 1)), "x", 8);
  EXPECT_EQ(d.to_string(), "delta(x)*(-1)");
  EXPECT_TRUE(window_equal(d, -FormalDist::delta(R(), ScaledMonomial::var("x")), 8));
}

TEST(TwoSided, ScaledDelta) {
  auto d = two_sided(inv(sm("u", 1, "x", 1)), "x", 5);
  EXPECT_TRUE(window_equal(d, -FormalDist::delta(R(), sm("u", 1, "x", 1)), 5));
}

TEST(TwoSided, MixedPoleInFirstVariable) {
  // 1/(y/x - 1) two-sided in x is -delta(x/y)
  auto f = RatFun::quotient(cst(1), var("y") * var("x", -1) - cst(1));
  auto d = two_sided(f, "x", 8);
  EXPECT_TRUE(window_equal(d, -FormalDist::delta(R(), ScaledMonomial::var("x") * ScaledMonomial::var("y", -1)), 8));
}

TEST(DistMul, TelescopingDelta) {
  auto d = dist_mul(FormalDist::delta(R(), ScaledMonomial::var("x")), RatFun(var("x") - cst(1)));
  EXPECT_TRUE(d.is_zero());
}

TEST(DistMul, SupportSubstitution) {
  auto dwz = FormalDist::delta(R(), ScaledMonomial::var("w") * ScaledMonomial::var("z", -1));
  auto fw = var("w", 2) + cst(3) * var("w", -1);
  auto fz = var("z", 2) + cst(3) * var("z", -1);
  auto a = dist_mul(dwz, RatFun(fw));
  EXPECT_TRUE(window_equal(a, dist_mul(dwz, RatFun(fz)), 8));
  EXPECT_EQ(a.to_string(), "delta(w*z^-1)*(z^2 + 3*z^-1)");
}

TEST(DistMul, TailIndependentOfW) {
  ScaledMonomial arg = ScaledMonomial::var("w") * sm("q", 1, "z", -1);
  auto d = dist_mul(FormalDist::delta(R(), arg), RatFun(cst(1) - var("z", -1)));
  EXPECT_EQ(d.to_string(), "delta(q*w*z^-1)*(1 - z^-1)");
}

TEST(DistMul, DeltaSquare) {
  auto dwz = FormalDist::delta(R(), ScaledMonomial::var("w") * ScaledMonomial::var("z", -1));
  EXPECT_EQ(code_of([&] { (void)dist_mul(dwz, dwz); }), ErrorCode::DeltaSquare);
  auto dzw = FormalDist::delta(R(), ScaledMonomial::var("z") * ScaledMonomial::var("w", -1));
  EXPECT_EQ(code_of([&] { (void)dist_mul(dwz, dzw); }), ErrorCode::DeltaSquare);
}

TEST(DistMul, RationalNeedsSeries) {
  auto dwz = FormalDist::delta(R(), ScaledMonomial::var("w") * ScaledMonomial::var("z", -1));
  EXPECT_EQ(code_of([&] { (void)dist_mul(dwz, inv(sm("", 0, "w", 1))); }), ErrorCode::NotPolynomial);
}

TEST(DistMul, SubstitutionSoundnessForSeries) {
  std::mt19937 rng(11);
  const int N = 6;
  auto dwz = FormalDist::delta(R(), ScaledMonomial::var("w") * ScaledMonomial::var("z", -1));
  for (int trial = 0; trial < 10; ++trial) {
    auto fw = random_rational(rng, "w");
    auto fz = fw.rename({{"w", "z"}});
    for (auto dir : {Direction::AtZero, Direction::AtInfinity}) {
      auto a = dist_mul(dwz, expand(fw, "w", dir, 2 * N));
      auto b = dist_mul(dwz, expand(fz, "z", dir, 2 * N));
      EXPECT_TRUE(window_equal(a, b, N)) << fw.to_string();
    }
  }
}

TEST(DistMul, TruncationTooShort) {
  auto dwz = FormalDist::delta(R(), ScaledMonomial::var("w") * ScaledMonomial::var("z", -1));
  auto a = dist_mul(dwz, expand(inv(sm("", 0, "w", 1)), "w", Direction::AtZero, 4));
  EXPECT_EQ(code_of([&] { (void)a.dense(4); }), ErrorCode::IncompatibleTruncation);
  EXPECT_NO_THROW((void)a.dense(2));
}

TEST(DoubleExpand, Separable) {
  auto f = inv(sm("", 0, "x", 1));
  auto g = inv(sm("q", 1, "y", 1));
  auto ode = ordered_double_expand(f * g, "x", "y", 6);
  auto prod = dist_mul(two_sided(f, "x", 6), two_sided(g, "y", 6));
  EXPECT_TRUE(window_equal(ode, prod, 6));
  EXPECT_FALSE(ode.is_zero());
}

TEST(ExchangeDefect, Trivial) {
  EXPECT_TRUE(exchange_defect(RatFun(cst(1)), RatFun(cst(1)), UnitMonomial::generator("q"), 8).is_zero());
}

TEST(ExchangeDefect, SimplePole) {
  auto d = exchange_defect(inv(sm("", 0, "x", 1)), RatFun(cst(1)), UnitMonomial::one(), 8);
  auto expect = dist_mul(FormalDist::delta(R(), ScaledMonomial::var("y") * ScaledMonomial::var("x", -1)),
                         FormalDist::delta(R(), ScaledMonomial::var("x")));
  EXPECT_TRUE(window_equal(d, expect, 8));
  EXPECT_EQ(d.to_string(), "delta(x^-1*y)*delta(x)");
}

TEST(ExchangeDefect, ResidueIdentity) {
  std::mt19937 rng(5);
  const int N = 6;
  int nonzero = 0;
  for (int trial = 0; trial < 12; ++trial) {
    auto f = random_rational(rng, "x");
    auto g = random_rational(rng, "y");
    for (auto alpha : {UnitMonomial::one(), UnitMonomial::generator("q", -1), UnitMonomial::generator("q")}) {
      // 1/(y/x - alpha) = x / (y (1 - alpha x / y))
      RatFun kernel = f * g * RatFun(var("x") * var("y", -1), {Binomial{ScaledMonomial{alpha, Monomial::var("x") * Monomial::var("y", -1)}}});
      auto lhs = ordered_double_expand(kernel, "x", "y", N) - ordered_double_expand(kernel, "y", "x", N);
      auto rhs = exchange_defect(f, g, alpha, N);
      EXPECT_TRUE(window_equal(lhs, rhs, N)) << f.to_string() << " | " << g.to_string() << " | " << alpha.to_string();
      if (!rhs.dense(N).first.is_zero()) ++nonzero;
    }
  }
  EXPECT_GT(nonzero, 20);
}

TEST(ExchangeDefect, TruncationCoherence) {
  auto f = RatFun(var("x"), {Binomial{sm("q", 1, "x", 1)}});
  auto g = inv(sm("u", 1, "y", -1));
  auto a = exchange_defect(f, g, UnitMonomial::generator("q"), 8);
  auto b = exchange_defect(f, g, UnitMonomial::generator("q"), 12);
  EXPECT_TRUE(window_equal(a, b, 8));
}

TEST(TwoSidedDist, TermwiseOnTails) {
  // delta(x) / (1 - y), expanded two-sided in y
  DistTerm t;
  t.deltas.push_back(DeltaFactor::from_argument(ScaledMonomial::var("x")));
  t.tail = cst(1);
  t.denom = {Binomial{ScaledMonomial::var("y")}};
  auto d = two_sided(FormalDist::from_term(R(), t), "y", 6);
  auto expect = -dist_mul(FormalDist::delta(R(), ScaledMonomial::var("x")), FormalDist::delta(R(), ScaledMonomial::var("y")));
  EXPECT_TRUE(window_equal(d, expect, 6));
}

TEST(ExchangeDefect, KernelHelper) {
  auto f = inv(sm("", 0, "x", 1));
  auto g = inv(sm("u", 1, "y", -1));
  const UnitMonomial alpha = UnitMonomial::generator("q", -1);
  const RatFun k = exchange_kernel(f, g, alpha);
  // (y/x - alpha) * kernel = f g
  const RatFun factor(var("y") * var("x", -1) - LaurentPoly::from(R(), ScaledMonomial{alpha, {}}));
  EXPECT_EQ(k * factor, f * g);
}
