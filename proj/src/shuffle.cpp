#include "khall/shuffle.hpp"

#include <algorithm>

#include "khall/error.hpp"

namespace khall {

VarList shuffle_vars(int n) {
  VarList v;
  for (int i = 1; i <= n; ++i) v.push_back("z" + std::to_string(i));
  std::sort(v.begin(), v.end());
  return v;
}

ShuffleElement ShuffleElement::scalar(long c) {
  return ShuffleElement(0, LaurentPoly::constant(presets::integers(), Integer(c)));
}

ShuffleElement ShuffleElement::generator(int a) {
  return ShuffleElement(1, LaurentPoly::variable(presets::integers(), "z1", a));
}

namespace {

void same_degree(const ShuffleElement& a, const ShuffleElement& b) {
  if (a.degree() != b.degree())
    throw Error(ErrorCode::UsageError, "degrees " + std::to_string(a.degree()) + " and " +
                                           std::to_string(b.degree()) + " differ");
}

}  // namespace

ShuffleElement operator+(const ShuffleElement& a, const ShuffleElement& b) {
  same_degree(a, b);
  return ShuffleElement(a.degree_, (a.value_ + b.value_).compact());
}

ShuffleElement operator-(const ShuffleElement& a, const ShuffleElement& b) {
  same_degree(a, b);
  return ShuffleElement(a.degree_, (a.value_ - b.value_).compact());
}

ShuffleElement operator*(long c, const ShuffleElement& a) {
  return ShuffleElement(a.degree_, (a.value_ * RingElement::constant(a.value_.ring(), Integer(c))).compact());
}

bool operator==(const ShuffleElement& a, const ShuffleElement& b) {
  return a.degree_ == b.degree_ && a.value_ == b.value_;
}

nlohmann::json ShuffleElement::to_json() const {
  const VarList all = shuffle_vars(degree_);
  const LaurentPoly p = value_.with_vars(all);
  nlohmann::json terms = nlohmann::json::array();
  // descending, matching the printed order
  const auto coeffs = p.coefficients();
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    const Monomial m = p.monomial_of(it->first);
    std::vector<int> exps;
    for (int i = 1; i <= degree_; ++i) exps.push_back(m.degree("z" + std::to_string(i)));
    terms.push_back({{"exponents", exps}, {"coefficient", it->second.to_string()}});
  }
  return {{"degree", degree_}, {"terms", terms}, {"text", to_string()}};
}

ShuffleElement canonicalize(const LaurentPoly& p, int degree) {
  if (degree < 0) throw Error(ErrorCode::UsageError, "negative degree");
  if (p.ring()->size() != 0)
    throw Error(ErrorCode::RingMismatch, "shuffle elements have integer coefficients");
  const VarList all = shuffle_vars(degree);
  const LaurentPoly c = p.compact();
  for (const auto& v : c.vars())
    if (!std::binary_search(all.begin(), all.end(), v))
      throw Error(ErrorCode::NotSymmetric, "variable " + v + " is not among z1..z" + std::to_string(degree));
  // adjacent transpositions generate the symmetric group
  for (int i = 1; i < degree; ++i) {
    const std::string a = "z" + std::to_string(i), b = "z" + std::to_string(i + 1);
    if (c.rename({{a, b}, {b, a}}).compact() != c)
      throw Error(ErrorCode::NotSymmetric, c.to_string() + " changes under " + a + " <-> " + b);
  }
  return ShuffleElement(degree, c);
}

ShuffleElement shuffle_mul(const ShuffleElement& f, const ShuffleElement& g) {
  const int n = f.degree(), m = g.degree();
  if (n == 0 || m == 0) {
    const auto& [scalar, other] = n == 0 ? std::pair{f, g} : std::pair{g, f};
    return canonicalize(other.value() * *scalar.value().as_constant(), other.degree());
  }
  std::map<std::string, std::string> shift;
  for (int j = 1; j <= m; ++j) shift["z" + std::to_string(j)] = "z" + std::to_string(n + j);
  const LaurentPoly num = f.value() * g.value().rename(shift);
  std::vector<Binomial> den;
  for (int i = 1; i <= n; ++i)
    for (int j = n + 1; j <= n + m; ++j)
      den.push_back(Binomial{{{}, Monomial::var("z" + std::to_string(i)) * Monomial::var("z" + std::to_string(j), -1)}});
  const RatFun sym = symmetrize(RatFun(num, std::move(den)), shuffle_vars(n + m));
  // f and g are symmetric, so the full sum counts each shuffle n! m! times
  Integer stab = 1;
  for (int i = 2; i <= n; ++i) stab *= i;
  for (int i = 2; i <= m; ++i) stab *= i;
  auto q = as_polynomial(sym).divide_exact(LaurentPoly::constant(presets::integers(), stab));
  if (!q) throw Error(ErrorCode::NotPolynomial, "symmetrized product is not divisible by " + stab.get_str());
  return canonicalize(*q, n + m);
}

}  // namespace khall
