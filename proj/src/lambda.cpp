#include "khall/lambda.hpp"

#include <set>

#include "khall/chi_presets.hpp"
#include "khall/error.hpp"

namespace khall {

KClass KClass::line(const UnitMonomial& u, int multiplicity) {
  KClass k;
  k.add(u, multiplicity);
  return k;
}

void KClass::add(const UnitMonomial& u, int k) {
  if (u.sign != 1) throw Error(ErrorCode::UsageError, "line elements carry no sign: " + u.to_string());
  if (k == 0) return;
  auto [it, inserted] = mult_.try_emplace(u, k);
  if (!inserted) {
    it->second += k;
    if (it->second == 0) mult_.erase(it);
  }
}

std::vector<UnitMonomial> KClass::plus() const {
  std::vector<UnitMonomial> out;
  for (const auto& [u, k] : mult_)
    for (int i = 0; i < k; ++i) out.push_back(u);
  return out;
}

std::vector<UnitMonomial> KClass::minus() const {
  std::vector<UnitMonomial> out;
  for (const auto& [u, k] : mult_)
    for (int i = 0; i < -k; ++i) out.push_back(u);
  return out;
}

int KClass::rank() const {
  int r = 0;
  for (const auto& [u, k] : mult_) r += k;
  return r;
}

UnitMonomial KClass::det() const {
  UnitMonomial d;
  for (const auto& [u, k] : mult_) d = d * u.pow(k);
  return d;
}

KClass KClass::dual() const {
  KClass out;
  for (const auto& [u, k] : mult_) out.add(u.inverse(), k);
  return out;
}

KClass KClass::twist(const UnitMonomial& v) const {
  KClass out;
  for (const auto& [u, k] : mult_) out.add(u * v, k);
  return out;
}

KClass KClass::rename(const std::map<std::string, std::string>& names) const {
  KClass out;
  for (const auto& [u, k] : mult_) {
    UnitMonomial r;
    for (const auto& [g, e] : u.powers) {
      auto it = names.find(g);
      r = r * UnitMonomial::generator(it == names.end() ? g : it->second, e);
    }
    out.add(r, k);
  }
  return out;
}

RingElement KClass::character(const RingPtr& ring) const {
  RingElement s(ring);
  for (const auto& [u, k] : mult_) s += u.to_element(ring) * RingElement::constant(ring, k);
  return s;
}

KClass KClass::operator-() const {
  KClass out = *this;
  for (auto& [u, k] : out.mult_) k = -k;
  return out;
}

KClass operator+(const KClass& a, const KClass& b) {
  KClass out = a;
  for (const auto& [u, k] : b.mult_) out.add(u, k);
  return out;
}

KClass operator*(const KClass& a, const KClass& b) {
  KClass out;
  for (const auto& [u, k] : a.mult_)
    for (const auto& [v, l] : b.mult_) out.add(u * v, k * l);
  return out;
}

std::string KClass::to_string() const {
  std::string s;
  for (const auto& [u, k] : mult_) {
    const std::string body = u.to_string();
    for (int i = 0; i < std::abs(k); ++i) s += (s.empty() ? "" : ",") + std::string(k > 0 ? "+" : "-") + body;
  }
  return "K[" + s + "]";
}

RatFun wedge_series(const RingPtr& ring, const KClass& k, const ScaledMonomial& arg) {
  LaurentPoly num = LaurentPoly::constant(ring, 1);
  for (const auto& u : k.plus()) num = num * LaurentPoly::from(ring, Binomial{ScaledMonomial{u, {}} * arg});
  std::vector<Binomial> den;
  for (const auto& u : k.minus()) den.push_back(Binomial{ScaledMonomial{u, {}} * arg});
  return RatFun(std::move(num), std::move(den));
}

RatFun wedge_series(const RingPtr& ring, const KClass& k, const std::string& var, const ScaledMonomial& scale) {
  return wedge_series(ring, k, scale * ScaledMonomial::var(var));
}

RatFun sym_series(const RingPtr& ring, const KClass& k, const ScaledMonomial& arg) {
  return wedge_series(ring, -k, arg);
}

FormalDist twisted_expansion(const RingPtr& ring, const KClass& k, const UnitMonomial& l, int order,
                             const std::string& var) {
  if (k.rank() != 0) throw Error(ErrorCode::RankNotZero, k.to_string() + " has rank " + std::to_string(k.rank()));
  const KClass twisted = (KClass::line(l) - KClass::trivial()) * k;
  return two_sided(wedge_series(ring, twisted, var), var, order);
}

namespace {

RingElement constant_of(const RatFun& f) {
  auto c = as_polynomial(f).as_constant();
  if (!c) throw Error(ErrorCode::NotPolynomial, "coefficient " + f.to_string() + " is not a ring element");
  return *c;
}

}  // namespace

TwistedCheck check_twisted_expansion(const RingPtr& ring, const KClass& k, const UnitMonomial& l, int order,
                                     const std::string& var) {
  const FormalDist d = twisted_expansion(ring, k, l, order, var);
  TwistedCheck c{RingElement(ring), RingElement(ring), RingElement(ring), RingElement(ring), RingElement(ring), false};
  c.coefficient_minus = constant_of(dist_coefficient(d, Monomial::var(var, -1), order));
  c.coefficient_zero = constant_of(dist_coefficient(d, Monomial{}, order));
  c.coefficient_plus = constant_of(dist_coefficient(d, Monomial::var(var, 1), order));
  const RingElement one = RingElement::constant(ring, 1);
  const RingElement lel = l.to_element(ring);
  c.expected_minus = (one - l.inverse().to_element(ring)) * k.dual().character(ring);
  c.expected_plus = (lel - one) * k.character(ring);
  c.pass = c.coefficient_minus == c.expected_minus && c.coefficient_plus == c.expected_plus &&
           c.coefficient_zero.is_zero();
  return c;
}

ChiTable ChiTable::from_json(const nlohmann::json& j) {
  ChiTable t;
  t.surface = j.at("surface").get<std::string>();
  t.ring_preset = j.at("ring").get<std::string>();
  t.derivation = j.value("derivation", "");
  for (const auto& v : j.at("values")) {
    std::map<std::string, int> mono;
    for (const auto& [g, e] : v.at("monomial").items())
      if (e.get<int>() != 0) mono[g] = e.get<int>();
    t.values[mono] = Integer(v.at("chi").get<long>());
  }
  return t;
}

const ChiTable& ChiTable::preset(const std::string& name) {
  static const ChiTable p2 = from_json(nlohmann::json::parse(chi_data::kP2));
  static const ChiTable p1p1 = from_json(nlohmann::json::parse(chi_data::kP1xP1));
  if (name == "P2" || name == "p2") return p2;
  if (name == "P1xP1" || name == "p1xp1") return p1p1;
  throw Error(ErrorCode::UsageError, "no chi table for surface " + name);
}

RingElement chi(const ChiTable& table, const RingElement& e) {
  const RingPtr& R = e.ring();
  const RingPtr surface = presets::by_name(table.ring_preset);
  std::vector<bool> is_surface(R->size(), false);
  for (std::size_t g = 0; g < R->size(); ++g) is_surface[g] = surface->find(R->generator_name(g)).has_value();
  TermMap raw;
  for (const auto& [exps, c] : e.terms()) {
    std::map<std::string, int> key;
    Exponents rest = exps;
    for (std::size_t g = 0; g < exps.size(); ++g) {
      if (!is_surface[g]) continue;
      if (exps[g] != 0) key[R->generator_name(g)] = exps[g];
      rest[g] = 0;
    }
    auto it = table.values.find(key);
    if (it == table.values.end()) {
      std::string m;
      for (const auto& [g, k] : key) m += (m.empty() ? "" : "*") + g + "^" + std::to_string(k);
      throw Error(ErrorCode::UnknownMonomial, "no " + table.surface + " value for " + (m.empty() ? "1" : m));
    }
    Integer v = c * it->second;
    auto [slot, inserted] = raw.try_emplace(rest, v);
    if (!inserted) slot->second += v;
  }
  return RingElement::normalize(R, raw);
}

Integer chi_integer(const ChiTable& table, const RingElement& e) {
  auto v = chi(table, e).as_integer();
  if (!v) throw Error(ErrorCode::UnknownMonomial, "value depends on generators outside " + table.surface);
  return *v;
}

}  // namespace khall
