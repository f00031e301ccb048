#include "khall/ring.hpp"

#include <algorithm>
#include <cstdint>
#include <set>
#include <sstream>

#include "khall/error.hpp"

namespace khall {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonInvertibleGenerator: return "NonInvertibleGenerator";
    case ErrorCode::UnknownGenerator: return "UnknownGenerator";
    case ErrorCode::UnsupportedRelation: return "UnsupportedRelation";
    case ErrorCode::NameCollision: return "NameCollision";
    case ErrorCode::RingMismatch: return "RingMismatch";
    case ErrorCode::DiagonalSquare: return "DiagonalSquare";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::DenominatorVanishes: return "DenominatorVanishes";
    case ErrorCode::NotPolynomial: return "NotPolynomial";
    case ErrorCode::NotDivisible: return "NotDivisible";
    case ErrorCode::UnfactoredDenominator: return "UnfactoredDenominator";
    case ErrorCode::DeltaSquare: return "DeltaSquare";
    case ErrorCode::IncompatibleTruncation: return "IncompatibleTruncation";
    case ErrorCode::RankNotZero: return "RankNotZero";
    case ErrorCode::UnknownMonomial: return "UnknownMonomial";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::ExponentOverflow: return "ExponentOverflow";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UsageError: return "UsageError";
  }
  return "Error";
}

Relation Relation::binomial_power(std::string generator, const Integer& root, int multiplicity) {
  // coefficients of (g - root)^k, lowest degree first
  std::vector<Integer> c{1};
  for (int step = 0; step < multiplicity; ++step) {
    std::vector<Integer> next(c.size() + 1, 0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= root * c[i];
    }
    c = std::move(next);
  }
  return Relation{std::move(generator), std::move(c)};
}

namespace {

// a * b reduced modulo the monic polynomial p (all lowest degree first)
std::vector<Integer> mulmod(const std::vector<Integer>& a, const std::vector<Integer>& b,
                            const std::vector<Integer>& p) {
  const std::size_t d = p.size() - 1;
  std::vector<Integer> prod(a.size() + b.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) prod[i + j] += a[i] * b[j];
  }
  for (std::size_t k = prod.size(); k-- > d;) {
    if (prod[k] == 0) continue;
    const Integer c = prod[k];
    for (std::size_t j = 0; j <= d; ++j) prod[k - d + j] -= c * p[j];
  }
  prod.resize(d, 0);
  return prod;
}

}  // namespace

Ring::Ring(RingPresentation presentation) : presentation_(std::move(presentation)) {
  const auto& gens = presentation_.generators;
  std::set<std::string> seen;
  for (const auto& g : gens) {
    if (g.name.empty()) throw Error(ErrorCode::UnknownGenerator, "empty generator name");
    if (!seen.insert(g.name).second) throw Error(ErrorCode::NameCollision, g.name);
  }
  relation_.assign(gens.size(), {});
  inverse_.assign(gens.size(), {});
  for (const auto& rel : presentation_.relations) {
    const std::size_t i = index_of(rel.generator);
    if (!relation_[i].empty())
      throw Error(ErrorCode::UnsupportedRelation, "second relation for generator " + rel.generator);
    auto c = rel.coefficients;
    while (!c.empty() && c.back() == 0) c.pop_back();
    if (c.size() < 2 || c.back() != 1)
      throw Error(ErrorCode::UnsupportedRelation,
                  "relation for " + rel.generator + " must be monic of degree >= 1");
    relation_[i] = std::move(c);
    has_relations_ = true;
    free_ = false;
  }
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (relation_[i].empty() || !gens[i].invertible) continue;
    const auto& p = relation_[i];
    const Integer& p0 = p[0];
    if (p0 != 1 && p0 != -1)
      throw Error(ErrorCode::NonInvertibleGenerator,
                  gens[i].name + " has no inverse modulo its relation");
    // p(g) = g Q(g) + p0  =>  g^{-1} = -p0 Q(g)
    std::vector<Integer> inv(p.size() - 1);
    for (std::size_t j = 0; j + 1 < p.size(); ++j) inv[j] = -p0 * p[j + 1];
    inverse_[i] = std::move(inv);
  }
  if (presentation_.diagonal) {
    const auto& rule = *presentation_.diagonal;
    const std::size_t d = index_of(rule.symbol);
    if (gens[d].invertible || !relation_[d].empty())
      throw Error(ErrorCode::UnsupportedRelation, "diagonal symbol must be a free non-invertible generator");
    diagonal_ = d;
    for (const auto& [from, to] : rule.merge) merge_.emplace_back(index_of(from), index_of(to));
    free_ = false;
  }
  for (const auto& g : gens)
    if (!g.invertible) free_ = false;
}

std::optional<std::size_t> Ring::find(std::string_view name) const {
  const auto& gens = presentation_.generators;
  for (std::size_t i = 0; i < gens.size(); ++i)
    if (gens[i].name == name) return i;
  return std::nullopt;
}

std::size_t Ring::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw Error(ErrorCode::UnknownGenerator, std::string(name) + " is not a generator of ring " + label());
}

bool Ring::is_merged(std::size_t i) const {
  return std::any_of(merge_.begin(), merge_.end(), [i](const auto& m) { return m.first == i; });
}

bool Ring::is_plain(std::size_t i) const {
  return relation_[i].empty() && !is_diagonal_symbol(i) && !is_merged(i) && invertible(i);
}

std::vector<Integer> Ring::reduced_power(std::size_t i, int k) const {
  const auto& p = relation_[i];
  const std::size_t d = p.size() - 1;
  std::vector<Integer> result(d, 0);
  result[0] = 1;
  std::vector<Integer> step(d, 0);
  if (k >= 0) {
    if (d > 1) step[1] = 1;
    else step[0] = -p[0];  // degree-one relation: g = -p0
  } else {
    step = inverse_[i];
  }
  for (int n = 0; n < std::abs(k); ++n) result = mulmod(result, step, p);
  return result;
}

void Ring::accumulate(Exponents exps, std::size_t offset, const Integer& coeff, TermMap& out) const {
  if (coeff == 0) return;
  if (!free_) {
    if (diagonal_) {
      const int d = exps[offset + *diagonal_];
      if (d >= 2) throw Error(ErrorCode::DiagonalSquare, "product of two diagonal classes");
      if (d < 0) throw Error(ErrorCode::NonInvertibleGenerator, "negative power of the diagonal symbol");
      if (d == 1) {
        for (const auto& [from, to] : merge_) {
          exps[offset + to] += exps[offset + from];
          exps[offset + from] = 0;
        }
      }
    }
    const auto& gens = presentation_.generators;
    if (!has_relations_) {
      for (std::size_t i = 0; i < gens.size(); ++i)
        if (!gens[i].invertible && exps[offset + i] < 0)
          throw Error(ErrorCode::NonInvertibleGenerator, "negative power of " + gens[i].name);
      auto [it, inserted] = out.try_emplace(std::move(exps), coeff);
      if (!inserted) {
        it->second += coeff;
        if (it->second == 0) out.erase(it);
      }
      return;
    }
    std::vector<std::pair<Exponents, Integer>> pending{{std::move(exps), coeff}};
    for (std::size_t i = 0; i < gens.size(); ++i) {
      if (!gens[i].invertible && pending.front().first[offset + i] < 0)
        throw Error(ErrorCode::NonInvertibleGenerator, "negative power of " + gens[i].name);
      if (relation_[i].empty()) continue;
      const int d = static_cast<int>(relation_[i].size()) - 1;
      std::vector<std::pair<Exponents, Integer>> next;
      for (auto& [e, c] : pending) {
        const int k = e[offset + i];
        if (k >= 0 && k < d) {
          next.emplace_back(std::move(e), c);
          continue;
        }
        const auto red = reduced_power(i, k);
        for (int j = 0; j < d; ++j) {
          if (red[j] == 0) continue;
          Exponents e2 = e;
          e2[offset + i] = j;
          next.emplace_back(std::move(e2), c * red[j]);
        }
      }
      pending = std::move(next);
      if (pending.empty()) return;
    }
    for (auto& [e, c] : pending) {
      auto [it, inserted] = out.try_emplace(std::move(e), c);
      if (!inserted) {
        it->second += c;
        if (it->second == 0) out.erase(it);
      }
    }
    return;
  }
  auto [it, inserted] = out.try_emplace(std::move(exps), coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) out.erase(it);
  }
}

RingPtr make_ring(RingPresentation presentation) {
  return std::make_shared<const Ring>(std::move(presentation));
}

RingPtr adjoin_units(const RingPtr& ring, const std::vector<std::string>& names) {
  if (names.empty()) return ring;
  RingPresentation p = ring->presentation();
  std::string suffix;
  for (const auto& n : names) {
    if (ring->find(n)) throw Error(ErrorCode::NameCollision, n + " already in ring " + ring->label());
    p.generators.push_back({n, true});
    suffix += suffix.empty() ? n : "," + n;
  }
  p.label = ring->label() + "[" + suffix + "]";
  return make_ring(std::move(p));
}

void require_same_ring(const RingPtr& a, const RingPtr& b) {
  if (a != b) throw Error(ErrorCode::RingMismatch, a->label() + " vs " + b->label());
}

namespace detail {

void add_into(TermMap& out, const TermMap& in, bool negate) {
  for (const auto& [e, c] : in) {
    auto [it, inserted] = out.try_emplace(e, negate ? Integer(-c) : c);
    if (!inserted) {
      if (negate) it->second -= c;
      else it->second += c;
      if (it->second == 0) out.erase(it);
    }
  }
}

TermMap multiply_terms(const Ring& ring, std::size_t offset, const TermMap& a, const TermMap& b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t n = a.begin()->first.size();
  TermMap out;
  Exponents e(n);
  for (const auto& [ea, ca] : a) {
    for (const auto& [eb, cb] : b) {
      for (std::size_t i = 0; i < n; ++i) {
        const long long sum = static_cast<long long>(ea[i]) + eb[i];
        if (sum > INT32_MAX || sum < INT32_MIN) throw Error(ErrorCode::ExponentOverflow, "exponent out of range");
        e[i] = static_cast<int>(sum);
      }
      ring.accumulate(e, offset, ca * cb, out);
    }
  }
  return out;
}

std::string format_integer(const Integer& v) { return v.get_str(); }

}  // namespace detail

RingElement::RingElement(RingPtr ring) : ring_(std::move(ring)) {}

RingElement RingElement::constant(RingPtr ring, const Integer& value) {
  TermMap t;
  if (value != 0) t.emplace(Exponents(ring->size(), 0), value);
  return RingElement(std::move(ring), std::move(t));
}

RingElement RingElement::generator(RingPtr ring, std::string_view name) {
  Exponents e(ring->size(), 0);
  e[ring->index_of(name)] = 1;
  return monomial(std::move(ring), e);
}

RingElement RingElement::monomial(RingPtr ring, const Exponents& exps, const Integer& coeff) {
  TermMap t;
  ring->accumulate(exps, 0, coeff, t);
  return RingElement(std::move(ring), std::move(t));
}

RingElement RingElement::from_named(RingPtr ring, const std::map<std::string, int>& powers,
                                    const Integer& coeff) {
  Exponents e(ring->size(), 0);
  for (const auto& [name, k] : powers) e[ring->index_of(name)] += k;
  return monomial(std::move(ring), e, coeff);
}

RingElement RingElement::normalize(RingPtr ring, const TermMap& raw) {
  TermMap t;
  for (const auto& [e, c] : raw) ring->accumulate(e, 0, c, t);
  return RingElement(std::move(ring), std::move(t));
}

bool RingElement::is_one() const {
  if (terms_.size() != 1) return false;
  const auto& [e, c] = *terms_.begin();
  return c == 1 && std::all_of(e.begin(), e.end(), [](int k) { return k == 0; });
}

std::optional<Integer> RingElement::as_integer() const {
  if (terms_.empty()) return Integer(0);
  if (terms_.size() != 1) return std::nullopt;
  const auto& [e, c] = *terms_.begin();
  if (std::any_of(e.begin(), e.end(), [](int k) { return k != 0; })) return std::nullopt;
  return c;
}

RingElement RingElement::operator-() const {
  TermMap t = terms_;
  for (auto& [e, c] : t) c = -c;
  return RingElement(ring_, std::move(t));
}

RingElement& RingElement::operator+=(const RingElement& other) {
  require_same_ring(ring_, other.ring_);
  detail::add_into(terms_, other.terms_);
  return *this;
}

RingElement& RingElement::operator-=(const RingElement& other) {
  require_same_ring(ring_, other.ring_);
  detail::add_into(terms_, other.terms_, true);
  return *this;
}

RingElement& RingElement::operator*=(const RingElement& other) {
  *this = *this * other;
  return *this;
}

RingElement operator*(const RingElement& a, const RingElement& b) {
  require_same_ring(a.ring_, b.ring_);
  return RingElement(a.ring_, detail::multiply_terms(*a.ring_, 0, a.terms_, b.terms_));
}

bool operator==(const RingElement& a, const RingElement& b) {
  require_same_ring(a.ring_, b.ring_);
  return a.terms_ == b.terms_;
}

RingElement RingElement::pow(unsigned n) const {
  RingElement result = constant(ring_, 1);
  RingElement base = *this;
  while (n) {
    if (n & 1u) result *= base;
    n >>= 1u;
    if (n) base *= base;
  }
  return result;
}

std::optional<RingElement> RingElement::unit_inverse() const {
  if (terms_.size() != 1) return std::nullopt;
  const auto& [e, c] = *terms_.begin();
  if (c != 1 && c != -1) return std::nullopt;
  Exponents inv(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] != 0 && !ring_->invertible(i)) return std::nullopt;
    inv[i] = -e[i];
  }
  return monomial(ring_, inv, c);
}

namespace detail {

// Exact division of raw Laurent term maps, monomial order = lex on keys.
// Quotient exponents are confined to the box [min p - min d, max p - max d].
std::optional<TermMap> divide_raw(const TermMap& p, const TermMap& d) {
  TermMap q;
  if (p.empty()) return q;
  const std::size_t n = d.begin()->first.size();
  Exponents lo(n), hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    int pmin = INT32_MAX, pmax = INT32_MIN, dmin = INT32_MAX, dmax = INT32_MIN;
    for (const auto& [e, c] : p) pmin = std::min(pmin, e[i]), pmax = std::max(pmax, e[i]);
    for (const auto& [e, c] : d) dmin = std::min(dmin, e[i]), dmax = std::max(dmax, e[i]);
    lo[i] = pmin - dmin;
    hi[i] = pmax - dmax;
  }
  TermMap r = p;
  const auto& [ed, cd] = *d.rbegin();
  Exponents t(n), e(n);
  while (!r.empty()) {
    const auto& [er, cr] = *r.rbegin();
    for (std::size_t i = 0; i < n; ++i) {
      t[i] = er[i] - ed[i];
      if (t[i] < lo[i] || t[i] > hi[i]) return std::nullopt;
    }
    if (!mpz_divisible_p(cr.get_mpz_t(), cd.get_mpz_t())) return std::nullopt;
    const Integer c = cr / cd;
    q[t] += c;
    for (const auto& [edi, cdi] : d) {
      for (std::size_t i = 0; i < n; ++i) e[i] = t[i] + edi[i];
      auto [it, inserted] = r.try_emplace(e, -c * cdi);
      if (!inserted) {
        it->second -= c * cdi;
        if (it->second == 0) r.erase(it);
      }
    }
  }
  return q;
}

}  // namespace detail

std::optional<RingElement> RingElement::divide_exact(const RingElement& divisor) const {
  require_same_ring(ring_, divisor.ring_);
  if (divisor.is_zero()) throw Error(ErrorCode::DivisionByZero, "exact division by zero");
  if (auto inv = divisor.unit_inverse()) return *this * *inv;
  if (auto k = divisor.as_integer()) {
    TermMap t = terms_;
    for (auto& [e, c] : t) {
      if (!mpz_divisible_p(c.get_mpz_t(), k->get_mpz_t())) return std::nullopt;
      c /= *k;
    }
    return RingElement(ring_, std::move(t));
  }
  for (const auto& [e, c] : divisor.terms_)
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] != 0 && !ring_->is_plain(i))
        throw Error(ErrorCode::NotDivisible,
                    "division by " + divisor.to_string() + " involves generator " +
                        ring_->generator_name(i) + " which is not a free unit");
  auto q = detail::divide_raw(terms_, divisor.terms_);
  if (!q) return std::nullopt;
  return RingElement(ring_, std::move(*q));
}

RingElement RingElement::embed(const RingPtr& target) const {
  std::vector<std::size_t> map(ring_->size());
  for (std::size_t i = 0; i < ring_->size(); ++i) map[i] = target->index_of(ring_->generator_name(i));
  TermMap out;
  for (const auto& [e, c] : terms_) {
    Exponents e2(target->size(), 0);
    for (std::size_t i = 0; i < e.size(); ++i) e2[map[i]] += e[i];
    target->accumulate(std::move(e2), 0, c, out);
  }
  return RingElement(target, std::move(out));
}

std::string RingElement::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    Integer a = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += ring_->generator_name(i);
      if (e[i] != 1) mono += "^" + std::to_string(e[i]);
    }
    if (mono.empty()) os << a.get_str();
    else if (a == 1) os << mono;
    else os << a.get_str() << "*" << mono;
  }
  return os.str();
}

namespace presets {

RingPtr integers() {
  static const RingPtr r = make_ring({"Z", {}, {}, std::nullopt});
  return r;
}

RingPtr projective_plane() {
  static const RingPtr r =
      make_ring({"P2", {{"t", true}}, {Relation::binomial_power("t", 1, 3)}, std::nullopt});
  return r;
}

RingPtr p1xp1() {
  static const RingPtr r = make_ring({"P1xP1",
                                      {{"a", true}, {"b", true}},
                                      {Relation::binomial_power("a", 1, 2), Relation::binomial_power("b", 1, 2)},
                                      std::nullopt});
  return r;
}

RingPtr by_name(std::string_view name) {
  if (name == "Z" || name == "z" || name == "free") return integers();
  if (name == "P2" || name == "p2") return projective_plane();
  if (name == "P1xP1" || name == "p1xp1") return p1xp1();
  throw Error(ErrorCode::UsageError, "unknown ring preset " + std::string(name));
}

}  // namespace presets

}  // namespace khall
