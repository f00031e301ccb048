#include "khall/laurent.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "khall/error.hpp"

namespace khall {

VarList merge_vars(const VarList& a, const VarList& b) {
  VarList out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

namespace {

void bump(std::map<std::string, int>& powers, const std::string& name, int k) {
  if (k == 0) return;
  auto [it, inserted] = powers.try_emplace(name, k);
  if (!inserted) {
    it->second += k;
    if (it->second == 0) powers.erase(it);
  }
}

std::map<std::string, int> scale_powers(const std::map<std::string, int>& p, int k) {
  std::map<std::string, int> out;
  if (k == 0) return out;
  for (const auto& [n, e] : p) out.emplace(n, e * k);
  return out;
}

std::string powers_string(const std::map<std::string, int>& p) {
  std::string s;
  for (const auto& [n, e] : p) {
    if (!s.empty()) s += "*";
    s += n;
    if (e != 1) s += "^" + std::to_string(e);
  }
  return s;
}

std::size_t var_index(const VarList& vars, const std::string& v) {
  auto it = std::lower_bound(vars.begin(), vars.end(), v);
  if (it == vars.end() || *it != v) return vars.size();
  return static_cast<std::size_t>(it - vars.begin());
}

}  // namespace

// ---- Monomial / UnitMonomial / ScaledMonomial / Binomial

Monomial Monomial::var(const std::string& name, int power) {
  Monomial m;
  bump(m.powers, name, power);
  return m;
}

int Monomial::degree(const std::string& name) const {
  auto it = powers.find(name);
  return it == powers.end() ? 0 : it->second;
}

Monomial Monomial::inverse() const { return pow(-1); }

Monomial Monomial::pow(int k) const { return {scale_powers(powers, k)}; }

Monomial Monomial::without(const std::string& name) const {
  Monomial m = *this;
  m.powers.erase(name);
  return m;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial m = a;
  for (const auto& [n, e] : b.powers) bump(m.powers, n, e);
  return m;
}

std::string Monomial::to_string() const { return powers.empty() ? "1" : powers_string(powers); }

UnitMonomial UnitMonomial::generator(const std::string& name, int power) {
  UnitMonomial u;
  bump(u.powers, name, power);
  return u;
}

UnitMonomial UnitMonomial::inverse() const { return pow(-1); }

UnitMonomial UnitMonomial::pow(int k) const {
  return {(sign < 0 && (k % 2 != 0)) ? -1 : 1, scale_powers(powers, k)};
}

UnitMonomial operator*(const UnitMonomial& a, const UnitMonomial& b) {
  UnitMonomial u{a.sign * b.sign, a.powers};
  for (const auto& [n, e] : b.powers) bump(u.powers, n, e);
  return u;
}

RingElement UnitMonomial::to_element(const RingPtr& ring) const {
  return RingElement::from_named(ring, powers, sign);
}

std::string UnitMonomial::to_string() const {
  std::string body = powers_string(powers);
  if (body.empty()) return sign < 0 ? "-1" : "1";
  return sign < 0 ? "-" + body : body;
}

std::string ScaledMonomial::to_string() const {
  std::string body = powers_string(unit.powers);
  std::string m = powers_string(mono.powers);
  if (!m.empty()) body += body.empty() ? m : "*" + m;
  if (body.empty()) return unit.sign < 0 ? "-1" : "1";
  return unit.sign < 0 ? "-" + body : body;
}

std::string Binomial::to_string() const {
  std::string s = a.to_string();
  if (s.front() == '-') return "(1 + " + s.substr(1) + ")";
  return "(1 - " + s + ")";
}

std::pair<ScaledMonomial, Binomial> orient(const Binomial& b) {
  int first = 0;
  for (const auto& [n, e] : b.a.mono.powers)
    if (e != 0) { first = e; break; }
  if (first == 0)
    for (const auto& [n, e] : b.a.unit.powers)
      if (e != 0) { first = e; break; }
  if (first >= 0) return {ScaledMonomial{}, b};
  // 1 - a = -a (1 - a^{-1})
  ScaledMonomial pre{-b.a.unit, b.a.mono};
  return {pre, Binomial{b.a.inverse()}};
}

// ---- LaurentPoly

LaurentPoly::LaurentPoly(RingPtr ring, VarList vars) : ring_(std::move(ring)), vars_(std::move(vars)) {}

LaurentPoly LaurentPoly::constant(const RingElement& c) {
  return LaurentPoly(c.ring(), {}, c.terms());
}

LaurentPoly LaurentPoly::constant(RingPtr ring, const Integer& c) {
  return constant(RingElement::constant(std::move(ring), c));
}

LaurentPoly LaurentPoly::variable(RingPtr ring, const std::string& name, int power) {
  return term(Monomial::var(name, power), RingElement::constant(std::move(ring), 1));
}

LaurentPoly LaurentPoly::from(RingPtr ring, const ScaledMonomial& m) {
  return term(m.mono, m.unit.to_element(ring));
}

LaurentPoly LaurentPoly::from(RingPtr ring, const Binomial& b) {
  return constant(ring, 1) - from(ring, b.a);
}

LaurentPoly LaurentPoly::term(const Monomial& m, const RingElement& c) {
  VarList vars;
  Exponents head;
  for (const auto& [n, e] : m.powers) {
    vars.push_back(n);
    head.push_back(e);
  }
  TermMap t;
  for (const auto& [ge, gc] : c.terms()) {
    Exponents key = head;
    key.insert(key.end(), ge.begin(), ge.end());
    t.emplace(std::move(key), gc);
  }
  return LaurentPoly(c.ring(), std::move(vars), std::move(t));
}

LaurentPoly LaurentPoly::from_terms(RingPtr ring, VarList vars, TermMap terms) {
  return LaurentPoly(std::move(ring), std::move(vars), std::move(terms));
}

std::optional<RingElement> LaurentPoly::as_constant() const {
  TermMap t;
  const std::size_t nv = nvars();
  for (const auto& [e, c] : terms_) {
    for (std::size_t i = 0; i < nv; ++i)
      if (e[i] != 0) return std::nullopt;
    t.emplace(Exponents(e.begin() + nv, e.end()), c);
  }
  return RingElement(ring_, std::move(t));
}

std::map<Exponents, RingElement> LaurentPoly::coefficients() const {
  std::map<Exponents, RingElement> out;
  const std::size_t nv = nvars();
  for (const auto& [e, c] : terms_) {
    Exponents head(e.begin(), e.begin() + nv);
    auto it = out.try_emplace(std::move(head), RingElement(ring_)).first;
    it->second.terms_.emplace_hint(it->second.terms_.end(), Exponents(e.begin() + nv, e.end()), c);
  }
  return out;
}

RingElement LaurentPoly::coefficient(const Monomial& m) const {
  Exponents head(nvars(), 0);
  for (const auto& [n, k] : m.powers) {
    const std::size_t i = var_index(vars_, n);
    if (i == vars_.size()) return RingElement(ring_);
    head[i] = k;
  }
  TermMap t;
  Exponents lo = head;
  lo.insert(lo.end(), ring_->size(), INT32_MIN);
  for (auto it = terms_.lower_bound(lo); it != terms_.end(); ++it) {
    if (!std::equal(head.begin(), head.end(), it->first.begin())) break;
    t.emplace(Exponents(it->first.begin() + nvars(), it->first.end()), it->second);
  }
  return RingElement(ring_, std::move(t));
}

Monomial LaurentPoly::monomial_of(const Exponents& var_exps) const {
  Monomial m;
  for (std::size_t i = 0; i < vars_.size(); ++i) bump(m.powers, vars_[i], var_exps[i]);
  return m;
}

LaurentPoly LaurentPoly::with_vars(const VarList& superset) const {
  if (superset == vars_) return *this;
  std::vector<std::size_t> pos(vars_.size());
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    pos[i] = var_index(superset, vars_[i]);
    if (pos[i] == superset.size()) throw Error(ErrorCode::UsageError, "variable list is not a superset");
  }
  const std::size_t nv = nvars(), nn = superset.size();
  TermMap t;
  for (const auto& [e, c] : terms_) {
    Exponents key(nn + ring_->size(), 0);
    for (std::size_t i = 0; i < nv; ++i) key[pos[i]] = e[i];
    std::copy(e.begin() + nv, e.end(), key.begin() + nn);
    t.emplace(std::move(key), c);
  }
  return LaurentPoly(ring_, superset, std::move(t));
}

LaurentPoly LaurentPoly::compact() const {
  VarList keep;
  for (const auto& v : vars_)
    if (involves(v)) keep.push_back(v);
  if (keep.size() == vars_.size()) return *this;
  std::vector<std::size_t> idx;
  for (const auto& v : keep) idx.push_back(var_index(vars_, v));
  const std::size_t nv = nvars();
  TermMap t;
  for (const auto& [e, c] : terms_) {
    Exponents key;
    key.reserve(idx.size() + ring_->size());
    for (auto i : idx) key.push_back(e[i]);
    key.insert(key.end(), e.begin() + nv, e.end());
    t.emplace(std::move(key), c);
  }
  return LaurentPoly(ring_, std::move(keep), std::move(t));
}

bool LaurentPoly::involves(const std::string& var) const {
  const std::size_t i = var_index(vars_, var);
  if (i == vars_.size()) return false;
  return std::any_of(terms_.begin(), terms_.end(), [i](const auto& t) { return t.first[i] != 0; });
}

int LaurentPoly::min_degree(const std::string& var) const {
  const std::size_t i = var_index(vars_, var);
  if (i == vars_.size() || terms_.empty()) return 0;
  int m = INT32_MAX;
  for (const auto& [e, c] : terms_) m = std::min(m, e[i]);
  return m;
}

int LaurentPoly::max_degree(const std::string& var) const {
  const std::size_t i = var_index(vars_, var);
  if (i == vars_.size() || terms_.empty()) return 0;
  int m = INT32_MIN;
  for (const auto& [e, c] : terms_) m = std::max(m, e[i]);
  return m;
}

int LaurentPoly::max_abs_degree() const {
  int m = 0;
  const std::size_t nv = nvars();
  for (const auto& [e, c] : terms_)
    for (std::size_t i = 0; i < nv; ++i) m = std::max(m, std::abs(e[i]));
  return m;
}

std::map<int, LaurentPoly> LaurentPoly::split(const std::string& var) const {
  std::map<int, LaurentPoly> out;
  const std::size_t vi = var_index(vars_, var);
  if (vi == vars_.size()) {
    if (!is_zero()) out.emplace(0, *this);
    return out;
  }
  VarList rest;
  for (const auto& v : vars_)
    if (v != var) rest.push_back(v);
  for (const auto& [e, c] : terms_) {
    auto it = out.find(e[vi]);
    if (it == out.end()) it = out.emplace(e[vi], LaurentPoly(ring_, rest)).first;
    Exponents key;
    key.reserve(e.size() - 1);
    for (std::size_t i = 0; i < e.size(); ++i)
      if (i != vi) key.push_back(e[i]);
    it->second.terms_.emplace(std::move(key), c);
  }
  return out;
}

LaurentPoly LaurentPoly::operator-() const {
  TermMap t = terms_;
  for (auto& [e, c] : t) c = -c;
  return LaurentPoly(ring_, vars_, std::move(t));
}

namespace {
// p itself when it already uses `all`, else a widened copy kept in `storage`.
const LaurentPoly& aligned(const LaurentPoly& p, const VarList& all, std::optional<LaurentPoly>& storage) {
  if (p.vars() == all) return p;
  storage = p.with_vars(all);
  return *storage;
}

}  // namespace

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& other) {
  require_same_ring(ring_, other.ring_);
  if (other.vars_ == vars_) {
    detail::add_into(terms_, other.terms_);
    return *this;
  }
  const VarList all = merge_vars(vars_, other.vars_);
  if (vars_ != all) *this = with_vars(all);
  std::optional<LaurentPoly> so;
  detail::add_into(terms_, aligned(other, all, so).terms_);
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& other) {
  require_same_ring(ring_, other.ring_);
  if (other.vars_ == vars_) {
    detail::add_into(terms_, other.terms_, true);
    return *this;
  }
  const VarList all = merge_vars(vars_, other.vars_);
  if (vars_ != all) *this = with_vars(all);
  std::optional<LaurentPoly> so;
  detail::add_into(terms_, aligned(other, all, so).terms_, true);
  return *this;
}

namespace {

bool is_unit_one(const TermMap& t) {
  if (t.size() != 1 || t.begin()->second != 1) return false;
  const auto& e = t.begin()->first;
  return std::all_of(e.begin(), e.end(), [](int x) { return x == 0; });
}

}  // namespace

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  require_same_ring(a.ring_, b.ring_);
  if (is_unit_one(a.terms_)) return b.with_vars(merge_vars(a.vars_, b.vars_));
  if (is_unit_one(b.terms_)) return a.with_vars(merge_vars(a.vars_, b.vars_));
  if (a.vars_ == b.vars_)
    return LaurentPoly(a.ring_, a.vars_, detail::multiply_terms(*a.ring_, a.nvars(), a.terms_, b.terms_));
  const VarList all = merge_vars(a.vars_, b.vars_);
  std::optional<LaurentPoly> sa, sb;
  const LaurentPoly& a2 = aligned(a, all, sa);
  const LaurentPoly& b2 = aligned(b, all, sb);
  return LaurentPoly(a.ring_, all, detail::multiply_terms(*a.ring_, all.size(), a2.terms_, b2.terms_));
}

LaurentPoly operator*(const LaurentPoly& a, const RingElement& c) {
  require_same_ring(a.ring_, c.ring());
  return a * LaurentPoly::constant(c).with_vars(a.vars_);
}

bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
  require_same_ring(a.ring_, b.ring_);
  if (a.vars_ == b.vars_) return a.terms_ == b.terms_;
  const VarList all = merge_vars(a.vars_, b.vars_);
  std::optional<LaurentPoly> sa, sb;
  return aligned(a, all, sa).terms_ == aligned(b, all, sb).terms_;
}

LaurentPoly LaurentPoly::pow(unsigned n) const {
  LaurentPoly result = constant(ring_, 1);
  LaurentPoly base = *this;
  while (n) {
    if (n & 1u) result = result * base;
    n >>= 1u;
    if (n) base = base * base;
  }
  return result;
}

LaurentPoly LaurentPoly::multiply_truncated(const LaurentPoly& a, const LaurentPoly& b, const std::string& var,
                                            int max_exp) {
  require_same_ring(a.ring_, b.ring_);
  VarList all = merge_vars(merge_vars(a.vars_, b.vars_), {var});
  std::optional<LaurentPoly> sa, sb;
  const LaurentPoly& a2 = aligned(a, all, sa);
  const LaurentPoly& b2 = aligned(b, all, sb);
  const std::size_t vi = var_index(all, var);
  const std::size_t n = all.size() + a.ring_->size();
  TermMap out;
  Exponents e(n);
  // b2 sorted by var exponent lets us stop early; the var slot is not the
  // leading key slot in general, so bucket b by it once.
  std::map<int, std::vector<const std::pair<const Exponents, Integer>*>> buckets;
  for (const auto& t : b2.terms_) buckets[t.first[vi]].push_back(&t);
  for (const auto& [ea, ca] : a2.terms_) {
    for (const auto& [k, list] : buckets) {
      if (ea[vi] + k > max_exp) break;
      for (const auto* tb : list) {
        for (std::size_t i = 0; i < n; ++i) e[i] = ea[i] + tb->first[i];
        a.ring_->accumulate(e, all.size(), ca * tb->second, out);
      }
    }
  }
  return LaurentPoly(a.ring_, std::move(all), std::move(out));
}

LaurentPoly LaurentPoly::multiply_window(const LaurentPoly& a, const LaurentPoly& b, int bound) {
  require_same_ring(a.ring_, b.ring_);
  VarList all = merge_vars(a.vars_, b.vars_);
  std::optional<LaurentPoly> sa, sb;
  const LaurentPoly& a2 = aligned(a, all, sa);
  const LaurentPoly& b2 = aligned(b, all, sb);
  const std::size_t nv = all.size();
  const std::size_t n = nv + a.ring_->size();
  TermMap out;
  Exponents e(n);
  for (const auto& [ea, ca] : a2.terms_) {
    for (const auto& [eb, cb] : b2.terms_) {
      bool inside = true;
      for (std::size_t i = 0; i < nv && inside; ++i) inside = std::abs(ea[i] + eb[i]) <= bound;
      if (!inside) continue;
      for (std::size_t i = 0; i < n; ++i) e[i] = ea[i] + eb[i];
      a.ring_->accumulate(e, nv, ca * cb, out);
    }
  }
  return LaurentPoly(a.ring_, std::move(all), std::move(out));
}

LaurentPoly LaurentPoly::substitute(const std::string& var, const ScaledMonomial& image) const {
  const std::size_t vi = var_index(vars_, var);
  if (vi == vars_.size()) return *this;
  VarList rest;
  for (const auto& v : vars_)
    if (v != var) rest.push_back(v);
  VarList all = rest;
  for (const auto& [n, e] : image.mono.powers) all = merge_vars(all, {n});
  const std::size_t nv = nvars(), nn = all.size();
  std::vector<std::size_t> pos(nv);
  for (std::size_t i = 0; i < nv; ++i) pos[i] = i == vi ? nn : var_index(all, vars_[i]);
  std::vector<std::pair<std::size_t, int>> image_vars;
  for (const auto& [n, e] : image.mono.powers) image_vars.emplace_back(var_index(all, n), e);
  std::map<int, RingElement> unit_powers;
  TermMap out;
  for (const auto& [e, c] : terms_) {
    const int k = e[vi];
    auto it = unit_powers.find(k);
    if (it == unit_powers.end()) it = unit_powers.emplace(k, image.unit.pow(k).to_element(ring_)).first;
    Exponents key(nn + ring_->size(), 0);
    for (std::size_t i = 0; i < nv; ++i)
      if (i != vi) key[pos[i]] = e[i];
    for (const auto& [j, p] : image_vars) key[j] += p * k;
    for (const auto& [ge, gc] : it->second.terms()) {
      Exponents full = key;
      for (std::size_t g = 0; g < ge.size(); ++g) full[nn + g] = e[nv + g] + ge[g];
      ring_->accumulate(std::move(full), nn, c * gc, out);
    }
  }
  return LaurentPoly(ring_, std::move(all), std::move(out));
}

LaurentPoly LaurentPoly::rename(const std::map<std::string, std::string>& names) const {
  VarList renamed;
  for (const auto& v : vars_) {
    auto it = names.find(v);
    renamed.push_back(it == names.end() ? v : it->second);
  }
  VarList sorted = renamed;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw Error(ErrorCode::NameCollision, "variable renaming is not injective");
  const std::size_t nv = nvars();
  std::vector<std::size_t> pos(nv);
  for (std::size_t i = 0; i < nv; ++i) pos[i] = var_index(sorted, renamed[i]);
  TermMap t;
  for (const auto& [e, c] : terms_) {
    Exponents key(e.size());
    for (std::size_t i = 0; i < nv; ++i) key[pos[i]] = e[i];
    std::copy(e.begin() + nv, e.end(), key.begin() + nv);
    t.emplace(std::move(key), c);
  }
  return LaurentPoly(ring_, std::move(sorted), std::move(t));
}

LaurentPoly LaurentPoly::invert_var(const std::string& var) const {
  const std::size_t vi = var_index(vars_, var);
  if (vi == vars_.size()) return *this;
  TermMap t;
  for (const auto& [e, c] : terms_) {
    Exponents key = e;
    key[vi] = -key[vi];
    t.emplace(std::move(key), c);
  }
  return LaurentPoly(ring_, vars_, std::move(t));
}

LaurentPoly LaurentPoly::restrict_window(const VarList& window_vars, int bound) const {
  std::vector<std::size_t> idx;
  for (const auto& v : window_vars) {
    const std::size_t i = var_index(vars_, v);
    if (i != vars_.size()) idx.push_back(i);
  }
  TermMap t;
  for (const auto& [e, c] : terms_) {
    if (std::all_of(idx.begin(), idx.end(), [&](std::size_t i) { return std::abs(e[i]) <= bound; }))
      t.emplace_hint(t.end(), e, c);
  }
  return LaurentPoly(ring_, vars_, std::move(t));
}

std::optional<LaurentPoly> LaurentPoly::divide_exact(const LaurentPoly& divisor) const {
  require_same_ring(ring_, divisor.ring_);
  if (divisor.is_zero()) throw Error(ErrorCode::DivisionByZero, "exact division by zero");
  if (is_zero()) return LaurentPoly(ring_, vars_);
  const VarList all = merge_vars(vars_, divisor.vars_);
  std::optional<LaurentPoly> sp, sd;
  const LaurentPoly& p = aligned(*this, all, sp);
  const LaurentPoly& d = aligned(divisor, all, sd);
  const std::size_t nv = all.size();

  bool plain = true;
  for (const auto& [e, c] : d.terms_)
    for (std::size_t g = 0; g < ring_->size(); ++g)
      if (e[nv + g] != 0 && !ring_->is_plain(g)) plain = false;
  if (plain) {
    // Multiplying by a divisor over free units never triggers a reduction,
    // so division in the free Laurent ring is exact division here.
    auto q = detail::divide_raw(p.terms_, d.terms_);
    if (!q) return std::nullopt;
    return LaurentPoly(ring_, all, std::move(*q));
  }

  // Division with respect to the variables only; ring coefficients divide exactly.
  const auto dc = d.coefficients();
  const auto& [dlead, dlc] = *dc.rbegin();
  Exponents lo(nv), hi(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    int pmin = INT32_MAX, pmax = INT32_MIN, dmin = INT32_MAX, dmax = INT32_MIN;
    for (const auto& [e, c] : p.terms_) pmin = std::min(pmin, e[i]), pmax = std::max(pmax, e[i]);
    for (const auto& [e, c] : dc) dmin = std::min(dmin, e[i]), dmax = std::max(dmax, e[i]);
    lo[i] = pmin - dmin;
    hi[i] = pmax - dmax;
  }
  LaurentPoly r = p;
  LaurentPoly q(ring_, all);
  while (!r.is_zero()) {
    const Exponents lead(r.terms_.rbegin()->first.begin(), r.terms_.rbegin()->first.begin() + nv);
    Exponents shift(nv);
    for (std::size_t i = 0; i < nv; ++i) {
      shift[i] = lead[i] - dlead[i];
      if (shift[i] < lo[i] || shift[i] > hi[i]) return std::nullopt;
    }
    const RingElement rc = r.coefficient(r.monomial_of(lead));
    auto qc = rc.divide_exact(dlc);
    if (!qc) return std::nullopt;
    const LaurentPoly step = term(r.monomial_of(shift), *qc).with_vars(all);
    q += step;
    r -= step * d;
    if (!r.is_zero() && r.vars_ != all) r = r.with_vars(all);
  }
  return q;
}

std::string LaurentPoly::to_string() const {
  if (terms_.empty()) return "0";
  const auto groups = coefficients();
  std::ostringstream os;
  bool first = true;
  for (auto it = groups.rbegin(); it != groups.rend(); ++it) {
    const std::string mono = powers_string(monomial_of(it->first).powers);
    const RingElement& c = it->second;
    std::string cs;
    bool negative = false;
    if (c.terms().size() == 1) {
      // single term: pull the sign out
      const Integer& v = c.terms().begin()->second;
      negative = v < 0;
      cs = (negative ? -c : c).to_string();
    } else {
      cs = "(" + c.to_string() + ")";
    }
    if (first) os << (negative ? "-" : "");
    else os << (negative ? " - " : " + ");
    first = false;
    if (mono.empty()) os << cs;
    else if (cs == "1") os << mono;
    else os << cs << "*" << mono;
  }
  return os.str();
}

// ---- RatFun

namespace {

LaurentPoly product_of(const RingPtr& ring, const std::vector<Binomial>& factors) {
  LaurentPoly p = LaurentPoly::constant(ring, 1);
  for (const auto& b : factors) p = p * LaurentPoly::from(ring, b);
  return p;
}

std::map<Binomial, int> count_factors(const std::vector<Binomial>& factors) {
  std::map<Binomial, int> m;
  for (const auto& b : factors) ++m[b];
  return m;
}

std::vector<Binomial> expand_counts(const std::map<Binomial, int>& m) {
  std::vector<Binomial> out;
  for (const auto& [b, k] : m)
    for (int i = 0; i < k; ++i) out.push_back(b);
  return out;
}

Binomial substitute_binomial(const Binomial& b, const std::string& var, const ScaledMonomial& image) {
  const int k = b.a.mono.degree(var);
  if (k == 0) return b;
  ScaledMonomial a{b.a.unit, b.a.mono.without(var)};
  return Binomial{a * image.pow(k)};
}

void check_nonvanishing(const Binomial& b) {
  if (b.a.mono.empty() && b.a.unit.is_one())
    throw Error(ErrorCode::DenominatorVanishes, "denominator factor (1 - 1)");
}

}  // namespace

RatFun::RatFun(LaurentPoly num) : num_(std::move(num)) {}

RatFun::RatFun(LaurentPoly num, std::vector<Binomial> factors) : num_(std::move(num)), factors_(std::move(factors)) {
  normalize();
}

RatFun::RatFun(LaurentPoly num, LaurentPoly den) : num_(std::move(num)), den_(std::move(den)) {
  require_same_ring(num_.ring(), den_->ring());
  if (den_->is_zero()) throw Error(ErrorCode::DivisionByZero, "zero denominator");
  normalize();
}

RatFun RatFun::quotient(const LaurentPoly& num, const LaurentPoly& den) { return RatFun(num, den); }

VarList RatFun::vars() const {
  VarList v = num_.compact().vars();
  if (den_) return merge_vars(v, den_->compact().vars());
  for (const auto& b : factors_)
    for (const auto& [n, e] : b.a.mono.powers) v = merge_vars(v, {n});
  return v;
}

LaurentPoly RatFun::den() const {
  if (den_) return *den_;
  return product_of(ring(), factors_);
}

namespace {

// nullopt also when the ring cannot decide divisibility by this divisor
std::optional<LaurentPoly> try_divide(const LaurentPoly& p, const LaurentPoly& d) {
  try {
    return p.divide_exact(d);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotDivisible) throw;
    return std::nullopt;
  }
}

// p / (1 - u m) computed as (p / (u^-1 - m)) u^-1, so the divisor's leading
// coefficient is -1 even when u has no single-term normal form.
std::optional<LaurentPoly> divide_by_binomial(const LaurentPoly& p, const Binomial& b) {
  const RingPtr& R = p.ring();
  if (b.is_constant()) return try_divide(p, LaurentPoly::from(R, b));
  const LaurentPoly inv = LaurentPoly::from(R, ScaledMonomial{b.a.unit.inverse(), {}});
  auto q = try_divide(p, inv - LaurentPoly::from(R, ScaledMonomial{{}, b.a.mono}));
  if (!q) return std::nullopt;
  return *q * inv;
}

}  // namespace

void RatFun::normalize() {
  const RingPtr& R = num_.ring();
  if (den_) {
    if (num_.is_zero()) {
      den_.reset();
      factors_.clear();
      num_ = LaurentPoly(R);
      return;
    }
    if (auto rec = recognize_binomial(*den_)) {
      auto [pre, bin] = *rec;
      num_ = num_ * LaurentPoly::from(R, pre.inverse());
      den_.reset();
      factors_.clear();
      if (bin) factors_.push_back(*bin);
    } else if (auto q = try_divide(num_, *den_)) {
      num_ = std::move(*q);
      den_.reset();
      factors_.clear();
      return;
    } else {
      // content and sign of the plain pair
      Integer g = 0;
      for (const auto& [e, c] : num_.terms_) g = gcd(g, c);
      for (const auto& [e, c] : den_->terms_) g = gcd(g, c);
      if (den_->terms_.rbegin()->second < 0) g = -g;
      if (g != 1) {
        for (auto& [e, c] : num_.terms_) c /= g;
        for (auto& [e, c] : den_->terms_) c /= g;
      }
      return;
    }
  }
  if (num_.is_zero()) {
    factors_.clear();
    return;
  }
  LaurentPoly prefactor = LaurentPoly::constant(R, 1);
  bool scaled = false;
  for (auto& b : factors_) {
    auto [pre, ob] = orient(b);
    check_nonvanishing(ob);
    if (!(pre.unit.is_one() && pre.mono.empty())) {
      prefactor = prefactor * LaurentPoly::from(R, pre.inverse());
      scaled = true;
    }
    b = ob;
  }
  if (scaled) num_ = num_ * prefactor;
  std::sort(factors_.begin(), factors_.end());
  std::vector<Binomial> kept;
  for (const auto& b : factors_) {
    // once a copy of b survives, later copies cannot cancel either
    if (!kept.empty() && kept.back() == b) {
      kept.push_back(b);
      continue;
    }
    auto q = divide_by_binomial(num_, b);
    if (q) num_ = std::move(*q);
    else kept.push_back(b);
  }
  factors_ = std::move(kept);
}

RatFun RatFun::operator-() const {
  RatFun r = *this;
  r.num_ = -r.num_;
  return r;
}

RatFun operator+(const RatFun& a, const RatFun& b) {
  require_same_ring(a.ring(), b.ring());
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.factored() && b.factored()) {
    if (a.factors_ == b.factors_) return RatFun(a.num_ + b.num_, a.factors_);
    auto ca = count_factors(a.factors_), cb = count_factors(b.factors_);
    std::map<Binomial, int> lcm = ca;
    for (const auto& [f, k] : cb) lcm[f] = std::max(lcm[f], k);
    std::vector<Binomial> extra_a, extra_b;
    for (const auto& [f, k] : lcm) {
      for (int i = ca.count(f) ? ca[f] : 0; i < k; ++i) extra_a.push_back(f);
      for (int i = cb.count(f) ? cb[f] : 0; i < k; ++i) extra_b.push_back(f);
    }
    LaurentPoly num = a.num_ * product_of(a.ring(), extra_a) + b.num_ * product_of(a.ring(), extra_b);
    return RatFun(std::move(num), expand_counts(lcm));
  }
  return RatFun(a.num_ * b.den() + b.num_ * a.den(), a.den() * b.den());
}

RatFun operator-(const RatFun& a, const RatFun& b) { return a + (-b); }

RatFun operator*(const RatFun& a, const RatFun& b) {
  require_same_ring(a.ring(), b.ring());
  if (a.is_zero()) return a;
  if (b.is_zero()) return b;
  if (a.factored() && b.factored()) {
    std::vector<Binomial> f = a.factors_;
    f.insert(f.end(), b.factors_.begin(), b.factors_.end());
    return RatFun(a.num_ * b.num_, std::move(f));
  }
  return RatFun(a.num_ * b.num_, a.den() * b.den());
}

RatFun operator/(const RatFun& a, const RatFun& b) {
  require_same_ring(a.ring(), b.ring());
  if (b.is_zero()) throw Error(ErrorCode::DivisionByZero, "division by zero");
  if (a.factored() && b.factored()) {
    if (auto rec = recognize_binomial(b.num_)) {
      auto [pre, bin] = *rec;
      std::vector<Binomial> f = a.factors_;
      if (bin) f.push_back(*bin);
      LaurentPoly num = a.num_ * product_of(a.ring(), b.factors_) * LaurentPoly::from(a.ring(), pre.inverse());
      return RatFun(std::move(num), std::move(f));
    }
  }
  return RatFun(a.num_ * b.den(), a.den() * b.num_);
}

bool operator==(const RatFun& a, const RatFun& b) {
  require_same_ring(a.ring(), b.ring());
  if (a.factored() && b.factored() && a.factors_ == b.factors_) return a.num_ == b.num_;
  return a.num_ * b.den() == b.num_ * a.den();
}

RatFun RatFun::substitute(const std::string& var, const ScaledMonomial& image) const {
  if (den_) {
    LaurentPoly d = den_->substitute(var, image);
    if (d.is_zero()) throw Error(ErrorCode::DenominatorVanishes, "denominator vanishes after substitution");
    return RatFun(num_.substitute(var, image), std::move(d));
  }
  std::vector<Binomial> f;
  for (const auto& b : factors_) {
    Binomial nb = substitute_binomial(b, var, image);
    check_nonvanishing(nb);
    f.push_back(nb);
  }
  return RatFun(num_.substitute(var, image), std::move(f));
}

RatFun RatFun::rename(const std::map<std::string, std::string>& names) const {
  if (den_) return RatFun(num_.rename(names), den_->rename(names));
  std::vector<Binomial> f;
  for (const auto& b : factors_) {
    Binomial nb;
    nb.a.unit = b.a.unit;
    for (const auto& [n, e] : b.a.mono.powers) {
      auto it = names.find(n);
      bump(nb.a.mono.powers, it == names.end() ? n : it->second, e);
    }
    f.push_back(nb);
  }
  return RatFun(num_.rename(names), std::move(f));
}

RatFun RatFun::invert_var(const std::string& var) const {
  if (den_) return RatFun(num_.invert_var(var), den_->invert_var(var));
  std::vector<Binomial> f;
  for (const auto& b : factors_) {
    Binomial nb = b;
    auto it = nb.a.mono.powers.find(var);
    if (it != nb.a.mono.powers.end()) it->second = -it->second;
    f.push_back(nb);
  }
  return RatFun(num_.invert_var(var), std::move(f));
}

std::string RatFun::to_string() const {
  const std::string n = num_.to_string();
  if (den_) return "(" + n + ")/(" + den_->to_string() + ")";
  if (factors_.empty()) return n;
  std::string d;
  for (const auto& b : factors_) d += (d.empty() ? "" : "*") + b.to_string();
  if (factors_.size() > 1) d = "(" + d + ")";
  return "(" + n + ")/" + d;
}

std::optional<std::pair<ScaledMonomial, std::optional<Binomial>>> recognize_binomial(const LaurentPoly& p) {
  if (p.size() == 0 || p.size() > 2) return std::nullopt;
  const RingPtr& R = p.ring();
  const std::size_t nv = p.nvars();
  auto to_scaled = [&](const Exponents& e, const Integer& c) -> std::optional<ScaledMonomial> {
    if (c != 1 && c != -1) return std::nullopt;
    ScaledMonomial m;
    m.unit.sign = c < 0 ? -1 : 1;
    for (std::size_t i = 0; i < nv; ++i) bump(m.mono.powers, p.vars()[i], e[i]);
    for (std::size_t g = 0; g < R->size(); ++g) {
      const int k = e[nv + g];
      if (k == 0) continue;
      if (!R->is_plain(g)) return std::nullopt;
      bump(m.unit.powers, R->generator_name(g), k);
    }
    return m;
  };
  auto it = p.terms().begin();
  auto first = to_scaled(it->first, it->second);
  if (!first) return std::nullopt;
  if (p.size() == 1) return std::make_pair(*first, std::optional<Binomial>{});
  ++it;
  auto second = to_scaled(it->first, it->second);
  if (!second) return std::nullopt;
  // s1 T1 + s2 T2 = s1 T1 (1 - (-(s2/s1)) T2/T1)
  ScaledMonomial a = *second * first->inverse();
  a.unit.sign = -a.unit.sign;
  return std::make_pair(*first, std::optional<Binomial>{Binomial{a}});
}

RatFun symmetrize(const RatFun& f, const VarList& vars) {
  std::vector<std::size_t> perm(vars.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<RatFun> images;
  do {
    std::map<std::string, std::string> names;
    for (std::size_t i = 0; i < vars.size(); ++i) names[vars[i]] = vars[perm[i]];
    images.push_back(f.rename(names));
  } while (std::next_permutation(perm.begin(), perm.end()));

  const bool all_factored =
      std::all_of(images.begin(), images.end(), [](const RatFun& r) { return r.factored(); });
  if (!all_factored) {
    RatFun sum(LaurentPoly(f.ring()));
    for (const auto& r : images) sum = sum + r;
    return sum;
  }
  std::map<Binomial, int> lcm;
  for (const auto& r : images)
    for (const auto& [b, k] : count_factors(r.factors())) lcm[b] = std::max(lcm[b], k);
  LaurentPoly num(f.ring());
  for (const auto& r : images) {
    auto cnt = count_factors(r.factors());
    std::vector<Binomial> extra;
    for (const auto& [b, k] : lcm)
      for (int i = cnt.count(b) ? cnt[b] : 0; i < k; ++i) extra.push_back(b);
    num += r.num() * product_of(f.ring(), extra);
  }
  return RatFun(std::move(num), expand_counts(lcm));
}

LaurentPoly as_polynomial(const RatFun& f) {
  if (f.factored() && f.factors().empty()) return f.num();
  throw Error(ErrorCode::NotPolynomial, f.to_string() + " is not a Laurent polynomial");
}

}  // namespace khall
