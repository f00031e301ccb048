#include "khall/distcalc.hpp"

#include <algorithm>
#include <sstream>

#include "khall/error.hpp"

namespace khall {

std::string to_string(Direction d) { return d == Direction::AtInfinity ? "inf" : "zero"; }

namespace {

ScaledMonomial substitute_mono(const ScaledMonomial& m, const std::string& var, const ScaledMonomial& image) {
  const int k = m.mono.degree(var);
  if (k == 0) return m;
  return ScaledMonomial{m.unit, m.mono.without(var)} * image.pow(k);
}

ScaledMonomial apply_res(const ScaledMonomial& m, const std::map<std::string, ScaledMonomial>& res) {
  ScaledMonomial out = m;
  for (const auto& [v, img] : res) out = substitute_mono(out, v, img);
  return out;
}

LaurentPoly apply_res(const LaurentPoly& p, const std::map<std::string, ScaledMonomial>& res) {
  LaurentPoly out = p;
  for (const auto& [v, img] : res) out = out.substitute(v, img);
  return out;
}

// 1 / prod(denom) under the substitution: returns the new factors and the
// monomial prefactor produced by re-orienting them.
std::pair<std::vector<Binomial>, LaurentPoly> substitute_denom(const RingPtr& ring, const std::vector<Binomial>& denom,
                                                                const std::map<std::string, ScaledMonomial>& res) {
  std::vector<Binomial> out;
  LaurentPoly pre = LaurentPoly::constant(ring, 1);
  for (const auto& b : denom) {
    Binomial nb{apply_res(b.a, res)};
    auto [p, ob] = orient(nb);
    if (ob.a.mono.empty() && ob.a.unit.is_one())
      throw Error(ErrorCode::DenominatorVanishes, "denominator factor vanishes on the delta support");
    pre = pre * LaurentPoly::from(ring, p.inverse());
    out.push_back(ob);
  }
  std::sort(out.begin(), out.end());
  return {out, pre};
}

bool mentions(const Binomial& b, const VarList& vars) {
  return std::any_of(vars.begin(), vars.end(), [&](const std::string& v) { return b.involves(v); });
}

LaurentPoly product_of(const RingPtr& ring, const std::vector<Binomial>& factors) {
  LaurentPoly p = LaurentPoly::constant(ring, 1);
  for (const auto& b : factors) p = p * LaurentPoly::from(ring, b);
  return p;
}

// Leading-term ratio num/den as a scaled monomial, if it is one.
std::optional<ScaledMonomial> lead_ratio(const LaurentPoly& num, const LaurentPoly& den) {
  if (num.is_zero() || den.is_zero()) return std::nullopt;
  const VarList all = merge_vars(num.vars(), den.vars());
  const LaurentPoly n = num.with_vars(all), d = den.with_vars(all);
  const auto& [en, cn] = *n.terms().rbegin();
  const auto& [ed, cd] = *d.terms().rbegin();
  if (cn != cd && cn != -cd) return std::nullopt;
  ScaledMonomial a;
  a.unit.sign = cn == cd ? 1 : -1;
  const RingPtr& R = num.ring();
  for (std::size_t i = 0; i < all.size(); ++i)
    if (en[i] != ed[i]) a.mono.powers[all[i]] = en[i] - ed[i];
  for (std::size_t g = 0; g < R->size(); ++g) {
    const int k = en[all.size() + g] - ed[all.size() + g];
    if (k == 0) continue;
    if (!R->invertible(g)) return std::nullopt;
    a.unit.powers[R->generator_name(g)] = k;
  }
  return a;
}

}  // namespace

// ---- Series / expand

RatFun Series::coefficient(int k) const {
  auto pieces = body.split(var);
  auto it = pieces.find(k);
  if (it == pieces.end()) return RatFun(LaurentPoly(body.ring()));
  return RatFun(it->second, carried);
}

namespace {

// Expansion of num / prod(factors) without reducing the fraction first.
Series expand_factored(const LaurentPoly& num, const std::vector<Binomial>& factors, const std::string& var,
                       Direction direction, int order) {
  if (direction == Direction::AtInfinity) {
    std::vector<Binomial> inverted = factors;
    for (auto& b : inverted) {
      auto it = b.a.mono.powers.find(var);
      if (it != b.a.mono.powers.end()) it->second = -it->second;
    }
    Series s = expand_factored(num.invert_var(var), inverted, var, Direction::AtZero, order);
    s.body = s.body.invert_var(var);
    s.direction = Direction::AtInfinity;
    return s;
  }
  const RingPtr& R = num.ring();
  Series s;
  s.var = var;
  s.direction = direction;
  s.order = order;
  s.body = LaurentPoly(R);
  std::vector<Binomial> active;
  for (const auto& b : factors) (b.involves(var) ? active : s.carried).push_back(b);
  if (active.empty()) {
    s.exact = true;
    s.body = num;
    return s;
  }
  const int m_num = num.min_degree(var);
  std::vector<int> low(active.size());
  int sum_low = 0;
  for (std::size_t i = 0; i < active.size(); ++i) {
    const int d = active[i].a.mono.degree(var);
    low[i] = d > 0 ? 0 : -d;
    sum_low += low[i];
  }
  LaurentPoly body = num;
  for (std::size_t i = 0; i < active.size(); ++i) {
    const int d = active[i].a.mono.degree(var);
    const int cap = order - m_num - (sum_low - low[i]);
    // 1/(1-a) = sum_{j>=0} a^j if deg a > 0, else -sum_{j>=1} a^{-j}
    const ScaledMonomial step = d > 0 ? active[i].a : active[i].a.inverse();
    const int e = d > 0 ? d : -d;
    LaurentPoly series(R);
    LaurentPoly power = LaurentPoly::constant(R, 1);
    const LaurentPoly step_poly = LaurentPoly::from(R, step);
    for (int j = 0; j * e <= cap; ++j) {
      if (j > 0 || d > 0) series += d > 0 ? power : -power;
      power = power * step_poly;
    }
    body = LaurentPoly::multiply_truncated(body, series, var, order);
    if (body.is_zero()) break;
  }
  s.body = body;
  return s;
}

}  // namespace

Series expand(const RatFun& f, const std::string& var, Direction direction, int order) {
  if (!f.factored())
    throw Error(ErrorCode::UnfactoredDenominator, "denominator " + f.den().to_string() + " is not a product of binomials");
  return expand_factored(f.num(), f.factors(), var, direction, order);
}

// ---- DeltaFactor

DeltaFactor DeltaFactor::from_argument(const ScaledMonomial& m) {
  for (const auto& [v, e] : m.mono.powers)
    if (e == 1) return with_var(m, v);
  for (const auto& [v, e] : m.mono.powers)
    if (e == -1) return with_var(m, v);
  if (m.mono.empty()) throw Error(ErrorCode::DeltaSquare, "delta of the constant " + m.to_string());
  throw Error(ErrorCode::UsageError, "delta argument " + m.to_string() + " has no variable of degree +-1");
}

DeltaFactor DeltaFactor::with_var(const ScaledMonomial& m, const std::string& var) {
  const int e = m.mono.degree(var);
  if (e != 1 && e != -1) throw Error(ErrorCode::UsageError, "delta argument " + m.to_string() + " is not linear in " + var);
  const ScaledMonomial oriented = e == 1 ? m : m.inverse();
  // oriented = var * r  =>  delta(var / r^{-1})
  ScaledMonomial r{oriented.unit, oriented.mono.without(var)};
  return DeltaFactor{var, r.inverse()};
}

ScaledMonomial DeltaFactor::argument() const { return ScaledMonomial::var(var) * image.inverse(); }

std::string DeltaFactor::to_string() const { return "delta(" + argument().to_string() + ")"; }

std::map<std::string, ScaledMonomial> DistTerm::resolution() const {
  std::map<std::string, ScaledMonomial> res;
  for (const auto& d : deltas) {
    const ScaledMonomial img = apply_res(d.image, res);
    for (auto& [v, m] : res) m = substitute_mono(m, d.var, img);
    res[d.var] = img;
  }
  return res;
}

namespace {

void attach_delta(DistTerm& t, const DeltaFactor& d) {
  const auto res = t.resolution();
  const ScaledMonomial m = apply_res(d.argument(), res);
  if (m.mono.empty())
    throw Error(ErrorCode::DeltaSquare, "delta(" + d.argument().to_string() + ") repeats a delta already present");
  const int e = m.mono.degree(d.var);
  const DeltaFactor nd = (e == 1 || e == -1) ? DeltaFactor::with_var(m, d.var) : DeltaFactor::from_argument(m);
  if (nd.image.mono.empty() && !t.exact && t.tail.involves(nd.var))
    throw Error(ErrorCode::IncompatibleTruncation, "evaluating a truncated series at a point");
  t.tail = t.tail.substitute(nd.var, nd.image);
  auto [den, pre] = substitute_denom(t.tail.ring(), t.denom, {{nd.var, nd.image}});
  t.denom = std::move(den);
  t.tail = t.tail * pre;
  if (!t.exact) t.order -= pre.max_abs_degree();
  t.deltas.push_back(nd);
}

DistTerm multiply_terms(const DistTerm& a, const DistTerm& b) {
  DistTerm t = a;
  for (const auto& d : b.deltas) attach_delta(t, d);
  const auto res = t.resolution();
  if (!b.exact) {
    for (const auto& [v, img] : res)
      if (img.mono.empty() && b.tail.involves(v))
        throw Error(ErrorCode::IncompatibleTruncation, "evaluating a truncated series at a point");
  }
  const LaurentPoly btail = apply_res(b.tail, res);
  auto [bden, pre] = substitute_denom(t.tail.ring(), b.denom, res);
  if (!t.exact && !b.exact)
    throw Error(ErrorCode::IncompatibleTruncation, "product of two truncated two-sided series");
  if (!t.exact) t.order -= btail.max_abs_degree() + pre.max_abs_degree();
  else if (!b.exact) {
    t.order = b.order - t.tail.max_abs_degree() - pre.max_abs_degree();
    t.exact = false;
  }
  t.tail = t.tail * btail * pre;
  t.denom.insert(t.denom.end(), bden.begin(), bden.end());
  std::sort(t.denom.begin(), t.denom.end());
  return t;
}

}  // namespace

// ---- FormalDist

FormalDist FormalDist::delta(RingPtr ring, const ScaledMonomial& argument) {
  DistTerm t;
  t.deltas.push_back(DeltaFactor::from_argument(argument));
  t.tail = LaurentPoly::constant(ring, 1);
  return from_term(std::move(ring), std::move(t));
}

FormalDist FormalDist::from_poly(const LaurentPoly& p) {
  DistTerm t;
  t.tail = p;
  return from_term(p.ring(), std::move(t));
}

FormalDist FormalDist::from_term(RingPtr ring, DistTerm term) {
  FormalDist d(std::move(ring));
  d.add_term(std::move(term));
  return d;
}

VarList FormalDist::vars() const {
  VarList v;
  for (const auto& t : terms_) {
    v = merge_vars(v, t.tail.compact().vars());
    for (const auto& d : t.deltas) {
      v = merge_vars(v, {d.var});
      for (const auto& [n, e] : d.image.mono.powers) v = merge_vars(v, {n});
    }
  }
  return v;
}

void FormalDist::add_term(DistTerm t) {
  require_same_ring(ring_, t.tail.ring());
  if (t.tail.is_zero()) return;
  for (auto it = terms_.begin(); it != terms_.end(); ++it) {
    if (it->deltas == t.deltas && it->denom == t.denom && it->exact == t.exact) {
      it->tail += t.tail;
      it->order = std::min(it->order, t.order);
      if (it->tail.is_zero()) terms_.erase(it);
      return;
    }
  }
  terms_.push_back(std::move(t));
}

FormalDist FormalDist::operator-() const {
  FormalDist d = *this;
  for (auto& t : d.terms_) t.tail = -t.tail;
  return d;
}

FormalDist operator+(const FormalDist& a, const FormalDist& b) {
  require_same_ring(a.ring_, b.ring_);
  FormalDist d = a;
  for (const auto& t : b.terms_) d.add_term(t);
  return d;
}

FormalDist FormalDist::scaled(const RingElement& c) const {
  FormalDist d(ring_);
  for (const auto& t : terms_) {
    DistTerm s;
    s.deltas = t.deltas;
    s.tail = t.tail * c;
    s.exact = t.exact;
    s.order = t.order;
    s.denom = t.denom;
    d.add_term(std::move(s));
  }
  return d;
}

std::pair<LaurentPoly, std::vector<Binomial>> FormalDist::dense(int window) const {
  const VarList all = vars();
  std::map<Binomial, int> lcm;
  for (const auto& t : terms_) {
    std::map<Binomial, int> cnt;
    for (const auto& b : t.denom) ++cnt[b];
    for (const auto& [b, k] : cnt) lcm[b] = std::max(lcm[b], k);
  }
  std::vector<Binomial> common;
  for (const auto& [b, k] : lcm)
    for (int i = 0; i < k; ++i) common.push_back(b);

  LaurentPoly total(ring_, all);
  for (const auto& t : terms_) {
    std::map<Binomial, int> cnt;
    for (const auto& b : t.denom) ++cnt[b];
    std::vector<Binomial> extra;
    for (const auto& [b, k] : lcm)
      for (int i = cnt.count(b) ? cnt[b] : 0; i < k; ++i) extra.push_back(b);
    const LaurentPoly mult = product_of(ring_, extra);
    const int shift = mult.max_abs_degree();
    const int w = window + shift;
    const int radius = w * (1 + static_cast<int>(t.deltas.size()));
    LaurentPoly tail = t.tail;
    if (!t.exact) {
      const int need = t.deltas.empty() ? w : radius;
      if (t.order < need)
        throw Error(ErrorCode::IncompatibleTruncation,
                    "tail known to order " + std::to_string(t.order) + ", window needs " + std::to_string(need));
      tail = tail.restrict_window(tail.vars(), t.order);
    }
    LaurentPoly acc = tail;
    for (std::size_t i = 0; i < t.deltas.size(); ++i) {
      const ScaledMonomial arg = t.deltas[i].argument();
      LaurentPoly sum(ring_);
      for (int k = -radius; k <= radius; ++k) sum += LaurentPoly::from(ring_, arg.pow(k));
      acc = i + 1 == t.deltas.size() ? LaurentPoly::multiply_window(acc, sum, w) : acc * sum;
    }
    acc = acc.restrict_window(acc.vars(), w);
    total += acc * mult;
  }
  total = total.restrict_window(total.vars(), window).compact();
  return {total, common};
}

FormalDist FormalDist::densify(int window) const {
  auto [num, den] = dense(window);
  DistTerm t;
  t.tail = num;
  t.exact = false;
  t.order = window;
  t.denom = den;
  return from_term(ring_, std::move(t));
}

RatFun dist_coefficient(const FormalDist& d, const Monomial& m, int window) {
  auto [num, den] = d.dense(window);
  return RatFun(LaurentPoly::constant(num.coefficient(m)), den);
}

bool window_equal(const FormalDist& a, const FormalDist& b, int window) {
  return (a - b).dense(window).first.is_zero();
}

std::string FormalDist::to_string() const {
  if (terms_.empty()) return "0";
  std::vector<std::pair<std::string, std::string>> parts;
  for (const auto& t : terms_) {
    std::string key, s;
    for (const auto& d : t.deltas) key += (key.empty() ? "" : "*") + d.to_string();
    s = key;
    std::string tail = t.tail.to_string();
    if (!t.exact) tail += " + O(" + std::to_string(t.order + 1) + ")";
    if (!(t.exact && tail == "1" && !key.empty())) s += (s.empty() ? "" : "*") + ("(" + tail + ")");
    if (!t.denom.empty()) {
      std::string den;
      for (const auto& b : t.denom) den += (den.empty() ? "" : "*") + b.to_string();
      s += "/(" + den + ")";
    }
    parts.emplace_back(key, s);
  }
  std::stable_sort(parts.begin(), parts.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  std::string out;
  for (const auto& [k, s] : parts) out += (out.empty() ? "" : " + ") + s;
  return out;
}

namespace {

nlohmann::json coefficient_map(const LaurentPoly& p) {
  nlohmann::json arr = nlohmann::json::array();
  const auto groups = p.coefficients();
  for (auto it = groups.rbegin(); it != groups.rend(); ++it) {
    nlohmann::json exps = nlohmann::json::object();
    for (std::size_t i = 0; i < p.vars().size(); ++i)
      if (it->first[i] != 0) exps[p.vars()[i]] = it->first[i];
    arr.push_back({{"exponents", exps}, {"coefficient", it->second.to_string()}});
  }
  return arr;
}

nlohmann::json binomials_json(const std::vector<Binomial>& bs) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& b : bs) arr.push_back(b.to_string());
  return arr;
}

}  // namespace

nlohmann::json FormalDist::to_json(int window) const {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : terms_) {
    nlohmann::json deltas = nlohmann::json::array();
    for (const auto& d : t.deltas) deltas.push_back(d.argument().to_string());
    nlohmann::json j{{"deltas", deltas}, {"exact", t.exact}, {"tail", coefficient_map(t.tail)},
                     {"denominator", binomials_json(t.denom)}};
    if (!t.exact) j["order"] = t.order;
    terms.push_back(j);
  }
  auto [num, den] = dense(window);
  return {{"window", window},
          {"terms", terms},
          {"dense", {{"numerator", coefficient_map(num)}, {"denominator", binomials_json(den)}}}};
}

// ---- expansion operators

FormalDist two_sided(const RatFun& f, const std::string& var, int order, bool canonicalize) {
  const RingPtr& R = f.ring();
  const Series inf = expand(f, var, Direction::AtInfinity, order);
  const Series zero = expand(f, var, Direction::AtZero, order);
  FormalDist out(R);
  if (inf.exact) return out;
  const LaurentPoly diff = inf.window(order) - zero.window(order);
  if (diff.is_zero()) return out;
  if (canonicalize) {
    const auto pieces = diff.split(var);
    bool full = static_cast<int>(pieces.size()) == 2 * order + 1 && pieces.begin()->first == -order;
    if (full && order >= 1) {
      const LaurentPoly& t0 = pieces.at(0);
      if (auto a = lead_ratio(pieces.at(1), t0)) {
        bool match = true;
        for (const auto& [k, tk] : pieces) {
          if (tk != t0 * LaurentPoly::from(R, a->pow(k))) {
            match = false;
            break;
          }
        }
        if (match) {
          DistTerm t;
          t.tail = LaurentPoly::constant(R, 1);
          t.denom = zero.carried;
          // sum_k t0 a^k var^k = t0 * delta(a var)
          attach_delta(t, DeltaFactor::with_var(ScaledMonomial::var(var) * *a, var));
          FormalDist d = FormalDist::from_term(R, std::move(t));
          return dist_mul(d, FormalDist::from_poly(t0));
        }
      }
    }
  }
  DistTerm t;
  t.tail = diff;
  t.exact = false;
  t.order = order;
  t.denom = zero.carried;
  return FormalDist::from_term(R, std::move(t));
}

FormalDist two_sided(const FormalDist& d, const std::string& var, int order) {
  FormalDist out(d.ring());
  for (const auto& t : d.terms()) {
    if (std::none_of(t.denom.begin(), t.denom.end(), [&](const Binomial& b) { return b.involves(var); })) continue;
    if (!t.exact) throw Error(ErrorCode::IncompatibleTruncation, "two-sided expansion of a truncated tail");
    DistTerm head;
    head.deltas = t.deltas;
    head.tail = LaurentPoly::constant(d.ring(), 1);
    const FormalDist inner = two_sided(RatFun(t.tail, t.denom), var, order);
    out = out + dist_mul(FormalDist::from_term(d.ring(), head), inner);
  }
  return out;
}

FormalDist dist_mul(const FormalDist& d, const RatFun& g) {
  require_same_ring(d.ring(), g.ring());
  FormalDist out(d.ring());
  for (const auto& t : d.terms()) {
    RatFun h = g;
    for (const auto& [v, img] : t.resolution()) h = h.substitute(v, img);
    if (!h.factored()) throw Error(ErrorCode::NotPolynomial, h.to_string() + " on the delta support");
    VarList used = t.tail.compact().vars();
    for (const auto& dl : t.deltas) {
      used = merge_vars(used, {dl.var});
      for (const auto& [n, e] : dl.image.mono.powers) used = merge_vars(used, {n});
    }
    for (const auto& b : h.factors())
      if (mentions(b, used))
        throw Error(ErrorCode::NotPolynomial,
                    h.to_string() + " is not a Laurent polynomial on the delta support; pass its expansion");
    DistTerm hd;
    hd.tail = h.num();
    hd.denom = h.factors();
    out = out + FormalDist::from_term(d.ring(), multiply_terms(t, hd));
  }
  return out;
}

FormalDist dist_mul(const FormalDist& d, const Series& s) {
  if (s.exact) return dist_mul(d, RatFun(s.body, s.carried));
  FormalDist out(d.ring());
  for (const auto& t : d.terms()) {
    DistTerm st;
    st.tail = s.body;
    st.exact = false;
    st.order = s.order;
    st.denom = s.carried;
    out = out + FormalDist::from_term(d.ring(), multiply_terms(t, st));
  }
  return out;
}

FormalDist dist_mul(const FormalDist& a, const FormalDist& b) {
  require_same_ring(a.ring(), b.ring());
  FormalDist out(a.ring());
  for (const auto& ta : a.terms())
    for (const auto& tb : b.terms()) out = out + FormalDist::from_term(a.ring(), multiply_terms(ta, tb));
  return out;
}

FormalDist ordered_double_expand(const RatFun& f, const std::string& first, const std::string& second, int order) {
  const RingPtr& R = f.ring();
  const Series inf = expand(f, first, Direction::AtInfinity, order);
  const Series zero = expand(f, first, Direction::AtZero, order);
  FormalDist out(R);
  if (inf.exact) return out;
  const LaurentPoly body = inf.window(order) - zero.window(order);
  if (body.is_zero()) return out;
  const Series inf2 = expand_factored(body, zero.carried, second, Direction::AtInfinity, order);
  const Series zero2 = expand_factored(body, zero.carried, second, Direction::AtZero, order);
  if (inf2.exact) return out;
  DistTerm t;
  t.tail = (inf2.window(order) - zero2.window(order)).restrict_window({first}, order);
  t.exact = false;
  t.order = order;
  t.denom = zero2.carried;
  return FormalDist::from_term(R, std::move(t));
}

FormalDist exchange_defect(const RatFun& f, const RatFun& g, const UnitMonomial& alpha, int order, const std::string& x,
                           const std::string& y) {
  const RingPtr& R = f.ring();
  const ScaledMonomial ax{alpha, Monomial::var(x)};
  const RatFun h = f * g.substitute(y, ax);
  const FormalDist inner = two_sided(h, x, 2 * order);
  DistTerm head;
  head.deltas.push_back(DeltaFactor::with_var(ScaledMonomial::var(y) * ax.inverse(), y));
  head.tail = LaurentPoly::constant(R, 1);
  const FormalDist d = dist_mul(FormalDist::from_term(R, head), inner);
  return d.scaled((-alpha.inverse()).to_element(R));
}

RatFun exchange_kernel(const RatFun& f, const RatFun& g, const UnitMonomial& alpha, const std::string& x,
                       const std::string& y) {
  const RingPtr& R = f.ring();
  // 1/(y/x - alpha) = (x/y) / (1 - alpha x/y)
  const ScaledMonomial x_over_y = ScaledMonomial::var(x) * ScaledMonomial::var(y, -1);
  return f * g * RatFun(LaurentPoly::from(R, x_over_y), {Binomial{ScaledMonomial{alpha, x_over_y.mono}}});
}

}  // namespace khall
