#include "khall/hall.hpp"

#include <algorithm>

#include "khall/error.hpp"

namespace khall {

DiagonalAlgebra::DiagonalAlgebra(const RingPresentation& base, const std::vector<std::string>& tagged, int copies,
                                 std::string symbol)
    : symbol_(std::move(symbol)), tagged_(tagged), copies_(copies) {
  RingPresentation p = base;
  DiagonalRule rule{symbol_, {}};
  for (int c = 1; c <= copies; ++c) {
    for (const auto& g : tagged) {
      auto spec = std::find_if(base.generators.begin(), base.generators.end(),
                               [&](const GeneratorSpec& s) { return s.name == g; });
      if (spec == base.generators.end()) throw Error(ErrorCode::UnknownGenerator, g);
      const std::string copy = g + "_" + std::to_string(c);
      p.generators.push_back({copy, spec->invertible});
      for (const auto& rel : base.relations)
        if (rel.generator == g) p.relations.push_back({copy, rel.coefficients});
      rule.merge.emplace_back(copy, g);
    }
  }
  p.generators.push_back({symbol_, false});
  p.diagonal = std::move(rule);
  p.label = base.label + "[" + symbol_ + "]";
  ring_ = make_ring(std::move(p));
}

std::map<std::string, std::string> DiagonalAlgebra::tag_map(int copy) const {
  if (copy < 1 || copy > copies_) throw Error(ErrorCode::UsageError, "no tagged copy " + std::to_string(copy));
  std::map<std::string, std::string> m;
  for (const auto& g : tagged_) m[g] = g + "_" + std::to_string(copy);
  return m;
}

UnitMonomial DiagonalAlgebra::tag(const UnitMonomial& u, int copy) const {
  const auto names = tag_map(copy);
  UnitMonomial out;
  out.sign = u.sign;
  for (const auto& [g, e] : u.powers) {
    auto it = names.find(g);
    out.powers[it == names.end() ? g : it->second] += e;
  }
  return out;
}

LaurentPoly DiagonalAlgebra::drop_diagonal(const LaurentPoly& p) const {
  require_same_ring(p.ring(), ring_);
  const std::size_t slot = p.nvars() + *ring_->diagonal_index();
  TermMap kept;
  for (const auto& [e, c] : p.terms())
    if (e[slot] == 0) kept.emplace(e, c);
  return LaurentPoly::from_terms(ring_, p.vars(), std::move(kept)).compact();
}

RatFun DiagonalAlgebra::drop_diagonal(const RatFun& f) const {
  if (!f.factored()) throw Error(ErrorCode::UnfactoredDenominator, f.to_string());
  return RatFun(drop_diagonal(f.num()), f.factors());
}

namespace {

std::vector<std::string> unit_names(int r) {
  std::vector<std::string> names;
  for (int i = 1; i <= r; ++i) names.push_back("f" + std::to_string(i));
  return names;
}

RingPresentation base_presentation(const std::string& preset, const std::vector<std::string>& units) {
  RingPresentation p;
  if (preset == "free") {
    p = presets::integers()->presentation();
    p.generators.push_back({"q", true});
  } else if (preset == "p2") {
    p = presets::projective_plane()->presentation();
  } else {
    throw Error(ErrorCode::UsageError, "ring must be free or p2, got " + preset);
  }
  for (const auto& u : units) p.generators.push_back({u, true});
  return p;
}

std::vector<std::string> tagged_names(const std::string& preset, const std::vector<std::string>& units) {
  std::vector<std::string> t = units;
  t.push_back(preset == "free" ? "q" : "t");
  return t;
}

UnitMonomial canonical_q(const std::string& preset) {
  return preset == "free" ? UnitMonomial::generator("q") : UnitMonomial::generator("t", -3);
}

RingElement el(const HeckeSetup& s, const UnitMonomial& u) { return u.to_element(s.algebra.ring()); }

}  // namespace

HeckeSetup HeckeSetup::split(int r, const std::string& ring_preset, int order) {
  if (r < 1) throw Error(ErrorCode::UsageError, "rank must be positive");
  KClass F = KClass::trivial(-r);
  for (const auto& u : unit_names(r)) F = F + KClass::line(UnitMonomial::generator(u));
  return custom(F, unit_names(r), ring_preset, order);
}

HeckeSetup HeckeSetup::custom(const KClass& F, const std::vector<std::string>& units, const std::string& ring_preset,
                              int order) {
  if (order < 1) throw Error(ErrorCode::UsageError, "order must be positive");
  DiagonalAlgebra alg(base_presentation(ring_preset, units), tagged_names(ring_preset, units), 2);
  return HeckeSetup{ring_preset, F, canonical_q(ring_preset), order, std::move(alg)};
}

RatFun xi_S(const ScaledMonomial& arg, const HeckeSetup& s) {
  const RingPtr& R = s.algebra.ring();
  const ScaledMonomial qx = ScaledMonomial{s.q, {}} * arg;
  LaurentPoly num = LaurentPoly::from(R, Binomial{arg}) * LaurentPoly::from(R, Binomial{qx}) +
                    LaurentPoly::from(R, arg) * s.algebra.diagonal();
  return RatFun(std::move(num), {Binomial{arg}, Binomial{qx}});
}

std::vector<UnitMonomial> xi_poles(const HeckeSetup& s) { return {UnitMonomial::one(), s.q.inverse()}; }

RatFun kernel_w_factor(const HeckeSetup& s) {
  const ScaledMonomial arg{s.algebra.tag(s.q, 1).inverse(), Monomial::var("w", -1)};
  return wedge_series(s.algebra.ring(), s.algebra.tag(s.F, 1), arg);
}

RatFun kernel_z_factor(const HeckeSetup& s) {
  return wedge_series(s.algebra.ring(), -s.algebra.tag(s.I_shift(), 2), ScaledMonomial::var("z", -1));
}

RatFun hecke_kernel(const HeckeSetup& s) {
  const ScaledMonomial w_over_z{{}, Monomial::var("w") * Monomial::var("z", -1)};
  return kernel_w_factor(s) * kernel_z_factor(s) * xi_S(w_over_z, s);
}

RatFun h_function(const HeckeSetup& s) {
  const KClass k = KClass::trivial() + s.F.twist(s.q.inverse()) - s.F;
  return wedge_series(s.algebra.ring(), k, ScaledMonomial::var("z", -1));
}

CommutatorParts commutator_parts(const HeckeSetup& s) {
  // xi - 1 = D/(1-q) [-1/(x-1) + q^-1/(x-q^-1)] at x = w/z; the separable
  // factors have no pole in w/z, so only these two terms change under
  // reordering. Multiplying by q - 1 turns D/(1-q) into -D.
  // Both terms carry D, so the tagged copies may be identified before
  // expanding; this keeps the coefficient rings small.
  const RingPtr& R = s.algebra.ring();
  const RatFun B = wedge_series(R, -s.I_shift(), ScaledMonomial::var("z", -1));
  const RatFun A = wedge_series(R, s.F, ScaledMonomial{s.q.inverse(), Monomial::var("w", -1)});
  const RingElement D = s.algebra.diagonal();
  const FormalDist at_one = exchange_defect(B, A, UnitMonomial::one(), s.order, "z", "w");
  const FormalDist at_q = exchange_defect(B, A, s.q.inverse(), s.order, "z", "w");
  return {at_one.scaled(-D), at_q.scaled(D * el(s, s.q.inverse()))};
}

namespace {

FormalDist over_q_minus_one(const FormalDist& d, const HeckeSetup& s) {
  const RatFun inv = RatFun(LaurentPoly::constant(s.algebra.ring(), -1), {Binomial{{s.q, {}}}});
  return dist_mul(d, inv);
}

RingElement q_minus_one(const HeckeSetup& s) { return el(s, s.q) - RingElement::constant(s.algebra.ring(), 1); }

}  // namespace

FormalDist commutator_dist(const HeckeSetup& s) { return over_q_minus_one(commutator_parts(s).cleared(), s); }

FormalDist rho_cleared(const HeckeSetup& s) {
  const RingPtr& R = s.algebra.ring();
  const FormalDist tail = two_sided(h_function(s), "z", 2 * s.order);
  const ScaledMonomial w_over_z{{}, Monomial::var("w") * Monomial::var("z", -1)};
  return dist_mul(FormalDist::delta(R, w_over_z), tail).scaled(s.algebra.diagonal());
}

FormalDist rho(const HeckeSetup& s) { return over_q_minus_one(rho_cleared(s), s); }

FormalDist double_expansion_oracle_cleared(const HeckeSetup& s) {
  const RatFun k = hecke_kernel(s);
  const FormalDist w_first = ordered_double_expand(k, "w", "z", s.order);
  const FormalDist z_first = ordered_double_expand(k, "z", "w", s.order);
  return (w_first - z_first).scaled(q_minus_one(s));
}

namespace {

using Window = std::pair<LaurentPoly, std::vector<Binomial>>;

ConstantTerm constant_term_of(const Window& rc, const HeckeSetup& s) {
  const RingPtr& R = s.algebra.ring();
  const RatFun coefficient(LaurentPoly::constant(rc.first.coefficient(Monomial{})), rc.second);
  const auto c = as_polynomial(coefficient).as_constant();
  ConstantTerm t{c ? *c : RingElement(R), std::nullopt, s.algebra.diagonal() * s.F.dual().character(R), 0};
  const RingElement qm1 = q_minus_one(s);
  try {
    t.value = t.cleared.divide_exact(qm1);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotDivisible) throw;
  }
  for (int sign : {1, -1}) {
    const RingElement target = sign == 1 ? t.expected : -t.expected;
    const bool fits = t.value ? *t.value == target : t.cleared == qm1 * target;
    if (fits) {
      t.sign = sign;
      break;
    }
  }
  return t;
}

}  // namespace

ConstantTerm constant_term(const HeckeSetup& s) { return constant_term_of(rho_cleared(s).dense(s.order), s); }

WeylRank weyl_rank_check(const ChiTable& surface, int d) {
  if (d < 1) throw Error(ErrorCode::UsageError, "d must be positive");
  if (surface.ring_preset != "P2") throw Error(ErrorCode::UsageError, "rank check is set up on P2 only");
  const RingPtr R = presets::projective_plane();
  const UnitMonomial t = UnitMonomial::generator("t");
  const RingElement one = RingElement::constant(R, 1);
  const RingElement e2 = one - t.inverse().to_element(R);
  const RingElement omega = t.pow(-3).to_element(R);
  const KClass F = KClass::trivial() - KClass::line(t.pow(-d));
  WeylRank w;
  w.d = d;
  w.raw = chi_integer(surface, one * e2 * omega * F.dual().character(R));
  w.absolute = abs(w.raw);
  w.pass = w.absolute == d;
  return w;
}

bool DerivationReport::pass() const {
  return !stages.empty() && std::all_of(stages.begin(), stages.end(), [](const Stage& s) { return s.pass; });
}

nlohmann::json DerivationReport::to_json() const {
  nlohmann::json st = nlohmann::json::array();
  for (const auto& s : stages) st.push_back({{"name", s.name}, {"pass", s.pass}, {"detail", s.detail}});
  nlohmann::json rho = nlohmann::json::array();
  for (const auto& [k, c] : rho_cleared) rho.push_back({{"z", k}, {"value", c}});
  return {{"schema", kDerivationSchema},
          {"ring", ring_preset},
          {"rank", rank},
          {"order", order},
          {"F", F},
          {"stages", st},
          {"rho_cleared", rho},
          {"constant_term", {{"value", constant_term}, {"sign", sign}}},
          {"pass", pass()}};
}

namespace {

bool only_var(const LaurentPoly& p, const std::string& var) {
  const VarList v = p.compact().vars();
  return v.empty() || (v.size() == 1 && v[0] == var);
}

// Window comparison reusing already computed dense forms.
bool same_window(const FormalDist& a, const Window& wa, const FormalDist& b, const Window& wb, int order) {
  if (wa.second == wb.second) return wa.first == wb.first;
  return window_equal(a, b, order);
}

}  // namespace

DerivationReport derive(const HeckeSetup& s, DerivationArtifacts* keep) {
  DerivationReport r;
  r.ring_preset = s.ring_preset;
  r.rank = s.plus_count();
  r.order = s.order;
  r.F = s.F.to_string();
  const RingPtr& R = s.algebra.ring();
  const std::string window = "|exponent| <= " + std::to_string(s.order);
  auto stage = [&](std::string name, bool pass, std::string detail) {
    r.stages.push_back({std::move(name), pass, std::move(detail)});
  };

  {
    const ScaledMonomial x{{}, Monomial::var("w") * Monomial::var("z", -1)};
    const RatFun cleared = (xi_S(x, s) - RatFun(LaurentPoly::constant(R, 1))) *
                           RatFun(LaurentPoly::from(R, Binomial{x}) *
                                  LaurentPoly::from(R, Binomial{ScaledMonomial{s.q, {}} * x}));
    stage("xi_clearing", cleared == RatFun(LaurentPoly::from(R, x) * s.algebra.diagonal()),
          "(1 - x)(1 - qx)(xi(x) - 1) = D x");
  }
  {
    const RatFun k = hecke_kernel(s);
    stage("kernel_separable", s.algebra.drop_diagonal(k) == kernel_w_factor(s) * kernel_z_factor(s),
          "kernel at D = 0 is the product of its w- and z-factors");
  }

  const CommutatorParts parts = commutator_parts(s);
  const FormalDist rc = rho_cleared(s);
  const FormalDist cleared = parts.cleared();
  const Window w_one = parts.at_one.dense(s.order);
  const Window w_q = parts.at_q_inv.dense(s.order);
  const Window w_rc = rc.dense(s.order);
  for (int k = -2; k <= 2; ++k)
    r.rho_cleared.emplace_back(k, dist_coefficient(rc, Monomial::var("z", k), s.order).to_string());
  const Window w_cleared =
      w_one.second == w_q.second ? Window{w_one.first + w_q.first, w_one.second} : cleared.dense(s.order);
  const FormalDist oracle = double_expansion_oracle_cleared(s);
  const Window w_oracle = oracle.dense(s.order);

  stage("wq_term_vanishes", w_q.first.is_zero(), "delta(wq/z) component on " + window);
  stage("delta_w_z_part_equals_rho", same_window(parts.at_one, w_one, rc, w_rc, s.order), window);
  stage("commutator_equals_rho", same_window(cleared, w_cleared, rc, w_rc, s.order),
        window + ", both multiplied by q - 1");
  stage("double_expansion_oracle", same_window(cleared, w_cleared, oracle, w_oracle, s.order),
        "w-first minus z-first expansion of the kernel on " + window + ", multiplied by q - 1");

  {
    std::optional<LaurentPoly> q;
    bool applicable = true;
    try {
      q = w_rc.first.divide_exact(LaurentPoly::constant(q_minus_one(s)));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotDivisible) throw;
      applicable = false;
    }
    if (applicable)
      stage("q_minus_1_divisibility", q.has_value(), "numerator of (q - 1) rho on " + window);
    else
      stage("q_minus_1_divisibility", true, "not applicable: q - 1 is a zero divisor in " + R->label());
  }
  {
    bool ok = true;
    for (const auto& t : rc.terms()) {
      ok = ok && t.deltas.size() == 1 && t.deltas[0].var == "w" &&
           t.deltas[0].image == ScaledMonomial::var("z") && only_var(t.tail, "z");
    }
    stage("degree_structure", ok, "every term is delta(w/z) times a series in z");
  }
  {
    const ConstantTerm c = constant_term_of(w_rc, s);
    if (keep) keep->constant = c;
    r.sign = c.sign;
    r.constant_term = c.value ? c.value->to_string() : "(" + c.cleared.to_string() + ")/(q - 1)";
    const std::string how = c.value ? "exact division by q - 1" : "compared after multiplying by q - 1";
    stage("constant_term", c.sign != 0,
          "z^0 w^0 coefficient = " + std::to_string(c.sign) + " * D * ch(F^dual), " + how);
  }
  if (keep) {
    keep->commutator_cleared = cleared;
    keep->rho_cleared = rc;
    keep->oracle_cleared = oracle;
  }
  return r;
}

}  // namespace khall
