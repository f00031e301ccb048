#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "khall/error.hpp"
#include "khall/expr.hpp"
#include "khall/hall.hpp"
#include "khall/shuffle.hpp"

using namespace khall;
using nlohmann::json;

namespace {

constexpr const char* kReportSchema = "khall.report/1";

struct Settings {
  std::string ring = "free";
  int order = 8;
  bool json = false;
  unsigned seed = 1;
};

struct Outcome {
  json payload;
  std::string text;
  std::optional<bool> pass;
};

Value evaluate(const std::string& text, const RingPtr& base, int order) {
  const ExprPtr e = parse_expr(text);
  return lower(*e, ring_for(*e, base), order);
}

RatFun function_of(const std::string& text, const RingPtr& base, int order) {
  const Value v = evaluate(text, base, order);
  if (const auto* f = std::get_if<RatFun>(&v)) return *f;
  throw Error(ErrorCode::UsageError, "\"" + text + "\" is a " + value_kind(v) + ", expected a rational function");
}

LaurentPoly polynomial_of(const RatFun& f) {
  if (!f.factored() || !f.factors().empty()) throw Error(ErrorCode::NotPolynomial, f.to_string());
  return f.num();
}

UnitMonomial unit_of(const std::string& text) {
  const Value v = evaluate("K[+" + text + "]", presets::integers(), 0);
  const KClass& k = std::get<KClass>(v);
  if (k.plus().size() != 1 || !k.minus().empty())
    throw Error(ErrorCode::UsageError, "\"" + text + "\" is not a unit monomial");
  return k.plus()[0];
}

std::string list(const std::vector<std::string>& items) {
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + items[i];
  return out + "]";
}

int var_degree(const LaurentPoly& p, const Exponents& e, const std::string& var) {
  return p.monomial_of(e).degree(var);
}

Outcome run_eval(const Settings& s, const std::string& text) {
  const Value v = evaluate(text, parse_ring(s.ring), s.order);
  Outcome o;
  o.text = value_to_string(v);
  o.payload = {{"input", text}, {"kind", value_kind(v)}, {"value", o.text}};
  if (const auto* d = std::get_if<FormalDist>(&v)) o.payload["window"] = d->to_json(s.order);
  return o;
}

Outcome run_expand(const Settings& s, const std::string& text, const std::string& var, const std::string& at) {
  const RatFun f = function_of(text, parse_ring(s.ring), s.order);
  const int N = s.order;
  std::vector<std::pair<int, RatFun>> coeffs;
  Outcome o;
  if (at == "both") {
    const Series inf = expand(f, var, Direction::AtInfinity, N);
    const Series zero = expand(f, var, Direction::AtZero, N);
    for (int k = -N; k <= N; ++k) coeffs.emplace_back(k, inf.coefficient(k) - zero.coefficient(k));
    o.payload["distribution"] = two_sided(f, var, N).to_string();
  } else {
    const Direction dir = at == "zero" ? Direction::AtZero : Direction::AtInfinity;
    const Series series = expand(f, var, dir, N);
    int lo = 0;
    int hi = 0;
    bool first = true;
    for (const auto& [e, c] : series.body.coefficients()) {
      const int k = var_degree(series.body, e, var);
      lo = first ? k : std::min(lo, k);
      hi = first ? k : std::max(hi, k);
      first = false;
    }
    if (dir == Direction::AtZero) {
      for (int k = std::min(lo, N + 1); k <= N; ++k) coeffs.emplace_back(k, series.coefficient(k));
    } else {
      for (int k = std::max(hi, -N - 1); k >= -N; --k) coeffs.emplace_back(k, series.coefficient(k));
    }
  }
  std::vector<std::string> items;
  json jc = json::array();
  for (const auto& [k, c] : coeffs) {
    items.push_back(c.to_string());
    jc.push_back({{"k", k}, {"value", items.back()}});
  }
  o.payload.update({{"input", text}, {"var", var}, {"at", at}, {"coefficients", jc}});
  o.text = list(items);
  if (o.payload.contains("distribution")) o.text += "\n" + o.payload["distribution"].get<std::string>();
  return o;
}

int default_degree(const LaurentPoly& p) {
  int n = 1;
  const LaurentPoly c = p.compact();
  for (const auto& v : c.vars())
    if (v.size() > 1 && v[0] == 'z') n = std::max(n, std::stoi(v.substr(1)));
  return n;
}

Outcome run_shuffle(const Settings& s, const std::string& a, const std::string& b, std::vector<int> degrees) {
  const LaurentPoly pa = polynomial_of(function_of(a, presets::integers(), s.order));
  const LaurentPoly pb = polynomial_of(function_of(b, presets::integers(), s.order));
  if (degrees.empty()) degrees = {default_degree(pa), default_degree(pb)};
  if (degrees.size() != 2) throw Error(ErrorCode::UsageError, "--degrees takes two values");
  const ShuffleElement f = canonicalize(pa, degrees[0]);
  const ShuffleElement g = canonicalize(pb, degrees[1]);
  const ShuffleElement fg = shuffle_mul(f, g);
  Outcome o;
  o.text = fg.to_string();
  o.payload = {{"left", f.to_json()}, {"right", g.to_json()}, {"product", fg.to_json()}};
  return o;
}

// f in x and g in y, each with at most two binomial denominator factors.
std::pair<RatFun, RatFun> random_pair(std::mt19937& rng, const RingPtr& R) {
  const std::vector<std::string> units{"", "q", "u"};
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto make = [&](const std::string& v) {
    std::vector<Binomial> den;
    const int n = pick(0, 2);
    for (int i = 0; i < n; ++i) {
      const std::string u = units[static_cast<std::size_t>(pick(0, 2))];
      const UnitMonomial c = u.empty() ? UnitMonomial::one() : UnitMonomial::generator(u, pick(-1, 1) | 1);
      den.push_back(Binomial{ScaledMonomial{c, Monomial::var(v, pick(0, 1) ? 1 : -1)}});
    }
    LaurentPoly num = LaurentPoly::constant(R, pick(1, 3));
    if (pick(0, 1)) num += LaurentPoly::variable(R, v, pick(-2, 2));
    return RatFun(num, den);
  };
  RatFun f = make("x");
  RatFun g = make("y");
  return {f, g};
}

Outcome run_residue(const Settings& s, const std::string& f_text, const std::string& g_text,
                    const std::vector<std::string>& alphas, int count) {
  const int N = s.order;
  RingPtr R = adjoin_units(parse_ring(s.ring), {"q", "u"});
  std::vector<std::pair<RatFun, RatFun>> cases;
  if (!f_text.empty() || !g_text.empty()) {
    const ExprPtr fe = parse_expr(f_text.empty() ? "1" : f_text);
    const ExprPtr ge = parse_expr(g_text.empty() ? "1" : g_text);
    R = ring_for(*ge, ring_for(*fe, R));
    for (const auto& a : alphas) R = ring_for(*parse_expr("K[+" + a + "]"), R);
    cases.emplace_back(function_of(f_text.empty() ? "1" : f_text, R, N), function_of(g_text.empty() ? "1" : g_text, R, N));
  } else {
    std::mt19937 rng(s.seed);
    for (int i = 0; i < count; ++i) cases.push_back(random_pair(rng, R));
  }
  std::vector<UnitMonomial> alpha_units;
  for (const auto& a : alphas) alpha_units.push_back(unit_of(a));
  Outcome o;
  o.pass = true;
  json rows = json::array();
  std::ostringstream text;
  for (const auto& [f, g] : cases) {
    for (std::size_t i = 0; i < alpha_units.size(); ++i) {
      const RatFun kernel = exchange_kernel(f, g, alpha_units[i]);
      const FormalDist lhs = ordered_double_expand(kernel, "x", "y", N) - ordered_double_expand(kernel, "y", "x", N);
      const FormalDist rhs = exchange_defect(f, g, alpha_units[i], N);
      const bool ok = window_equal(lhs, rhs, N);
      *o.pass = *o.pass && ok;
      rows.push_back({{"f", f.to_string()}, {"g", g.to_string()}, {"alpha", alphas[i]}, {"pass", ok},
                      {"defect", rhs.to_string()}});
      text << (ok ? "PASS " : "FAIL ") << "f = " << f.to_string() << ", g = " << g.to_string()
           << ", alpha = " << alphas[i] << "\n";
    }
  }
  o.payload = {{"cases", rows}};
  o.text = text.str();
  if (!o.text.empty()) o.text.pop_back();
  return o;
}

Outcome run_commutator(const Settings& s, std::vector<int> ranks, const std::string& ring) {
  if (ranks.empty()) ranks = {1, 2, 3};
  Outcome o;
  o.pass = true;
  json reports = json::array();
  std::ostringstream text;
  for (int r : ranks) {
    const DerivationReport rep = derive(HeckeSetup::split(r, ring, s.order));
    *o.pass = *o.pass && rep.pass();
    reports.push_back(rep.to_json());
    text << "rank " << r << " over " << ring << ", order " << s.order << ": " << (rep.pass() ? "PASS" : "FAIL") << "\n";
    for (const auto& st : rep.stages)
      text << "  " << (st.pass ? "PASS " : "FAIL ") << st.name << (st.detail.empty() ? "" : ": " + st.detail) << "\n";
    text << "  constant term " << rep.constant_term << " (sign " << rep.sign << ")\n";
  }
  o.payload = ranks.size() == 1 ? reports[0] : json{{"reports", reports}};
  o.text = text.str();
  o.text.pop_back();
  return o;
}

KClass random_rank_zero(std::mt19937& rng) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto line = [&] {
    UnitMonomial u;
    for (const char* g : {"f1", "f2", "f3"}) u = u * UnitMonomial::generator(g, pick(-1, 1));
    return KClass::line(u);
  };
  const int plus = pick(1, 3);
  KClass k;
  for (int i = 0; i < plus; ++i) k = k + line();
  for (int i = 0; i < plus; ++i) k = k - (pick(0, 1) ? KClass::trivial() : line());
  return k;
}

Outcome run_lemma(const Settings& s, const std::string& klass, const std::string& line_text, int count) {
  std::vector<std::pair<KClass, UnitMonomial>> cases;
  RingPtr R = adjoin_units(parse_ring(s.ring), {"f1", "f2", "f3", "l"});
  if (!klass.empty()) {
    const ExprPtr e = parse_expr(klass);
    R = ring_for(*e, R);
    const Value v = lower(*e, R, s.order);
    const auto* k = std::get_if<KClass>(&v);
    if (!k) throw Error(ErrorCode::UsageError, "--class must be a K[...] literal");
    const UnitMonomial l = unit_of(line_text);
    R = ring_for(*parse_expr("K[+" + line_text + "]"), R);
    cases.emplace_back(*k, l);
  } else {
    std::mt19937 rng(s.seed);
    for (int i = 0; i < count; ++i) {
      const int a = std::uniform_int_distribution<int>(-1, 1)(rng);
      cases.emplace_back(random_rank_zero(rng), UnitMonomial::generator("l") * UnitMonomial::generator("f1", a));
    }
  }
  Outcome o;
  o.pass = true;
  json rows = json::array();
  std::ostringstream text;
  for (const auto& [k, l] : cases) {
    const TwistedCheck c = check_twisted_expansion(R, k, l, s.order);
    *o.pass = *o.pass && c.pass;
    rows.push_back({{"class", k.to_string()},
                    {"line", l.to_string()},
                    {"pass", c.pass},
                    {"x^-1", c.coefficient_minus.to_string()},
                    {"expected_x^-1", c.expected_minus.to_string()},
                    {"x^0", c.coefficient_zero.to_string()},
                    {"x^1", c.coefficient_plus.to_string()},
                    {"expected_x^1", c.expected_plus.to_string()}});
    text << (c.pass ? "PASS " : "FAIL ") << "P = " << k.to_string() << ", L = " << l.to_string() << "\n";
  }
  o.payload = {{"cases", rows}};
  o.text = text.str();
  o.text.pop_back();
  return o;
}

Outcome run_weyl(std::vector<int> ds) {
  if (ds.empty()) ds = {1, 2, 3, 4, 5, 6};
  Outcome o;
  o.pass = true;
  json rows = json::array();
  std::ostringstream text;
  for (int d : ds) {
    const WeylRank w = weyl_rank_check(ChiTable::preset("P2"), d);
    *o.pass = *o.pass && w.pass;
    rows.push_back({{"d", d}, {"raw", w.raw.get_str()}, {"absolute", w.absolute.get_str()}, {"pass", w.pass}});
    text << (w.pass ? "PASS " : "FAIL ") << "d = " << d << ": rank " << w.absolute.get_str() << " (raw "
         << w.raw.get_str() << ")\n";
  }
  o.payload = {{"surface", "P2"}, {"checks", rows}};
  o.text = text.str();
  o.text.pop_back();
  return o;
}

std::string echo(int argc, char** argv) {
  std::string out;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    const bool quote = a.find_first_of(" ()*/^\"") != std::string::npos;
    out += (i > 1 ? " " : "") + (quote ? "\"" + a + "\"" : a);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact K-theoretic Hall algebra calculator"};
  app.require_subcommand(1);
  Settings s;

  auto add_common = [&](CLI::App* c) {
    c->add_option("--ring", s.ring, "ring preset (Z, free, P2, P1xP1) or inline Z[t]/((t-1)^3)");
    c->add_option("--order", s.order, "truncation order")->envname("KHALL_ORDER")->check(CLI::Range(0, 64));
    c->add_flag("--json", s.json, "emit a JSON report");
    c->add_option("--seed", s.seed, "seed for generated families");
  };

  std::string text_a;
  std::string text_b;
  std::string var = "x";
  std::string at = "zero";
  std::vector<int> degrees;
  std::vector<std::string> alphas{"1", "q^-1"};
  int count = 8;
  std::vector<int> ranks;
  std::string hecke_ring = "free";
  std::string klass;
  std::string line = "l";
  std::vector<int> ds;

  auto* eval = app.add_subcommand("eval", "evaluate an expression");
  eval->add_option("expr", text_a)->required();
  add_common(eval);

  auto* expand_cmd = app.add_subcommand("expand", "one-sided or two-sided expansion of a rational function");
  expand_cmd->add_option("expr", text_a)->required();
  expand_cmd->add_option("--var", var, "expansion variable");
  expand_cmd->add_option("--at", at, "inf, zero or both")->check(CLI::IsMember({"inf", "zero", "both"}));
  add_common(expand_cmd);

  auto* shuf = app.add_subcommand("shuffle", "shuffle product of two symmetric Laurent polynomials in z1, z2, ...");
  shuf->add_option("left", text_a)->required();
  shuf->add_option("right", text_b)->required();
  shuf->add_option("--degrees", degrees, "degrees of the two factors")->delimiter(',')->expected(2);
  add_common(shuf);

  auto* res = app.add_subcommand("residue-check", "exchange defect against ordered double expansions");
  res->add_option("f", text_a, "function of x");
  res->add_option("g", text_b, "function of y");
  res->add_option("--alpha", alphas, "unit alpha; repeatable")->delimiter(',');
  res->add_option("--count", count, "size of the generated family when f and g are omitted")
      ->check(CLI::PositiveNumber);
  add_common(res);

  auto* verify = app.add_subcommand("verify", "verification suites");
  verify->require_subcommand(1);
  auto* comm = verify->add_subcommand("commutator", "derive [mu+(z), mu-(w)] = rho(z, w)");
  comm->add_option("--rank", ranks, "number of line elements; repeatable, default 1,2,3")
      ->delimiter(',')
      ->check(CLI::Range(1, 6));
  comm->add_option("--ring", hecke_ring, "free or p2")->check(CLI::IsMember({"free", "p2"}));
  comm->add_option("--order", s.order, "truncation order")->envname("KHALL_ORDER")->check(CLI::Range(1, 64));
  comm->add_flag("--json", s.json, "emit a JSON report");
  comm->add_option("--seed", s.seed, "unused; accepted for uniformity");
  auto* lemma = verify->add_subcommand("lemma-calculation", "twisted expansion coefficients of rank-0 classes");
  lemma->add_option("--class", klass, "K[...] literal; default is a generated family");
  lemma->add_option("--line", line, "unit monomial L");
  lemma->add_option("--count", count, "size of the generated family")->check(CLI::PositiveNumber);
  add_common(lemma);

  auto* weyl = app.add_subcommand("weyl-rank", "rank of the k = 0 commutator on P2");
  weyl->add_option("--d", ds, "curve degree; repeatable, default 1..6")->delimiter(',')->check(CLI::PositiveNumber);
  add_common(weyl);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const auto start = std::chrono::steady_clock::now();
  json report = {{"schema", kReportSchema},
                 {"version", KHALL_VERSION},
                 {"command", echo(argc, argv)},
                 {"ring", comm->parsed() ? hecke_ring : s.ring},
                 {"order", s.order},
                 {"seed", s.seed}};
  int code = 0;
  try {
    Outcome o;
    if (eval->parsed()) o = run_eval(s, text_a);
    else if (expand_cmd->parsed()) o = run_expand(s, text_a, var, at);
    else if (shuf->parsed()) o = run_shuffle(s, text_a, text_b, degrees);
    else if (res->parsed()) o = run_residue(s, text_a, text_b, alphas, count);
    else if (comm->parsed()) o = run_commutator(s, ranks, hecke_ring);
    else if (lemma->parsed()) o = run_lemma(s, klass, line, count);
    else o = run_weyl(ds);
    report["payload"] = o.payload;
    report["pass"] = o.pass ? json(*o.pass) : json(nullptr);
    code = o.pass.value_or(true) ? 0 : 1;
    if (!s.json) std::cout << o.text << "\n";
  } catch (const Error& e) {
    const bool usage = e.code() == ErrorCode::UsageError || e.code() == ErrorCode::SyntaxError;
    code = usage ? 2 : 1;
    report["payload"] = nullptr;
    report["pass"] = false;
    report["error"] = {{"code", std::string(error_name(e.code()))}, {"message", e.what()}};
    if (const auto* se = dynamic_cast<const SyntaxError*>(&e))
      report["error"].update({{"line", se->line()}, {"column", se->column()}});
    if (!s.json) std::cerr << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    code = 1;
    report["payload"] = nullptr;
    report["pass"] = false;
    report["error"] = {{"code", "Internal"}, {"message", e.what()}};
    if (!s.json) std::cerr << "error: " << e.what() << "\n";
  }
  report["timing_ms"] =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  if (s.json) std::cout << report.dump(2) << "\n";
  return code;
}
