#ifndef KHALL_HALL_HPP
#define KHALL_HALL_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "khall/distcalc.hpp"
#include "khall/lambda.hpp"

namespace khall {

// Base ring plus the diagonal symbol D and tagged copies g_1, g_2, ... of
// selected generators. Inside any term carrying D the copies collapse back
// onto g, and D*D is an error.
class DiagonalAlgebra {
 public:
  DiagonalAlgebra(const RingPresentation& base, const std::vector<std::string>& tagged, int copies,
                  std::string symbol = "D");

  const RingPtr& ring() const { return ring_; }
  const std::string& symbol() const { return symbol_; }
  RingElement diagonal() const { return RingElement::generator(ring_, symbol_); }

  // g -> g_copy for every tagged generator.
  std::map<std::string, std::string> tag_map(int copy) const;
  KClass tag(const KClass& k, int copy) const { return k.rename(tag_map(copy)); }
  UnitMonomial tag(const UnitMonomial& u, int copy) const;

  // Sets D = 0.
  LaurentPoly drop_diagonal(const LaurentPoly& p) const;
  RatFun drop_diagonal(const RatFun& f) const;

 private:
  RingPtr ring_;
  std::string symbol_;
  std::vector<std::string> tagged_;
  int copies_;
};

struct HeckeSetup {
  std::string ring_preset;  // "free" or "p2"
  KClass F;
  UnitMonomial q;
  int order = 8;
  DiagonalAlgebra algebra;

  // F = [f1] + ... + [fr] - r[1]; q a free unit ("free") or t^-3 ("p2").
  static HeckeSetup split(int r, const std::string& ring_preset, int order);
  // F built from free units with the given names.
  static HeckeSetup custom(const KClass& F, const std::vector<std::string>& units, const std::string& ring_preset,
                           int order);

  KClass I_shift() const { return F - KClass::trivial(); }
  int plus_count() const { return static_cast<int>(F.plus().size()); }
};

// 1 + D x / ((1 - x)(1 - q x)) at x = arg.
RatFun xi_S(const ScaledMonomial& arg, const HeckeSetup& s);
// {1, q^-1}
std::vector<UnitMonomial> xi_poles(const HeckeSetup& s);

// wedge(F_1 / (w q_1)); the w-factor of the kernel.
RatFun kernel_w_factor(const HeckeSetup& s);
// wedge(-I_2 / z); the z-factor of the kernel.
RatFun kernel_z_factor(const HeckeSetup& s);
// kernel_w_factor * kernel_z_factor * xi_S(w/z)
RatFun hecke_kernel(const HeckeSetup& s);

// (1 - 1/z) wedge((q^-1 - 1) F / z), the function whose z = inf and z = 0
// expansions are h+ and h-.
RatFun h_function(const HeckeSetup& s);

// (q - 1) times the commutator, split by the pole it comes from.
struct CommutatorParts {
  FormalDist at_one;    // delta(w/z) component
  FormalDist at_q_inv;  // delta(wq/z) component
  FormalDist cleared() const { return at_one + at_q_inv; }
};

CommutatorParts commutator_parts(const HeckeSetup& s);
// cleared() / (q - 1), with 1 - q carried as a denominator.
FormalDist commutator_dist(const HeckeSetup& s);

// D delta(w/z) (h+(z) - h-(w)), i.e. (q - 1) rho.
FormalDist rho_cleared(const HeckeSetup& s);
FormalDist rho(const HeckeSetup& s);

// (q - 1) * (w-first minus z-first double expansion of the kernel).
FormalDist double_expansion_oracle_cleared(const HeckeSetup& s);

struct ConstantTerm {
  RingElement cleared;                // z^0 w^0 coefficient of (q - 1) rho
  std::optional<RingElement> value;   // cleared / (q - 1), when the ring allows the division
  RingElement expected;               // D * ch(F^dual)
  int sign = 0;                       // value = sign * expected; 0 if neither sign fits
};

ConstantTerm constant_term(const HeckeSetup& s);

struct WeylRank {
  int d = 0;
  Integer raw;
  Integer absolute;
  bool pass = false;
};

// |chi((E1 E2 omega) F^dual)| on P2 with E1 = 1, E2 = 1 - t^-1, omega = t^-3,
// F = [1] - [t^-d].
WeylRank weyl_rank_check(const ChiTable& surface, int d);

struct Stage {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct DerivationReport {
  std::string ring_preset;
  int rank = 0;
  int order = 0;
  std::string F;
  std::vector<Stage> stages;
  int sign = 0;
  std::string constant_term;
  // w^0 z^k coefficients of (q - 1) rho, |k| <= 2
  std::vector<std::pair<int, std::string>> rho_cleared;
  bool pass() const;
  nlohmann::json to_json() const;
};

inline constexpr const char* kDerivationSchema = "khall.derivation/1";

// The objects a derivation compares, for callers that check more than the
// report (e.g. agreement between truncation orders).
struct DerivationArtifacts {
  std::optional<FormalDist> commutator_cleared;
  std::optional<FormalDist> rho_cleared;
  std::optional<FormalDist> oracle_cleared;
  std::optional<ConstantTerm> constant;
};

DerivationReport derive(const HeckeSetup& s, DerivationArtifacts* keep = nullptr);

}  // namespace khall

#endif
