#pragma once

#include "lopc/engine.hpp"

#include <variant>

namespace lopc {

class EveCorrelated : public DistError {
 public:
  using DistError::DistError;
};

class WrongInputState : public ProtocolError {
 public:
  using ProtocolError::ProtocolError;
};

/// Split of the honest parties into two nonempty sides.
struct Bipartition {
  std::vector<std::string> lhs;
  std::vector<std::string> rhs;

  // Complement of `lhs` within the honest parties of d; throws on a bad side.
  static Bipartition of(const JointDist& d, const std::vector<std::string>& lhs);
  std::string to_string() const;
};

// Secret correlation across the cut, I(S; S') of the honest marginal. Throws
// EveCorrelated unless the honest parties factor out of everything Eve sees.
double partition_entropy(const JointDist& d, const Bipartition& cut);

// Every bipartition once (a cut and its complement are the same cut), sides
// written in party order with the first honest party on the left.
std::vector<Bipartition> all_bipartitions(const JointDist& d);

// --- canned states ---------------------------------------------------------------

// n-party cat state over parties A, B, C, D, F, ... (E is Eve): all zeros or
// all ones, 1/2 each.
JointDist cat_state(std::size_t parties);
JointDist c_ghz();
// Shared secret bit between A and B; C holds a constant.
JointDist c_epr_ab();
// C-EPR_AB (x) C-EPR_BC with Bob's two bits encoded as b_AB * 2 + b_BC.
JointDist double_c_epr();

// --- canned protocols ------------------------------------------------------------

// Clare forgets her bit; only the weak form C-EPR_AB results.
ProtocolIR ghz_to_epr_protocol();
// Bob announces b_AB xor b_BC, Clare adds it to her bit, Bob keeps b_AB.
ProtocolIR epr2_to_ghz_protocol();

// Run the canned protocols; WrongInputState unless d is the expected state.
ExecutionResult ghz_to_epr(const JointDist& d);
ExecutionResult epr2_to_ghz(const JointDist& d);

struct AuditRow {
  Bipartition cut;
  double before = 0.0;
  double after = 0.0;
  bool non_increasing = true;
};

// Partition entropies of `before` and `after` over every cut of `before`'s
// honest parties; parties absent from `after` (forgotten) count as constant.
std::vector<AuditRow> entropy_audit(const JointDist& before, const JointDist& after);
bool audit_passes(const std::vector<AuditRow>& rows);

// --- rate feasibility ------------------------------------------------------------

/// Unknowns are pairwise rates n_ij; one equation per cut: the rates of the
/// pairs crossing the cut sum to its partition entropy.
struct RateEquation {
  Bipartition cut;
  std::vector<Rational> coefficients;
  Rational rhs;
};

struct RateSystem {
  std::vector<std::string> parties;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<RateEquation> equations;

  std::string pair_name(std::size_t k) const;
};

struct Feasible {
  std::vector<Rational> rates;
};

struct Infeasible {
  // Integer multipliers y with y^T A = 0 and y^T b > 0 (left null vector).
  std::vector<Rational> multipliers;
  // Equations with positive and negative multipliers, summed with |y|:
  // both aggregates have identical left-hand sides but different totals.
  std::vector<std::size_t> positive_equations;
  std::vector<std::size_t> negative_equations;
  Rational positive_sum;
  Rational negative_sum;
  // Set when the system is consistent but its only solution is negative.
  std::optional<std::size_t> negative_rate;
};

// Consistent, but free rates at zero leave a negative one; nonnegativity undecided.
struct Undetermined {
  std::vector<Rational> particular;
};

using RateVerdict = std::variant<Feasible, Infeasible, Undetermined>;
std::string_view verdict_name(const RateVerdict& v);

// All singleton cuts plus all cuts with at most floor(n/2) parties on the
// left; for even n the balanced cuts are taken once, with party A on the left.
RateSystem cat_rate_system(std::size_t parties);

// Exact Gaussian elimination over the rationals.
RateVerdict solve_rate_system(const RateSystem& system);

RateVerdict cat_rate_feasibility(std::size_t parties);

}  // namespace lopc
