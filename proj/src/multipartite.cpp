#include "lopc/multipartite.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace lopc {

namespace {

// A, B, C, D, F, ...; E belongs to Eve.
std::string party_label(std::size_t i) {
  if (i >= 4) ++i;
  if (i < 26) return std::string(1, static_cast<char>('A' + i));
  return "P" + std::to_string(i - 1);
}

std::vector<std::string> present(const JointDist& d, const std::vector<std::string>& side) {
  std::vector<std::string> out;
  for (const auto& s : side)
    if (d.has_party(s) && d.party(s).id.role == Role::honest) out.push_back(s);
  return out;
}

void require_state(const JointDist& d, const JointDist& expected, const char* name) {
  if (!(d == expected)) throw WrongInputState(std::string("input is not the ") + name + " state");
}

std::vector<std::vector<std::size_t>> subsets_of_size(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<bool> pick(n, false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
  do {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i)
      if (pick[i]) s.push_back(i);
    out.push_back(std::move(s));
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return out;
}

// Scale to coprime integers.
std::vector<Rational> integer_normalize(std::vector<Rational> v) {
  mpz_class l = 1;
  for (const auto& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  mpz_class g = 0;
  for (auto& x : v) {
    x *= l;
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_num_mpz_t());
  }
  if (g != 0)
    for (auto& x : v) x /= g;
  return v;
}

}  // namespace

Bipartition Bipartition::of(const JointDist& d, const std::vector<std::string>& lhs) {
  const auto honest_labels = d.labels_with_role(Role::honest);
  std::set<std::string> left;
  for (const auto& s : lhs) {
    if (std::find(honest_labels.begin(), honest_labels.end(), s) == honest_labels.end())
      throw DistError("'" + s + "' is not an honest party");
    if (!left.insert(s).second) throw DistError("'" + s + "' listed twice");
  }
  Bipartition cut;
  for (const auto& s : honest_labels) (left.contains(s) ? cut.lhs : cut.rhs).push_back(s);
  if (cut.lhs.empty() || cut.rhs.empty()) throw DistError("both sides of a cut must be nonempty");
  return cut;
}

std::string Bipartition::to_string() const {
  std::string s = "(";
  for (const auto& x : lhs) s += x;
  s += ")|(";
  for (const auto& x : rhs) s += x;
  return s + ")";
}

double partition_entropy(const JointDist& d, const Bipartition& cut) {
  const auto honest_labels = d.labels_with_role(Role::honest);
  const auto view = d.eve_view_labels();
  if (!view.empty() && !is_product(d, honest_labels, view))
    throw EveCorrelated("honest parties are correlated with Eve's view");
  for (const auto& side : {cut.lhs, cut.rhs})
    for (const auto& s : side)
      if (d.party(s).id.role != Role::honest) throw DistError("'" + s + "' is not an honest party");
  if (cut.lhs.size() + cut.rhs.size() != honest_labels.size())
    throw DistError("cut does not cover every honest party");
  return mutual_information(d, cut.lhs, cut.rhs);
}

std::vector<Bipartition> all_bipartitions(const JointDist& d) {
  const auto labels = d.labels_with_role(Role::honest);
  const std::size_t n = labels.size();
  std::vector<Bipartition> out;
  if (n < 2) return out;
  // Cuts are indexed by the subsets containing the first party, minus the full set.
  for (std::size_t mask = 0; mask + 1 < (std::size_t{1} << (n - 1)); ++mask) {
    std::vector<std::string> lhs{labels[0]};
    for (std::size_t i = 1; i < n; ++i)
      if (mask & (std::size_t{1} << (i - 1))) lhs.push_back(labels[i]);
    out.push_back(Bipartition::of(d, lhs));
  }
  return out;
}

JointDist cat_state(std::size_t parties) {
  if (parties < 2) throw DistError("cat state needs at least two parties");
  std::vector<Party> ps;
  for (std::size_t i = 0; i < parties; ++i) ps.push_back({{party_label(i), Role::honest}, 2});
  ps.push_back(eve());
  Outcome zeros(parties + 1, 0);
  Outcome ones(parties, 1);
  ones.push_back(0);
  return JointDist(std::move(ps), {{zeros, frac(1, 2)}, {ones, frac(1, 2)}});
}

JointDist c_ghz() { return cat_state(3); }

JointDist c_epr_ab() {
  auto ps = honest({{"A", 2}, {"B", 2}, {"C", 1}});
  ps.push_back(eve());
  return JointDist(std::move(ps), {{{0, 0, 0, 0}, frac(1, 2)}, {{1, 1, 0, 0}, frac(1, 2)}});
}

JointDist double_c_epr() {
  auto ps = honest({{"A", 2}, {"B", 4}, {"C", 2}});
  ps.push_back(eve());
  std::map<Outcome, Prob> entries;
  for (int a = 0; a < 2; ++a)
    for (int c = 0; c < 2; ++c) entries[{a, a * 2 + c, c, 0}] = frac(1, 4);
  return JointDist(std::move(ps), std::move(entries));
}

ProtocolIR ghz_to_epr_protocol() {
  ProtocolIR p;
  p.forget = {"C"};
  return p;
}

ProtocolIR epr2_to_ghz_protocol() {
  ProtocolIR p;
  MessageRule rule;
  rule.table.assign(4, std::vector<Prob>(2, Prob(0)));
  for (int b = 0; b < 4; ++b) rule.table[static_cast<std::size_t>(b)][static_cast<std::size_t>((b >> 1) ^ (b & 1))] = 1;
  p.rounds.push_back({"B", std::move(rule)});
  OutputMap bob{"B", {}, 2};
  OutputMap clare{"C", {}, 2};
  for (int m = 0; m < 2; ++m) {
    bob.per_message.push_back({0, 0, 1, 1});
    clare.per_message.push_back({m, 1 - m});
  }
  p.outputs = {std::move(bob), std::move(clare)};
  return p;
}

ExecutionResult ghz_to_epr(const JointDist& d) {
  require_state(d, c_ghz(), "C-GHZ");
  return execute(ghz_to_epr_protocol(), d);
}

ExecutionResult epr2_to_ghz(const JointDist& d) {
  require_state(d, double_c_epr(), "C-EPR_AB x C-EPR_BC");
  return execute(epr2_to_ghz_protocol(), d);
}

std::vector<AuditRow> entropy_audit(const JointDist& before, const JointDist& after) {
  std::vector<AuditRow> rows;
  for (auto& cut : all_bipartitions(before)) {
    AuditRow row;
    row.before = partition_entropy(before, cut);
    const auto l = present(after, cut.lhs);
    const auto r = present(after, cut.rhs);
    if (!l.empty() && !r.empty()) {
      Bipartition restricted{l, r};
      row.after = partition_entropy(after, restricted);
    }
    row.non_increasing = row.after <= row.before + 1e-9;
    row.cut = std::move(cut);
    rows.push_back(std::move(row));
  }
  return rows;
}

bool audit_passes(const std::vector<AuditRow>& rows) {
  return std::all_of(rows.begin(), rows.end(), [](const AuditRow& r) { return r.non_increasing; });
}

std::string RateSystem::pair_name(std::size_t k) const {
  return "n_" + parties[pairs[k].first] + parties[pairs[k].second];
}

std::string_view verdict_name(const RateVerdict& v) {
  switch (v.index()) {
    case 0: return "Feasible";
    case 1: return "Infeasible";
    default: return "Undetermined";
  }
}

RateSystem cat_rate_system(std::size_t parties) {
  const JointDist cat = cat_state(parties);
  RateSystem sys;
  sys.parties = cat.labels_with_role(Role::honest);
  for (std::size_t i = 0; i < parties; ++i)
    for (std::size_t j = i + 1; j < parties; ++j) sys.pairs.emplace_back(i, j);

  auto add_cut = [&](const std::vector<std::size_t>& side) {
    std::vector<bool> left(parties, false);
    std::vector<std::string> names;
    for (auto i : side) {
      left[i] = true;
      names.push_back(sys.parties[i]);
    }
    RateEquation eq;
    eq.cut = Bipartition::of(cat, names);
    for (const auto& [i, j] : sys.pairs) eq.coefficients.push_back(left[i] != left[j] ? 1 : 0);
    // Every cut of the cat state carries exactly one bit.
    eq.rhs = 1;
    sys.equations.push_back(std::move(eq));
  };

  for (std::size_t k = 1; 2 * k <= parties; ++k) {
    for (const auto& side : subsets_of_size(parties, k)) {
      const bool balanced = 2 * k == parties;
      if (balanced && side.front() != 0) continue;
      add_cut(side);
    }
  }
  return sys;
}

RateVerdict solve_rate_system(const RateSystem& system) {
  const std::size_t rows = system.equations.size();
  const std::size_t cols = system.pairs.size();
  // Augmented [A | b | I]; the identity block tracks row combinations.
  std::vector<std::vector<Rational>> m(rows, std::vector<Rational>(cols + 1 + rows, Rational(0)));
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& eq = system.equations[r];
    for (std::size_t c = 0; c < cols; ++c) m[r][c] = eq.coefficients[c];
    m[r][cols] = eq.rhs;
    m[r][cols + 1 + r] = 1;
  }

  std::vector<std::size_t> pivot_col;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && sgn(m[piv][c]) == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[rank]);
    const Rational lead = m[rank][c];
    for (auto& v : m[rank]) v /= lead;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || sgn(m[r][c]) == 0) continue;
      const Rational f = m[r][c];
      for (std::size_t k = 0; k < m[r].size(); ++k) m[r][k] -= f * m[rank][k];
    }
    pivot_col.push_back(c);
    ++rank;
  }

  for (std::size_t r = rank; r < rows; ++r) {
    if (sgn(m[r][cols]) == 0) continue;
    std::vector<Rational> y(m[r].begin() + static_cast<std::ptrdiff_t>(cols + 1), m[r].end());
    y = integer_normalize(std::move(y));
    Rational yb = 0;
    for (std::size_t i = 0; i < rows; ++i) yb += y[i] * system.equations[i].rhs;
    if (sgn(yb) < 0)
      for (auto& v : y) v = -v;
    Infeasible bad;
    for (std::size_t i = 0; i < rows; ++i) {
      if (sgn(y[i]) > 0) {
        bad.positive_equations.push_back(i);
        bad.positive_sum += y[i] * system.equations[i].rhs;
      } else if (sgn(y[i]) < 0) {
        bad.negative_equations.push_back(i);
        bad.negative_sum -= y[i] * system.equations[i].rhs;
      }
    }
    bad.multipliers = std::move(y);
    return bad;
  }

  std::vector<Rational> x(cols, Rational(0));
  for (std::size_t r = 0; r < rank; ++r) x[pivot_col[r]] = m[r][cols];
  const auto negative = std::find_if(x.begin(), x.end(), [](const Rational& v) { return sgn(v) < 0; });
  if (negative == x.end()) return Feasible{std::move(x)};
  if (rank < cols) return Undetermined{std::move(x)};
  Infeasible bad;
  bad.negative_rate = static_cast<std::size_t>(negative - x.begin());
  return bad;
}

RateVerdict cat_rate_feasibility(std::size_t parties) {
  return solve_rate_system(cat_rate_system(parties));
}

}  // namespace lopc
