#include "lopc/dist.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace lopc {

std::string_view to_string(Role role) {
  switch (role) {
    case Role::honest: return "honest";
    case Role::eavesdropper: return "eavesdropper";
    case Role::public_channel: return "public";
  }
  return "honest";
}

Role parse_role(std::string_view text) {
  if (text == "honest") return Role::honest;
  if (text == "eavesdropper" || text == "eve") return Role::eavesdropper;
  if (text == "public" || text == "public_channel") return Role::public_channel;
  throw ParseError("unknown party role '" + std::string(text) + "'");
}

std::vector<Party> honest(std::initializer_list<std::pair<std::string, int>> parties) {
  std::vector<Party> out;
  for (const auto& [label, alphabet] : parties) out.push_back({{label, Role::honest}, alphabet});
  return out;
}

Party eve(int alphabet) { return {{"E", Role::eavesdropper}, alphabet}; }

// --- JointDist -------------------------------------------------------------------

JointDist::JointDist(std::vector<Party> parties, std::map<Outcome, Prob> entries)
    : parties_(std::move(parties)) {
  std::set<std::string> seen;
  int eavesdroppers = 0;
  for (const auto& p : parties_) {
    if (p.label().empty()) throw DistError("party label must not be empty");
    if (!seen.insert(p.label()).second) throw DistError("duplicate party label '" + p.label() + "'");
    if (p.alphabet < 1) throw DistError("party '" + p.label() + "' needs a positive alphabet");
    if (p.id.role == Role::eavesdropper) ++eavesdroppers;
  }
  if (eavesdroppers > 1) throw DistError("at most one eavesdropper per distribution");

  Rational total = 0;
  for (auto& [outcome, prob] : entries) {
    if (outcome.size() != parties_.size())
      throw DistError("outcome arity " + std::to_string(outcome.size()) + " does not match " +
                      std::to_string(parties_.size()) + " parties");
    for (std::size_t i = 0; i < outcome.size(); ++i)
      if (outcome[i] < 0 || outcome[i] >= parties_[i].alphabet)
        throw DistError("symbol " + std::to_string(outcome[i]) + " outside alphabet of party '" +
                        parties_[i].label() + "'");
    if (sgn(prob) < 0) throw DistError("negative probability " + lopc::to_string(prob));
    if (sgn(prob) == 0) continue;
    total += prob;
    entries_.emplace(outcome, prob);
  }
  if (total != 1) {
    Rational deficit = 1 - total;
    throw NormalizationError("probabilities sum to " + lopc::to_string(total) + " (deficit " +
                                 lopc::to_string(deficit) + ")",
                             deficit);
  }
}

std::size_t JointDist::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < parties_.size(); ++i)
    if (parties_[i].label() == label) return i;
  throw DistError("unknown party '" + std::string(label) + "'");
}

bool JointDist::has_party(std::string_view label) const {
  return std::any_of(parties_.begin(), parties_.end(),
                     [&](const Party& p) { return p.label() == label; });
}

std::vector<std::string> JointDist::labels() const {
  std::vector<std::string> out;
  for (const auto& p : parties_) out.push_back(p.label());
  return out;
}

std::vector<std::string> JointDist::labels_with_role(Role role) const {
  std::vector<std::string> out;
  for (const auto& p : parties_)
    if (p.id.role == role) out.push_back(p.label());
  return out;
}

std::vector<std::string> JointDist::eve_view_labels() const {
  std::vector<std::string> out;
  for (const auto& p : parties_)
    if (p.id.role != Role::honest) out.push_back(p.label());
  return out;
}

Prob JointDist::probability(const Outcome& outcome) const {
  auto it = entries_.find(outcome);
  return it == entries_.end() ? Prob(0) : it->second;
}

// --- vectors ---------------------------------------------------------------------

ProbVector::ProbVector(std::vector<Prob> weights) : weights_(std::move(weights)) {
  Rational total = 0;
  for (const auto& w : weights_) {
    if (sgn(w) < 0) throw DistError("negative weight " + lopc::to_string(w));
    total += w;
  }
  if (total != 1)
    throw NormalizationError("weights sum to " + lopc::to_string(total), Rational(1 - total));
}

ProbVector ProbVector::padded(std::size_t n) const {
  auto w = weights_;
  if (w.size() < n) w.resize(n, Prob(0));
  return ProbVector(std::move(w));
}

ProbVector ProbVector::sorted_desc() const {
  auto w = weights_;
  std::stable_sort(w.begin(), w.end(), [](const Prob& a, const Prob& b) { return a > b; });
  return ProbVector(std::move(w));
}

SecrecySpectrum::SecrecySpectrum(std::vector<Prob> weights) {
  const auto sorted = ProbVector(std::move(weights)).sorted_desc();
  for (const auto& w : sorted.weights())
    if (sgn(w) > 0) weights_.push_back(w);
}

SecrecySpectrum SecrecySpectrum::parse(std::string_view text) {
  return SecrecySpectrum(parse_rational_list(text));
}

SecrecySpectrum SecrecySpectrum::uniform(std::size_t n) {
  return SecrecySpectrum(std::vector<Prob>(n, frac(1, static_cast<long>(n))));
}

std::string SecrecySpectrum::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (i) out += ",";
    out += lopc::to_string(weights_[i]);
  }
  return out + ")";
}

std::string_view verdict_name(const PureVerdict& v) {
  if (std::holds_alternative<PureState>(v)) return "Pure";
  if (std::holds_alternative<BlockPure>(v)) return "BlockPure";
  return "Mixed";
}

// --- operations ------------------------------------------------------------------

namespace {

std::vector<std::size_t> resolve(const JointDist& d, const std::vector<std::string>& labels) {
  std::vector<bool> used(d.parties().size(), false);
  for (const auto& l : labels) used[d.index_of(l)] = true;
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < used.size(); ++i)
    if (used[i]) idx.push_back(i);
  return idx;
}

std::map<Outcome, Prob> project(const JointDist& d, const std::vector<std::size_t>& idx) {
  std::map<Outcome, Prob> out;
  Outcome key(idx.size());
  for (const auto& [outcome, prob] : d.entries()) {
    for (std::size_t k = 0; k < idx.size(); ++k) key[k] = outcome[idx[k]];
    out[key] += prob;
  }
  return out;
}

}  // namespace

JointDist marginal(const JointDist& d, const std::vector<std::string>& keep) {
  if (keep.empty()) throw DistError("marginal needs at least one party");
  const auto idx = resolve(d, keep);
  std::vector<Party> parties;
  for (auto i : idx) parties.push_back(d.parties()[i]);
  return JointDist(std::move(parties), project(d, idx));
}

bool is_product(const JointDist& d, const std::vector<std::string>& lhs,
                const std::vector<std::string>& rhs) {
  std::set<std::string> l(lhs.begin(), lhs.end());
  std::set<std::string> r(rhs.begin(), rhs.end());
  for (const auto& x : l)
    if (r.contains(x)) throw DistError("partition blocks overlap on '" + x + "'");
  for (const auto& x : l) d.index_of(x);
  for (const auto& x : r) d.index_of(x);
  if (l.size() + r.size() != d.parties().size())
    throw DistError("partition does not cover every party");
  if (l.empty() || r.empty()) return true;

  const auto li = resolve(d, lhs);
  const auto ri = resolve(d, rhs);
  const auto pl = project(d, li);
  const auto pr = project(d, ri);
  if (pl.size() * pr.size() != d.entries().size()) return false;

  Outcome kl(li.size());
  Outcome kr(ri.size());
  for (const auto& [outcome, prob] : d.entries()) {
    for (std::size_t k = 0; k < li.size(); ++k) kl[k] = outcome[li[k]];
    for (std::size_t k = 0; k < ri.size(); ++k) kr[k] = outcome[ri[k]];
    if (prob != pl.at(kl) * pr.at(kr)) return false;
  }
  return true;
}

PureVerdict classify_pure(const JointDist& d) {
  const auto honest_labels = d.labels_with_role(Role::honest);
  if (honest_labels.size() != 2)
    throw DistError("classify_pure needs exactly two honest parties, got " +
                    std::to_string(honest_labels.size()));
  const auto eve_labels = d.eve_view_labels();
  if (!eve_labels.empty() && !is_product(d, honest_labels, eve_labels)) return Mixed{};

  const JointDist ab = marginal(d, honest_labels);
  const int na = ab.parties()[0].alphabet;
  const int nb = ab.parties()[1].alphabet;
  std::vector<int> a_deg(na, 0);
  std::vector<int> b_deg(nb, 0);
  for (const auto& [o, p] : ab.entries()) {
    ++a_deg[o[0]];
    ++b_deg[o[1]];
  }
  for (const auto& [o, p] : ab.entries())
    if (a_deg[o[0]] != 1 || b_deg[o[1]] != 1) return BlockPure{};

  // Support is a matching; entries() iterates in ascending Alice symbol order,
  // so a stable sort gives ties in original index order.
  std::vector<std::pair<Outcome, Prob>> pairs(ab.entries().begin(), ab.entries().end());
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const auto& x, const auto& y) { return x.second > y.second; });
  PureState pure;
  pure.alice_map.assign(na, -1);
  pure.bob_map.assign(nb, -1);
  std::vector<Prob> weights;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    pure.alice_map[pairs[k].first[0]] = static_cast<int>(k);
    pure.bob_map[pairs[k].first[1]] = static_cast<int>(k);
    weights.push_back(pairs[k].second);
  }
  pure.spectrum = SecrecySpectrum(std::move(weights));
  return pure;
}

std::optional<SecrecySpectrum> perfect_correlation_spectrum(const JointDist& d) {
  for (std::size_t i = 0; i < d.parties().size(); ++i) {
    std::set<int> symbols;
    for (const auto& [o, p] : d.entries())
      if (!symbols.insert(o[i]).second) return std::nullopt;
  }
  std::vector<Prob> weights;
  for (const auto& [o, p] : d.entries()) weights.push_back(p);
  return SecrecySpectrum(std::move(weights));
}

double entropy_of_secrecy(const SecrecySpectrum& s) {
  double h = 0.0;
  for (const auto& w : s.weights()) h += plogp(w);
  return h;
}

double entropy(const JointDist& d, const std::vector<std::string>& labels) {
  double h = 0.0;
  if (labels.empty()) {
    for (const auto& [o, p] : d.entries()) h += plogp(p);
    return h;
  }
  for (const auto& [o, p] : project(d, resolve(d, labels))) h += plogp(p);
  return h;
}

double mutual_information(const JointDist& d, const std::vector<std::string>& a,
                          const std::vector<std::string>& b,
                          const std::vector<std::string>& given) {
  if (a.empty() || b.empty()) throw DistError("mutual information needs nonempty party sets");
  std::set<std::string> sa(a.begin(), a.end());
  std::set<std::string> sb(b.begin(), b.end());
  std::set<std::string> sg(given.begin(), given.end());
  for (const auto& x : sa)
    if (sb.contains(x) || sg.contains(x)) throw DistError("party '" + x + "' used twice");
  for (const auto& x : sb)
    if (sg.contains(x)) throw DistError("party '" + x + "' used twice");

  auto join = [](std::vector<std::string> x, const std::vector<std::string>& y) {
    x.insert(x.end(), y.begin(), y.end());
    return x;
  };
  const double h_ag = entropy(d, join(a, given));
  const double h_bg = entropy(d, join(b, given));
  const double h_abg = entropy(d, join(join(a, b), given));
  const double h_g = given.empty() ? 0.0 : entropy(d, given);
  const double i = h_ag + h_bg - h_abg - h_g;
  return i < 0.0 && i > -1e-12 ? 0.0 : i;
}

double mutual_information(const JointDist& d, const std::string& a, const std::string& b,
                          const std::optional<std::string>& given) {
  if (a == b) throw DistError("mutual information needs distinct parties");
  return mutual_information(d, std::vector{a}, std::vector{b},
                            given ? std::vector{*given} : std::vector<std::string>{});
}

JointDist make_pure_state(const SecrecySpectrum& s) {
  const int n = static_cast<int>(s.size());
  auto parties = honest({{"A", n}, {"B", n}});
  parties.push_back(eve());
  std::map<Outcome, Prob> entries;
  for (int i = 0; i < n; ++i) entries[{i, i, 0}] = s[i];
  return JointDist(std::move(parties), std::move(entries));
}

JointDist relabel(const JointDist& d, const std::map<std::string, std::vector<int>>& maps) {
  std::vector<Party> parties = d.parties();
  std::vector<const std::vector<int>*> per_party(parties.size(), nullptr);
  for (const auto& [label, map] : maps) {
    const auto i = d.index_of(label);
    if (static_cast<int>(map.size()) != parties[i].alphabet)
      throw DistError("relabel map for '" + label + "' has wrong size");
    int width = 1;
    for (int v : map) width = std::max(width, v + 1);
    parties[i].alphabet = width;
    per_party[i] = &map;
  }
  std::map<Outcome, Prob> entries;
  for (const auto& [o, p] : d.entries()) {
    Outcome n = o;
    for (std::size_t i = 0; i < n.size(); ++i)
      if (per_party[i]) {
        n[i] = (*per_party[i])[o[i]];
        // Negative targets are allowed only for symbols that never occur.
        if (n[i] < 0) throw DistError("relabel sends occurring symbol " + std::to_string(o[i]) + " to " + std::to_string(n[i]));
      }
    entries[n] += p;
  }
  return JointDist(std::move(parties), std::move(entries));
}

}  // namespace lopc
