#include "lopc/engine.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <set>

namespace lopc {

std::string_view to_string(Verdict v) { return v == Verdict::secret ? "SECRET" : "LEAKY"; }

namespace {

std::string fresh_label(const JointDist& d, std::string base) {
  while (d.has_party(base)) base += "'";
  return base;
}

std::string outcome_string(const Outcome& o) {
  std::string s = "(";
  for (std::size_t i = 0; i < o.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(o[i]);
  }
  return s + ")";
}

double cut_information(const JointDist& d, const std::vector<std::string>& honest_labels,
                       const std::vector<std::string>& given) {
  if (honest_labels.size() < 2) return 0.0;
  std::vector<std::string> rest(honest_labels.begin() + 1, honest_labels.end());
  return mutual_information(d, {honest_labels.front()}, rest, given);
}

}  // namespace

ExecutionResult execute(const ProtocolIR& protocol, const JointDist& input) {
  protocol.validate();
  const auto& parties = input.parties();

  std::vector<std::size_t> speaker_index;
  for (const auto& r : protocol.rounds) {
    const auto i = input.index_of(r.speaker);
    if (parties[i].id.role != Role::honest)
      throw AlphabetMismatch("speaker '" + r.speaker + "' is not an honest party");
    if (static_cast<int>(r.rule.inputs()) != parties[i].alphabet)
      throw AlphabetMismatch("message table for '" + r.speaker + "' has " +
                             std::to_string(r.rule.inputs()) + " rows, alphabet is " +
                             std::to_string(parties[i].alphabet));
    speaker_index.push_back(i);
  }
  std::set<std::string> forgotten(protocol.forget.begin(), protocol.forget.end());
  for (const auto& f : protocol.forget)
    if (parties[input.index_of(f)].id.role != Role::honest)
      throw AlphabetMismatch("only honest parties can forget, not '" + f + "'");

  // Output layout: honest survivors in input order, transcript, then Eve's side.
  struct Slot {
    std::size_t source;
    const OutputMap* map;
  };
  std::vector<Slot> honest_slots;
  std::vector<std::size_t> eve_slots;
  std::vector<Party> out_parties;
  for (std::size_t i = 0; i < parties.size(); ++i) {
    if (parties[i].id.role != Role::honest) continue;
    const OutputMap* map = protocol.output_for(parties[i].label());
    if (forgotten.contains(parties[i].label())) continue;
    Party p = parties[i];
    if (map) {
      for (const auto& row : map->per_message)
        if (static_cast<int>(row.size()) != parties[i].alphabet)
          throw AlphabetMismatch("output map for '" + map->party + "' expects alphabet " +
                                 std::to_string(row.size()) + ", party has " +
                                 std::to_string(parties[i].alphabet));
      p.alphabet = map->output_alphabet();
    }
    honest_slots.push_back({i, map});
    out_parties.push_back(p);
  }
  for (const auto& o : protocol.outputs)
    if (parties[input.index_of(o.party)].id.role != Role::honest)
      throw AlphabetMismatch("output map for non-honest party '" + o.party + "'");

  const std::size_t total = protocol.total_messages();
  if (total > static_cast<std::size_t>(INT_MAX)) throw ProtocolError("transcript space too large");
  const std::string transcript = fresh_label(input, "M");
  out_parties.push_back({{transcript, Role::public_channel}, static_cast<int>(total)});
  for (std::size_t i = 0; i < parties.size(); ++i)
    if (parties[i].id.role != Role::honest) {
      eve_slots.push_back(i);
      out_parties.push_back(parties[i]);
    }

  std::map<Outcome, Prob> entries;
  std::vector<Prob> message_weights(total, Prob(0));
  Outcome out(out_parties.size());
  const std::size_t rounds = protocol.rounds.size();

  for (const auto& [x, px] : input.entries()) {
    // Depth-first over rounds, carrying the running probability and message index.
    struct Frame {
      std::size_t round;
      std::size_t message;
      Prob weight;
    };
    std::vector<Frame> stack{{0, 0, px}};
    while (!stack.empty()) {
      Frame f = std::move(stack.back());
      stack.pop_back();
      if (f.round == rounds) {
        std::size_t slot = 0;
        for (const auto& s : honest_slots)
          out[slot++] = s.map ? s.map->per_message[f.message][x[s.source]] : x[s.source];
        out[slot++] = static_cast<int>(f.message);
        for (auto e : eve_slots) out[slot++] = x[e];
        entries[out] += f.weight;
        message_weights[f.message] += f.weight;
        continue;
      }
      const auto& row = protocol.rounds[f.round].rule.table[x[speaker_index[f.round]]];
      const std::size_t radix = row.size();
      for (std::size_t m = radix; m-- > 0;) {
        if (sgn(row[m]) == 0) continue;
        stack.push_back({f.round + 1, f.message * radix + m, f.weight * row[m]});
      }
    }
  }

  ExecutionResult result{JointDist(std::move(out_parties), std::move(entries)), {}, transcript,
                         protocol.fail ? std::optional(protocol.fail->message) : std::nullopt,
                         std::move(message_weights)};

  const std::size_t used = static_cast<std::size_t>(std::count_if(
      result.message_weights.begin(), result.message_weights.end(),
      [](const Prob& w) { return sgn(w) > 0; }));
  result.ledger.public_bits_sent = used > 1 ? std::log2(static_cast<double>(used)) : 0.0;
  result.ledger.shared_secret_bits_consumed =
      cut_information(input, input.labels_with_role(Role::honest), input.eve_view_labels());
  result.ledger.secret_bits_delivered =
      cut_information(result.joint, result.joint.labels_with_role(Role::honest),
                      result.joint.eve_view_labels());
  return result;
}

SecrecyReport verify_secrecy(const ExecutionResult& result,
                             const std::optional<SecrecySpectrum>& target,
                             bool conditioned_on_success) {
  SecrecyReport report;
  report.ledger = result.ledger;

  const JointDist* joint = &result.joint;
  std::optional<JointDist> conditioned;
  if (conditioned_on_success && result.fail_message) {
    const auto mi = result.joint.index_of(result.transcript_label);
    const int fail = static_cast<int>(*result.fail_message);
    Prob success = 0;
    for (const auto& [o, p] : result.joint.entries())
      if (o[mi] != fail) success += p;
    report.branch_probability = success;
    if (sgn(success) == 0) {
      report.detail = "protocol never succeeds";
      return report;
    }
    std::map<Outcome, Prob> kept;
    for (const auto& [o, p] : result.joint.entries())
      if (o[mi] != fail) kept.emplace(o, p / success);
    conditioned.emplace(result.joint.parties(), std::move(kept));
    joint = &*conditioned;
  }

  const auto outputs = joint->labels_with_role(Role::honest);
  const auto view = joint->eve_view_labels();
  if (outputs.empty()) {
    report.detail = "no honest outputs";
    return report;
  }
  report.eve_information = view.empty() ? 0.0 : mutual_information(*joint, outputs, view);

  const JointDist honest_part = marginal(*joint, outputs);
  report.output_spectrum = perfect_correlation_spectrum(honest_part);

  bool factorizes = true;
  if (!view.empty() && !is_product(*joint, outputs, view)) {
    factorizes = false;
    const JointDist eve_part = marginal(*joint, view);
    const auto oi = [&] {
      std::vector<std::size_t> idx;
      for (const auto& l : outputs) idx.push_back(joint->index_of(l));
      return idx;
    }();
    const auto vi = [&] {
      std::vector<std::size_t> idx;
      for (const auto& l : view) idx.push_back(joint->index_of(l));
      return idx;
    }();
    for (const auto& [y, py] : honest_part.entries()) {
      bool found = false;
      for (const auto& [v, pv] : eve_part.entries()) {
        Outcome full(joint->parties().size());
        for (std::size_t k = 0; k < oi.size(); ++k) full[oi[k]] = y[k];
        for (std::size_t k = 0; k < vi.size(); ++k) full[vi[k]] = v[k];
        const Prob actual = joint->probability(full);
        if (actual != py * pv) {
          report.detail = "p(y=" + outcome_string(y) + ", view=" + outcome_string(v) +
                          ") = " + to_string(actual) + " but p(y)p(view) = " +
                          to_string(Prob(py * pv));
          found = true;
          break;
        }
      }
      if (found) break;
    }
  }

  if (!factorizes) return report;
  if (!report.output_spectrum) {
    report.detail = "honest outputs are not perfectly correlated";
    return report;
  }
  if (target && !(*report.output_spectrum == *target)) {
    report.detail = "output spectrum " + report.output_spectrum->to_string() +
                    " differs from target " + target->to_string();
    return report;
  }
  report.verdict = Verdict::secret;
  report.eve_information = 0.0;
  report.detail = "p(y, view) = p(y) p(view) on all " +
                  std::to_string(honest_part.entries().size()) + " x " +
                  std::to_string(view.empty() ? 1 : marginal(*joint, view).entries().size()) +
                  " cells";
  return report;
}

// --- one-time pad ----------------------------------------------------------------

JointDist otp_state(const SecrecySpectrum& message_source, const SecrecySpectrum& key,
                    std::size_t uses) {
  if (uses == 0) throw std::invalid_argument("otp_state needs at least one use");
  const int ms = static_cast<int>(message_source.size());
  const int ks = static_cast<int>(key.size());
  int alice = ks;
  for (std::size_t u = 0; u < uses; ++u) alice *= ms;

  auto parties = honest({{"A", alice}, {"B", ks}});
  parties.push_back(eve());
  std::map<Outcome, Prob> entries;
  std::vector<int> digits(uses, 0);
  const int messages = alice / ks;
  for (int code = 0; code < messages; ++code) {
    int rest = code;
    Prob weight = 1;
    for (std::size_t u = uses; u-- > 0;) {
      digits[u] = rest % ms;
      rest /= ms;
      weight *= message_source[static_cast<std::size_t>(digits[u])];
    }
    for (int k = 0; k < ks; ++k) entries[{code * ks + k, k, 0}] = weight * key[static_cast<std::size_t>(k)];
  }
  return JointDist(std::move(parties), std::move(entries));
}

ProtocolIR build_otp_protocol(std::size_t message_alphabet, std::size_t key_alphabet,
                              std::size_t uses) {
  if (message_alphabet == 0 || uses == 0) throw std::invalid_argument("empty OTP");
  if (message_alphabet > key_alphabet)
    throw KeyTooSmall("message alphabet " + std::to_string(message_alphabet) +
                      " exceeds key alphabet " + std::to_string(key_alphabet));
  const int ms = static_cast<int>(message_alphabet);
  const int ks = static_cast<int>(key_alphabet);
  int alice = ks;
  for (std::size_t u = 0; u < uses; ++u) alice *= ms;

  auto digits_of = [&](int a) {
    std::vector<int> s(uses);
    int rest = a / ks;
    for (std::size_t u = uses; u-- > 0;) {
      s[u] = rest % ms;
      rest /= ms;
    }
    return s;
  };

  ProtocolIR p;
  for (std::size_t u = 0; u < uses; ++u) {
    MessageRule rule;
    rule.table.assign(static_cast<std::size_t>(alice), std::vector<Prob>(key_alphabet, Prob(0)));
    for (int a = 0; a < alice; ++a) {
      const int k = a % ks;
      rule.table[static_cast<std::size_t>(a)][static_cast<std::size_t>((digits_of(a)[u] + k) % ks)] = 1;
    }
    p.rounds.push_back({"A", std::move(rule)});
  }

  const std::size_t total = p.total_messages();
  int out_alphabet = 1;
  for (std::size_t u = 0; u < uses; ++u) out_alphabet *= ks;
  OutputMap a_map{"A", {}, out_alphabet};
  OutputMap b_map{"B", {}, out_alphabet};
  for (std::size_t m = 0; m < total; ++m) {
    const auto cipher = p.decode_message(m);
    std::vector<int> arow(static_cast<std::size_t>(alice));
    for (int a = 0; a < alice; ++a) {
      int code = 0;
      for (int s : digits_of(a)) code = code * ks + s;
      arow[static_cast<std::size_t>(a)] = code;
    }
    std::vector<int> brow(key_alphabet);
    for (int k = 0; k < ks; ++k) {
      int code = 0;
      for (auto c : cipher) code = code * ks + ((static_cast<int>(c) - k) % ks + ks) % ks;
      brow[static_cast<std::size_t>(k)] = code;
    }
    a_map.per_message.push_back(std::move(arow));
    b_map.per_message.push_back(std::move(brow));
  }
  p.outputs = {std::move(a_map), std::move(b_map)};
  return p;
}

ProtocolIR build_otp_protocol(const SecrecySpectrum& message_source) {
  return build_otp_protocol(message_source.size(), 2, 1);
}

ProtocolIR build_disclosure_protocol(std::size_t alphabet) {
  MessageRule rule;
  rule.table.assign(alphabet, std::vector<Prob>(alphabet, Prob(0)));
  for (std::size_t x = 0; x < alphabet; ++x) rule.table[x][x] = 1;
  ProtocolIR p;
  p.rounds.push_back({"A", std::move(rule)});
  return p;
}

// --- single-copy purity no-go ----------------------------------------------------

namespace {

struct SupportGrid {
  int na = 0;
  int nb = 0;
  std::vector<std::pair<int, int>> cells;
};

SupportGrid prepare_search(const JointDist& d) {
  const auto verdict = classify_pure(d);
  if (std::holds_alternative<Mixed>(verdict))
    throw NotBlockPure("Eve is correlated with the honest parties");
  const auto ab = marginal(d, d.labels_with_role(Role::honest));
  SupportGrid g{ab.parties()[0].alphabet, ab.parties()[1].alphabet, {}};
  if (g.na + g.nb > 16) throw std::invalid_argument("alphabets too large for exhaustive search");
  for (const auto& [o, p] : ab.entries()) g.cells.emplace_back(o[0], o[1]);
  return g;
}

std::size_t power3(int n) {
  std::size_t r = 1;
  for (int i = 0; i < n; ++i) r *= 3;
  return r;
}

void decode_op(std::size_t code, std::vector<int>& op) {
  for (auto& v : op) {
    v = static_cast<int>(code % 3);
    code /= 3;
  }
}

bool yields_pure_pair(const SupportGrid& g, const std::vector<int>& a, const std::vector<int>& b) {
  bool seen0 = false;
  bool seen1 = false;
  for (const auto& [x, y] : g.cells) {
    const int fa = a[static_cast<std::size_t>(x)];
    const int fb = b[static_cast<std::size_t>(y)];
    if (fa == SingleCopyWitness::kReject || fb == SingleCopyWitness::kReject) continue;
    if (fa != fb) return false;
    (fa == 0 ? seen0 : seen1) = true;
  }
  return seen0 && seen1;
}

// Smallest Bob operation completing Alice's operation `ia`, or npos.
std::size_t first_partner(const SupportGrid& g, std::size_t ia) {
  std::vector<int> a(static_cast<std::size_t>(g.na));
  std::vector<int> b(static_cast<std::size_t>(g.nb));
  decode_op(ia, a);
  const std::size_t nbops = power3(g.nb);
  for (std::size_t ib = 0; ib < nbops; ++ib) {
    decode_op(ib, b);
    if (yields_pure_pair(g, a, b)) return ib;
  }
  return static_cast<std::size_t>(-1);
}

SingleCopyWitness make_witness(const SupportGrid& g, std::size_t ia, std::size_t ib) {
  SingleCopyWitness w;
  if (ib == static_cast<std::size_t>(-1)) return w;
  w.reachable = true;
  w.alice.resize(static_cast<std::size_t>(g.na));
  w.bob.resize(static_cast<std::size_t>(g.nb));
  decode_op(ia, w.alice);
  decode_op(ib, w.bob);
  return w;
}

}  // namespace

namespace serial {

SingleCopyWitness single_copy_pure_search(const JointDist& d) {
  const auto g = prepare_search(d);
  const std::size_t naops = power3(g.na);
  for (std::size_t ia = 0; ia < naops; ++ia) {
    const auto ib = first_partner(g, ia);
    if (ib != static_cast<std::size_t>(-1)) return make_witness(g, ia, ib);
  }
  return {};
}

}  // namespace serial

SingleCopyWitness single_copy_pure_search(const JointDist& d) {
  const auto g = prepare_search(d);
  const auto naops = static_cast<long long>(power3(g.na));
  long long best = naops;
#pragma omp parallel for schedule(dynamic) reduction(min : best)
  for (long long ia = 0; ia < naops; ++ia) {
    if (ia >= best) continue;
    if (first_partner(g, static_cast<std::size_t>(ia)) != static_cast<std::size_t>(-1)) best = ia;
  }
  if (best == naops) return {};
  const auto ia = static_cast<std::size_t>(best);
  return make_witness(g, ia, first_partner(g, ia));
}

bool pure_reachable_single_copy(const JointDist& d) { return single_copy_pure_search(d).reachable; }

}  // namespace lopc
