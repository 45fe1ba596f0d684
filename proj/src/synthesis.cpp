#include "lopc/synthesis.hpp"

#include <algorithm>
#include <numeric>

namespace lopc {

namespace {

bool is_identity(const std::vector<int>& map) {
  for (std::size_t i = 0; i < map.size(); ++i)
    if (map[i] != static_cast<int>(i)) return false;
  return true;
}

// Single Alice round plus a common relabeling for A and B per message.
ProtocolIR alice_round(std::size_t inputs, const std::vector<std::vector<Prob>>& columns,
                       const std::vector<std::vector<int>>& maps, int out_alphabet) {
  ProtocolIR p;
  MessageRule rule;
  rule.table.assign(inputs, std::vector<Prob>(columns.size(), Prob(0)));
  for (std::size_t x = 0; x < inputs; ++x) {
    Rational row = 0;
    for (std::size_t m = 0; m < columns.size(); ++m) {
      rule.table[x][m] = columns[m][x];
      row += columns[m][x];
    }
    // Symbols that never occur still need a normalized row.
    if (sgn(row) == 0) rule.table[x][0] = 1;
  }
  p.rounds.push_back({"A", std::move(rule)});
  for (const char* party : {"A", "B"}) {
    OutputMap o{party, {}, out_alphabet};
    for (const auto& m : maps) o.per_message.emplace_back(m.begin(), m.begin() + static_cast<std::ptrdiff_t>(inputs));
    p.outputs.push_back(std::move(o));
  }
  return p;
}

}  // namespace

std::vector<ShuffleMessage> shuffle_messages(const ProbVector& p, const ProbVector& q) {
  const std::size_t n = std::max(p.size(), q.size());
  const auto pp = p.padded(n);
  const auto qp = q.padded(n);
  const auto mix = birkhoff(transfer_matrix(qp, pp));

  std::vector<ShuffleMessage> out;
  for (const auto& term : mix.terms) {
    ShuffleMessage m{term.weight, term.row_to_col, std::vector<Prob>(n, Prob(0))};
    for (std::size_t x = 0; x < n; ++x)
      if (sgn(pp[x]) > 0) m.given_x[x] = term.weight * qp[static_cast<std::size_t>(term.row_to_col[x])] / pp[x];

    // Permutations that agree wherever the message can be sent are the same message.
    auto same = std::find_if(out.begin(), out.end(), [&](const ShuffleMessage& o) {
      for (std::size_t x = 0; x < n; ++x) {
        const bool a = sgn(o.given_x[x]) > 0;
        const bool b = sgn(m.given_x[x]) > 0;
        if (a != b || (a && o.relabel[x] != m.relabel[x])) return false;
      }
      return true;
    });
    if (same == out.end()) {
      out.push_back(std::move(m));
    } else {
      same->weight += m.weight;
      for (std::size_t x = 0; x < n; ++x) same->given_x[x] += m.given_x[x];
    }
  }
  return out;
}

ProtocolIR synthesize_deterministic(const SecrecySpectrum& p, const SecrecySpectrum& q) {
  if (!majorizes(q, p))
    throw MajorizationFails("target " + q.to_string() + " does not majorize " + p.to_string());
  const auto messages = shuffle_messages(p.vector(), q.vector());
  if (messages.size() == 1 && is_identity(messages.front().relabel)) return {};

  const std::size_t n = std::max(p.size(), q.size());
  std::vector<std::vector<Prob>> columns;
  std::vector<std::vector<int>> maps;
  for (const auto& m : messages) {
    columns.push_back(m.given_x);
    maps.push_back(m.relabel);
  }
  return alice_round(p.size(), columns, maps, static_cast<int>(n));
}

ConversionReport synthesize_probabilistic(const SecrecySpectrum& p, const SecrecySpectrum& q) {
  const Prob lambda = optimal_conversion_probability(p, q);
  if (lambda == 1) return {synthesize_deterministic(p, q), Prob(1), q};

  const std::size_t n = std::max(p.size(), q.size());
  const auto& pw = p.weights();

  std::vector<std::vector<Prob>> columns;
  std::vector<std::vector<int>> maps;
  std::vector<Prob> fail_given_x(p.size(), Prob(1));

  if (sgn(lambda) > 0) {
    // Water-filling: u_i = min(p_i, t) with sum u = lambda. Among all
    // sub-distributions below p with that mass it is the most spread out, so
    // u / lambda is majorized by q whenever lambda is attainable.
    Rational tail = 1;
    Rational t = -1;
    for (std::size_t r = 1; r <= pw.size(); ++r) {
      tail -= pw[r - 1];
      const Rational candidate = (lambda - tail) / Rational(static_cast<long>(r));
      const Rational next = r < pw.size() ? pw[r] : Rational(0);
      if (candidate <= pw[r - 1] && candidate >= next) {
        t = candidate;
        break;
      }
    }
    if (sgn(t) < 0) throw std::logic_error("no truncation level for success sub-distribution");

    std::vector<Prob> scaled(n, Prob(0));
    std::vector<Prob> u(pw.size());
    for (std::size_t i = 0; i < pw.size(); ++i) {
      u[i] = std::min(pw[i], Prob(t));
      scaled[i] = u[i] / lambda;
    }
    for (const auto& m : shuffle_messages(ProbVector(scaled), q.vector())) {
      std::vector<Prob> col(p.size());
      for (std::size_t x = 0; x < p.size(); ++x) col[x] = u[x] / pw[x] * m.given_x[x];
      columns.push_back(std::move(col));
      maps.push_back(m.relabel);
    }
    for (std::size_t x = 0; x < p.size(); ++x) fail_given_x[x] = (pw[x] - u[x]) / pw[x];
  }

  columns.push_back(fail_given_x);
  maps.emplace_back(n, 0);
  ConversionReport report{alice_round(p.size(), columns, maps, static_cast<int>(n)), lambda, q};
  report.protocol.fail = FailMessage{columns.size() - 1, 0};
  report.protocol.validate();
  return report;
}

ConversionReport procrustean(const SecrecySpectrum& p, const std::set<std::size_t>& keep) {
  if (keep.empty()) throw NonUniformKeepSet("keep set is empty");
  for (auto i : keep)
    if (i == 0 || i > p.size()) throw NonUniformKeepSet("keep position " + std::to_string(i) + " out of range");
  const Prob& level = p[*keep.begin() - 1];
  for (auto i : keep)
    if (p[i - 1] != level) throw NonUniformKeepSet("kept weights differ: " + p.to_string());

  const std::size_t n = p.size();
  std::vector<Prob> ok(n, Prob(0));
  std::vector<Prob> not_ok(n, Prob(0));
  std::vector<int> ok_map(n);
  int next_kept = 0;
  int next_other = static_cast<int>(keep.size());
  Prob success = 0;
  for (std::size_t x = 0; x < n; ++x) {
    if (keep.contains(x + 1)) {
      ok[x] = 1;
      ok_map[x] = next_kept++;
      success += p[x];
    } else {
      not_ok[x] = 1;
      ok_map[x] = next_other++;
    }
  }
  ConversionReport report{alice_round(n, {ok, not_ok}, {ok_map, std::vector<int>(n, 0)},
                                      static_cast<int>(n)),
                          success, SecrecySpectrum::uniform(keep.size())};
  report.protocol.fail = FailMessage{1, 0};
  report.protocol.validate();
  return report;
}

}  // namespace lopc
