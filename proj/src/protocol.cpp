#include "lopc/protocol.hpp"

#include <algorithm>
#include <set>

namespace lopc {

void MessageRule::validate() const {
  if (table.empty()) throw ProtocolError("message rule has no input rows");
  const std::size_t m = table.front().size();
  if (m == 0) throw ProtocolError("message rule has no messages");
  for (std::size_t x = 0; x < table.size(); ++x) {
    if (table[x].size() != m) throw ProtocolError("ragged message table");
    Rational total = 0;
    for (const auto& w : table[x]) {
      if (sgn(w) < 0) throw ProtocolError("negative message weight");
      total += w;
    }
    if (total != 1)
      throw ProtocolError("message weights for input " + std::to_string(x) + " sum to " +
                          to_string(total));
  }
}

int OutputMap::output_alphabet() const {
  int width = 1;
  for (const auto& row : per_message)
    for (int v : row) width = std::max(width, v + 1);
  return std::max(width, alphabet);
}

std::size_t ProtocolIR::total_messages() const {
  std::size_t total = 1;
  for (const auto& r : rounds) total *= r.rule.messages();
  return total;
}

std::vector<std::size_t> ProtocolIR::decode_message(std::size_t total) const {
  std::vector<std::size_t> out(rounds.size(), 0);
  for (std::size_t i = rounds.size(); i-- > 0;) {
    const std::size_t radix = rounds[i].rule.messages();
    out[i] = total % radix;
    total /= radix;
  }
  return out;
}

const OutputMap* ProtocolIR::output_for(const std::string& party) const {
  for (const auto& o : outputs)
    if (o.party == party) return &o;
  return nullptr;
}

void ProtocolIR::validate() const {
  for (const auto& r : rounds) {
    if (r.speaker.empty()) throw ProtocolError("round without speaker");
    r.rule.validate();
  }
  const std::size_t total = total_messages();
  std::set<std::string> seen;
  for (const auto& o : outputs) {
    if (!seen.insert(o.party).second) throw ProtocolError("two output maps for '" + o.party + "'");
    if (o.per_message.size() != total)
      throw ProtocolError("output map for '" + o.party + "' covers " +
                          std::to_string(o.per_message.size()) + " of " + std::to_string(total) +
                          " total messages");
    for (const auto& row : o.per_message)
      for (int v : row)
        if (v < 0) throw ProtocolError("negative output symbol");
    if (o.alphabet < 0) throw ProtocolError("negative output alphabet");
  }
  for (const auto& f : forget)
    if (seen.contains(f)) throw ProtocolError("party '" + f + "' is both mapped and forgotten");
  if (fail) {
    if (fail->message >= total) throw ProtocolError("fail message out of range");
    for (const auto& o : outputs)
      for (int v : o.per_message[fail->message])
        if (v != fail->sink) throw ProtocolError("fail message must map every symbol to the sink");
  }
}

bool operator==(const MessageRule& a, const MessageRule& b) { return a.table == b.table; }
bool operator==(const Round& a, const Round& b) {
  return a.speaker == b.speaker && a.rule == b.rule;
}
bool operator==(const OutputMap& a, const OutputMap& b) {
  return a.party == b.party && a.per_message == b.per_message &&
         a.output_alphabet() == b.output_alphabet();
}
bool operator==(const FailMessage& a, const FailMessage& b) {
  return a.message == b.message && a.sink == b.sink;
}
bool operator==(const ProtocolIR& a, const ProtocolIR& b) {
  return a.rounds == b.rounds && a.outputs == b.outputs && a.forget == b.forget &&
         a.fail == b.fail;
}

bool injective_on(const std::vector<int>& map, const std::vector<bool>& domain) {
  std::set<int> images;
  for (std::size_t x = 0; x < map.size(); ++x)
    if (x < domain.size() && domain[x] && !images.insert(map[x]).second) return false;
  return true;
}

}  // namespace lopc
