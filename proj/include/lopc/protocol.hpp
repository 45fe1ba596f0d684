#pragma once

#include "lopc/dist.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lopc {

class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// p(m | x) for one public announcement; table[x][m], each row sums to one.
struct MessageRule {
  std::vector<std::vector<Prob>> table;

  std::size_t inputs() const { return table.size(); }
  std::size_t messages() const { return table.empty() ? 0 : table.front().size(); }
  void validate() const;
};

struct Round {
  std::string speaker;
  MessageRule rule;
};

/// Symbol map applied by one party after the whole transcript is known:
/// per_message[m][x] is the new symbol for old symbol x under total message m.
struct OutputMap {
  std::string party;
  std::vector<std::vector<int>> per_message;
  // Output alphabet; 0 means one past the largest target.
  int alphabet = 0;

  int output_alphabet() const;
};

struct FailMessage {
  // Total-message index that signals failure.
  std::size_t message = 0;
  // Every output party maps every symbol here under the fail message.
  int sink = 0;
};

/// LOPC protocol: public announcements (each depending only on the
/// speaker's own variable and private dice), then local relabelings that
/// may depend on the full transcript.
///
/// Total messages are numbered mixed-radix over the rounds, first round most
/// significant. Parties without an OutputMap keep their variable; parties in
/// `forget` drop it.
struct ProtocolIR {
  std::vector<Round> rounds;
  std::vector<OutputMap> outputs;
  std::vector<std::string> forget;
  std::optional<FailMessage> fail;

  std::size_t total_messages() const;
  std::vector<std::size_t> decode_message(std::size_t total) const;
  const OutputMap* output_for(const std::string& party) const;
  void validate() const;

  friend bool operator==(const ProtocolIR&, const ProtocolIR&);
};

bool operator==(const MessageRule&, const MessageRule&);
bool operator==(const Round&, const Round&);
bool operator==(const OutputMap&, const OutputMap&);
bool operator==(const FailMessage&, const FailMessage&);

// True iff `map` restricted to `domain` (symbols with domain[x] true) is one-to-one.
bool injective_on(const std::vector<int>& map, const std::vector<bool>& domain);

}  // namespace lopc
