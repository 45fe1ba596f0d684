#pragma once

#include "lopc/dist.hpp"
#include "lopc/protocol.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lopc {

class AlphabetMismatch : public ProtocolError {
 public:
  using ProtocolError::ProtocolError;
};

class KeyTooSmall : public ProtocolError {
 public:
  using ProtocolError::ProtocolError;
};

class NotBlockPure : public DistError {
 public:
  using DistError::DistError;
};

struct ResourceLedger {
  double shared_secret_bits_consumed = 0.0;
  double public_bits_sent = 0.0;
  double secret_bits_delivered = 0.0;
};

/// Exact joint over (honest outputs..., transcript, Eve) after running a protocol.
struct ExecutionResult {
  JointDist joint;
  ResourceLedger ledger;
  std::string transcript_label;
  std::optional<std::size_t> fail_message;
  // Probability of each total message (index = total message).
  std::vector<Prob> message_weights;
};

enum class Verdict { secret, leaky };
std::string_view to_string(Verdict v);

struct SecrecyReport {
  Verdict verdict = Verdict::leaky;
  // I(honest outputs ; transcript, Eve) in bits.
  double eve_information = 0.0;
  std::optional<SecrecySpectrum> output_spectrum;
  // Factorization witness on SECRET, first counterexample otherwise.
  std::string detail;
  ResourceLedger ledger;
  // Weight of the branch the verdict refers to (1 unless conditioned on success).
  Prob branch_probability = 1;
};

// Exact propagation of every (input, dice, transcript) branch; no sampling.
ExecutionResult execute(const ProtocolIR& protocol, const JointDist& input);

// SECRET iff the honest outputs are perfectly correlated, factor exactly from
// (transcript, Eve) and, when a target is given, have exactly that spectrum.
SecrecyReport verify_secrecy(const ExecutionResult& result,
                             const std::optional<SecrecySpectrum>& target,
                             bool conditioned_on_success = false);

// --- one-time pad ---------------------------------------------------------------

// Alice: (s_1, ..., s_uses, k) encoded mixed radix (message symbols radix
// `message_source.size()`, key last); Bob: k; Eve constant.
JointDist otp_state(const SecrecySpectrum& message_source, const SecrecySpectrum& key,
                    std::size_t uses = 1);

// Alice announces s_u + k mod |key| for each use; Bob outputs c_u - k. Both
// output the message tuple encoded radix |key|; Alice forgets the key.
ProtocolIR build_otp_protocol(std::size_t message_alphabet, std::size_t key_alphabet = 2,
                              std::size_t uses = 1);
ProtocolIR build_otp_protocol(const SecrecySpectrum& message_source);

// Alice announces her symbol verbatim.
ProtocolIR build_disclosure_protocol(std::size_t alphabet);

// --- single-copy purity no-go ---------------------------------------------------

/// Local operation on one party's symbols under a single message: each input
/// symbol maps to 0 or 1, or to kReject (the party withholds the message).
struct SingleCopyWitness {
  static constexpr int kReject = 2;
  bool reachable = false;
  std::vector<int> alice;
  std::vector<int> bob;
};

// Exhaustive search over pairs of local operations for one that leaves, with
// positive probability, an output supported exactly on {(0,0),(1,1)}.
SingleCopyWitness single_copy_pure_search(const JointDist& d);
bool pure_reachable_single_copy(const JointDist& d);

namespace serial {
SingleCopyWitness single_copy_pure_search(const JointDist& d);
}

}  // namespace lopc
