#pragma once

#include "lopc/majorization.hpp"
#include "lopc/protocol.hpp"

#include <set>

namespace lopc {

class NonUniformKeepSet : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ConversionReport {
  ProtocolIR protocol;
  Prob success_probability;
  SecrecySpectrum target;
};

// One Alice announcement that turns the pure state p into q with certainty.
// Messages are the Birkhoff terms of transfer_matrix(q, p) read forwards:
// message k has weight w_k and relabels x -> row_to_col[x]. Returns an empty
// protocol when p == q. Throws MajorizationFails unless q majorizes p.
ProtocolIR synthesize_deterministic(const SecrecySpectrum& p, const SecrecySpectrum& q);

// Optimal single-copy conversion: success messages carry a deterministic
// conversion of the truncated sub-distribution min(p, t) / lambda, and one
// fail message sends every symbol to 0.
ConversionReport synthesize_probabilistic(const SecrecySpectrum& p, const SecrecySpectrum& q);

// OK / not-OK filter onto `keep`: 1-based spectrum positions, all with equal
// weight. Kept symbols become 0..k-1 in position order.
ConversionReport procrustean(const SecrecySpectrum& p, const std::set<std::size_t>& keep);

// Forward messages realising D q = p for sorted vectors (p padded to the
// common length): each entry is (weight, x -> y relabeling, p(m|x) row).
struct ShuffleMessage {
  Prob weight;
  std::vector<int> relabel;
  std::vector<Prob> given_x;
};
std::vector<ShuffleMessage> shuffle_messages(const ProbVector& p, const ProbVector& q);

}  // namespace lopc
