#pragma once

#include "lopc/rational.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace lopc {

class DistError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NormalizationError : public DistError {
 public:
  NormalizationError(const std::string& what, Rational deficit)
      : DistError(what), deficit_(std::move(deficit)) {}
  // 1 - (sum of entries); negative when the entries overshoot.
  const Rational& deficit() const { return deficit_; }

 private:
  Rational deficit_;
};

enum class Role { honest, eavesdropper, public_channel };

std::string_view to_string(Role role);
Role parse_role(std::string_view text);

struct PartyId {
  std::string label;
  Role role = Role::honest;

  friend bool operator==(const PartyId&, const PartyId&) = default;
};

struct Party {
  PartyId id;
  int alphabet = 1;

  const std::string& label() const { return id.label; }
  friend bool operator==(const Party&, const Party&) = default;
};

std::vector<Party> honest(std::initializer_list<std::pair<std::string, int>> parties);
Party eve(int alphabet = 1);

using Outcome = std::vector<int>;

/// Finitely supported exact joint distribution over named parties.
///
/// Entries are strictly positive and sum to exactly one; outcomes with zero
/// probability are not stored. There is at most one eavesdropper.
class JointDist {
 public:
  JointDist(std::vector<Party> parties, std::map<Outcome, Prob> entries);

  const std::vector<Party>& parties() const { return parties_; }
  const std::map<Outcome, Prob>& entries() const { return entries_; }

  std::size_t index_of(std::string_view label) const;
  bool has_party(std::string_view label) const;
  const Party& party(std::string_view label) const { return parties_[index_of(label)]; }

  std::vector<std::string> labels() const;
  std::vector<std::string> labels_with_role(Role role) const;
  // Eavesdropper and public-channel variables: everything Eve gets to see.
  std::vector<std::string> eve_view_labels() const;

  Prob probability(const Outcome& outcome) const;

  friend bool operator==(const JointDist&, const JointDist&) = default;

 private:
  std::vector<Party> parties_;
  std::map<Outcome, Prob> entries_;
};

/// Nonnegative weights summing to one, in caller order.
class ProbVector {
 public:
  ProbVector() = default;
  explicit ProbVector(std::vector<Prob> weights);

  const std::vector<Prob>& weights() const { return weights_; }
  std::size_t size() const { return weights_.size(); }
  const Prob& operator[](std::size_t i) const { return weights_[i]; }

  // Copy padded with zeros up to n entries.
  ProbVector padded(std::size_t n) const;
  // Copy sorted descending (stable).
  ProbVector sorted_desc() const;

  friend bool operator==(const ProbVector&, const ProbVector&) = default;

 private:
  std::vector<Prob> weights_;
};

/// Descending weights of a classical pure state; zero weights are dropped.
class SecrecySpectrum {
 public:
  SecrecySpectrum() : weights_{Prob(1)} {}
  explicit SecrecySpectrum(std::vector<Prob> weights);
  static SecrecySpectrum parse(std::string_view text);
  static SecrecySpectrum uniform(std::size_t n);

  const std::vector<Prob>& weights() const { return weights_; }
  std::size_t size() const { return weights_.size(); }
  const Prob& operator[](std::size_t i) const { return weights_[i]; }
  ProbVector vector() const { return ProbVector(weights_); }

  std::string to_string() const;

  friend bool operator==(const SecrecySpectrum&, const SecrecySpectrum&) = default;

 private:
  std::vector<Prob> weights_;
};

struct PureState {
  SecrecySpectrum spectrum;
  // Local relabelings that bring the support onto {(i,i)}: alice_map[a] and
  // bob_map[b] give the spectrum index, or -1 for unused symbols.
  std::vector<int> alice_map;
  std::vector<int> bob_map;
};
struct BlockPure {};
struct Mixed {};

using PureVerdict = std::variant<PureState, BlockPure, Mixed>;

std::string_view verdict_name(const PureVerdict& v);

// --- operations ----------------------------------------------------------------

JointDist marginal(const JointDist& d, const std::vector<std::string>& keep);

bool is_product(const JointDist& d, const std::vector<std::string>& lhs,
                const std::vector<std::string>& rhs);

PureVerdict classify_pure(const JointDist& d);

// Spectrum of a distribution in which every party's symbol determines every
// other party's symbol (support is injective in each coordinate); nullopt
// otherwise. Ignores roles: pass the honest marginal.
std::optional<SecrecySpectrum> perfect_correlation_spectrum(const JointDist& d);

double entropy_of_secrecy(const SecrecySpectrum& s);

// Shannon entropy (bits) of the marginal on `labels` (all parties if empty).
double entropy(const JointDist& d, const std::vector<std::string>& labels = {});

double mutual_information(const JointDist& d, const std::vector<std::string>& a,
                          const std::vector<std::string>& b,
                          const std::vector<std::string>& given = {});
double mutual_information(const JointDist& d, const std::string& a, const std::string& b,
                          const std::optional<std::string>& given = std::nullopt);

// --- canonical states ----------------------------------------------------------

// delta_ij p_i with a constant Eve: parties A, B (alphabet = spectrum size), E.
JointDist make_pure_state(const SecrecySpectrum& s);

// Applies per-party symbol maps (party label -> old symbol -> new symbol);
// symbols outside the support may map to -1.
JointDist relabel(const JointDist& d, const std::map<std::string, std::vector<int>>& maps);

}  // namespace lopc
