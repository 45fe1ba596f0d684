#pragma once

#include "lopc/dist.hpp"

#include <vector>

namespace lopc {

class MajorizationFails : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotDoublyStochastic : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Matrix = std::vector<std::vector<Rational>>;

/// Square matrix of exact rationals whose rows and columns all sum to one.
class DoublyStochastic {
 public:
  explicit DoublyStochastic(Matrix rows);
  static DoublyStochastic identity(std::size_t n);

  std::size_t size() const { return rows_.size(); }
  const Rational& at(std::size_t row, std::size_t col) const { return rows_[row][col]; }
  const Matrix& rows() const { return rows_; }

  std::vector<Rational> apply(const std::vector<Rational>& v) const;

  friend bool operator==(const DoublyStochastic&, const DoublyStochastic&) = default;

 private:
  Matrix rows_;
};

/// Permutation matrix P with P[i][row_to_col[i]] = 1, so (P v)_i = v[row_to_col[i]].
///
/// Read as a shuffle that moves the content of box row_to_col[i] into box i;
/// in a conversion protocol that is the forward relabeling x = i -> y = row_to_col[i].
struct PermutationTerm {
  std::vector<int> row_to_col;
  Prob weight;
};

struct PermutationMix {
  std::vector<PermutationTerm> terms;

  Matrix matrix() const;
};

// q majorizes p: every descending prefix sum of q dominates that of p.
bool majorizes(const ProbVector& q, const ProbVector& p);
bool majorizes(const SecrecySpectrum& q, const SecrecySpectrum& p);

// Doubly stochastic D with D q = p (indices in the caller's order, both padded
// to a common length). Throws MajorizationFails unless q majorizes p.
DoublyStochastic transfer_matrix(const ProbVector& q, const ProbVector& p);

// Deterministic Birkhoff-von Neumann decomposition: repeatedly peel off the
// lexicographically smallest permutation inside the positive support, with
// weight equal to the smallest covered entry. At most (n-1)^2 + 1 terms.
PermutationMix birkhoff(const DoublyStochastic& d);

struct ConversionBound {
  Prob probability;
  // Prefix length attaining the minimum (smallest such k); 0 means no
  // constraint was binding.
  std::size_t binding_prefix = 0;
};

// Largest probability of turning p into q by LOPC, min_k (1 - P_k)/(1 - Q_k).
ConversionBound conversion_bound(const ProbVector& p, const ProbVector& q);
Prob optimal_conversion_probability(const ProbVector& p, const ProbVector& q);
Prob optimal_conversion_probability(const SecrecySpectrum& p, const SecrecySpectrum& q);

// Descending prefix sums of both vectors after padding to a common length.
struct PrefixComparison {
  std::vector<Rational> lhs;
  std::vector<Rational> rhs;
};
PrefixComparison prefix_sums(const ProbVector& q, const ProbVector& p);

}  // namespace lopc
