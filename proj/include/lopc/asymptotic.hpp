#pragma once

#include "lopc/engine.hpp"

#include <gmpxx.h>

#include <vector>

namespace lopc {

class DeltaTooSmall : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sequences of length N with the given symbol counts.
struct TypeClass {
  std::vector<std::size_t> counts;
  // Multinomial N! / prod counts!.
  mpz_class size;
  // Probability of any single member sequence.
  Prob sequence_probability;
  // size * sequence_probability.
  Prob probability;
};

// All type classes for alphabet |p|, lexicographically descending counts.
std::vector<TypeClass> type_classes(const SecrecySpectrum& p, std::size_t N);

mpz_class multinomial(const std::vector<std::size_t>& counts);

// Lexicographic rank of a sequence among the sequences of its type class.
mpz_class type_rank(const std::vector<int>& sequence, std::size_t alphabet);
std::vector<int> type_unrank(const std::vector<std::size_t>& counts, mpz_class rank);

/// Variable-length uniform bit string: `length` bits with value `value`.
struct Extracted {
  std::size_t length = 0;
  mpz_class value;

  // Index among all strings, shortest first: 2^length - 1 + value.
  mpz_class code() const;
};

// Splits [0, M) into consecutive dyadic blocks following the binary digits of
// M, largest first; a rank in a block of size 2^b yields its b-bit offset.
Extracted dyadic_extract(const mpz_class& rank, const mpz_class& class_size);

// Expected length of dyadic_extract over a uniform rank: sum_b b 2^b / M.
Rational dyadic_expected_bits(const mpz_class& class_size);

struct BlockReport {
  std::size_t N = 0;
  Rational expected_yield;
  double expected_yield_bits = 0.0;
  double rate = 0.0;
  double target_entropy = 0.0;
  // Dilution only.
  std::size_t key_bits_used = 0;
  double key_rate = 0.0;
  Prob failure_probability = 0;
  mpz_class typical_sequences;
};

// Zero-communication concentration. Type classes with equal sequence
// probability form one level set; both parties rank their common sequence
// inside its level (classes in type_classes order, then type_rank) and apply
// dyadic_extract.
BlockReport concentrate_block(const SecrecySpectrum& p, std::size_t N);
Extracted concentration_output(const SecrecySpectrum& p, const std::vector<int>& sequence);

namespace serial {
BlockReport concentrate_block(const SecrecySpectrum& p, std::size_t N);
}

std::vector<BlockReport> rate_report(const SecrecySpectrum& p, const std::vector<std::size_t>& Ns);

// Sequence codes: radix |p|, first symbol most significant.
std::vector<int> decode_sequence(std::size_t code, std::size_t alphabet, std::size_t N);
std::size_t encode_sequence(const std::vector<int>& sequence, std::size_t alphabet);

// N copies of make_pure_state(p) with each party's block encoded as one symbol.
JointDist block_state(const SecrecySpectrum& p, std::size_t N);

// concentrate_block as a protocol on block_state: no messages, both parties
// replace their sequence by Extracted::code().
ProtocolIR concentration_protocol(const SecrecySpectrum& p, std::size_t N);

// --- dilution ------------------------------------------------------------------

// Typical set {x : -log2 P(x) / N <= H(p) + delta}; Alice samples x^N
// privately, sends (index of x) xor k under a K-bit key, or a fail message
// when x is atypical.
BlockReport dilute_block(const SecrecySpectrum& p, std::size_t N, double delta);

// Whole typical type classes, in type_classes order.
std::vector<TypeClass> typical_classes(const SecrecySpectrum& p, std::size_t N, double delta);

// Alice: x^N code * 2^K + k, Bob: k, Eve constant; x ~ p^N and k uniform.
JointDist dilution_input(const SecrecySpectrum& p, std::size_t N, double delta);

// Message c < 2^K is the ciphertext, message 2^K is the fail message. On
// success both parties output the sequence code of x.
ProtocolIR dilution_protocol(const SecrecySpectrum& p, std::size_t N, double delta);

// Spectrum of x^N conditioned on x being typical.
SecrecySpectrum dilution_target(const SecrecySpectrum& p, std::size_t N, double delta);

/// Exact check of the dilution protocol that works type class by type class,
/// so block lengths far beyond what execute() can enumerate are covered.
struct DilutionCheck {
  // P(c | success) = 2^-K for every ciphertext c.
  bool transcript_uniform = false;
  // P(type, c | success) = P(type | success) P(c | success) for every class.
  bool independent_of_sequence = false;
  // The typical-set index is a bijection onto [0, |T|) and |T| <= 2^K.
  bool decodes = false;
  Prob success_probability;

  bool secret() const { return transcript_uniform && independent_of_sequence && decodes; }
};
DilutionCheck verify_dilution(const SecrecySpectrum& p, std::size_t N, double delta);

}  // namespace lopc
