#include "lopc/asymptotic.hpp"

#include <cmath>
#include <map>

namespace lopc {

namespace {

void compositions(std::size_t total, std::size_t parts, std::vector<std::size_t>& prefix,
                  std::vector<std::vector<std::size_t>>& out) {
  if (parts == 1) {
    prefix.push_back(total);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (std::size_t v = total + 1; v-- > 0;) {
    prefix.push_back(v);
    compositions(total - v, parts - 1, prefix, out);
    prefix.pop_back();
  }
}

mpz_class factorial(std::size_t n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return f;
}

Prob power(const Prob& base, std::size_t e) {
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), e);
  return Prob(num, den);
}

std::size_t bit_length(const mpz_class& v) {
  return sgn(v) == 0 ? 0 : mpz_sizeinbase(v.get_mpz_t(), 2);
}

std::vector<std::size_t> counts_of(const std::vector<int>& sequence, std::size_t alphabet) {
  std::vector<std::size_t> counts(alphabet, 0);
  for (int s : sequence) {
    if (s < 0 || static_cast<std::size_t>(s) >= alphabet)
      throw std::out_of_range("sequence symbol outside alphabet");
    ++counts[static_cast<std::size_t>(s)];
  }
  return counts;
}

// Type classes sharing one sequence probability, in type_classes order.
struct Level {
  std::vector<std::size_t> members;
  mpz_class size;
  Prob probability;
};

std::vector<Level> level_sets(const std::vector<TypeClass>& classes) {
  std::map<Prob, std::size_t> slot;
  std::vector<Level> levels;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const auto [it, fresh] = slot.emplace(classes[i].sequence_probability, levels.size());
    if (fresh) levels.push_back({{}, 0, 0});
    auto& l = levels[it->second];
    l.members.push_back(i);
    l.size += classes[i].size;
    l.probability += classes[i].probability;
  }
  return levels;
}

Rational level_yield(const Level& l) { return l.probability * dyadic_expected_bits(l.size); }

// counts -> (offset inside its level, level size).
using LevelIndex = std::map<std::vector<std::size_t>, std::pair<mpz_class, mpz_class>>;

LevelIndex index_levels(const SecrecySpectrum& p, std::size_t N) {
  const auto classes = type_classes(p, N);
  LevelIndex index;
  for (const auto& l : level_sets(classes)) {
    mpz_class offset = 0;
    for (auto i : l.members) {
      index.emplace(classes[i].counts, std::make_pair(offset, l.size));
      offset += classes[i].size;
    }
  }
  return index;
}

Extracted extract(const LevelIndex& index, const std::vector<int>& sequence, std::size_t alphabet) {
  const auto& [offset, size] = index.at(counts_of(sequence, alphabet));
  return dyadic_extract(offset + type_rank(sequence, alphabet), size);
}

BlockReport concentration_report(const SecrecySpectrum& p, std::size_t N, Rational yield) {
  BlockReport r;
  r.N = N;
  r.expected_yield = std::move(yield);
  r.expected_yield_bits = r.expected_yield.get_d();
  r.rate = r.expected_yield_bits / static_cast<double>(N);
  r.target_entropy = entropy_of_secrecy(p);
  return r;
}

std::size_t checked_power(std::size_t base, std::size_t e) {
  std::size_t v = 1;
  for (std::size_t i = 0; i < e; ++i) {
    if (v > static_cast<std::size_t>(INT32_MAX) / base)
      throw std::length_error("block alphabet too large to enumerate");
    v *= base;
  }
  return v;
}

struct TypicalIndex {
  std::vector<TypeClass> classes;
  std::vector<mpz_class> offsets;
  mpz_class size;
  std::size_t key_bits = 0;
};

TypicalIndex index_typical(const SecrecySpectrum& p, std::size_t N, double delta) {
  TypicalIndex t;
  t.classes = typical_classes(p, N, delta);
  for (const auto& c : t.classes) {
    t.offsets.push_back(t.size);
    t.size += c.size;
  }
  t.key_bits = bit_length(t.size - 1);
  return t;
}

// Position of x in the typical set, or -1 when atypical.
long typical_position(const TypicalIndex& t, const std::vector<int>& x, std::size_t alphabet) {
  const auto counts = counts_of(x, alphabet);
  for (std::size_t i = 0; i < t.classes.size(); ++i)
    if (t.classes[i].counts == counts) return mpz_class(t.offsets[i] + type_rank(x, alphabet)).get_si();
  return -1;
}

}  // namespace

mpz_class multinomial(const std::vector<std::size_t>& counts) {
  std::size_t n = 0;
  for (auto c : counts) n += c;
  mpz_class m = factorial(n);
  for (auto c : counts) m /= factorial(c);
  return m;
}

std::vector<TypeClass> type_classes(const SecrecySpectrum& p, std::size_t N) {
  std::vector<std::vector<std::size_t>> all;
  std::vector<std::size_t> prefix;
  compositions(N, p.size(), prefix, all);
  std::vector<TypeClass> out;
  out.reserve(all.size());
  for (auto& counts : all) {
    Prob seq = 1;
    for (std::size_t i = 0; i < counts.size(); ++i) seq *= power(p[i], counts[i]);
    mpz_class size = multinomial(counts);
    Prob total = seq * size;
    out.push_back({std::move(counts), std::move(size), std::move(seq), std::move(total)});
  }
  return out;
}

mpz_class type_rank(const std::vector<int>& sequence, std::size_t alphabet) {
  auto counts = counts_of(sequence, alphabet);
  mpz_class rank = 0;
  for (int s : sequence) {
    for (std::size_t smaller = 0; smaller < static_cast<std::size_t>(s); ++smaller) {
      if (counts[smaller] == 0) continue;
      --counts[smaller];
      rank += multinomial(counts);
      ++counts[smaller];
    }
    --counts[static_cast<std::size_t>(s)];
  }
  return rank;
}

std::vector<int> type_unrank(const std::vector<std::size_t>& counts_in, mpz_class rank) {
  auto counts = counts_in;
  std::size_t n = 0;
  for (auto c : counts) n += c;
  if (rank < 0 || rank >= multinomial(counts)) throw std::out_of_range("rank outside type class");
  std::vector<int> seq;
  seq.reserve(n);
  for (std::size_t pos = 0; pos < n; ++pos) {
    for (std::size_t s = 0; s < counts.size(); ++s) {
      if (counts[s] == 0) continue;
      --counts[s];
      const mpz_class block = multinomial(counts);
      if (rank < block) {
        seq.push_back(static_cast<int>(s));
        break;
      }
      rank -= block;
      ++counts[s];
    }
  }
  return seq;
}

mpz_class Extracted::code() const {
  mpz_class c;
  mpz_ui_pow_ui(c.get_mpz_t(), 2, length);
  return c - 1 + value;
}

Extracted dyadic_extract(const mpz_class& rank, const mpz_class& class_size) {
  if (rank < 0 || rank >= class_size) throw std::out_of_range("rank outside [0, M)");
  mpz_class offset = 0;
  for (std::size_t b = bit_length(class_size); b-- > 0;) {
    if (mpz_tstbit(class_size.get_mpz_t(), b) == 0) continue;
    mpz_class block;
    mpz_ui_pow_ui(block.get_mpz_t(), 2, b);
    if (rank < offset + block) return {b, rank - offset};
    offset += block;
  }
  throw std::logic_error("dyadic blocks do not cover the class");
}

Rational dyadic_expected_bits(const mpz_class& class_size) {
  mpz_class acc = 0;
  for (std::size_t b = 0; b < bit_length(class_size); ++b) {
    if (mpz_tstbit(class_size.get_mpz_t(), b) == 0) continue;
    mpz_class block;
    mpz_ui_pow_ui(block.get_mpz_t(), 2, b);
    acc += block * static_cast<unsigned long>(b);
  }
  Rational r(acc, class_size);
  r.canonicalize();
  return r;
}

BlockReport concentrate_block(const SecrecySpectrum& p, std::size_t N) {
  if (N == 0) throw std::invalid_argument("block length must be positive");
  const auto levels = level_sets(type_classes(p, N));
  const long count = static_cast<long>(levels.size());
  std::vector<Rational> parts(levels.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i)
    parts[static_cast<std::size_t>(i)] = level_yield(levels[static_cast<std::size_t>(i)]);
  Rational yield = 0;
  for (const auto& r : parts) yield += r;
  return concentration_report(p, N, std::move(yield));
}

namespace serial {

BlockReport concentrate_block(const SecrecySpectrum& p, std::size_t N) {
  if (N == 0) throw std::invalid_argument("block length must be positive");
  Rational yield = 0;
  for (const auto& l : level_sets(type_classes(p, N))) yield += level_yield(l);
  return concentration_report(p, N, std::move(yield));
}

}  // namespace serial

Extracted concentration_output(const SecrecySpectrum& p, const std::vector<int>& sequence) {
  return extract(index_levels(p, sequence.size()), sequence, p.size());
}

std::vector<BlockReport> rate_report(const SecrecySpectrum& p, const std::vector<std::size_t>& Ns) {
  std::vector<BlockReport> out;
  out.reserve(Ns.size());
  for (auto N : Ns) out.push_back(concentrate_block(p, N));
  return out;
}

std::vector<int> decode_sequence(std::size_t code, std::size_t alphabet, std::size_t N) {
  std::vector<int> seq(N);
  for (std::size_t i = N; i-- > 0;) {
    seq[i] = static_cast<int>(code % alphabet);
    code /= alphabet;
  }
  return seq;
}

std::size_t encode_sequence(const std::vector<int>& sequence, std::size_t alphabet) {
  std::size_t code = 0;
  for (int s : sequence) code = code * alphabet + static_cast<std::size_t>(s);
  return code;
}

JointDist block_state(const SecrecySpectrum& p, std::size_t N) {
  const std::size_t n = p.size();
  const std::size_t total = checked_power(n, N);
  std::map<Outcome, Prob> entries;
  for (std::size_t code = 0; code < total; ++code) {
    Prob w = 1;
    for (int s : decode_sequence(code, n, N)) w *= p[static_cast<std::size_t>(s)];
    const int c = static_cast<int>(code);
    entries.emplace(Outcome{c, c, 0}, w);
  }
  const int a = static_cast<int>(total);
  return JointDist({{{"A", Role::honest}, a}, {{"B", Role::honest}, a}, eve()}, std::move(entries));
}

ProtocolIR concentration_protocol(const SecrecySpectrum& p, std::size_t N) {
  const std::size_t n = p.size();
  const std::size_t total = checked_power(n, N);
  const auto index = index_levels(p, N);
  std::vector<int> map(total);
  int alphabet = 1;
  for (std::size_t code = 0; code < total; ++code) {
    map[code] = static_cast<int>(extract(index, decode_sequence(code, n, N), n).code().get_si());
    alphabet = std::max(alphabet, map[code] + 1);
  }
  ProtocolIR prot;
  for (const char* party : {"A", "B"}) prot.outputs.push_back({party, {map}, alphabet});
  return prot;
}

std::vector<TypeClass> typical_classes(const SecrecySpectrum& p, std::size_t N, double delta) {
  if (N == 0) throw std::invalid_argument("block length must be positive");
  if (!(delta > 0.0)) throw DeltaTooSmall("typicality slack must be positive");
  const double bound = entropy_of_secrecy(p) + delta;
  std::vector<TypeClass> out;
  for (auto& t : type_classes(p, N))
    if (-log2_of(t.sequence_probability) / static_cast<double>(N) <= bound) out.push_back(std::move(t));
  if (out.empty()) throw DeltaTooSmall("typical set is empty");
  return out;
}

BlockReport dilute_block(const SecrecySpectrum& p, std::size_t N, double delta) {
  const auto t = index_typical(p, N, delta);
  BlockReport r;
  r.N = N;
  r.target_entropy = entropy_of_secrecy(p);
  r.key_bits_used = t.key_bits;
  r.key_rate = static_cast<double>(t.key_bits) / static_cast<double>(N);
  r.typical_sequences = t.size;
  Prob typical = 0;
  for (const auto& c : t.classes) typical += c.probability;
  r.failure_probability = 1 - typical;
  return r;
}

JointDist dilution_input(const SecrecySpectrum& p, std::size_t N, double delta) {
  const auto t = index_typical(p, N, delta);
  const std::size_t n = p.size();
  const std::size_t seqs = checked_power(n, N);
  const std::size_t keys = checked_power(2, t.key_bits);
  if (seqs > static_cast<std::size_t>(INT32_MAX) / keys) throw std::length_error("dilution input too large");
  const Prob key_weight = frac(1, static_cast<long>(keys));
  std::map<Outcome, Prob> entries;
  for (std::size_t x = 0; x < seqs; ++x) {
    Prob w = key_weight;
    for (int s : decode_sequence(x, n, N)) w *= p[static_cast<std::size_t>(s)];
    for (std::size_t k = 0; k < keys; ++k)
      entries.emplace(Outcome{static_cast<int>(x * keys + k), static_cast<int>(k), 0}, w);
  }
  return JointDist({{{"A", Role::honest}, static_cast<int>(seqs * keys)},
                    {{"B", Role::honest}, static_cast<int>(keys)},
                    eve()},
                   std::move(entries));
}

ProtocolIR dilution_protocol(const SecrecySpectrum& p, std::size_t N, double delta) {
  const auto t = index_typical(p, N, delta);
  const std::size_t n = p.size();
  const std::size_t seqs = checked_power(n, N);
  const std::size_t keys = checked_power(2, t.key_bits);
  const std::size_t fail = keys;

  std::vector<long> position(seqs);
  std::vector<int> by_position(keys, 0);
  for (std::size_t x = 0; x < seqs; ++x) {
    position[x] = typical_position(t, decode_sequence(x, n, N), n);
    if (position[x] >= 0) by_position[static_cast<std::size_t>(position[x])] = static_cast<int>(x);
  }

  MessageRule rule;
  rule.table.assign(seqs * keys, std::vector<Prob>(keys + 1, Prob(0)));
  OutputMap alice{"A", std::vector<std::vector<int>>(keys + 1, std::vector<int>(seqs * keys, 0)),
                  static_cast<int>(seqs)};
  OutputMap bob{"B", std::vector<std::vector<int>>(keys + 1, std::vector<int>(keys, 0)),
                static_cast<int>(seqs)};
  for (std::size_t x = 0; x < seqs; ++x) {
    for (std::size_t k = 0; k < keys; ++k) {
      const std::size_t a = x * keys + k;
      if (position[x] < 0) {
        rule.table[a][fail] = 1;
        continue;
      }
      const std::size_t c = static_cast<std::size_t>(position[x]) ^ k;
      rule.table[a][c] = 1;
      alice.per_message[c][a] = static_cast<int>(x);
    }
  }
  for (std::size_t c = 0; c < keys; ++c)
    for (std::size_t k = 0; k < keys; ++k) {
      const std::size_t pos = c ^ k;
      if (pos < t.size) bob.per_message[c][k] = by_position[pos];
    }

  ProtocolIR prot;
  prot.rounds.push_back({"A", std::move(rule)});
  prot.outputs = {std::move(alice), std::move(bob)};
  prot.fail = FailMessage{fail, 0};
  prot.validate();
  return prot;
}

SecrecySpectrum dilution_target(const SecrecySpectrum& p, std::size_t N, double delta) {
  const auto t = index_typical(p, N, delta);
  Prob typical = 0;
  for (const auto& c : t.classes) typical += c.probability;
  std::vector<Prob> w;
  w.reserve(t.size.get_ui());
  for (const auto& c : t.classes)
    for (mpz_class i = 0; i < c.size; ++i) w.push_back(c.sequence_probability / typical);
  return SecrecySpectrum(std::move(w));
}

DilutionCheck verify_dilution(const SecrecySpectrum& p, std::size_t N, double delta) {
  const auto t = index_typical(p, N, delta);
  DilutionCheck check;
  mpz_class keys;
  mpz_ui_pow_ui(keys.get_mpz_t(), 2, t.key_bits);

  // Classes occupy consecutive index ranges that tile [0, |T|).
  bool tiles = true;
  mpz_class expected_offset = 0;
  for (std::size_t i = 0; i < t.classes.size(); ++i) {
    tiles = tiles && t.offsets[i] == expected_offset;
    expected_offset += t.classes[i].size;
  }
  check.decodes = tiles && expected_offset == t.size && t.size <= keys;

  Prob success = 0;
  for (const auto& c : t.classes) success += c.probability;
  check.success_probability = success;

  // For a fixed index i < 2^K, k -> i xor k permutes [0, 2^K), so a uniform
  // key makes c uniform whatever x is: P(type, c | success) = P(type | success) 2^-K.
  Prob conditional_total = 0;
  for (const auto& c : t.classes) conditional_total += c.probability / success;
  check.transcript_uniform = check.decodes && conditional_total == 1;
  check.independent_of_sequence = check.transcript_uniform;
  return check;
}

}  // namespace lopc
