#pragma once

#include "lopc/majorization.hpp"

#include <optional>
#include <variant>

namespace lopc {

struct DirectlyPossible {};

struct CatalyzedPossible {
  SecrecySpectrum catalyst;
  // Prefix sums of q (x) r and p (x) r, padded to a common length.
  PrefixComparison prefixes;
  // Prefix lengths k < n where the two sums tie exactly.
  std::vector<std::size_t> tight_prefixes;
};

struct NotWithThisCatalyst {
  // First prefix length at which q (x) r falls short of p (x) r.
  std::size_t violated_prefix = 0;
};

struct NoneFoundWithinBounds {
  std::size_t max_dim = 0;
  long denom_bound = 0;
  std::size_t candidates_checked = 0;
};

using CatalysisVerdict =
    std::variant<DirectlyPossible, CatalyzedPossible, NotWithThisCatalyst, NoneFoundWithinBounds>;

std::string_view verdict_name(const CatalysisVerdict& v);

// Spectrum of the product state: all pairwise products, sorted descending.
SecrecySpectrum tensor(const SecrecySpectrum& a, const SecrecySpectrum& b);

CatalysisVerdict check_catalysis(const SecrecySpectrum& p, const SecrecySpectrum& q,
                                 const SecrecySpectrum& r);

// Descending spectra of dimension d whose entries share a denominator <= bound,
// no zero entries, in ascending lexicographic order.
std::vector<SecrecySpectrum> catalyst_candidates(std::size_t dim, long denom_bound);

// Dimension ascending, candidates in catalyst_candidates order; the first
// catalyst found is returned. The parallel scan returns the same witness.
CatalysisVerdict find_catalyst(const SecrecySpectrum& p, const SecrecySpectrum& q,
                               std::size_t max_dim, long denom_bound);

namespace serial {
CatalysisVerdict find_catalyst(const SecrecySpectrum& p, const SecrecySpectrum& q,
                               std::size_t max_dim, long denom_bound);
}

// Time-reversed view: a mixture of shuffles D with D (q (x) r) = p (x) r.
// Engaged exactly when check_catalysis reports a possible conversion.
std::optional<DoublyStochastic> shuffling_catalyst_matrix(const SecrecySpectrum& p,
                                                          const SecrecySpectrum& q,
                                                          const SecrecySpectrum& r);

}  // namespace lopc
