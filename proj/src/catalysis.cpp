#include "lopc/catalysis.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <set>

namespace lopc {

namespace {

bool converts(const SecrecySpectrum& p, const SecrecySpectrum& q, const SecrecySpectrum& r) {
  return majorizes(tensor(q, r), tensor(p, r));
}

// Partitions of `total` into exactly `parts` positive parts, non-increasing.
void partitions(long total, std::size_t parts, long cap, std::vector<long>& prefix,
                const std::function<void(const std::vector<long>&)>& emit) {
  if (parts == 0) {
    if (total == 0) emit(prefix);
    return;
  }
  const long remaining = static_cast<long>(parts) - 1;
  for (long v = std::min(cap, total - remaining); v >= 1; --v) {
    if (v * static_cast<long>(parts) < total) break;
    prefix.push_back(v);
    partitions(total - v, parts - 1, v, prefix, emit);
    prefix.pop_back();
  }
}

void check_bounds(std::size_t max_dim, long denom_bound) {
  if (max_dim < 2 || denom_bound < 2)
    throw std::invalid_argument("catalyst search needs max_dim >= 2 and denom_bound >= 2");
}

}  // namespace

std::string_view verdict_name(const CatalysisVerdict& v) {
  switch (v.index()) {
    case 0: return "DirectlyPossible";
    case 1: return "CatalyzedPossible";
    case 2: return "NotWithThisCatalyst";
    default: return "NoneFoundWithinBounds";
  }
}

SecrecySpectrum tensor(const SecrecySpectrum& a, const SecrecySpectrum& b) {
  std::vector<Prob> out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a.weights())
    for (const auto& y : b.weights()) out.push_back(x * y);
  return SecrecySpectrum(std::move(out));
}

CatalysisVerdict check_catalysis(const SecrecySpectrum& p, const SecrecySpectrum& q,
                                 const SecrecySpectrum& r) {
  if (majorizes(q, p)) return DirectlyPossible{};
  auto sums = prefix_sums(tensor(q, r).vector(), tensor(p, r).vector());
  const std::size_t n = sums.lhs.size();
  for (std::size_t k = 0; k < n; ++k)
    if (sums.lhs[k] < sums.rhs[k]) return NotWithThisCatalyst{k + 1};
  CatalyzedPossible ok{r, sums, {}};
  for (std::size_t k = 0; k + 1 < n; ++k)
    if (sums.lhs[k] == sums.rhs[k]) ok.tight_prefixes.push_back(k + 1);
  return ok;
}

std::vector<SecrecySpectrum> catalyst_candidates(std::size_t dim, long denom_bound) {
  std::set<std::vector<Prob>> unique;
  std::vector<long> parts;
  for (long den = static_cast<long>(dim); den <= denom_bound; ++den) {
    partitions(den, dim, den, parts, [&](const std::vector<long>& c) {
      std::vector<Prob> w;
      w.reserve(c.size());
      for (long v : c) w.push_back(frac(v, den));
      unique.insert(std::move(w));
    });
  }
  std::vector<SecrecySpectrum> out;
  out.reserve(unique.size());
  for (const auto& w : unique) out.emplace_back(w);
  return out;
}

CatalysisVerdict find_catalyst(const SecrecySpectrum& p, const SecrecySpectrum& q,
                               std::size_t max_dim, long denom_bound) {
  check_bounds(max_dim, denom_bound);
  if (majorizes(q, p)) return DirectlyPossible{};
  std::size_t checked = 0;
  for (std::size_t dim = 2; dim <= max_dim; ++dim) {
    const auto cands = catalyst_candidates(dim, denom_bound);
    const long count = static_cast<long>(cands.size());
    long first = std::numeric_limits<long>::max();
#pragma omp parallel for schedule(dynamic, 16) reduction(min : first)
    for (long i = 0; i < count; ++i) {
      if (i < first && converts(p, q, cands[static_cast<std::size_t>(i)])) first = i;
    }
    if (first != std::numeric_limits<long>::max())
      return check_catalysis(p, q, cands[static_cast<std::size_t>(first)]);
    checked += cands.size();
  }
  return NoneFoundWithinBounds{max_dim, denom_bound, checked};
}

namespace serial {

CatalysisVerdict find_catalyst(const SecrecySpectrum& p, const SecrecySpectrum& q,
                               std::size_t max_dim, long denom_bound) {
  check_bounds(max_dim, denom_bound);
  if (majorizes(q, p)) return DirectlyPossible{};
  std::size_t checked = 0;
  for (std::size_t dim = 2; dim <= max_dim; ++dim) {
    for (const auto& r : catalyst_candidates(dim, denom_bound)) {
      if (converts(p, q, r)) return check_catalysis(p, q, r);
      ++checked;
    }
  }
  return NoneFoundWithinBounds{max_dim, denom_bound, checked};
}

}  // namespace serial

std::optional<DoublyStochastic> shuffling_catalyst_matrix(const SecrecySpectrum& p,
                                                          const SecrecySpectrum& q,
                                                          const SecrecySpectrum& r) {
  const auto pr = tensor(p, r).vector();
  const auto qr = tensor(q, r).vector();
  if (!majorizes(qr, pr)) return std::nullopt;
  return transfer_matrix(qr, pr);
}

}  // namespace lopc
