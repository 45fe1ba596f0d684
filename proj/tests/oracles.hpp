#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the library; each oracle recomputes its quantity from first principles.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace oracle {

using Q = mpq_class;
using Vec = std::vector<Q>;

inline Q q(long n, long d) {
  Q r(n, d);
  r.canonicalize();
  return r;
}

inline Vec sorted_padded(Vec v, std::size_t n) {
  v.resize(std::max(n, v.size()), Q(0));
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

// Prefix-sum definition, straight from the text.
inline bool majorizes(const Vec& big, const Vec& small) {
  const std::size_t n = std::max(big.size(), small.size());
  const Vec a = sorted_padded(big, n);
  const Vec b = sorted_padded(small, n);
  Q sa = 0, sb = 0;
  for (std::size_t k = 0; k < n; ++k) {
    sa += a[k];
    sb += b[k];
    if (sa < sb) return false;
  }
  return true;
}

inline Vec tensor(const Vec& a, const Vec& b) {
  Vec out;
  for (const auto& x : a)
    for (const auto& y : b) out.push_back(x * y);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

inline double entropy(const Vec& p) {
  double h = 0;
  for (const auto& x : p) {
    const double v = x.get_d();
    if (v > 0) h -= v * std::log2(v);
  }
  return h;
}

inline double binary_entropy(double p) {
  double h = 0;
  for (double v : {p, 1.0 - p})
    if (v > 0) h -= v * std::log2(v);
  return h;
}

// Solves the square system M x = b exactly; nullopt when singular.
inline std::optional<Vec> solve(std::vector<Vec> m, Vec b) {
  const std::size_t n = m.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m[piv][c] == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(m[piv], m[c]);
    std::swap(b[piv], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || m[r][c] == 0) continue;
      const Q f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
      b[r] -= f * b[c];
    }
  }
  Vec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / m[i][i];
  return x;
}

// Exact maximum of sum(c) subject to A c <= b, c >= 0, by enumeration of all
// vertices (choices of |c| tight constraints). The feasible set is bounded
// whenever every column of A has a positive entry.
inline Q lp_max(const std::vector<Vec>& A, const Vec& b) {
  const std::size_t rows = A.size();
  const std::size_t vars = rows == 0 ? 0 : A.front().size();
  if (vars == 0) return 0;
  // Constraint i < rows: row i of A; constraint rows + j: -c_j <= 0.
  const std::size_t total = rows + vars;
  Q best = 0;
  std::vector<bool> pick(total, false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(vars), true);
  do {
    std::vector<Vec> m;
    Vec rhs;
    for (std::size_t i = 0; i < total; ++i) {
      if (!pick[i]) continue;
      if (i < rows) {
        m.push_back(A[i]);
        rhs.push_back(b[i]);
      } else {
        Vec e(vars, Q(0));
        e[i - rows] = 1;
        m.push_back(e);
        rhs.push_back(0);
      }
    }
    const auto x = solve(m, rhs);
    if (!x) continue;
    bool feasible = std::all_of(x->begin(), x->end(), [](const Q& v) { return v >= 0; });
    for (std::size_t i = 0; feasible && i < rows; ++i) {
      Q lhs = 0;
      for (std::size_t j = 0; j < vars; ++j) lhs += A[i][j] * (*x)[j];
      feasible = lhs <= b[i];
    }
    if (!feasible) continue;
    Q obj = 0;
    for (const auto& v : *x) obj += v;
    best = std::max(best, obj);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return best;
}

// All injective maps {0..k-1} -> {0..n-1}.
inline std::vector<std::vector<int>> injections(std::size_t k, std::size_t n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::vector<bool> used(n, false);
  std::function<void()> rec = [&] {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    for (std::size_t y = 0; y < n; ++y) {
      if (used[y]) continue;
      used[y] = true;
      cur.push_back(static_cast<int>(y));
      rec();
      cur.pop_back();
      used[y] = false;
    }
  };
  rec();
  return out;
}

// Best success probability of a one-round protocol where Alice announces a
// message m and, on a success message, the conditional state is exactly q
// relabeled by an injection pi_m of supp(q) into supp(p). Message m then
// carries mass c_m q_s on x = pi_m(s) and sum_m c_m q_{pi_m^-1(x)} <= p_x.
// Any leftover mass goes to one fail message. An optimal vertex has at most
// |p| nonzero c_m, so |p| + 1 <= 4 messages suffice for |p| <= 3.
inline Q one_round_conversion_probability(const Vec& p, const Vec& q) {
  Vec pp, qq;
  for (const auto& x : p)
    if (x > 0) pp.push_back(x);
  for (const auto& x : q)
    if (x > 0) qq.push_back(x);
  if (qq.size() > pp.size()) return 0;
  const auto maps = injections(qq.size(), pp.size());
  std::vector<Vec> A(pp.size(), Vec(maps.size(), Q(0)));
  for (std::size_t m = 0; m < maps.size(); ++m)
    for (std::size_t s = 0; s < qq.size(); ++s) A[static_cast<std::size_t>(maps[m][s])][m] += qq[s];
  return lp_max(A, pp);
}

// Brute-force concentration: enumerate all sequences, group them by sequence
// probability, read off ranks and dyadic block lengths.
inline Q concentration_yield_bruteforce(const Vec& p, std::size_t N) {
  const std::size_t n = p.size();
  std::map<Q, std::vector<std::vector<int>>> classes;
  std::vector<int> seq(N, 0);
  while (true) {
    Q w = 1;
    for (int s : seq) w *= p[static_cast<std::size_t>(s)];
    classes[w].push_back(seq);
    std::size_t i = N;
    while (i > 0 && seq[i - 1] == static_cast<int>(n) - 1) seq[--i] = 0;
    if (i == 0) break;
    ++seq[i - 1];
  }
  Q total = 0;
  for (const auto& [prob, members] : classes) {
    const unsigned long M = members.size();
    // Blocks of size 2^b for each set bit of M, largest first.
    unsigned long start = 0;
    for (int b = 63; b >= 0; --b) {
      if (!((M >> b) & 1UL)) continue;
      const unsigned long size = 1UL << b;
      for (unsigned long r = start; r < start + size; ++r) total += prob * Q(static_cast<long>(b));
      start += size;
    }
  }
  return total;
}

// Binary source with p0 != 1/2: sum over k of C(N,k) p^(N-k) (1-p)^k times the expected
// dyadic length of a uniform C(N,k)-set.
inline Q concentration_yield_binomial(const Q& p0, std::size_t N) {
  std::vector<mpz_class> row{1};
  for (std::size_t i = 0; i < N; ++i) {
    std::vector<mpz_class> next(row.size() + 1, 0);
    for (std::size_t k = 0; k < row.size(); ++k) {
      next[k] += row[k];
      next[k + 1] += row[k];
    }
    row = std::move(next);
  }
  const Q p1 = 1 - p0;
  Q total = 0;
  for (std::size_t k = 0; k <= N; ++k) {
    const mpz_class& M = row[k];
    mpz_class weighted = 0;
    for (std::size_t b = 0; b < mpz_sizeinbase(M.get_mpz_t(), 2); ++b)
      if (mpz_tstbit(M.get_mpz_t(), b)) weighted += (mpz_class(1) << b) * static_cast<unsigned long>(b);
    Q prob = 1;
    for (std::size_t i = 0; i < N - k; ++i) prob *= p0;
    for (std::size_t i = 0; i < k; ++i) prob *= p1;
    total += prob * Q(weighted);
  }
  return total;
}

// Exact binomial tail of sequences outside {-log2 P / N <= H + delta}, and the
// number of sequences inside, for a binary source.
struct DilutionNumbers {
  Q failure;
  mpz_class typical;
};
inline DilutionNumbers dilution_binomial(const Q& p0, std::size_t N, double delta, bool two_sided) {
  const Q p1 = 1 - p0;
  const double H = binary_entropy(p0.get_d());
  DilutionNumbers out{0, 0};
  mpz_class binom = 1;
  for (std::size_t k = 0; k <= N; ++k) {
    if (k > 0) binom = binom * static_cast<unsigned long>(N - k + 1) / static_cast<unsigned long>(k);
    const double rate = (-(static_cast<double>(N - k)) * std::log2(p0.get_d()) -
                         static_cast<double>(k) * std::log2(p1.get_d())) /
                        static_cast<double>(N);
    const bool typical = two_sided ? std::fabs(rate - H) <= delta : rate <= H + delta;
    Q prob = 1;
    for (std::size_t i = 0; i < N - k; ++i) prob *= p0;
    for (std::size_t i = 0; i < k; ++i) prob *= p1;
    if (typical)
      out.typical += binom;
    else
      out.failure += prob * Q(binom);
  }
  return out;
}

// I(X;Y) in bits of a joint given as a map (x, y) -> weight.
inline double mutual_information(const std::map<std::pair<int, int>, Q>& joint) {
  std::map<int, double> px, py;
  for (const auto& [xy, w] : joint) {
    px[xy.first] += w.get_d();
    py[xy.second] += w.get_d();
  }
  double mi = 0;
  for (const auto& [xy, w] : joint) {
    const double v = w.get_d();
    if (v > 0) mi += v * std::log2(v / (px[xy.first] * py[xy.second]));
  }
  return mi;
}

// Leak of a one-time pad: I(S; S + K mod |K|) for message and key sources.
inline double otp_leak(const Vec& message, const Vec& key) {
  std::map<std::pair<int, int>, Q> joint;
  const int ks = static_cast<int>(key.size());
  for (int s = 0; s < static_cast<int>(message.size()); ++s)
    for (int k = 0; k < ks; ++k) joint[{s, (s + k) % ks}] += message[static_cast<std::size_t>(s)] * key[static_cast<std::size_t>(k)];
  return mutual_information(joint);
}

// Whether some pair of local maps (each symbol -> 0, 1 or withheld) leaves a
// positive-weight output supported exactly on {(0,0), (1,1)}.
inline bool single_copy_pure_reachable(const std::vector<std::vector<Q>>& grid) {
  const std::size_t na = grid.size();
  const std::size_t nb = grid.front().size();
  std::vector<int> f(na), g(nb);
  std::function<bool(std::size_t)> over_g;
  std::function<bool(std::size_t)> over_f = [&](std::size_t i) -> bool {
    if (i == na) return over_g(0);
    for (int v = 0; v < 3; ++v) {
      f[i] = v;
      if (over_f(i + 1)) return true;
    }
    return false;
  };
  over_g = [&](std::size_t j) -> bool {
    if (j < nb) {
      for (int v = 0; v < 3; ++v) {
        g[j] = v;
        if (over_g(j + 1)) return true;
      }
      return false;
    }
    bool zero = false, one = false;
    for (std::size_t a = 0; a < na; ++a)
      for (std::size_t b = 0; b < nb; ++b) {
        if (grid[a][b] == 0 || f[a] == 2 || g[b] == 2) continue;
        if (f[a] != g[b]) return false;
        (f[a] == 0 ? zero : one) = true;
      }
    return zero && one;
  };
  return over_f(0);
}

// First catalyst (in ascending lexicographic order among descending spectra
// with a common denominator <= bound) for a two-dimensional search.
inline std::optional<Vec> first_two_dim_catalyst(const Vec& p, const Vec& q, long bound) {
  std::vector<Q> firsts;
  for (long d = 2; d <= bound; ++d)
    for (long a = (d + 1) / 2; a < d; ++a) firsts.push_back(oracle::q(a, d));
  std::sort(firsts.begin(), firsts.end());
  firsts.erase(std::unique(firsts.begin(), firsts.end()), firsts.end());
  for (const auto& a : firsts) {
    const Vec r{a, 1 - a};
    if (majorizes(tensor(q, r), tensor(p, r))) return r;
  }
  return std::nullopt;
}

}  // namespace oracle
