#include "lopc/majorization.hpp"

#include <algorithm>
#include <numeric>

namespace lopc {

namespace {

std::vector<std::size_t> descending_order(const std::vector<Prob>& w) {
  std::vector<std::size_t> order(w.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return w[a] > w[b]; });
  return order;
}

Matrix identity_matrix(std::size_t n) {
  Matrix m(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

// Kuhn augmenting path restricted to rows >= first_row and free columns.
bool augment(const Matrix& r, std::size_t row, std::vector<int>& col_owner,
             std::vector<char>& visited, const std::vector<char>& blocked) {
  for (std::size_t c = 0; c < r.size(); ++c) {
    if (blocked[c] || visited[c] || sgn(r[row][c]) <= 0) continue;
    visited[c] = 1;
    if (col_owner[c] < 0 || augment(r, static_cast<std::size_t>(col_owner[c]), col_owner, visited,
                                    blocked)) {
      col_owner[c] = static_cast<int>(row);
      return true;
    }
  }
  return false;
}

bool rows_matchable(const Matrix& r, std::size_t first_row, const std::vector<char>& blocked) {
  std::vector<int> col_owner(r.size(), -1);
  for (std::size_t row = first_row; row < r.size(); ++row) {
    std::vector<char> visited(r.size(), 0);
    if (!augment(r, row, col_owner, visited, blocked)) return false;
  }
  return true;
}

std::vector<int> smallest_matching(const Matrix& r) {
  const std::size_t n = r.size();
  std::vector<int> assignment(n, -1);
  std::vector<char> blocked(n, 0);
  for (std::size_t row = 0; row < n; ++row) {
    for (std::size_t c = 0; c < n; ++c) {
      if (blocked[c] || sgn(r[row][c]) <= 0) continue;
      blocked[c] = 1;
      if (rows_matchable(r, row + 1, blocked)) {
        assignment[row] = static_cast<int>(c);
        break;
      }
      blocked[c] = 0;
    }
    if (assignment[row] < 0) throw NotDoublyStochastic("support admits no perfect matching");
  }
  return assignment;
}

}  // namespace

// --- DoublyStochastic ------------------------------------------------------------

DoublyStochastic::DoublyStochastic(Matrix rows) : rows_(std::move(rows)) {
  const std::size_t n = rows_.size();
  if (n == 0) throw NotDoublyStochastic("empty matrix");
  std::vector<Rational> col(n, Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    if (rows_[i].size() != n) throw NotDoublyStochastic("matrix is not square");
    Rational row = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (sgn(rows_[i][j]) < 0) throw NotDoublyStochastic("negative entry");
      row += rows_[i][j];
      col[j] += rows_[i][j];
    }
    if (row != 1) throw NotDoublyStochastic("row " + std::to_string(i) + " sums to " + to_string(row));
  }
  for (std::size_t j = 0; j < n; ++j)
    if (col[j] != 1)
      throw NotDoublyStochastic("column " + std::to_string(j) + " sums to " + to_string(col[j]));
}

DoublyStochastic DoublyStochastic::identity(std::size_t n) { return DoublyStochastic(identity_matrix(n)); }

std::vector<Rational> DoublyStochastic::apply(const std::vector<Rational>& v) const {
  if (v.size() != size()) throw std::invalid_argument("dimension mismatch in apply");
  std::vector<Rational> out(size(), Rational(0));
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = 0; j < size(); ++j) out[i] += rows_[i][j] * v[j];
  return out;
}

Matrix PermutationMix::matrix() const {
  if (terms.empty()) return {};
  const std::size_t n = terms.front().row_to_col.size();
  Matrix m(n, std::vector<Rational>(n, Rational(0)));
  for (const auto& t : terms)
    for (std::size_t i = 0; i < n; ++i) m[i][t.row_to_col[i]] += t.weight;
  return m;
}

// --- predicates ------------------------------------------------------------------

PrefixComparison prefix_sums(const ProbVector& q, const ProbVector& p) {
  const std::size_t n = std::max(q.size(), p.size());
  const auto qs = q.padded(n).sorted_desc();
  const auto ps = p.padded(n).sorted_desc();
  PrefixComparison out;
  Rational a = 0;
  Rational b = 0;
  for (std::size_t k = 0; k < n; ++k) {
    a += qs[k];
    b += ps[k];
    out.lhs.push_back(a);
    out.rhs.push_back(b);
  }
  return out;
}

bool majorizes(const ProbVector& q, const ProbVector& p) {
  const auto sums = prefix_sums(q, p);
  for (std::size_t k = 0; k < sums.lhs.size(); ++k)
    if (sums.lhs[k] < sums.rhs[k]) return false;
  return true;
}

bool majorizes(const SecrecySpectrum& q, const SecrecySpectrum& p) {
  return majorizes(q.vector(), p.vector());
}

// --- transfer matrix -------------------------------------------------------------

DoublyStochastic transfer_matrix(const ProbVector& q, const ProbVector& p) {
  if (!majorizes(q, p)) throw MajorizationFails("target does not majorize source");
  const std::size_t n = std::max(q.size(), p.size());
  const auto qp = q.padded(n).weights();
  const auto pp = p.padded(n).weights();
  const auto oq = descending_order(qp);
  const auto op = descending_order(pp);

  std::vector<Rational> x(n);
  std::vector<Rational> y(n);
  for (std::size_t k = 0; k < n; ++k) {
    x[k] = qp[oq[k]];
    y[k] = pp[op[k]];
  }

  // Hardy-Littlewood-Polya chain on the sorted vectors: mix the pair (j, k)
  // with j the last index where x still exceeds the target and k the first
  // later index that falls short. Each step pins x_j or x_k to its target.
  Matrix acc = identity_matrix(n);
  for (std::size_t step = 0; step < n; ++step) {
    std::ptrdiff_t j = -1;
    for (std::size_t i = 0; i < n; ++i)
      if (x[i] > y[i]) j = static_cast<std::ptrdiff_t>(i);
    if (j < 0) break;
    std::size_t k = static_cast<std::size_t>(j) + 1;
    while (k < n && !(x[k] < y[k])) ++k;
    if (k == n) throw std::logic_error("T-transform schedule lost majorization");
    const auto jj = static_cast<std::size_t>(j);
    const Rational delta = std::min(Rational(x[jj] - y[jj]), Rational(y[k] - x[k]));
    const Rational s = delta / (x[jj] - x[k]);
    const Rational t = 1 - s;
    // acc <- T acc with T = t I + s P_{jk}.
    for (std::size_t c = 0; c < n; ++c) {
      const Rational rj = acc[jj][c];
      const Rational rk = acc[k][c];
      acc[jj][c] = t * rj + s * rk;
      acc[k][c] = s * rj + t * rk;
    }
    x[jj] -= delta;
    x[k] += delta;
  }
  if (x != y) throw std::logic_error("T-transform chain did not reach the target");

  // Rows of equal target weight are interchangeable; average them so the
  // decomposition does not arbitrarily favour one of several tied targets.
  for (std::size_t begin = 0; begin < n;) {
    std::size_t end = begin + 1;
    while (end < n && y[end] == y[begin]) ++end;
    if (end - begin > 1) {
      const Rational count(static_cast<long>(end - begin));
      for (std::size_t c = 0; c < n; ++c) {
        Rational mean = 0;
        for (std::size_t r = begin; r < end; ++r) mean += acc[r][c];
        mean /= count;
        for (std::size_t r = begin; r < end; ++r) acc[r][c] = mean;
      }
    }
    begin = end;
  }

  Matrix d(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) d[op[a]][oq[b]] = acc[a][b];
  DoublyStochastic out(std::move(d));
  if (out.apply(qp) != pp) throw std::logic_error("transfer matrix does not map q to p");
  return out;
}

// --- Birkhoff --------------------------------------------------------------------

PermutationMix birkhoff(const DoublyStochastic& d) {
  Matrix r = d.rows();
  PermutationMix mix;
  Rational remaining = 1;
  while (sgn(remaining) > 0) {
    const auto perm = smallest_matching(r);
    Rational w = r[0][perm[0]];
    for (std::size_t i = 1; i < r.size(); ++i) w = std::min(w, Rational(r[i][perm[i]]));
    for (std::size_t i = 0; i < r.size(); ++i) r[i][perm[i]] -= w;
    remaining -= w;
    mix.terms.push_back({perm, w});
  }
  return mix;
}

// --- conversion probability ------------------------------------------------------

ConversionBound conversion_bound(const ProbVector& p, const ProbVector& q) {
  const std::size_t n = std::max(q.size(), p.size());
  const auto ps = p.padded(n).sorted_desc();
  const auto qs = q.padded(n).sorted_desc();
  ConversionBound best{Prob(1), 0};
  Rational pk = 0;
  Rational qk = 0;
  for (std::size_t k = 1; k < n; ++k) {
    pk += ps[k - 1];
    qk += qs[k - 1];
    const Rational den = 1 - qk;
    if (sgn(den) == 0) continue;
    const Rational ratio = (1 - pk) / den;
    if (ratio < best.probability) best = {ratio, k};
  }
  if (sgn(best.probability) < 0) best.probability = 0;
  return best;
}

Prob optimal_conversion_probability(const ProbVector& p, const ProbVector& q) {
  return conversion_bound(p, q).probability;
}

Prob optimal_conversion_probability(const SecrecySpectrum& p, const SecrecySpectrum& q) {
  return optimal_conversion_probability(p.vector(), q.vector());
}

}  // namespace lopc
