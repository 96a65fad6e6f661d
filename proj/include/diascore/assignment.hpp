// Copyright 2026 The diascore Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DIASCORE_ASSIGNMENT_HPP
#define DIASCORE_ASSIGNMENT_HPP

/**
 * \file assignment.hpp
 *
 * Minimum-cost perfect matching on a square cost matrix, used by the
 * permutation-optimal baselines (cpWER, DER) to search over speaker-label
 * mappings. solve_assignment is the O(n^3) Hungarian algorithm with
 * potentials; brute_force_assignment is the factorial-time oracle kept for
 * cross-checking.
 */

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "diascore/types.hpp"

namespace diascore {

/// Rectangular matrix of non-negative costs, rows = hypothesis speakers,
/// cols = reference speakers. Callers pad to square before solving; the pad
/// cost encodes what an unmatched row/column costs.
class CostMatrix {
 public:
  CostMatrix(std::size_t rows, std::size_t cols, std::int64_t fill = 0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {
    if (fill < 0) throw Error("cost matrix entries must be non-negative");
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  std::int64_t at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  void set(std::size_t r, std::size_t c, std::int64_t value) {
    if (value < 0) throw Error("cost matrix entries must be non-negative");
    data_[r * cols_ + c] = value;
  }

  /// Pads the shorter side to square; only rows or columns are added,
  /// never both, so every pad cell costs pad_cost.
  CostMatrix padded_to_square(std::int64_t pad_cost) const {
    const std::size_t n = std::max(rows_, cols_);
    CostMatrix out(n, n, pad_cost);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out.set(r, c, at(r, c));
    return out;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<std::int64_t> data_;
};

struct Assignment {
  std::vector<std::size_t> col_of_row;  // perfect matching, row -> column
  std::int64_t total_cost = 0;
};

/// Hungarian algorithm (shortest augmenting paths with potentials).
/// Requires a square matrix; deterministic for identical input.
inline Assignment solve_assignment(const CostMatrix& m) {
  if (!m.square()) throw Error("solve_assignment requires a square matrix (pad first)");
  const std::size_t n = m.rows();
  if (n == 0) return {{}, 0};

  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  // 1-based arrays; p[j] = row matched to column j.
  std::vector<std::int64_t> u(n + 1, 0), v(n + 1, 0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);

  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<std::int64_t> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      std::int64_t delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const std::int64_t cur = m.at(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  Assignment out;
  out.col_of_row.assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j) out.col_of_row[p[j] - 1] = j - 1;
  for (std::size_t r = 0; r < n; ++r) out.total_cost += m.at(r, out.col_of_row[r]);
  return out;
}

/// Exhaustive minimum over all n! permutations; ties resolved by the
/// lexicographically smallest mapping. Only for n <= 8.
inline Assignment brute_force_assignment(const CostMatrix& m) {
  if (!m.square()) throw Error("brute_force_assignment requires a square matrix");
  const std::size_t n = m.rows();
  if (n > 8)
    throw DimensionTooLargeError("brute_force_assignment limited to n <= 8, got " +
                                 std::to_string(n));
  if (n == 0) return {{}, 0};

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Assignment best;
  best.total_cost = std::numeric_limits<std::int64_t>::max();
  do {
    std::int64_t cost = 0;
    for (std::size_t r = 0; r < n; ++r) cost += m.at(r, perm[r]);
    if (cost < best.total_cost) {
      best.total_cost = cost;
      best.col_of_row = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace diascore

#endif  // DIASCORE_ASSIGNMENT_HPP
