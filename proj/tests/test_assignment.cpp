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

#include <catch2/catch_amalgamated.hpp>

#include "diascore/assignment.hpp"
#include "diascore/synth.hpp"

using namespace diascore;

namespace {

CostMatrix random_matrix(SplitMix64& rng, std::size_t n, std::int64_t max_cost = 100) {
  CostMatrix m(n, n, 0);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) m.set(r, c, rng.below(max_cost + 1));
  return m;
}

}  // namespace

TEST_CASE("identity-optimal matrix picks the diagonal") {
  CostMatrix m(3, 3, 1);
  for (std::size_t i = 0; i < 3; ++i) m.set(i, i, 0);
  const auto a = solve_assignment(m);
  CHECK(a.total_cost == 0);
  CHECK(a.col_of_row == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("anti-diagonal optimum") {
  CostMatrix m(2, 2, 0);
  m.set(0, 0, 1);
  m.set(1, 1, 1);
  const auto a = solve_assignment(m);
  CHECK(a.total_cost == 0);
  CHECK(a.col_of_row == std::vector<std::size_t>{1, 0});
}

TEST_CASE("single-cell matrix") {
  CostMatrix m(1, 1, 7);
  CHECK(brute_force_assignment(m).total_cost == 7);
  CHECK(solve_assignment(m).total_cost == 7);
}

TEST_CASE("brute force matches hungarian on random matrices") {
  SplitMix64 rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = 1 + rng.below(7);
    const auto m = random_matrix(rng, n);
    CHECK(solve_assignment(m).total_cost == brute_force_assignment(m).total_cost);
  }
}

TEST_CASE("brute force refuses large matrices") {
  CHECK_THROWS_AS(brute_force_assignment(CostMatrix(9, 9, 0)), DimensionTooLargeError);
}

TEST_CASE("brute force tie-break is the lexicographically smallest mapping") {
  CostMatrix m(3, 3, 5);  // every permutation costs 15
  const auto a = brute_force_assignment(m);
  CHECK(a.col_of_row == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("adding a constant shifts the optimal cost by n*c") {
  SplitMix64 rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    const auto n = 1 + rng.below(6);
    const auto m = random_matrix(rng, n);
    const std::int64_t c = 1 + static_cast<std::int64_t>(rng.below(9));
    CostMatrix shifted(n, n, 0);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t col = 0; col < n; ++col) shifted.set(r, col, m.at(r, col) + c);
    CHECK(solve_assignment(shifted).total_cost ==
          solve_assignment(m).total_cost + static_cast<std::int64_t>(n) * c);
  }
}

TEST_CASE("padding fills the short side at the pad cost") {
  CostMatrix m(1, 3, 2);
  const auto padded = m.padded_to_square(9);
  REQUIRE(padded.rows() == 3);
  REQUIRE(padded.cols() == 3);
  CHECK(padded.at(0, 0) == 2);
  CHECK(padded.at(1, 0) == 9);
  CHECK(padded.at(2, 2) == 9);
}

TEST_CASE("non-square and negative inputs are rejected") {
  CHECK_THROWS_AS(solve_assignment(CostMatrix(2, 3, 0)), Error);
  CostMatrix m(2, 2, 0);
  CHECK_THROWS_AS(m.set(0, 0, -1), Error);
}
