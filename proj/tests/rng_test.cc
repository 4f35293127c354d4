//
// Copyright 2026 The xlp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "xlp/rng.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace xlp {
namespace {

std::vector<std::uint64_t> Draws(Rng rng, int n) {
  std::vector<std::uint64_t> out;
  for (int i = 0; i < n; ++i) out.push_back(rng.NextU64());
  return out;
}

TEST(RngTest, SameSeedSameStream) {
  EXPECT_EQ(Draws(Rng(7), 50), Draws(Rng(7), 50));
  EXPECT_NE(Draws(Rng(7), 50), Draws(Rng(8), 50));
}

TEST(RngTest, ForkDependsOnlyOnSeedAndName) {
  Rng parent(42);
  Rng before = parent.Fork("p1");
  parent.NextU64();
  parent.NextU64();
  EXPECT_EQ(Draws(before, 20), Draws(parent.Fork("p1"), 20));
  EXPECT_NE(Draws(parent.Fork("p1"), 20), Draws(parent.Fork("p2"), 20));
  EXPECT_EQ(Draws(parent.Fork(3), 20), Draws(Rng(42).Fork(3), 20));
  EXPECT_NE(Draws(parent.Fork(3), 20), Draws(parent.Fork(4), 20));
}

TEST(RngTest, UniformStaysInRangeAndCoversIt) {
  Rng rng(1);
  std::vector<int> counts(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) {
    std::uint64_t x = rng.Uniform(7);
    ASSERT_LT(x, 7u);
    ++counts[x];
  }
  // Each bucket is Binomial(n, 1/7); allow 4 sigma.
  const double mean = n / 7.0;
  const double sigma = std::sqrt(n * (1.0 / 7) * (6.0 / 7));
  for (int c : counts) EXPECT_NEAR(c, mean, 4 * sigma);
  EXPECT_EQ(Rng(1).Uniform(1), 0u);
}

TEST(RngTest, ShuffleIsPermutation) {
  Rng rng(9);
  std::vector<int> items(100);
  for (int i = 0; i < 100; ++i) items[i] = i;
  std::vector<int> shuffled = items;
  rng.Shuffle(shuffled);
  EXPECT_NE(shuffled, items);
  std::sort(shuffled.begin(), shuffled.end());
  EXPECT_EQ(shuffled, items);
}

TEST(RngTest, SampleWithoutReplacementIsDistinct) {
  Rng rng(3);
  for (std::size_t n : {1u, 5u, 100u}) {
    for (std::size_t k = 0; k <= n; k += std::max<std::size_t>(1, n / 4)) {
      std::vector<std::size_t> sample = rng.SampleWithoutReplacement(n, k);
      ASSERT_EQ(sample.size(), k);
      std::set<std::size_t> distinct(sample.begin(), sample.end());
      EXPECT_EQ(distinct.size(), k);
      for (std::size_t i : sample) EXPECT_LT(i, n);
    }
  }
}

}  // namespace
}  // namespace xlp
