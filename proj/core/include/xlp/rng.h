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

#ifndef XLP_RNG_H_
#define XLP_RNG_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace xlp {

// Splittable random source. Child streams are derived from the parent seed
// and a name or index only, never from draws already taken, so work split
// across sentences or threads sees the same numbers as a serial pass.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  Rng Fork(std::string_view name) const;
  Rng Fork(std::uint64_t index) const;

  std::uint64_t NextU64() { return engine_(); }

  // Uniform integer in [0, bound). `bound` must be positive. Uses rejection
  // sampling so results do not depend on the standard library's
  // distribution implementation.
  std::uint64_t Uniform(std::uint64_t bound);

  // Fisher-Yates shuffle driven by Uniform().
  template <typename T>
  void Shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(Uniform(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  // `count` distinct indices in [0, n), in draw order.
  std::vector<std::size_t> SampleWithoutReplacement(std::size_t n,
                                                    std::size_t count);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace xlp

#endif  // XLP_RNG_H_
