// Copyright 2026 The dynsub Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DYNSUB_RANDOM_HPP_
#define DYNSUB_RANDOM_HPP_

#include <cstdint>
#include <random>

#include "dynsub/numerics.hpp"

namespace dynsub {

// Seedable random stream. Substreams are keyed by (seed, stream id) through a
// SplitMix64 mix so drops can run in any order on any worker.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  static RandomStream substream(std::uint64_t seed, std::uint64_t stream_id);

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

  // CN(0, 1): real and imaginary parts each N(0, 1/2).
  cplx complex_gaussian();

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace dynsub

#endif  // DYNSUB_RANDOM_HPP_
