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

#ifndef DYNSUB_CODEBOOK_HPP_
#define DYNSUB_CODEBOOK_HPP_

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "dynsub/channel.hpp"
#include "dynsub/numerics.hpp"

namespace dynsub {

// Beam-steering analog codebook. Codeword q points at sin(2 pi q / n_q), so
// q and n_q/2 - q give the same beam pattern; the full circle is kept anyway.
class Codebook {
 public:
  Codebook(std::size_t n_q, std::size_t n_tx, double spacing);

  std::size_t size() const { return codewords_.size(); }
  std::size_t n_tx() const { return n_tx_; }
  double spacing() const { return spacing_; }

  // Steering angle argument 2 pi q / n_q.
  double angle(std::size_t q) const;

  std::span<const cplx> codeword(std::size_t q) const;

 private:
  std::size_t n_tx_;
  double spacing_;
  std::vector<ComplexVector> codewords_;
};

Codebook build_codebook(std::size_t n_q, std::size_t n_tx, double spacing);

// Codeword gains within this relative distance count as tied, so that ties
// broken by rounding still go to the smallest index.
inline constexpr double kGainTieTolerance = 1e-12;

inline bool beats(double gain, double best) { return gain > best + kGainTieTolerance * std::abs(best); }

// Codeword q evaluated on the 1-based antenna indices in `subset`.
ComplexVector restrict_codeword(const Codebook& cb, std::size_t q, std::span<const std::size_t> subset);

}  // namespace dynsub

#endif  // DYNSUB_CODEBOOK_HPP_
