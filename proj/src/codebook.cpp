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

#include "dynsub/codebook.hpp"

#include <numbers>
#include <stdexcept>
#include <string>

namespace dynsub {

Codebook::Codebook(std::size_t n_q, std::size_t n_tx, double spacing) : n_tx_(n_tx), spacing_(spacing) {
  if (n_q < 1 || n_tx < 1) {
    throw std::invalid_argument("Codebook: n_q and n_tx must be positive");
  }
  const AntennaSet all = full_array(n_tx);
  codewords_.reserve(n_q);
  for (std::size_t q = 0; q < n_q; ++q) {
    const double arg = 2.0 * std::numbers::pi * static_cast<double>(q) / static_cast<double>(n_q);
    codewords_.push_back(steering_vector(arg, all, spacing));
  }
}

double Codebook::angle(std::size_t q) const {
  return 2.0 * std::numbers::pi * static_cast<double>(q) / static_cast<double>(size());
}

std::span<const cplx> Codebook::codeword(std::size_t q) const {
  if (q >= codewords_.size()) {
    throw std::out_of_range("codeword index " + std::to_string(q) + " out of range");
  }
  return codewords_[q];
}

Codebook build_codebook(std::size_t n_q, std::size_t n_tx, double spacing) {
  return Codebook(n_q, n_tx, spacing);
}

ComplexVector restrict_codeword(const Codebook& cb, std::size_t q, std::span<const std::size_t> subset) {
  const auto full = cb.codeword(q);
  check_antenna_set(subset, cb.n_tx());
  ComplexVector out(subset.size());
  for (std::size_t i = 0; i < subset.size(); ++i) out[i] = full[subset[i] - 1];
  return out;
}

}  // namespace dynsub
