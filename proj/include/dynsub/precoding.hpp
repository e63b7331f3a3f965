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

#ifndef DYNSUB_PRECODING_HPP_
#define DYNSUB_PRECODING_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dynsub/codebook.hpp"
#include "dynsub/numerics.hpp"
#include "dynsub/partition.hpp"

namespace dynsub {

enum class DigitalMode { zf, mf };

std::string_view to_string(DigitalMode mode);
// Accepts "zf" / "mf"; throws std::invalid_argument otherwise.
DigitalMode parse_digital_mode(std::string_view name);

// F_RF (n_tx x K) and F_BB (K x K). For subarray architectures column k of the
// analog matrix is zero outside partition->subsets[k].
struct HybridPrecoder {
  std::optional<Partition> partition;  // empty for the fully-connected array
  std::vector<std::size_t> codewords;  // analog codeword per RF chain
  ComplexMatrix analog;
  ComplexMatrix digital;

  bool fully_connected() const { return !partition.has_value(); }
};

struct AnalogBeam {
  std::size_t q = 0;
  ComplexVector weights;  // restricted codeword, one entry per subset antenna
  double gain = 0.0;
};

// Best codeword for a subarray, scored on the subarray effective channel
// (n_s x |subset|). Smallest q on ties. Throws on an empty subset.
AnalogBeam analog_for_subarray(const ComplexMatrix& h_eff_sub, const Codebook& cb,
                               std::span<const std::size_t> subset);

// G[k][i] = (W_k H_k F_RF)[i]; row k is user k seen through every RF chain.
ComplexMatrix effective_mu_channel(const ComplexMatrix& analog, std::span<const ComplexMatrix> effective);

// G^H (G G^H)^{-1}; throws SingularMatrixError for a degenerate G.
ComplexMatrix zf_digital(const ComplexMatrix& g);

// Column k is row k of G conjugated and divided by its squared norm.
ComplexMatrix mf_digital(const ComplexMatrix& g);

ComplexMatrix digital_precoder(const ComplexMatrix& g, DigitalMode mode);

// ||F_RF f_BB,k||^2 per user.
std::vector<double> per_user_power(const HybridPrecoder& precoder);

// Rescales each digital column so that ||F_RF f_BB,k||^2 = n_s.
HybridPrecoder normalize_power(HybridPrecoder precoder, std::size_t n_s);

// Precoder plus the receive combiners it was designed against.
struct PrecodedLink {
  HybridPrecoder precoder;
  std::vector<ComplexMatrix> combiners;  // n_s x n_rx per served user
};

// Subarray pipeline for a fixed partition: combiners from the SVD of each
// user's subarray channel, per-subarray codeword choice, digital stage on the
// analog effective channel, per-user power normalization. `channels` are the
// full n_rx x n_tx matrices of the served users in partition order.
PrecodedLink subarray_precoder(const Partition& partition, std::span<const ComplexMatrix> channels,
                               const Codebook& cb, std::size_t n_s, DigitalMode mode);

// Fully-connected baseline: every RF chain drives all antennas with the
// user's full-array best beam; combiners stay the full-channel ones.
PrecodedLink fully_connected_precoder(std::span<const ComplexMatrix> channels,
                                      std::span<const ComplexMatrix> combiners, const Codebook& cb,
                                      std::size_t n_s, DigitalMode mode);

}  // namespace dynsub

#endif  // DYNSUB_PRECODING_HPP_
