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

#ifndef DYNSUB_CHANNEL_HPP_
#define DYNSUB_CHANNEL_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dynsub/numerics.hpp"
#include "dynsub/random.hpp"

namespace dynsub {

// Antenna indices are 1-based and strictly increasing, matching the
// (S_k^i - 1) phase exponents of the subarray response.
using AntennaSet = std::vector<std::size_t>;

AntennaSet full_array(std::size_t n_tx);

// Throws std::invalid_argument unless `set` is strictly increasing within 1..n_tx.
// Empty sets pass; callers that need a nonempty set check separately.
void check_antenna_set(std::span<const std::size_t> set, std::size_t n_tx);

struct SystemConfig {
  std::size_t n_tx = 64;
  std::size_t n_rx = 2;
  std::size_t n_rf = 2;
  std::size_t n_candidates = 4;
  std::size_t n_users = 2;
  std::size_t n_streams = 1;
  std::size_t n_paths = 4;
  std::size_t codebook_size = 32;
  double antenna_spacing_wavelengths = 0.5;
  double snr_db = 0.0;
  std::uint64_t seed = 1;

  // Throws std::invalid_argument naming the first violated constraint.
  void validate() const;

  // Received power is normalized to one, so sigma^2 = 10^(-SNR/10).
  double noise_variance() const;
};

struct Path {
  cplx gain;
  double aoa;  // radians
  double aod;  // radians
};
using PathSet = std::vector<Path>;

struct UserChannel {
  PathSet paths;
  ComplexMatrix h_full;         // n_rx x n_tx
  ComplexMatrix combiner_full;  // n_streams x n_rx
};

struct ChannelRealization {
  std::vector<UserChannel> users;
};

PathSet sample_paths(const SystemConfig& cfg, RandomStream& rng);

// Unit-modulus ULA response: entry i = exp(j (idx_i - 1) 2 pi d sin(angle)).
ComplexVector steering_vector(double angle, std::span<const std::size_t> indices, double spacing);

// H = sqrt(n_tx n_rx / L) sum_l alpha_l a_rx(theta_l)^H a_tx(phi_l), with both
// responses scaled to unit norm so that E||H||_F^2 = n_tx n_rx.
ComplexMatrix assemble_channel(const PathSet& paths, std::size_t n_tx, std::size_t n_rx, double spacing);

// Columns of h at the 1-based indices in `subset`.
ComplexMatrix restrict_channel(const ComplexMatrix& h, std::span<const std::size_t> subset);

// Rows are U^H for the top n_streams left singular vectors of h.
ComplexMatrix compute_combiner(const ComplexMatrix& h, std::size_t n_streams);

// W_k H_k through the full-array combiner.
ComplexMatrix effective_channel(const UserChannel& user);

// One drop: n_candidates users with paths, channels and full-array combiners.
ChannelRealization sample_realization(const SystemConfig& cfg, RandomStream& rng);

}  // namespace dynsub

#endif  // DYNSUB_CHANNEL_HPP_
