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

#include "dynsub/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace dynsub {

AntennaSet full_array(std::size_t n_tx) {
  AntennaSet s(n_tx);
  std::iota(s.begin(), s.end(), std::size_t{1});
  return s;
}

void check_antenna_set(std::span<const std::size_t> set, std::size_t n_tx) {
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (set[i] < 1 || set[i] > n_tx) {
      throw std::invalid_argument("antenna index " + std::to_string(set[i]) + " outside 1.." +
                                  std::to_string(n_tx));
    }
    if (i > 0 && set[i] <= set[i - 1]) {
      throw std::invalid_argument("antenna indices must be strictly increasing");
    }
  }
}

void SystemConfig::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("SystemConfig: " + msg); };
  if (n_tx < 1 || n_rx < 1 || n_rf < 1) fail("antenna and RF chain counts must be positive");
  if (n_rf > n_tx) fail("n_rf must not exceed n_tx");
  if (n_users != n_rf) fail("n_users must equal n_rf");
  if (n_users > n_candidates) fail("n_users must not exceed n_candidates");
  if (n_streams != 1) fail("n_streams must be 1");
  if (n_paths < 1) fail("n_paths must be at least 1");
  if (codebook_size < n_rf) fail("codebook_size must be at least n_rf");
  if (!(antenna_spacing_wavelengths > 0.0) || !std::isfinite(antenna_spacing_wavelengths)) {
    fail("antenna spacing must be positive");
  }
  if (!std::isfinite(snr_db)) fail("snr_db must be finite");
}

double SystemConfig::noise_variance() const { return std::pow(10.0, -snr_db / 10.0); }

PathSet sample_paths(const SystemConfig& cfg, RandomStream& rng) {
  PathSet paths(cfg.n_paths);
  for (auto& p : paths) {
    p.gain = rng.complex_gaussian();
    p.aoa = rng.uniform(-std::numbers::pi, std::numbers::pi);
    p.aod = rng.uniform(-std::numbers::pi, std::numbers::pi);
  }
  return paths;
}

ComplexVector steering_vector(double angle, std::span<const std::size_t> indices, double spacing) {
  if (indices.empty()) {
    throw std::invalid_argument("steering_vector: empty index list");
  }
  const double k = 2.0 * std::numbers::pi * spacing * std::sin(angle);
  ComplexVector a(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    a[i] = std::polar(1.0, static_cast<double>(indices[i] - 1) * k);
  }
  return a;
}

ComplexMatrix assemble_channel(const PathSet& paths, std::size_t n_tx, std::size_t n_rx, double spacing) {
  if (paths.empty()) {
    throw std::invalid_argument("assemble_channel: no paths");
  }
  const AntennaSet tx = full_array(n_tx);
  const AntennaSet rx = full_array(n_rx);
  const double nt = static_cast<double>(n_tx);
  const double nr = static_cast<double>(n_rx);
  // sqrt(n_tx n_rx / L) times the two 1/sqrt(N) response normalizations.
  const double scale = std::sqrt(nt * nr / static_cast<double>(paths.size())) / std::sqrt(nt * nr);

  ComplexMatrix h(n_rx, n_tx);
  for (const auto& p : paths) {
    const ComplexVector a_rx = steering_vector(p.aoa, rx, spacing);
    const ComplexVector a_tx = steering_vector(p.aod, tx, spacing);
    const cplx g = scale * p.gain;
    for (std::size_t r = 0; r < n_rx; ++r) {
      const cplx left = g * std::conj(a_rx[r]);
      for (std::size_t c = 0; c < n_tx; ++c) h(r, c) += left * a_tx[c];
    }
  }
  return h;
}

ComplexMatrix restrict_channel(const ComplexMatrix& h, std::span<const std::size_t> subset) {
  if (subset.empty()) {
    throw std::invalid_argument("restrict_channel: empty subset");
  }
  check_antenna_set(subset, h.cols());
  ComplexMatrix out(h.rows(), subset.size());
  for (std::size_t r = 0; r < h.rows(); ++r) {
    for (std::size_t i = 0; i < subset.size(); ++i) out(r, i) = h(r, subset[i] - 1);
  }
  return out;
}

ComplexMatrix compute_combiner(const ComplexMatrix& h, std::size_t n_streams) {
  if (frobenius_norm_sq(h) == 0.0) {
    throw std::invalid_argument("compute_combiner: zero channel");
  }
  if (n_streams < 1 || n_streams > std::min(h.rows(), h.cols())) {
    throw std::invalid_argument("compute_combiner: stream count exceeds channel rank");
  }
  const Svd d = svd_thin(h);
  ComplexMatrix w(n_streams, h.rows());
  for (std::size_t s = 0; s < n_streams; ++s) {
    for (std::size_t r = 0; r < h.rows(); ++r) w(s, r) = std::conj(d.u(r, s));
  }
  return w;
}

ComplexMatrix effective_channel(const UserChannel& user) { return user.combiner_full * user.h_full; }

ChannelRealization sample_realization(const SystemConfig& cfg, RandomStream& rng) {
  ChannelRealization out;
  out.users.reserve(cfg.n_candidates);
  for (std::size_t n = 0; n < cfg.n_candidates; ++n) {
    PathSet paths = sample_paths(cfg, rng);
    ComplexMatrix h = assemble_channel(paths, cfg.n_tx, cfg.n_rx, cfg.antenna_spacing_wavelengths);
    ComplexMatrix w = compute_combiner(h, cfg.n_streams);
    out.users.push_back(UserChannel{std::move(paths), std::move(h), std::move(w)});
  }
  return out;
}

}  // namespace dynsub
