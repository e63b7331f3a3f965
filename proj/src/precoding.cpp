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

#include "dynsub/precoding.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "dynsub/channel.hpp"
#include "dynsub/selection.hpp"

namespace dynsub {

std::string_view to_string(DigitalMode mode) { return mode == DigitalMode::zf ? "zf" : "mf"; }

DigitalMode parse_digital_mode(std::string_view name) {
  if (name == "zf") return DigitalMode::zf;
  if (name == "mf") return DigitalMode::mf;
  throw std::invalid_argument("unknown digital mode '" + std::string(name) + "'");
}

AnalogBeam analog_for_subarray(const ComplexMatrix& h_eff_sub, const Codebook& cb,
                               std::span<const std::size_t> subset) {
  if (subset.empty()) {
    throw std::invalid_argument("analog_for_subarray: empty subset");
  }
  if (h_eff_sub.cols() != subset.size()) {
    throw std::invalid_argument("analog_for_subarray: channel width does not match subset");
  }
  AnalogBeam best;
  best.gain = -1.0;
  for (std::size_t q = 0; q < cb.size(); ++q) {
    ComplexVector w = restrict_codeword(cb, q, subset);
    const double g = beam_gain(h_eff_sub, w);
    if (beats(g, best.gain)) best = AnalogBeam{q, std::move(w), g};
  }
  return best;
}

ComplexMatrix effective_mu_channel(const ComplexMatrix& analog, std::span<const ComplexMatrix> effective) {
  const std::size_t k = analog.cols();
  if (effective.size() != k) {
    throw std::invalid_argument("effective_mu_channel: one effective channel per RF chain expected");
  }
  ComplexMatrix g(k, k);
  for (std::size_t u = 0; u < k; ++u) {
    if (effective[u].rows() != 1 || effective[u].cols() != analog.rows()) {
      throw std::invalid_argument("effective_mu_channel: effective channel must be 1 x n_tx");
    }
    const ComplexMatrix row = effective[u] * analog;
    for (std::size_t i = 0; i < k; ++i) g(u, i) = row(0, i);
  }
  return g;
}

ComplexMatrix zf_digital(const ComplexMatrix& g) { return right_pinv(g); }

ComplexMatrix mf_digital(const ComplexMatrix& g) {
  ComplexMatrix out(g.cols(), g.rows());
  for (std::size_t k = 0; k < g.rows(); ++k) {
    const double n = norm_sq(g.row(k));
    if (n == 0.0) {
      throw SingularMatrixError("mf_digital: user " + std::to_string(k) + " has a zero effective channel");
    }
    for (std::size_t i = 0; i < g.cols(); ++i) out(i, k) = std::conj(g(k, i)) / n;
  }
  return out;
}

ComplexMatrix digital_precoder(const ComplexMatrix& g, DigitalMode mode) {
  return mode == DigitalMode::zf ? zf_digital(g) : mf_digital(g);
}

std::vector<double> per_user_power(const HybridPrecoder& precoder) {
  const ComplexMatrix x = precoder.analog * precoder.digital;
  std::vector<double> p(x.cols(), 0.0);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (std::size_t c = 0; c < x.cols(); ++c) p[c] += std::norm(x(r, c));
  }
  return p;
}

HybridPrecoder normalize_power(HybridPrecoder precoder, std::size_t n_s) {
  const std::vector<double> p = per_user_power(precoder);
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (!(p[k] > 0.0)) {
      throw std::invalid_argument("normalize_power: user " + std::to_string(k) + " has zero transmit power");
    }
    const double s = std::sqrt(static_cast<double>(n_s) / p[k]);
    for (std::size_t r = 0; r < precoder.digital.rows(); ++r) precoder.digital(r, k) *= s;
  }
  return precoder;
}

PrecodedLink subarray_precoder(const Partition& partition, std::span<const ComplexMatrix> channels,
                               const Codebook& cb, std::size_t n_s, DigitalMode mode) {
  const std::size_t k = partition.users();
  if (channels.size() != k) {
    throw std::invalid_argument("subarray_precoder: one channel per subset expected");
  }
  const std::size_t n_tx = cb.n_tx();
  check_partition(partition, n_tx);

  PrecodedLink link{HybridPrecoder{partition, std::vector<std::size_t>(k), ComplexMatrix(n_tx, k),
                                   ComplexMatrix(k, k)},
                    {}};
  std::vector<ComplexMatrix> effective;
  for (std::size_t u = 0; u < k; ++u) {
    const AntennaSet& subset = partition.subsets[u];
    const ComplexMatrix h_sub = restrict_channel(channels[u], subset);
    ComplexMatrix w = compute_combiner(h_sub, n_s);
    const AnalogBeam beam = analog_for_subarray(w * h_sub, cb, subset);
    link.precoder.codewords[u] = beam.q;
    for (std::size_t i = 0; i < subset.size(); ++i) link.precoder.analog(subset[i] - 1, u) = beam.weights[i];
    effective.push_back(w * channels[u]);
    link.combiners.push_back(std::move(w));
  }
  const ComplexMatrix g = effective_mu_channel(link.precoder.analog, effective);
  link.precoder.digital = digital_precoder(g, mode);
  link.precoder = normalize_power(std::move(link.precoder), n_s);
  return link;
}

PrecodedLink fully_connected_precoder(std::span<const ComplexMatrix> channels,
                                      std::span<const ComplexMatrix> combiners, const Codebook& cb,
                                      std::size_t n_s, DigitalMode mode) {
  const std::size_t k = channels.size();
  if (combiners.size() != k || k == 0) {
    throw std::invalid_argument("fully_connected_precoder: channel/combiner count mismatch");
  }
  const std::size_t n_tx = cb.n_tx();
  PrecodedLink link{HybridPrecoder{std::nullopt, std::vector<std::size_t>(k), ComplexMatrix(n_tx, k),
                                   ComplexMatrix(k, k)},
                    std::vector<ComplexMatrix>(combiners.begin(), combiners.end())};
  std::vector<ComplexMatrix> effective;
  for (std::size_t u = 0; u < k; ++u) {
    effective.push_back(combiners[u] * channels[u]);
    const Beam beam = best_beam(effective.back(), cb);
    link.precoder.codewords[u] = beam.q;
    link.precoder.analog.set_column(u, cb.codeword(beam.q));
  }
  const ComplexMatrix g = effective_mu_channel(link.precoder.analog, effective);
  link.precoder.digital = digital_precoder(g, mode);
  link.precoder = normalize_power(std::move(link.precoder), n_s);
  return link;
}

}  // namespace dynsub
