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

#include "dynsub/metrics.hpp"

#include <array>
#include <stdexcept>
#include <string>
#include <utility>

#include "dynsub/sinr.hpp"

namespace dynsub {

namespace {

constexpr std::array<std::pair<Architecture, std::string_view>, 5> kArchitectureNames{{
    {Architecture::dynamic, "dynamic"},
    {Architecture::fixed_adjacent, "fixed_adjacent"},
    {Architecture::fixed_interlaced, "fixed_interlaced"},
    {Architecture::fully_connected, "fully_connected"},
    {Architecture::exhaustive, "exhaustive"},
}};

}  // namespace

std::string_view to_string(Architecture arch) {
  for (const auto& [a, name] : kArchitectureNames) {
    if (a == arch) return name;
  }
  return "unknown";
}

Architecture parse_architecture(std::string_view name) {
  for (const auto& [a, n] : kArchitectureNames) {
    if (n == name) return a;
  }
  throw std::invalid_argument("unknown architecture '" + std::string(name) + "'");
}

void PowerModel::validate() const {
  if (!(p_rf > 0.0) || !(p_ps > 0.0) || !(p_t > 0.0)) {
    throw std::invalid_argument("PowerModel: power terms must be positive");
  }
  if (!(eta > 0.0) || eta > 1.0) {
    throw std::invalid_argument("PowerModel: amplifier efficiency must lie in (0, 1]");
  }
}

double per_user_rate(std::size_t k, const HybridPrecoder& precoder, std::span<const ComplexMatrix> channels,
                     std::span<const ComplexMatrix> combiners, double noise_var) {
  if (k >= channels.size() || channels.size() != combiners.size()) {
    throw std::invalid_argument("per_user_rate: user index or channel count mismatch");
  }
  const ComplexMatrix received = combiners[k] * channels[k] * precoder.analog * precoder.digital;
  double signal = 0.0;
  double interference = 0.0;
  for (std::size_t r = 0; r < received.rows(); ++r) {
    for (std::size_t i = 0; i < received.cols(); ++i) {
      (i == k ? signal : interference) += std::norm(received(r, i));
    }
  }
  return rate_from_sinr(sinr_ratio(signal, interference, noise_var));
}

std::vector<double> user_rates(const HybridPrecoder& precoder, std::span<const ComplexMatrix> channels,
                               std::span<const ComplexMatrix> combiners, double noise_var) {
  std::vector<double> out;
  out.reserve(channels.size());
  for (std::size_t k = 0; k < channels.size(); ++k) {
    out.push_back(per_user_rate(k, precoder, channels, combiners, noise_var));
  }
  return out;
}

std::size_t ps_count(Architecture arch, std::size_t n_tx, std::size_t n_rf) {
  return arch == Architecture::fully_connected ? n_rf * n_tx : n_tx;
}

std::size_t rf_adder_count(Architecture arch, std::size_t n_tx, std::size_t /*n_rf*/) {
  return arch == Architecture::fully_connected ? n_tx : 0;
}

double energy_efficiency(double sum_rate, const PowerModel& pm, std::size_t n_rf, std::size_t n_ps) {
  pm.validate();
  const double total = pm.p_t / pm.eta + static_cast<double>(n_rf) * pm.p_rf + static_cast<double>(n_ps) * pm.p_ps;
  return sum_rate / total;
}

}  // namespace dynsub
