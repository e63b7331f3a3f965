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

#ifndef DYNSUB_METRICS_HPP_
#define DYNSUB_METRICS_HPP_

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "dynsub/numerics.hpp"
#include "dynsub/precoding.hpp"

namespace dynsub {

enum class Architecture { dynamic, fixed_adjacent, fixed_interlaced, fully_connected, exhaustive };

std::string_view to_string(Architecture arch);
Architecture parse_architecture(std::string_view name);

// Component powers in watts.
struct PowerModel {
  double p_rf = 0.250;
  double p_ps = 0.001;
  double eta = 0.38;
  double p_t = 1.0;

  void validate() const;
};

struct ExperimentResult {
  std::size_t drop_index = 0;
  Architecture architecture = Architecture::dynamic;
  std::vector<double> rates;  // bps/Hz per served user
  double sum_rate = 0.0;
  double energy_efficiency = 0.0;  // bps/Hz/W
  bool skipped = false;
};

// log2(1 + SINR) of user k, where the received row is W_k H_k F_RF F_BB.
double per_user_rate(std::size_t k, const HybridPrecoder& precoder, std::span<const ComplexMatrix> channels,
                     std::span<const ComplexMatrix> combiners, double noise_var);

std::vector<double> user_rates(const HybridPrecoder& precoder, std::span<const ComplexMatrix> channels,
                               std::span<const ComplexMatrix> combiners, double noise_var);

// Phase shifters: n_rf * n_tx when fully connected, n_tx for any subarray layout.
std::size_t ps_count(Architecture arch, std::size_t n_tx, std::size_t n_rf);

// RF adders: one per antenna when fully connected, none otherwise.
std::size_t rf_adder_count(Architecture arch, std::size_t n_tx, std::size_t n_rf);

// sum_rate / (P_t / eta + n_rf P_RF + n_ps P_PS)
double energy_efficiency(double sum_rate, const PowerModel& pm, std::size_t n_rf, std::size_t n_ps);

}  // namespace dynsub

#endif  // DYNSUB_METRICS_HPP_
