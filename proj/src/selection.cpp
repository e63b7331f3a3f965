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

#include "dynsub/selection.hpp"

#include <algorithm>
#include <stdexcept>

namespace dynsub {

double beam_gain(const ComplexMatrix& h_eff, std::span<const cplx> beam) {
  return norm_sq(multiply(h_eff, beam));
}

Beam best_beam(const ComplexMatrix& h_eff, const Codebook& cb) {
  Beam best{0, beam_gain(h_eff, cb.codeword(0))};
  for (std::size_t q = 1; q < cb.size(); ++q) {
    const double g = beam_gain(h_eff, cb.codeword(q));
    if (beats(g, best.gain)) best = Beam{q, g};
  }
  return best;
}

BeamAssignment assign_beams(std::span<const ComplexMatrix> h_effs, const Codebook& cb) {
  BeamAssignment beams;
  beams.reserve(h_effs.size());
  for (const auto& h : h_effs) beams.push_back(best_beam(h, cb));
  return beams;
}

double initial_sinr(std::size_t user, const BeamAssignment& beams, std::span<const ComplexMatrix> h_effs,
                    std::span<const std::size_t> interferers, double noise_var, const Codebook& cb) {
  if (!(noise_var > 0.0)) {
    throw std::invalid_argument("initial_sinr: noise variance must be positive");
  }
  if (user >= h_effs.size() || user >= beams.size()) {
    throw std::out_of_range("initial_sinr: user index out of range");
  }
  const ComplexMatrix& h = h_effs[user];
  const double signal = beam_gain(h, cb.codeword(beams[user].q));
  double interference = 0.0;
  for (std::size_t i : interferers) {
    if (i == user) continue;
    interference += beam_gain(h, cb.codeword(beams.at(i).q));
  }
  return signal / (noise_var + interference);
}

SelectedSet select_users(std::span<const std::size_t> candidates, const BeamAssignment& beams,
                         std::span<const ComplexMatrix> h_effs, std::size_t k, double noise_var,
                         const Codebook& cb) {
  if (k == 0) {
    throw std::invalid_argument("select_users: K must be positive");
  }
  if (candidates.size() < k) {
    throw std::invalid_argument("select_users: fewer candidates than users to select");
  }
  std::vector<std::size_t> remaining(candidates.begin(), candidates.end());
  std::sort(remaining.begin(), remaining.end());
  if (std::adjacent_find(remaining.begin(), remaining.end()) != remaining.end()) {
    throw std::invalid_argument("select_users: duplicate candidate");
  }

  SelectedSet chosen;
  chosen.reserve(k);

  auto take = [&](std::size_t pos) {
    chosen.push_back(remaining[pos]);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pos));
  };

  std::size_t first = 0;
  double best_gain = frobenius_norm_sq(h_effs[remaining[0]]);
  for (std::size_t p = 1; p < remaining.size(); ++p) {
    const double g = frobenius_norm_sq(h_effs[remaining[p]]);
    if (g > best_gain) {
      best_gain = g;
      first = p;
    }
  }
  take(first);

  while (chosen.size() < k) {
    std::size_t pick = 0;
    double best = initial_sinr(remaining[0], beams, h_effs, chosen, noise_var, cb);
    for (std::size_t p = 1; p < remaining.size(); ++p) {
      const double s = initial_sinr(remaining[p], beams, h_effs, chosen, noise_var, cb);
      if (s > best) {
        best = s;
        pick = p;
      }
    }
    take(pick);
  }
  return chosen;
}

}  // namespace dynsub
