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

#ifndef DYNSUB_SELECTION_HPP_
#define DYNSUB_SELECTION_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "dynsub/codebook.hpp"
#include "dynsub/numerics.hpp"

namespace dynsub {

struct Beam {
  std::size_t q = 0;
  double gain = 0.0;  // ||H_eff b_q||^2
};

// Indexed by candidate user.
using BeamAssignment = std::vector<Beam>;

// Candidate indices in selection order; element 0 is the strongest user.
using SelectedSet = std::vector<std::size_t>;

// ||h_eff * beam||_F^2
double beam_gain(const ComplexMatrix& h_eff, std::span<const cplx> beam);

// Codeword maximizing the effective-channel gain; the smallest q wins ties.
Beam best_beam(const ComplexMatrix& h_eff, const Codebook& cb);

BeamAssignment assign_beams(std::span<const ComplexMatrix> h_effs, const Codebook& cb);

// Initial-beam SINR of `user` against the beams of `interferers`. The user's
// own index is skipped if it appears in the interferer list, so passing all
// candidates gives the pre-selection form and passing the selected prefix
// gives the greedy-step form.
double initial_sinr(std::size_t user, const BeamAssignment& beams, std::span<const ComplexMatrix> h_effs,
                    std::span<const std::size_t> interferers, double noise_var, const Codebook& cb);

// Greedy multi-user selection. The first pick is the candidate with the
// largest ||H_eff||_F^2; each later pick maximizes initial_sinr against the
// users already chosen. Ties go to the smallest candidate index.
SelectedSet select_users(std::span<const std::size_t> candidates, const BeamAssignment& beams,
                         std::span<const ComplexMatrix> h_effs, std::size_t k, double noise_var,
                         const Codebook& cb);

}  // namespace dynsub

#endif  // DYNSUB_SELECTION_HPP_
