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

#ifndef DYNSUB_SINR_HPP_
#define DYNSUB_SINR_HPP_

#include <cmath>

namespace dynsub {

// Shared by the partitioning stage and the final rate so both use one formula.
inline double sinr_ratio(double signal, double interference, double noise_var) {
  return signal / (noise_var + interference);
}

inline double rate_from_sinr(double sinr) { return std::log2(1.0 + sinr); }

}  // namespace dynsub

#endif  // DYNSUB_SINR_HPP_
