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

#ifndef DYNSUB_PARTITION_HPP_
#define DYNSUB_PARTITION_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "dynsub/channel.hpp"
#include "dynsub/codebook.hpp"
#include "dynsub/numerics.hpp"

namespace dynsub {

// Antenna-to-RF-chain assignment. subsets[k] holds the sorted 1-based antenna
// indices driven by RF chain k, which serves the k-th selected user.
struct Partition {
  std::vector<AntennaSet> subsets;

  std::size_t users() const { return subsets.size(); }
  std::vector<std::size_t> sizes() const;

  friend bool operator==(const Partition&, const Partition&) = default;
};

// Throws std::invalid_argument unless the subsets are sorted, pairwise disjoint
// and cover 1..n_tx. Final partitions also need every subset nonempty.
void check_partition(const Partition& p, std::size_t n_tx, bool require_nonempty = true);

Partition fixed_adjacent(std::size_t n_tx, std::size_t k);
Partition fixed_interlaced(std::size_t n_tx, std::size_t k);

// How an initial beam restricted to a subarray is weighted inside the
// partitioning SINR.
enum class BeamScaling {
  // Raw unit-modulus codeword entries.
  unit_modulus,
  // Codeword scaled by 1/sqrt(|S|), i.e. with the single-chain digital weight
  // that meets the per-user power constraint.
  power_normalized,
};

// Everything the partitioning stage sees for the K selected users, in
// selection order.
struct PartitionProblem {
  std::vector<ComplexMatrix> effective;  // W_k H_k with full-array combiners
  std::vector<std::size_t> codewords;    // initial beam index per user
  const Codebook& codebook;
  double noise_var;
  BeamScaling scaling = BeamScaling::power_normalized;

  std::size_t users() const { return effective.size(); }
};

// SINR of user k on subarray S_k with initial beams. The signal is user k's
// channel on S_k through beam q_k restricted to S_k; interferer i contributes
// user k's channel on S_i through beam q_i restricted to S_i. Empty S_k gives 0.
double subarray_sinr(std::size_t k, const Partition& partition, const PartitionProblem& problem);
double subarray_sinr(std::size_t k, const Partition& partition, const PartitionProblem& problem,
                     std::span<const std::size_t> codewords);

// Sum over users of log2(1 + subarray_sinr).
double partition_objective(const Partition& partition, const PartitionProblem& problem,
                           std::span<const std::size_t> codewords);
double partition_objective(const Partition& partition, const PartitionProblem& problem);

// Per-antenna record of the SINR increments the greedy pass compared.
struct GreedyStep {
  std::size_t antenna;               // 1-based
  std::vector<double> increments;    // per user; NaN where the user was not eligible
  std::size_t assigned_to;
};

// Antennas are visited in ascending index order and each goes to the user
// whose SINR grows the most (smallest user index on ties). Once the number
// of unassigned antennas equals the number of empty subsets, only users with
// empty subsets remain eligible, so every subset ends nonempty.
Partition greedy_partition(const PartitionProblem& problem, std::size_t n_tx,
                           std::vector<GreedyStep>* trace = nullptr);

class EnumerationCapError : public std::runtime_error {
 public:
  explicit EnumerationCapError(const std::string& what) : std::runtime_error(what) {}
};

enum class ExhaustiveMode {
  // Every user re-picks the codeword maximizing its gain on its candidate subset.
  joint,
  // Initial beams are kept; the search space then contains the greedy output.
  beams_fixed,
};

enum class ExhaustiveObjective {
  // Sum over users of log2(1 + subarray_sinr).
  sum_rate,
  // Sum over users of the signal term of subarray_sinr, interference ignored.
  sum_gain,
};

struct ExhaustiveResult {
  Partition partition;
  std::vector<std::size_t> codewords;
  double objective = 0.0;
  std::uint64_t evaluated = 0;  // labeled assignments scored
};

inline constexpr std::uint64_t kDefaultExhaustiveCap = 1'000'000;

// Sum over users of the signal term of subarray_sinr.
double partition_gain(const Partition& partition, const PartitionProblem& problem,
                      std::span<const std::size_t> codewords);

// Scores every assignment of n_tx antennas to K labeled nonempty subsets and
// returns the one with the largest objective (first found on ties). Throws
// EnumerationCapError when partition_count(n_tx, K) exceeds `cap`.
ExhaustiveResult exhaustive_partition(const PartitionProblem& problem, std::size_t n_tx, ExhaustiveMode mode,
                                      std::uint64_t cap = kDefaultExhaustiveCap,
                                      ExhaustiveObjective objective = ExhaustiveObjective::sum_rate);

using BigInt = boost::multiprecision::cpp_int;

// Number of ways to split n_tx antennas into n_rf unlabeled nonempty subsets
// (Stirling number of the second kind), evaluated from the alternating
// binomial sum with exact integers.
BigInt partition_count(std::size_t n_tx, std::size_t n_rf);

}  // namespace dynsub

#endif  // DYNSUB_PARTITION_HPP_
