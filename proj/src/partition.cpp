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

#include "dynsub/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dynsub/sinr.hpp"

namespace dynsub {

std::vector<std::size_t> Partition::sizes() const {
  std::vector<std::size_t> out;
  out.reserve(subsets.size());
  for (const auto& s : subsets) out.push_back(s.size());
  return out;
}

void check_partition(const Partition& p, std::size_t n_tx, bool require_nonempty) {
  if (p.subsets.empty()) {
    throw std::invalid_argument("partition has no subsets");
  }
  std::vector<int> seen(n_tx + 1, 0);
  for (const auto& s : p.subsets) {
    if (require_nonempty && s.empty()) {
      throw std::invalid_argument("partition has an empty subset");
    }
    check_antenna_set(s, n_tx);
    for (std::size_t a : s) {
      if (seen[a]++) throw std::invalid_argument("antenna " + std::to_string(a) + " assigned twice");
    }
  }
  for (std::size_t a = 1; a <= n_tx; ++a) {
    if (!seen[a]) throw std::invalid_argument("antenna " + std::to_string(a) + " unassigned");
  }
}

namespace {

void check_divisible(std::size_t n_tx, std::size_t k) {
  if (k == 0 || n_tx % k != 0) {
    throw std::invalid_argument("fixed subarray: RF chain count must divide antenna count");
  }
}

}  // namespace

Partition fixed_adjacent(std::size_t n_tx, std::size_t k) {
  check_divisible(n_tx, k);
  const std::size_t m = n_tx / k;
  Partition p;
  p.subsets.resize(k);
  for (std::size_t u = 0; u < k; ++u) {
    for (std::size_t i = 0; i < m; ++i) p.subsets[u].push_back(u * m + i + 1);
  }
  return p;
}

Partition fixed_interlaced(std::size_t n_tx, std::size_t k) {
  check_divisible(n_tx, k);
  Partition p;
  p.subsets.resize(k);
  for (std::size_t a = 1; a <= n_tx; ++a) p.subsets[(a - 1) % k].push_back(a);
  return p;
}

namespace {

double beam_weight(BeamScaling scaling, std::size_t subset_size) {
  if (subset_size == 0) return 0.0;
  return scaling == BeamScaling::power_normalized ? 1.0 / static_cast<double>(subset_size) : 1.0;
}

// ||(h)|_S * b_q|_S||^2 with the configured beam weight.
double restricted_term(const ComplexMatrix& h, const AntennaSet& subset, std::span<const cplx> codeword,
                       BeamScaling scaling) {
  if (subset.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t r = 0; r < h.rows(); ++r) {
    const auto row = h.row(r);
    cplx sum{};
    for (std::size_t a : subset) sum += row[a - 1] * codeword[a - 1];
    acc += std::norm(sum);
  }
  return acc * beam_weight(scaling, subset.size());
}

void check_problem(const PartitionProblem& problem, std::size_t users) {
  if (problem.effective.size() != users || problem.codewords.size() != users) {
    throw std::invalid_argument("partition problem: user count mismatch");
  }
  if (!(problem.noise_var > 0.0)) {
    throw std::invalid_argument("partition problem: noise variance must be positive");
  }
}

}  // namespace

double subarray_sinr(std::size_t k, const Partition& partition, const PartitionProblem& problem,
                     std::span<const std::size_t> codewords) {
  const std::size_t users = partition.users();
  if (k >= users || codewords.size() != users || problem.effective.size() != users) {
    throw std::invalid_argument("subarray_sinr: user count mismatch");
  }
  if (partition.subsets[k].empty()) return 0.0;
  const ComplexMatrix& h = problem.effective[k];
  const double signal =
      restricted_term(h, partition.subsets[k], problem.codebook.codeword(codewords[k]), problem.scaling);
  double interference = 0.0;
  for (std::size_t i = 0; i < users; ++i) {
    if (i == k) continue;
    interference +=
        restricted_term(h, partition.subsets[i], problem.codebook.codeword(codewords[i]), problem.scaling);
  }
  return sinr_ratio(signal, interference, problem.noise_var);
}

double subarray_sinr(std::size_t k, const Partition& partition, const PartitionProblem& problem) {
  return subarray_sinr(k, partition, problem, problem.codewords);
}

double partition_objective(const Partition& partition, const PartitionProblem& problem,
                           std::span<const std::size_t> codewords) {
  double total = 0.0;
  for (std::size_t k = 0; k < partition.users(); ++k) {
    total += rate_from_sinr(subarray_sinr(k, partition, problem, codewords));
  }
  return total;
}

double partition_objective(const Partition& partition, const PartitionProblem& problem) {
  return partition_objective(partition, problem, problem.codewords);
}

double partition_gain(const Partition& partition, const PartitionProblem& problem,
                      std::span<const std::size_t> codewords) {
  if (codewords.size() != partition.users() || problem.effective.size() != partition.users()) {
    throw std::invalid_argument("partition_gain: user count mismatch");
  }
  double total = 0.0;
  for (std::size_t k = 0; k < partition.users(); ++k) {
    if (partition.subsets[k].empty()) continue;
    total += restricted_term(problem.effective[k], partition.subsets[k], problem.codebook.codeword(codewords[k]),
                             problem.scaling);
  }
  return total;
}

Partition greedy_partition(const PartitionProblem& problem, std::size_t n_tx, std::vector<GreedyStep>* trace) {
  const std::size_t users = problem.users();
  check_problem(problem, users);
  if (users == 0 || n_tx < users) {
    throw std::invalid_argument("greedy_partition: need at least one antenna per user");
  }
  const std::size_t streams = problem.effective.front().rows();

  // acc[k][i] = user k's channel on S_i through beam q_i (unweighted).
  std::vector<std::vector<ComplexVector>> acc(users, std::vector<ComplexVector>(users, ComplexVector(streams)));
  std::vector<std::size_t> size(users, 0);
  std::vector<std::span<const cplx>> beams;
  for (std::size_t q : problem.codewords) beams.push_back(problem.codebook.codeword(q));

  auto term = [&](const ComplexVector& v, std::size_t n) { return norm_sq(v) * beam_weight(problem.scaling, n); };

  Partition out;
  out.subsets.resize(users);
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

  for (std::size_t j = 1; j <= n_tx; ++j) {
    const std::size_t left = n_tx - j + 1;
    const auto empty = static_cast<std::size_t>(std::count(size.begin(), size.end(), std::size_t{0}));
    const bool forced = left == empty;

    std::vector<double> grad(users, kNaN);
    std::size_t winner = users;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < users; ++k) {
      if (forced && size[k] != 0) continue;
      const ComplexMatrix& h = problem.effective[k];
      double interference = 0.0;
      for (std::size_t i = 0; i < users; ++i) {
        if (i != k) interference += term(acc[k][i], size[i]);
      }
      const double before = size[k] == 0 ? 0.0 : sinr_ratio(term(acc[k][k], size[k]), interference, problem.noise_var);
      ComplexVector grown = acc[k][k];
      for (std::size_t r = 0; r < streams; ++r) grown[r] += h(r, j - 1) * beams[k][j - 1];
      const double after = sinr_ratio(term(grown, size[k] + 1), interference, problem.noise_var);
      grad[k] = after - before;
      if (grad[k] > best) {
        best = grad[k];
        winner = k;
      }
    }
    if (winner == users) {
      // Every increment was NaN; only possible with non-finite channels.
      throw std::invalid_argument("greedy_partition: non-finite SINR increment");
    }

    out.subsets[winner].push_back(j);
    ++size[winner];
    for (std::size_t k = 0; k < users; ++k) {
      for (std::size_t r = 0; r < streams; ++r) acc[k][winner][r] += problem.effective[k](r, j - 1) * beams[winner][j - 1];
    }
    if (trace) trace->push_back(GreedyStep{j, std::move(grad), winner});
  }
  return out;
}

BigInt partition_count(std::size_t n_tx, std::size_t n_rf) {
  if (n_rf < 1 || n_tx < n_rf) {
    throw std::invalid_argument("partition_count: need 1 <= n_rf <= n_tx");
  }
  BigInt sum = 0;
  BigInt binom = 1;  // C(n_rf, k), updated incrementally
  for (std::size_t k = 0; k <= n_rf; ++k) {
    if (k > 0) binom = binom * (n_rf - k + 1) / k;
    BigInt power = boost::multiprecision::pow(BigInt(k), static_cast<unsigned>(n_tx));
    BigInt term = binom * power;
    if ((n_rf - k) % 2 == 0) {
      sum += term;
    } else {
      sum -= term;
    }
  }
  BigInt factorial = 1;
  for (std::size_t k = 2; k <= n_rf; ++k) factorial *= k;
  if (sum % factorial != 0) {
    throw std::logic_error("partition_count: inexact division");
  }
  return sum / factorial;
}

namespace {

// Enumerates restricted growth strings with exactly `blocks` distinct values;
// each one is an unlabeled set partition of n antennas.
template <class Visit>
void for_each_set_partition(std::size_t n, std::size_t blocks, Visit&& visit) {
  std::vector<std::size_t> label(n, 0);
  auto rec = [&](auto&& self, std::size_t pos, std::size_t used) -> void {
    if (n - pos < blocks - used) return;
    if (pos == n) {
      if (used == blocks) visit(label);
      return;
    }
    for (std::size_t b = 0; b <= used && b < blocks; ++b) {
      label[pos] = b;
      self(self, pos + 1, std::max(used, b + 1));
    }
  };
  rec(rec, 0, 0);
}

std::size_t best_codeword_on(const ComplexMatrix& h, const AntennaSet& subset, const Codebook& cb) {
  std::size_t best_q = 0;
  double best = -1.0;
  for (std::size_t q = 0; q < cb.size(); ++q) {
    const double g = restricted_term(h, subset, cb.codeword(q), BeamScaling::unit_modulus);
    if (beats(g, best)) {
      best = g;
      best_q = q;
    }
  }
  return best_q;
}

}  // namespace

ExhaustiveResult exhaustive_partition(const PartitionProblem& problem, std::size_t n_tx, ExhaustiveMode mode,
                                      std::uint64_t cap, ExhaustiveObjective objective) {
  const std::size_t users = problem.users();
  check_problem(problem, users);
  if (users == 0 || n_tx < users) {
    throw std::invalid_argument("exhaustive_partition: need at least one antenna per user");
  }
  const BigInt count = partition_count(n_tx, users);
  if (count > cap) {
    throw EnumerationCapError("exhaustive search over " + count.str() + " partitions exceeds cap of " +
                              std::to_string(cap));
  }

  ExhaustiveResult best;
  best.objective = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> perm(users);
  Partition blocks;
  Partition labeled;
  labeled.subsets.resize(users);
  std::vector<std::size_t> codewords(users);
  // Joint mode: best codeword of user k on block b.
  std::vector<std::vector<std::size_t>> block_beam(users, std::vector<std::size_t>(users));

  for_each_set_partition(n_tx, users, [&](const std::vector<std::size_t>& label) {
    blocks.subsets.assign(users, {});
    for (std::size_t a = 0; a < n_tx; ++a) blocks.subsets[label[a]].push_back(a + 1);
    if (mode == ExhaustiveMode::joint) {
      for (std::size_t k = 0; k < users; ++k) {
        for (std::size_t b = 0; b < users; ++b) {
          block_beam[k][b] = best_codeword_on(problem.effective[k], blocks.subsets[b], problem.codebook);
        }
      }
    }
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    do {
      // User k takes block perm[k].
      for (std::size_t k = 0; k < users; ++k) {
        labeled.subsets[k] = blocks.subsets[perm[k]];
        codewords[k] = mode == ExhaustiveMode::joint ? block_beam[k][perm[k]] : problem.codewords[k];
      }
      const double value = objective == ExhaustiveObjective::sum_rate ? partition_objective(labeled, problem, codewords)
                                                                      : partition_gain(labeled, problem, codewords);
      ++best.evaluated;
      if (value > best.objective) {
        best.objective = value;
        best.partition = labeled;
        best.codewords = codewords;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  });
  return best;
}

}  // namespace dynsub
