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

#include "dynsub/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "dynsub/codebook.hpp"
#include "dynsub/random.hpp"

namespace dynsub {

double transmit_power(const DropOptions& options, const SystemConfig& cfg) {
  if (!options.scale_tx_power_with_users) return options.power.p_t;
  return options.power.p_t * static_cast<double>(cfg.n_users * cfg.n_streams);
}

namespace {

Partition partition_for(Architecture arch, const PartitionProblem& problem, const SystemConfig& cfg,
                        const DropOptions& options) {
  switch (arch) {
    case Architecture::dynamic:
      return greedy_partition(problem, cfg.n_tx);
    case Architecture::fixed_adjacent:
      return fixed_adjacent(cfg.n_tx, cfg.n_rf);
    case Architecture::fixed_interlaced:
      return fixed_interlaced(cfg.n_tx, cfg.n_rf);
    case Architecture::exhaustive:
      return exhaustive_partition(problem, cfg.n_tx, options.exhaustive_mode, options.exhaustive_cap,
                                  options.exhaustive_objective)
          .partition;
    case Architecture::fully_connected:
      break;
  }
  throw std::logic_error("partition_for: architecture has no partition");
}

}  // namespace

DropOutcome run_drop(const SystemConfig& cfg, std::size_t drop_index, const std::vector<Architecture>& architectures,
                     const DropOptions& options) {
  cfg.validate();
  options.power.validate();

  DropOutcome out;
  out.drop_index = drop_index;
  RandomStream rng = RandomStream::substream(cfg.seed, drop_index);
  out.realization = sample_realization(cfg, rng);

  const Codebook cb = build_codebook(cfg.codebook_size, cfg.n_tx, cfg.antenna_spacing_wavelengths);
  const double noise_var = cfg.noise_variance();

  std::vector<ComplexMatrix> h_effs;
  h_effs.reserve(out.realization.users.size());
  for (const auto& u : out.realization.users) h_effs.push_back(effective_channel(u));
  out.beams = assign_beams(h_effs, cb);

  std::vector<std::size_t> candidates(cfg.n_candidates);
  std::iota(candidates.begin(), candidates.end(), std::size_t{0});
  out.selected = select_users(candidates, out.beams, h_effs, cfg.n_users, noise_var, cb);

  std::vector<ComplexMatrix> channels;
  std::vector<ComplexMatrix> combiners;
  PartitionProblem problem{{}, {}, cb, noise_var, options.partition_scaling};
  for (std::size_t n : out.selected) {
    channels.push_back(out.realization.users[n].h_full);
    combiners.push_back(out.realization.users[n].combiner_full);
    problem.effective.push_back(h_effs[n]);
    problem.codewords.push_back(out.beams[n].q);
  }
  out.greedy = greedy_partition(problem, cfg.n_tx);

  const double p_t = transmit_power(options, cfg);
  PowerModel pm = options.power;
  pm.p_t = p_t;

  for (Architecture arch : architectures) {
    ExperimentResult r;
    r.drop_index = drop_index;
    r.architecture = arch;
    try {
      const PrecodedLink link = [&] {
        if (arch == Architecture::fully_connected) {
          return fully_connected_precoder(channels, combiners, cb, cfg.n_streams, options.mode);
        }
        const Partition p = arch == Architecture::dynamic ? out.greedy : partition_for(arch, problem, cfg, options);
        return subarray_precoder(p, channels, cb, cfg.n_streams, options.mode);
      }();
      r.rates = user_rates(link.precoder, channels, link.combiners, noise_var);
      r.sum_rate = std::accumulate(r.rates.begin(), r.rates.end(), 0.0);
      r.energy_efficiency = energy_efficiency(r.sum_rate, pm, cfg.n_rf, ps_count(arch, cfg.n_tx, cfg.n_rf));
    } catch (const SingularMatrixError&) {
      r = ExperimentResult{drop_index, arch, {}, 0.0, 0.0, true};
    }
    out.results.push_back(std::move(r));

    if (arch == Architecture::exhaustive) {
      const ExhaustiveResult fixed =
          exhaustive_partition(problem, cfg.n_tx, ExhaustiveMode::beams_fixed, options.exhaustive_cap);
      out.audit = PartitionAudit{partition_objective(out.greedy, problem), fixed.objective};
    }
  }
  return out;
}

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::snr_db:
      return "snr_db";
    case SweepAxis::n_tx:
      return "n_tx";
    case SweepAxis::n_rf:
      return "n_rf";
  }
  return "unknown";
}

SweepAxis parse_sweep_axis(std::string_view name) {
  if (name == "snr_db") return SweepAxis::snr_db;
  if (name == "n_tx") return SweepAxis::n_tx;
  if (name == "n_rf") return SweepAxis::n_rf;
  throw SpecError("unknown sweep axis '" + std::string(name) + "'");
}

std::string Panel::label() const {
  std::ostringstream os;
  const char* sep = "";
  if (n_tx) {
    os << sep << "n_tx=" << *n_tx;
    sep = ",";
  }
  if (n_rf) {
    os << sep << "n_rf=" << *n_rf;
    sep = ",";
  }
  if (snr_db) os << sep << "snr_db=" << *snr_db;
  return os.str();
}

namespace {

std::size_t as_count(double v, std::string_view axis) {
  if (!(v >= 1.0) || v != std::floor(v) || v > 1e9) {
    throw SpecError("sweep value for " + std::string(axis) + " must be a positive integer");
  }
  return static_cast<std::size_t>(v);
}

std::string sweep_name(const ExperimentSpec& spec, const Panel& panel) {
  std::string name(to_string(spec.axis));
  const std::string label = panel.label();
  if (!label.empty()) name += "[" + label + "]";
  return name;
}

std::vector<Panel> panels_of(const ExperimentSpec& spec) {
  return spec.panels.empty() ? std::vector<Panel>{Panel{}} : spec.panels;
}

}  // namespace

SystemConfig resolve_config(const ExperimentSpec& spec, const Panel& panel, double value) {
  SystemConfig cfg = spec.base;
  if (panel.n_tx) cfg.n_tx = *panel.n_tx;
  if (panel.n_rf) cfg.n_rf = *panel.n_rf;
  if (panel.snr_db) cfg.snr_db = *panel.snr_db;
  switch (spec.axis) {
    case SweepAxis::snr_db:
      cfg.snr_db = value;
      break;
    case SweepAxis::n_tx:
      cfg.n_tx = as_count(value, "n_tx");
      break;
    case SweepAxis::n_rf:
      cfg.n_rf = as_count(value, "n_rf");
      break;
  }
  cfg.n_users = cfg.n_rf;
  if (spec.candidates_per_user > 0) cfg.n_candidates = spec.candidates_per_user * cfg.n_rf;
  cfg.seed = spec.seed;
  return cfg;
}

void validate_spec(const ExperimentSpec& spec) {
  if (spec.values.empty()) throw SpecError("sweep has no values");
  if (spec.n_drops < 1) throw SpecError("n_drops must be at least 1");
  if (spec.architectures.empty()) throw SpecError("no architectures requested");
  try {
    spec.options.power.validate();
  } catch (const std::invalid_argument& e) {
    throw SpecError(e.what());
  }
  for (const Panel& panel : panels_of(spec)) {
    for (double v : spec.values) {
      const SystemConfig cfg = resolve_config(spec, panel, v);
      try {
        cfg.validate();
      } catch (const std::invalid_argument& e) {
        throw SpecError(std::string(e.what()) + " (" + sweep_name(spec, panel) + " = " + std::to_string(v) + ")");
      }
      for (Architecture a : spec.architectures) {
        const bool fixed = a == Architecture::fixed_adjacent || a == Architecture::fixed_interlaced;
        if (fixed && cfg.n_tx % cfg.n_rf != 0) {
          throw SpecError("fixed subarrays need n_rf to divide n_tx (n_tx=" + std::to_string(cfg.n_tx) +
                          ", n_rf=" + std::to_string(cfg.n_rf) + ")");
        }
        if (a == Architecture::exhaustive) {
          const BigInt count = partition_count(cfg.n_tx, cfg.n_rf);
          if (count > spec.options.exhaustive_cap) {
            throw EnumerationCapError("exhaustive search needs " + count.str() + " partitions, cap is " +
                                      std::to_string(spec.options.exhaustive_cap));
          }
        }
      }
    }
  }
}

AggregateRow aggregate(std::string name, double sweep_value, Architecture arch, DigitalMode mode,
                       std::span<const ExperimentResult> results, std::size_t ps, std::size_t adders) {
  AggregateRow row;
  row.sweep_name = std::move(name);
  row.sweep_value = sweep_value;
  row.architecture = arch;
  row.mode = mode;
  row.ps_count = ps;
  row.rf_adder_count = adders;

  double sum = 0.0;
  double ee = 0.0;
  for (const auto& r : results) {
    if (r.skipped) {
      ++row.n_drops_skipped;
      continue;
    }
    ++row.n_drops_used;
    sum += r.sum_rate;
    ee += r.energy_efficiency;
  }
  if (row.n_drops_used == 0) {
    row.mean_sum_rate = row.stderr_sum_rate = row.mean_ee = std::numeric_limits<double>::quiet_NaN();
    return row;
  }
  const double n = static_cast<double>(row.n_drops_used);
  row.mean_sum_rate = sum / n;
  row.mean_ee = ee / n;
  if (row.n_drops_used > 1) {
    double ss = 0.0;
    for (const auto& r : results) {
      if (!r.skipped) ss += (r.sum_rate - row.mean_sum_rate) * (r.sum_rate - row.mean_sum_rate);
    }
    row.stderr_sum_rate = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return row;
}

namespace {

// Runs drops [0, n) on a pool of workers; results land at their drop index so
// the fold afterwards is order-independent of scheduling.
std::vector<std::vector<ExperimentResult>> run_drops(const SystemConfig& cfg, const ExperimentSpec& spec) {
  std::vector<std::vector<ExperimentResult>> per_drop(spec.n_drops);
  std::size_t workers = spec.workers ? spec.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, spec.n_drops);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t d = next++; d < spec.n_drops; d = next++) {
      try {
        per_drop[d] = run_drop(cfg, d, spec.architectures, spec.options).results;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = spec.n_drops;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return per_drop;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentSpec& spec) {
  validate_spec(spec);
  ExperimentReport report;
  report.spec = spec;

  for (const Panel& panel : panels_of(spec)) {
    const std::string name = sweep_name(spec, panel);
    for (double v : spec.values) {
      const SystemConfig cfg = resolve_config(spec, panel, v);
      const auto per_drop = run_drops(cfg, spec);
      for (std::size_t a = 0; a < spec.architectures.size(); ++a) {
        const Architecture arch = spec.architectures[a];
        std::vector<ExperimentResult> column;
        column.reserve(per_drop.size());
        for (const auto& drop : per_drop) column.push_back(drop[a]);
        report.rows.push_back(aggregate(name, v, arch, spec.options.mode, column, ps_count(arch, cfg.n_tx, cfg.n_rf),
                                        rf_adder_count(arch, cfg.n_tx, cfg.n_rf)));
        for (auto& r : column) report.drops.push_back(DropRecord{name, v, std::move(r)});
      }
    }
  }
  return report;
}

}  // namespace dynsub
