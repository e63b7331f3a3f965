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

#ifndef DYNSUB_HARNESS_HPP_
#define DYNSUB_HARNESS_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dynsub/channel.hpp"
#include "dynsub/metrics.hpp"
#include "dynsub/partition.hpp"
#include "dynsub/precoding.hpp"
#include "dynsub/selection.hpp"

namespace dynsub {

// Malformed or inconsistent experiment description.
class SpecError : public std::invalid_argument {
 public:
  explicit SpecError(const std::string& what) : std::invalid_argument(what) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Knobs shared by every drop of an experiment.
struct DropOptions {
  DigitalMode mode = DigitalMode::zf;
  PowerModel power;
  // When set, P_t is p_t times the total radiated power K * N_s implied by the
  // per-user normalization; otherwise P_t is p_t itself.
  bool scale_tx_power_with_users = true;
  BeamScaling partition_scaling = BeamScaling::power_normalized;
  ExhaustiveMode exhaustive_mode = ExhaustiveMode::joint;
  ExhaustiveObjective exhaustive_objective = ExhaustiveObjective::sum_rate;
  std::uint64_t exhaustive_cap = kDefaultExhaustiveCap;
};

// Greedy vs exhaustive under the same beams-fixed objective, recorded when the
// exhaustive architecture runs.
struct PartitionAudit {
  double greedy_objective = 0.0;
  double exhaustive_objective = 0.0;
};

struct DropOutcome {
  std::size_t drop_index = 0;
  ChannelRealization realization;
  BeamAssignment beams;
  SelectedSet selected;
  Partition greedy;
  std::vector<ExperimentResult> results;  // same order as the requested architectures
  std::optional<PartitionAudit> audit;
};

// Transmit power that enters the energy-efficiency denominator.
double transmit_power(const DropOptions& options, const SystemConfig& cfg);

// One Monte Carlo drop: channels, combiners, initial beams and user selection
// are computed once and shared by every architecture.
DropOutcome run_drop(const SystemConfig& cfg, std::size_t drop_index, const std::vector<Architecture>& architectures,
                     const DropOptions& options);

enum class SweepAxis { snr_db, n_tx, n_rf };
std::string_view to_string(SweepAxis axis);
SweepAxis parse_sweep_axis(std::string_view name);

enum class OutputFormat { csv, json };

// Fixed overrides applied to the base config before the sweep value.
struct Panel {
  std::optional<std::size_t> n_tx;
  std::optional<std::size_t> n_rf;
  std::optional<double> snr_db;

  std::string label() const;
};

struct ExperimentSpec {
  std::string name = "custom";
  SystemConfig base;
  SweepAxis axis = SweepAxis::snr_db;
  std::vector<double> values;
  std::vector<Panel> panels;  // empty means one panel with no overrides
  std::vector<Architecture> architectures;
  std::size_t n_drops = 500;
  std::uint64_t seed = 1;
  // n_candidates = candidates_per_user * n_rf for every resolved config; 0
  // keeps base.n_candidates.
  std::size_t candidates_per_user = 2;
  DropOptions options;
  std::size_t workers = 0;  // 0 = hardware concurrency
  std::string output_path;
  OutputFormat format = OutputFormat::csv;
  std::string per_drop_path;
};

// Config for one (panel, sweep value) point, with seed and candidate count filled in.
SystemConfig resolve_config(const ExperimentSpec& spec, const Panel& panel, double value);

// Throws SpecError, or EnumerationCapError when an exhaustive run would exceed its cap.
void validate_spec(const ExperimentSpec& spec);

struct AggregateRow {
  std::string sweep_name;
  double sweep_value = 0.0;
  Architecture architecture = Architecture::dynamic;
  DigitalMode mode = DigitalMode::zf;
  std::size_t n_drops_used = 0;
  std::size_t n_drops_skipped = 0;
  double mean_sum_rate = 0.0;
  double stderr_sum_rate = 0.0;
  double mean_ee = 0.0;
  std::size_t ps_count = 0;
  std::size_t rf_adder_count = 0;
};

struct DropRecord {
  std::string sweep_name;
  double sweep_value = 0.0;
  ExperimentResult result;
};

struct ExperimentReport {
  ExperimentSpec spec;
  std::vector<AggregateRow> rows;
  std::vector<DropRecord> drops;
};

ExperimentReport run_experiment(const ExperimentSpec& spec);

// Means over non-skipped drops; stderr is the sample standard deviation over sqrt(n).
AggregateRow aggregate(std::string sweep_name, double sweep_value, Architecture arch, DigitalMode mode,
                       std::span<const ExperimentResult> results, std::size_t ps, std::size_t adders);

// Presets: fig4, fig5, fig6, fig7, fig8.
ExperimentSpec preset(std::string_view name, std::size_t n_drops = 500);
std::vector<std::string> preset_names();

nlohmann::json spec_to_json(const ExperimentSpec& spec);
ExperimentSpec spec_from_json(const nlohmann::json& j);

void write_csv(std::ostream& os, std::span<const AggregateRow> rows);
void write_json(std::ostream& os, const ExperimentReport& report);
void write_per_drop_csv(std::ostream& os, std::span<const DropRecord> drops);

// Writes the aggregate (and per-drop file when configured); throws IoError.
void write_report(const ExperimentReport& report);

}  // namespace dynsub

#endif  // DYNSUB_HARNESS_HPP_
