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

// Command-line driver for hybrid precoding Monte Carlo experiments.
//
//   simulate --preset fig4 --drops 200 --out fig4.csv
//   simulate --spec my_run.json --format json --out run.json

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dynsub/harness.hpp"

namespace {

constexpr int kExitSpec = 2;
constexpr int kExitCap = 3;
constexpr int kExitIo = 4;

dynsub::ExperimentSpec load_spec_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw dynsub::IoError("cannot open spec file '" + path + "'");
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw dynsub::SpecError("spec file '" + path + "' is not valid JSON: " + e.what());
  }
  return dynsub::spec_from_json(j);
}

std::vector<dynsub::Architecture> parse_arch_list(const std::vector<std::string>& names) {
  std::vector<dynsub::Architecture> out;
  for (const auto& n : names) {
    try {
      out.push_back(dynsub::parse_architecture(n));
    } catch (const std::invalid_argument& e) {
      throw dynsub::SpecError(e.what());
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-user hybrid precoding simulator for dynamic antenna subarrays"};

  std::string preset;
  std::string spec_path;
  std::size_t drops = 0;
  std::uint64_t seed = 0;
  std::string out_path;
  std::string format;
  std::string mode;
  std::vector<std::string> archs;
  std::string per_drop;
  std::size_t workers = 0;

  auto* preset_opt = app.add_option("--preset", preset, "Built-in experiment")
                         ->check(CLI::IsMember(dynsub::preset_names()));
  auto* spec_opt = app.add_option("--spec", spec_path, "JSON experiment description");
  preset_opt->excludes(spec_opt);
  auto* drops_opt = app.add_option("--drops", drops, "Monte Carlo drops per sweep point")->check(CLI::PositiveNumber);
  auto* seed_opt = app.add_option("--seed", seed, "Master seed");
  app.add_option("--out", out_path, "Aggregate output file (stdout when omitted)");
  app.add_option("--format", format, "Aggregate output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--mode", mode, "Digital precoder")->check(CLI::IsMember({"zf", "mf"}));
  app.add_option("--arch", archs, "Architectures to run (comma separated)")->delimiter(',');
  app.add_option("--per-drop", per_drop, "Per-drop CSV output file");
  auto* workers_opt = app.add_option("--workers", workers, "Worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitSpec;
  }

  try {
    if (preset.empty() && spec_path.empty()) throw dynsub::SpecError("one of --preset or --spec is required");
    dynsub::ExperimentSpec spec = preset.empty() ? load_spec_file(spec_path) : dynsub::preset(preset);
    if (*drops_opt) spec.n_drops = drops;
    if (*seed_opt) spec.seed = seed;
    if (!out_path.empty()) spec.output_path = out_path;
    if (!format.empty()) spec.format = format == "csv" ? dynsub::OutputFormat::csv : dynsub::OutputFormat::json;
    if (!mode.empty()) spec.options.mode = dynsub::parse_digital_mode(mode);
    if (!archs.empty()) spec.architectures = parse_arch_list(archs);
    if (!per_drop.empty()) spec.per_drop_path = per_drop;
    if (*workers_opt) spec.workers = workers;

    const dynsub::ExperimentReport report = dynsub::run_experiment(spec);
    dynsub::write_report(report);
    if (spec.output_path.empty()) {
      if (spec.format == dynsub::OutputFormat::csv) {
        dynsub::write_csv(std::cout, report.rows);
      } else {
        dynsub::write_json(std::cout, report);
      }
    }
    std::cout.flush();
    if (!std::cout) throw dynsub::IoError("write to stdout failed");
  } catch (const dynsub::EnumerationCapError& e) {
    std::cerr << "simulate: " << e.what() << '\n';
    return kExitCap;
  } catch (const dynsub::SpecError& e) {
    std::cerr << "simulate: invalid spec: " << e.what() << '\n';
    return kExitSpec;
  } catch (const dynsub::IoError& e) {
    std::cerr << "simulate: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "simulate: invalid spec: " << e.what() << '\n';
    return kExitSpec;
  }
  return EXIT_SUCCESS;
}
