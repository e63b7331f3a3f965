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

#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "dynsub/harness.hpp"

namespace dynsub {
namespace {

const std::vector<Architecture> kAll{Architecture::dynamic, Architecture::fixed_adjacent,
                                     Architecture::fixed_interlaced, Architecture::fully_connected};

SystemConfig tiny_config() {
  SystemConfig cfg;
  cfg.n_tx = 6;
  cfg.n_rf = cfg.n_users = 2;
  cfg.n_candidates = 4;
  cfg.codebook_size = 8;
  cfg.seed = 9;
  return cfg;
}

ExperimentSpec small_spec() {
  ExperimentSpec s;
  s.name = "small";
  s.base.n_tx = 16;
  s.axis = SweepAxis::snr_db;
  s.values = {-10.0, 0.0};
  s.architectures = kAll;
  s.n_drops = 12;
  s.seed = 5;
  s.workers = 1;
  return s;
}

std::string csv_of(const ExperimentReport& r) {
  std::ostringstream os;
  write_csv(os, r.rows);
  return os.str();
}

std::string json_of(const ExperimentReport& r) {
  std::ostringstream os;
  write_json(os, r);
  return os.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("a drop is reproducible bit for bit") {
    SystemConfig cfg;
    const DropOutcome a = run_drop(cfg, 3, kAll, DropOptions{});
    const DropOutcome b = run_drop(cfg, 3, kAll, DropOptions{});
    REQUIRE(a.results.size() == kAll.size());
    for (std::size_t i = 0; i < kAll.size(); ++i) {
      CHECK(a.results[i].rates == b.results[i].rates);
      CHECK(a.results[i].sum_rate == b.results[i].sum_rate);
      CHECK(a.results[i].energy_efficiency == b.results[i].energy_efficiency);
    }
    CHECK(a.selected == b.selected);
    CHECK(a.greedy == b.greedy);
  }

  TEST_CASE("different drops see different channels") {
    SystemConfig cfg;
    const DropOutcome a = run_drop(cfg, 0, kAll, DropOptions{});
    const DropOutcome b = run_drop(cfg, 1, kAll, DropOptions{});
    CHECK_FALSE(a.realization.users[0].h_full == b.realization.users[0].h_full);
  }

  TEST_CASE("single user makes every architecture coincide") {
    SystemConfig cfg;
    cfg.n_tx = 32;
    cfg.n_rf = cfg.n_users = 1;
    cfg.n_candidates = 3;
    for (std::size_t d = 0; d < 5; ++d) {
      const DropOutcome out = run_drop(cfg, d, kAll, DropOptions{});
      CHECK(out.greedy.subsets.front() == full_array(32));
      for (const auto& r : out.results) {
        CHECK_FALSE(r.skipped);
        CHECK(r.sum_rate == doctest::Approx(out.results.front().sum_rate).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("all architectures share channels, beams and users") {
    SystemConfig cfg;
    const DropOutcome all = run_drop(cfg, 4, kAll, DropOptions{});
    for (std::size_t i = 0; i < kAll.size(); ++i) {
      const DropOutcome one = run_drop(cfg, 4, {kAll[i]}, DropOptions{});
      CHECK(one.selected == all.selected);
      CHECK(one.realization.users[0].h_full == all.realization.users[0].h_full);
      CHECK(one.results.front().sum_rate == all.results[i].sum_rate);
    }
    CHECK(all.selected.size() == cfg.n_users);
    for (std::size_t i = 0; i < all.beams.size(); ++i) {
      CHECK(all.beams[i].q < cfg.codebook_size);
    }
  }

  TEST_CASE("sum rate is the sum of per-user rates") {
    SystemConfig cfg;
    cfg.n_rf = cfg.n_users = 4;
    cfg.n_candidates = 8;
    const DropOutcome out = run_drop(cfg, 2, kAll, DropOptions{});
    for (const auto& r : out.results) {
      if (r.skipped) continue;
      double s = 0.0;
      for (double x : r.rates) {
        CHECK(x >= 0.0);
        s += x;
      }
      CHECK(std::abs(s - r.sum_rate) <= 1e-12 * std::max(1.0, s));
    }
  }

  TEST_CASE("exhaustive objective dominates greedy on the tiny config") {
    const SystemConfig cfg = tiny_config();
    DropOptions opt;
    for (std::size_t d = 0; d < 40; ++d) {
      const DropOutcome out = run_drop(cfg, d, {Architecture::dynamic, Architecture::exhaustive}, opt);
      REQUIRE(out.audit.has_value());
      CHECK(out.audit->exhaustive_objective >= out.audit->greedy_objective - 1e-12);
    }
  }

  TEST_CASE("transmit power scales with served streams when requested") {
    SystemConfig cfg;
    cfg.n_rf = cfg.n_users = 4;
    cfg.n_candidates = 8;
    DropOptions opt;
    CHECK(transmit_power(opt, cfg) == 4.0);
    opt.scale_tx_power_with_users = false;
    CHECK(transmit_power(opt, cfg) == 1.0);
  }

  TEST_CASE("one drop aggregates to itself") {
    ExperimentSpec s = small_spec();
    s.n_drops = 1;
    s.values = {0.0};
    const ExperimentReport r = run_experiment(s);
    SystemConfig cfg = resolve_config(s, Panel{}, 0.0);
    const DropOutcome d = run_drop(cfg, 0, s.architectures, s.options);
    REQUIRE(r.rows.size() == kAll.size());
    for (std::size_t i = 0; i < kAll.size(); ++i) {
      CHECK(r.rows[i].mean_sum_rate == d.results[i].sum_rate);
      CHECK(r.rows[i].mean_ee == d.results[i].energy_efficiency);
      CHECK(r.rows[i].stderr_sum_rate == 0.0);
      CHECK(r.rows[i].n_drops_used + r.rows[i].n_drops_skipped == 1);
    }
  }

  TEST_CASE("reports are identical across reruns and worker counts") {
    ExperimentSpec s = small_spec();
    const ExperimentReport a = run_experiment(s);
    const ExperimentReport b = run_experiment(s);
    s.workers = 3;
    const ExperimentReport c = run_experiment(s);
    CHECK(csv_of(a) == csv_of(b));
    CHECK(csv_of(a) == csv_of(c));
    s.workers = 1;
    CHECK(json_of(a) == json_of(run_experiment(s)));
  }

  TEST_CASE("aggregate means agree with an independent pass over per-drop output") {
    ExperimentSpec s = small_spec();
    s.base.n_rf = 4;
    s.base.n_users = 4;
    const ExperimentReport r = run_experiment(s);
    std::ostringstream os;
    write_per_drop_csv(os, r.drops);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line.rfind("sweep_name,sweep_value,architecture,drop_index,skipped", 0) == 0);
    std::map<std::pair<std::string, std::string>, std::pair<double, int>> acc;
    std::map<std::pair<std::string, std::string>, int> skipped;
    while (std::getline(is, line)) {
      const auto f = split(line, ',');
      const auto key = std::make_pair(f[1], f[2]);
      if (f[4] == "1") {
        ++skipped[key];
        continue;
      }
      acc[key].first += std::stod(f[5]);
      acc[key].second += 1;
    }
    for (const auto& row : r.rows) {
      std::ostringstream v;
      v.precision(17);
      v << row.sweep_value;
      const auto key = std::make_pair(v.str(), std::string(to_string(row.architecture)));
      REQUIRE(acc.count(key) == 1);
      CHECK(std::abs(acc[key].first / acc[key].second - row.mean_sum_rate) <= 1e-12);
      CHECK(static_cast<std::size_t>(acc[key].second) == row.n_drops_used);
      CHECK(row.n_drops_used + row.n_drops_skipped == s.n_drops);
    }
  }

  TEST_CASE("aggregate excludes skipped drops") {
    std::vector<ExperimentResult> rs(3);
    rs[0].sum_rate = 2.0;
    rs[0].energy_efficiency = 1.0;
    rs[1].skipped = true;
    rs[1].sum_rate = 100.0;
    rs[2].sum_rate = 4.0;
    rs[2].energy_efficiency = 3.0;
    const AggregateRow row = aggregate("x", 1.0, Architecture::dynamic, DigitalMode::zf, rs, 64, 0);
    CHECK(row.n_drops_used == 2);
    CHECK(row.n_drops_skipped == 1);
    CHECK(row.mean_sum_rate == 3.0);
    CHECK(row.mean_ee == 2.0);
    CHECK(row.stderr_sum_rate == doctest::Approx(1.0));
  }

  TEST_CASE("sweep axes resolve into the config") {
    ExperimentSpec s = small_spec();
    s.axis = SweepAxis::n_rf;
    s.candidates_per_user = 3;
    const SystemConfig cfg = resolve_config(s, Panel{128, std::nullopt, -5.0}, 4.0);
    CHECK(cfg.n_tx == 128);
    CHECK(cfg.n_rf == 4);
    CHECK(cfg.n_users == 4);
    CHECK(cfg.n_candidates == 12);
    CHECK(cfg.snr_db == -5.0);
    CHECK(cfg.seed == s.seed);
    s.axis = SweepAxis::n_tx;
    CHECK_THROWS_AS(resolve_config(s, Panel{}, 2.5), SpecError);
  }

  TEST_CASE("invalid specs are rejected") {
    ExperimentSpec s = small_spec();
    s.values.clear();
    CHECK_THROWS_AS(validate_spec(s), SpecError);
    s = small_spec();
    s.n_drops = 0;
    CHECK_THROWS_AS(validate_spec(s), SpecError);
    s = small_spec();
    s.architectures.clear();
    CHECK_THROWS_AS(validate_spec(s), SpecError);
    s = small_spec();
    s.base.n_tx = 15;
    CHECK_THROWS_AS(validate_spec(s), SpecError);
    s = small_spec();
    s.architectures = {Architecture::exhaustive};
    s.base.n_tx = 32;
    CHECK_THROWS_AS(validate_spec(s), EnumerationCapError);
    s.base.n_tx = 8;
    CHECK_NOTHROW(validate_spec(s));
  }

  TEST_CASE("presets validate and encode their axes") {
    for (const std::string& name : preset_names()) {
      const ExperimentSpec s = preset(name, 3);
      CHECK(s.n_drops == 3);
      CHECK_NOTHROW(validate_spec(s));
    }
    CHECK(preset("fig4").n_drops == 500);
    CHECK(preset("fig4").values == std::vector<double>{-20, -15, -10, -5, 0, 5, 10});
    CHECK(preset("fig5").panels.size() == 6);
    CHECK(preset("fig6").axis == SweepAxis::n_tx);
    CHECK(preset("fig7").values == std::vector<double>{2, 4, 8});
    CHECK(preset("fig8").base.n_rf == 4);
    CHECK_THROWS_AS(preset("fig9"), SpecError);
  }

  TEST_CASE("spec JSON round trips") {
    ExperimentSpec s = preset("fig5", 7);
    s.options.mode = DigitalMode::mf;
    s.options.partition_scaling = BeamScaling::unit_modulus;
    s.format = OutputFormat::json;
    s.output_path = "out.json";
    const nlohmann::json j = spec_to_json(s);
    const ExperimentSpec back = spec_from_json(j);
    CHECK(spec_to_json(back) == j);
    CHECK(back.panels.size() == 6);
    CHECK(back.options.mode == DigitalMode::mf);
  }

  TEST_CASE("spec JSON rejects unknown keys and bad values") {
    nlohmann::json j = spec_to_json(small_spec());
    j["typo"] = 1;
    CHECK_THROWS_AS(spec_from_json(j), SpecError);
    j = spec_to_json(small_spec());
    j["base"]["n_antennas"] = 4;
    CHECK_THROWS_AS(spec_from_json(j), SpecError);
    j = spec_to_json(small_spec());
    j["architectures"] = {"dynamic", "hybrid"};
    CHECK_THROWS_AS(spec_from_json(j), SpecError);
    j = spec_to_json(small_spec());
    j["n_drops"] = "many";
    CHECK_THROWS_AS(spec_from_json(j), SpecError);
    j = spec_to_json(small_spec());
    j.erase("sweep");
    CHECK_THROWS_AS(spec_from_json(j), SpecError);
  }

  TEST_CASE("CSV header and JSON header") {
    ExperimentSpec s = small_spec();
    s.n_drops = 2;
    const ExperimentReport r = run_experiment(s);
    const std::string csv = csv_of(r);
    CHECK(csv.rfind("sweep_name,sweep_value,architecture,mode,n_drops_used,n_drops_skipped,mean_sum_rate_bpshz,"
                    "stderr_sum_rate,mean_ee_bpshz_per_watt,ps_count,rf_adder_count\n",
                    0) == 0);
    const nlohmann::json j = nlohmann::json::parse(json_of(r));
    CHECK(j["header"]["seed"] == 5);
    CHECK(j["header"]["spec"]["name"] == "small");
    CHECK(j["rows"].size() == r.rows.size());
    CHECK(j["rows"][0]["mean_sum_rate_bpshz"].get<double>() == r.rows[0].mean_sum_rate);
  }

  TEST_CASE("unwritable output path raises an I/O error") {
    ExperimentSpec s = small_spec();
    s.n_drops = 1;
    ExperimentReport r = run_experiment(s);
    r.spec.output_path = "/nonexistent-dir/x.csv";
    CHECK_THROWS_AS(write_report(r), IoError);
  }
}

}  // namespace dynsub
