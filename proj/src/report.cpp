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

// Presets, spec (de)serialization and result writers.

#include <cerrno>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include "dynsub/harness.hpp"

namespace dynsub {

using nlohmann::json;

namespace {

const std::vector<Architecture> kAllFour{Architecture::dynamic, Architecture::fixed_adjacent,
                                         Architecture::fixed_interlaced, Architecture::fully_connected};
const std::vector<Architecture> kThree{Architecture::dynamic, Architecture::fixed_interlaced,
                                       Architecture::fully_connected};

ExperimentSpec base_spec(std::string name, std::size_t n_drops) {
  ExperimentSpec s;
  s.name = std::move(name);
  s.n_drops = n_drops;
  s.base.n_tx = 64;
  s.base.n_rx = 2;
  s.base.n_rf = 2;
  s.base.n_users = 2;
  s.base.n_candidates = 4;
  s.base.n_streams = 1;
  s.base.n_paths = 4;
  s.base.codebook_size = 32;
  s.base.antenna_spacing_wavelengths = 0.5;
  s.base.snr_db = 0.0;
  return s;
}

}  // namespace

std::vector<std::string> preset_names() { return {"fig4", "fig5", "fig6", "fig7", "fig8"}; }

ExperimentSpec preset(std::string_view name, std::size_t n_drops) {
  ExperimentSpec s = base_spec(std::string(name), n_drops);
  if (name == "fig4") {
    s.axis = SweepAxis::snr_db;
    s.values = {-20, -15, -10, -5, 0, 5, 10};
    s.architectures = kAllFour;
  } else if (name == "fig5") {
    s.axis = SweepAxis::snr_db;
    s.values = {-20, -15, -10, -5, 0, 5, 10};
    for (std::size_t nt : {64, 128}) {
      for (std::size_t nrf : {2, 4, 8}) s.panels.push_back(Panel{nt, nrf, std::nullopt});
    }
    s.architectures = kThree;
  } else if (name == "fig6") {
    s.axis = SweepAxis::n_tx;
    s.values = {16, 32, 64, 128, 256};
    for (std::size_t nrf : {2, 4, 6, 8}) {
      for (double snr : {-10.0, 0.0}) s.panels.push_back(Panel{std::nullopt, nrf, snr});
    }
    s.architectures = {Architecture::dynamic, Architecture::fully_connected};
  } else if (name == "fig7") {
    s.axis = SweepAxis::n_rf;
    s.values = {2, 4, 8};
    s.base.snr_db = -10.0;
    s.architectures = kThree;
  } else if (name == "fig8") {
    s.axis = SweepAxis::n_tx;
    s.values = {16, 32, 64, 128, 256};
    s.base.n_rf = 4;
    s.base.n_users = 4;
    s.base.n_candidates = 8;
    s.base.snr_db = -10.0;
    s.architectures = kThree;
  } else {
    throw SpecError("unknown preset '" + std::string(name) + "'");
  }
  return s;
}

// ---------------------------------------------------------------------------
// JSON spec

namespace {

std::string_view to_string(BeamScaling s) {
  return s == BeamScaling::unit_modulus ? "unit_modulus" : "power_normalized";
}

BeamScaling parse_beam_scaling(std::string_view s) {
  if (s == "unit_modulus") return BeamScaling::unit_modulus;
  if (s == "power_normalized") return BeamScaling::power_normalized;
  throw SpecError("unknown partition_beam_scaling '" + std::string(s) + "'");
}

std::string_view to_string(ExhaustiveMode m) { return m == ExhaustiveMode::joint ? "joint" : "beams_fixed"; }

ExhaustiveMode parse_exhaustive_mode(std::string_view s) {
  if (s == "joint") return ExhaustiveMode::joint;
  if (s == "beams_fixed") return ExhaustiveMode::beams_fixed;
  throw SpecError("unknown exhaustive_mode '" + std::string(s) + "'");
}

std::string_view to_string(ExhaustiveObjective o) {
  return o == ExhaustiveObjective::sum_rate ? "sum_rate" : "sum_gain";
}

ExhaustiveObjective parse_exhaustive_objective(std::string_view s) {
  if (s == "sum_rate") return ExhaustiveObjective::sum_rate;
  if (s == "sum_gain") return ExhaustiveObjective::sum_gain;
  throw SpecError("unknown exhaustive_objective '" + std::string(s) + "'");
}

std::string_view to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

OutputFormat parse_format(std::string_view s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  throw SpecError("unknown output format '" + std::string(s) + "'");
}

void reject_unknown(const json& obj, std::string_view where, std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw SpecError(std::string(where) + " must be an object");
  const std::set<std::string_view> keys(allowed);
  for (const auto& [k, v] : obj.items()) {
    if (!keys.contains(k)) throw SpecError("unknown key '" + k + "' in " + std::string(where));
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw SpecError(std::string("field '") + key + "' has the wrong type");
  }
}

std::size_t read_count(const json& obj, const char* key, std::size_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw SpecError(std::string("field '") + key + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

json config_to_json(const SystemConfig& c) {
  return json{{"n_tx", c.n_tx},
              {"n_rx", c.n_rx},
              {"n_rf", c.n_rf},
              {"n_candidates", c.n_candidates},
              {"n_users", c.n_users},
              {"n_streams", c.n_streams},
              {"n_paths", c.n_paths},
              {"codebook_size", c.codebook_size},
              {"antenna_spacing_wavelengths", c.antenna_spacing_wavelengths},
              {"snr_db", c.snr_db}};
}

SystemConfig config_from_json(const json& j, SystemConfig c) {
  reject_unknown(j, "base", {"n_tx", "n_rx", "n_rf", "n_candidates", "n_users", "n_streams", "n_paths",
                             "codebook_size", "antenna_spacing_wavelengths", "snr_db"});
  c.n_tx = read_count(j, "n_tx", c.n_tx);
  c.n_rx = read_count(j, "n_rx", c.n_rx);
  c.n_rf = read_count(j, "n_rf", c.n_rf);
  c.n_candidates = read_count(j, "n_candidates", c.n_candidates);
  c.n_users = read_count(j, "n_users", c.n_rf);
  c.n_streams = read_count(j, "n_streams", c.n_streams);
  c.n_paths = read_count(j, "n_paths", c.n_paths);
  c.codebook_size = read_count(j, "codebook_size", c.codebook_size);
  read(j, "antenna_spacing_wavelengths", c.antenna_spacing_wavelengths);
  read(j, "snr_db", c.snr_db);
  return c;
}

json panel_to_json(const Panel& p) {
  json j = json::object();
  if (p.n_tx) j["n_tx"] = *p.n_tx;
  if (p.n_rf) j["n_rf"] = *p.n_rf;
  if (p.snr_db) j["snr_db"] = *p.snr_db;
  return j;
}

Panel panel_from_json(const json& j) {
  reject_unknown(j, "panel", {"n_tx", "n_rf", "snr_db"});
  Panel p;
  if (j.contains("n_tx")) p.n_tx = read_count(j, "n_tx", 0);
  if (j.contains("n_rf")) p.n_rf = read_count(j, "n_rf", 0);
  if (j.contains("snr_db")) {
    double v = 0.0;
    read(j, "snr_db", v);
    p.snr_db = v;
  }
  return p;
}

}  // namespace

json spec_to_json(const ExperimentSpec& spec) {
  json archs = json::array();
  for (Architecture a : spec.architectures) archs.push_back(std::string(to_string(a)));
  json panels = json::array();
  for (const Panel& p : spec.panels) panels.push_back(panel_to_json(p));
  const DropOptions& o = spec.options;
  return json{
      {"name", spec.name},
      {"base", config_to_json(spec.base)},
      {"sweep", {{"axis", std::string(to_string(spec.axis))}, {"values", spec.values}}},
      {"panels", panels},
      {"architectures", archs},
      {"mode", std::string(to_string(o.mode))},
      {"n_drops", spec.n_drops},
      {"seed", spec.seed},
      {"exhaustive_cap", o.exhaustive_cap},
      {"candidates_per_user", spec.candidates_per_user},
      {"partition_beam_scaling", std::string(to_string(o.partition_scaling))},
      {"exhaustive_mode", std::string(to_string(o.exhaustive_mode))},
      {"exhaustive_objective", std::string(to_string(o.exhaustive_objective))},
      {"power_model",
       {{"p_rf", o.power.p_rf},
        {"p_ps", o.power.p_ps},
        {"eta", o.power.eta},
        {"p_t", o.power.p_t},
        {"scale_with_users", o.scale_tx_power_with_users}}},
      {"workers", spec.workers},
      {"output",
       {{"path", spec.output_path}, {"format", std::string(to_string(spec.format))}, {"per_drop_path", spec.per_drop_path}}},
  };
}

ExperimentSpec spec_from_json(const json& j) {
  reject_unknown(j, "spec",
                 {"name", "base", "sweep", "panels", "architectures", "mode", "n_drops", "seed", "exhaustive_cap",
                  "candidates_per_user", "partition_beam_scaling", "exhaustive_mode", "exhaustive_objective", "power_model", "workers",
                  "output"});
  ExperimentSpec s;
  read(j, "name", s.name);
  if (j.contains("base")) s.base = config_from_json(j.at("base"), s.base);

  if (!j.contains("sweep")) throw SpecError("spec has no sweep");
  const json& sweep = j.at("sweep");
  reject_unknown(sweep, "sweep", {"axis", "values"});
  std::string axis = "snr_db";
  read(sweep, "axis", axis);
  s.axis = parse_sweep_axis(axis);
  read(sweep, "values", s.values);

  if (j.contains("panels")) {
    if (!j.at("panels").is_array()) throw SpecError("panels must be an array");
    for (const json& p : j.at("panels")) s.panels.push_back(panel_from_json(p));
  }

  std::vector<std::string> archs;
  read(j, "architectures", archs);
  for (const auto& a : archs) {
    try {
      s.architectures.push_back(parse_architecture(a));
    } catch (const std::invalid_argument& e) {
      throw SpecError(e.what());
    }
  }

  std::string mode = "zf";
  read(j, "mode", mode);
  try {
    s.options.mode = parse_digital_mode(mode);
  } catch (const std::invalid_argument& e) {
    throw SpecError(e.what());
  }
  s.n_drops = read_count(j, "n_drops", s.n_drops);
  read(j, "seed", s.seed);
  read(j, "exhaustive_cap", s.options.exhaustive_cap);
  s.candidates_per_user = read_count(j, "candidates_per_user", s.candidates_per_user);
  if (j.contains("partition_beam_scaling")) {
    std::string v;
    read(j, "partition_beam_scaling", v);
    s.options.partition_scaling = parse_beam_scaling(v);
  }
  if (j.contains("exhaustive_mode")) {
    std::string v;
    read(j, "exhaustive_mode", v);
    s.options.exhaustive_mode = parse_exhaustive_mode(v);
  }
  if (j.contains("exhaustive_objective")) {
    std::string v;
    read(j, "exhaustive_objective", v);
    s.options.exhaustive_objective = parse_exhaustive_objective(v);
  }
  if (j.contains("power_model")) {
    const json& pm = j.at("power_model");
    reject_unknown(pm, "power_model", {"p_rf", "p_ps", "eta", "p_t", "scale_with_users"});
    read(pm, "p_rf", s.options.power.p_rf);
    read(pm, "p_ps", s.options.power.p_ps);
    read(pm, "eta", s.options.power.eta);
    read(pm, "p_t", s.options.power.p_t);
    read(pm, "scale_with_users", s.options.scale_tx_power_with_users);
  }
  s.workers = read_count(j, "workers", s.workers);
  if (j.contains("output")) {
    const json& out = j.at("output");
    reject_unknown(out, "output", {"path", "format", "per_drop_path"});
    read(out, "path", s.output_path);
    std::string fmt = "csv";
    read(out, "format", fmt);
    s.format = parse_format(fmt);
    read(out, "per_drop_path", s.per_drop_path);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Writers

namespace {

// Shortest text that round-trips the double.
std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing: " + std::strerror(errno));
  return f;
}

void finish(std::ofstream& f, const std::string& path) {
  f.flush();
  if (!f) throw IoError("write to '" + path + "' failed");
}

}  // namespace

void write_csv(std::ostream& os, std::span<const AggregateRow> rows) {
  os << "sweep_name,sweep_value,architecture,mode,n_drops_used,n_drops_skipped,mean_sum_rate_bpshz,"
        "stderr_sum_rate,mean_ee_bpshz_per_watt,ps_count,rf_adder_count\n";
  for (const auto& r : rows) {
    os << csv_field(r.sweep_name) << ',' << fmt_double(r.sweep_value) << ',' << to_string(r.architecture) << ','
       << to_string(r.mode) << ',' << r.n_drops_used << ',' << r.n_drops_skipped << ','
       << fmt_double(r.mean_sum_rate) << ',' << fmt_double(r.stderr_sum_rate) << ',' << fmt_double(r.mean_ee)
       << ',' << r.ps_count << ',' << r.rf_adder_count << '\n';
  }
}

void write_json(std::ostream& os, const ExperimentReport& report) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back(json{{"sweep_name", r.sweep_name},
                        {"sweep_value", r.sweep_value},
                        {"architecture", std::string(to_string(r.architecture))},
                        {"mode", std::string(to_string(r.mode))},
                        {"n_drops_used", r.n_drops_used},
                        {"n_drops_skipped", r.n_drops_skipped},
                        {"mean_sum_rate_bpshz", number_or_null(r.mean_sum_rate)},
                        {"stderr_sum_rate", number_or_null(r.stderr_sum_rate)},
                        {"mean_ee_bpshz_per_watt", number_or_null(r.mean_ee)},
                        {"ps_count", r.ps_count},
                        {"rf_adder_count", r.rf_adder_count}});
  }
  const json doc{{"header", {{"spec", spec_to_json(report.spec)}, {"seed", report.spec.seed}}}, {"rows", rows}};
  os << doc.dump(2) << '\n';
}

void write_per_drop_csv(std::ostream& os, std::span<const DropRecord> drops) {
  os << "sweep_name,sweep_value,architecture,drop_index,skipped,sum_rate_bpshz,ee_bpshz_per_watt,user_rates\n";
  for (const auto& d : drops) {
    const ExperimentResult& r = d.result;
    os << csv_field(d.sweep_name) << ',' << fmt_double(d.sweep_value) << ',' << to_string(r.architecture) << ','
       << r.drop_index << ',' << (r.skipped ? 1 : 0) << ',' << fmt_double(r.sum_rate) << ','
       << fmt_double(r.energy_efficiency) << ',';
    for (std::size_t k = 0; k < r.rates.size(); ++k) os << (k ? ";" : "") << fmt_double(r.rates[k]);
    os << '\n';
  }
}

void write_report(const ExperimentReport& report) {
  const ExperimentSpec& spec = report.spec;
  if (!spec.output_path.empty()) {
    std::ofstream f = open_output(spec.output_path);
    if (spec.format == OutputFormat::csv) {
      write_csv(f, report.rows);
    } else {
      write_json(f, report);
    }
    finish(f, spec.output_path);
  }
  if (!spec.per_drop_path.empty()) {
    std::ofstream f = open_output(spec.per_drop_path);
    write_per_drop_csv(f, report.drops);
    finish(f, spec.per_drop_path);
  }
}

}  // namespace dynsub
