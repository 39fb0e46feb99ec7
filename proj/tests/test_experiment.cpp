// Copyright 2026 The qchan Authors
//
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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <catch_amalgamated.hpp>

#include "qchan/experiment.hpp"

namespace qchan::experiment {
namespace {

namespace fs = std::filesystem;
using Catch::Matchers::WithinAbs;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qchan_test_" + name);
  fs::remove_all(p);
  return p;
}

io::json without_out(const fs::path& p) {
  io::json j = io::read_json_file(p.string());
  j["config"].erase("out");
  return j;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST_CASE("Config overlay") {
  const ExperimentConfig d;
  REQUIRE(d.channel == AnalyticChannel::WH);
  REQUIRE(d.shots == 8192);
  REQUIRE(d.configuration == 4);
  const auto c = config_from_json(io::json::parse(R"({"channel":"ls","shots":100,
      "noise":{"p1":0,"p2":0.02,"gamma":0,"readout_flip":0},"coupling":"tokyo"})"));
  REQUIRE(c.channel == AnalyticChannel::LS);
  REQUIRE(c.shots == 100);
  REQUIRE(c.noise.p2 == 0.02);
  REQUIRE(c.coupling == "tokyo");
  REQUIRE(c.seed == 0);
  const auto over = config_from_json(io::json::parse(R"({"seed":4})"), c);
  REQUIRE(over.seed == 4);
  REQUIRE(over.shots == 100);
  const auto back = config_from_json(to_json(c));
  REQUIRE(to_json(back) == to_json(c));
}

TEST_CASE("Config errors") {
  REQUIRE_THROWS_AS(config_from_json(io::json::parse(R"({"shot":1})")), FormatError);
  REQUIRE_THROWS_AS(config_from_json(io::json::parse(R"({"channel":"XX"})")), FormatError);
  REQUIRE_THROWS_AS(config_from_json(io::json::parse(R"({"shots":"many"})")), FormatError);
  REQUIRE_THROWS_AS(config_from_json(io::json::parse("[]")), FormatError);
  ExperimentConfig c;
  c.configuration = 7;
  REQUIRE_THROWS_AS(validate(c), FormatError);
  c = {};
  c.coupling = "no_such_map";
  REQUIRE_THROWS_AS(validate(c), FormatError);
}

TEST_CASE("apply") {
  ExperimentConfig c;
  c.out = scratch("apply").string();
  const auto j = cmd_apply(c);
  REQUIRE(fs::exists(fs::path(c.out) / "apply_wh.json"));
  REQUIRE(j["outputs"].size() == 9);
  const ComplexMatrix first = io::matrix_from_json(j["outputs"][0]);
  REQUIRE(max_abs_diff(first, ComplexMatrix::diagonal({0.0, 0.5, 0.5})) < 1e-15);

  c.method = Method::Circuit;
  c.channel = AnalyticChannel::LS;
  const auto analytic = run_apply([&] {
    auto a = c;
    a.method = Method::Analytic;
    return a;
  }());
  const auto circuit = run_apply(c);
  for (std::size_t k = 0; k < 9; ++k) {
    REQUIRE(max_abs_diff(circuit.outputs[k], analytic.outputs[k]) < 1e-9);
    REQUIRE(circuit.leakage[k] < 1e-10);
  }
  c.coupling = "ibmqx4";
  const auto routed = run_apply(c);
  for (std::size_t k = 0; k < 9; ++k)
    REQUIRE(max_abs_diff(routed.outputs[k], analytic.outputs[k]) < 1e-9);
}

TEST_CASE("choi and sweep") {
  ExperimentConfig c;
  c.out = scratch("choi").string();
  c.choi_method = ChoiMethod::Linear;
  c.shots = 0;
  const auto j = cmd_choi(c);
  REQUIRE_THAT(j["fidelity"].get<double>(), WithinAbs(1.0, 1e-9));
  REQUIRE(j["eigenvalues"].size() == 9);
  const fs::path choi_file = fs::path(c.out) / "choi_wh.json";
  REQUIRE(fs::exists(choi_file));
  REQUIRE(max_abs_diff(load_choi(choi_file.string()), analytic_choi(ChannelRep::wh())) < 1e-9);

  c.choi = choi_file.string();
  c.grid = 5;
  const std::string csv = cmd_sweep(c);
  std::istringstream lines(csv);
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(lines, line)) rows.push_back(line);
  REQUIRE(rows.size() == 38);
  REQUIRE(rows.front() == "pair_a,pair_b,min,max,mean");
  REQUIRE(rows[1] == "1,2,1,1,1");
  REQUIRE(rows.back() == "all,all,1,1,1");
  REQUIRE(slurp(fs::path(c.out) / "sweep_wh.csv") == csv);

  ExperimentConfig missing;
  missing.out = c.out;
  REQUIRE_THROWS_AS(cmd_sweep(missing), FormatError);
}

TEST_CASE("Outputs are deterministic") {
  ExperimentConfig c;
  c.choi_method = ChoiMethod::Linear;
  c.shots = 2048;
  c.seed = 11;
  c.out = scratch("det_a").string();
  cmd_choi(c);
  const std::string a = slurp(fs::path(c.out) / "choi_wh.json");
  cmd_choi(c);
  REQUIRE(slurp(fs::path(c.out) / "choi_wh.json") == a);
  const io::json ja = without_out(fs::path(c.out) / "choi_wh.json");
  c.out = scratch("det_b").string();
  cmd_choi(c);
  REQUIRE(without_out(fs::path(c.out) / "choi_wh.json").dump() == ja.dump());
  c.seed = 12;
  cmd_choi(c);
  REQUIRE(without_out(fs::path(c.out) / "choi_wh.json")["choi"] != ja["choi"]);
}

TEST_CASE("Direct Choi needs room on the map") {
  ExperimentConfig c;
  c.choi_method = ChoiMethod::Direct;
  c.shots = 0;
  c.coupling = "ibmqx4";
  REQUIRE_THROWS_AS(run_choi(c), RoutingError);
  c.coupling = "tokyo-6";
  REQUIRE_THAT(choi_fidelity(analytic_choi(ChannelRep::wh()), run_choi(c).omega),
               WithinAbs(1.0, 1e-9));
}

TEST_CASE("verify") {
  const auto checks = cmd_verify();
  REQUIRE(checks.size() >= 13);
  for (const auto& ch : checks) {
    INFO(ch.name << ": " << ch.detail);
    REQUIRE(ch.pass);
  }
  const auto bad = cmd_verify(std::string(QCHAN_DATA_DIR) + "/../tests/data/corrupt_coupling.json");
  bool routing_failed = false;
  for (const auto& ch : bad)
    if (ch.name == "routing" && !ch.pass) routing_failed = true;
  REQUIRE(routing_failed);
}

TEST_CASE("circuits manifest") {
  const auto j = circuits_manifest();
  REQUIRE(j.contains("wh_4"));
  REQUIRE(j.contains("prep_9"));
  REQUIRE(j.contains("quasi_toffoli"));
  const auto routed = circuits_manifest(coupling::ibmqx4());
  const Circuit c = io::circuit_from_json(routed["wh_4"]);
  REQUIRE(validate(c, coupling::ibmqx4()).empty());
}

}  // namespace
}  // namespace qchan::experiment
