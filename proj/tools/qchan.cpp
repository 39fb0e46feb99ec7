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

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qchan/qchan.hpp"

namespace {

using namespace qchan;
using namespace qchan::experiment;

struct Flags {
  std::string channel, method, choi_method, noise, coupling, config, out, choi;
  std::uint64_t shots = 0, seed = 0;
  int grid = 0, configuration = 0;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "Consolidated ExperimentConfig JSON");
  cmd->add_option("--channel", f.channel, "ls, wh or id");
  cmd->add_option("--shots", f.shots, "Shots per setting; 0 selects exact probabilities");
  cmd->add_option("--seed", f.seed, "Base RNG seed");
  cmd->add_option("--noise", f.noise, "NoiseConfig JSON file or 'zero'");
  cmd->add_option("--coupling", f.coupling, "Coupling preset name or CouplingMap JSON file");
  cmd->add_option("--configuration", f.configuration, "System/environment layout 1..4");
  cmd->add_option("--out", f.out, "Output directory");
}

ExperimentConfig resolve(const CLI::App* cmd, const Flags& f) {
  ExperimentConfig c;
  if (cmd->count("--config")) c = config_from_json(io::read_json_file(f.config));
  io::json o = io::json::object();
  auto set = [&](const char* flag, const char* key, const auto& v) {
    if (cmd->get_option_no_throw(flag) && cmd->count(flag)) o[key] = v;
  };
  set("--channel", "channel", f.channel);
  set("--method", "method", f.method);
  set("--choi-method", "choi_method", f.choi_method);
  set("--shots", "shots", f.shots);
  set("--seed", "seed", f.seed);
  set("--noise", "noise", f.noise);
  set("--coupling", "coupling", f.coupling);
  set("--configuration", "configuration", f.configuration);
  set("--out", "out", f.out);
  set("--choi", "choi", f.choi);
  set("--grid", "grid", f.grid);
  return config_from_json(o, c);
}

void print_checks(const std::vector<Check>& checks) {
  for (const auto& c : checks)
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Qutrit channel simulation and tomography driver"};
  app.require_subcommand(1);
  Flags f;

  auto* apply = app.add_subcommand("apply", "Apply a channel to the nine basis states");
  add_common(apply, f);
  apply->add_option("--method", f.method, "analytic or circuit");

  auto* choi = app.add_subcommand("choi", "Estimate a Choi matrix");
  add_common(choi, f);
  choi->add_option("--choi-method", f.choi_method, "analytic, linear or direct");

  auto* sweep = app.add_subcommand("sweep", "Pairwise fidelity sweep of a Choi matrix");
  add_common(sweep, f);
  sweep->add_option("--choi", f.choi, "Choi JSON file")->required();
  sweep->add_option("--grid", f.grid, "Points on the mixing grid");

  auto* verify = app.add_subcommand("verify", "Run the built-in invariant suite");
  std::string verify_map = "ibmqx4";
  verify->add_option("--coupling", verify_map, "Coupling map for the routing check");

  auto* circuits = app.add_subcommand("circuits", "Write every experiment circuit as JSON");
  add_common(circuits, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  try {
    if (*verify) {
      const auto checks = cmd_verify(verify_map);
      print_checks(checks);
      for (const auto& c : checks)
        if (!c.pass) return kVerifyFailed;
      return kOk;
    }
    if (*apply) {
      const auto cfg = resolve(apply, f);
      const auto j = cmd_apply(cfg);
      std::cout << "wrote " << (std::filesystem::path(cfg.out) / ("apply_" + to_string(cfg.channel) + ".json")).string()
                << '\n';
      return kOk;
    }
    if (*choi) {
      const auto cfg = resolve(choi, f);
      const auto j = cmd_choi(cfg);
      std::cout << "fidelity " << j["fidelity"].get<double>() << '\n' << "eigenvalues";
      for (double v : j["eigenvalues"]) std::cout << ' ' << v;
      std::cout << '\n';
      return kOk;
    }
    if (*sweep) {
      std::cout << cmd_sweep(resolve(sweep, f));
      return kOk;
    }
    if (*circuits) {
      const auto cfg = resolve(circuits, f);
      validate(cfg);
      const auto path = output_path(cfg, "circuits.json");
      io::write_json_file(path.string(), circuits_manifest(coupling_of(cfg)));
      std::cout << "wrote " << path.string() << '\n';
      return kOk;
    }
  } catch (const RoutingError& e) {
    std::cerr << "routing error: " << e.what() << '\n';
    return kRoutingError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return kOk;
}
