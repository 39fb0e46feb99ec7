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

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "qchan/channel.hpp"
#include "qchan/choi.hpp"
#include "qchan/circuit.hpp"
#include "qchan/decomp.hpp"
#include "qchan/errors.hpp"
#include "qchan/json_io.hpp"
#include "qchan/layout.hpp"
#include "qchan/qutrit_map.hpp"
#include "qchan/random.hpp"
#include "qchan/tomography.hpp"

namespace qchan::experiment {

enum class Method { Analytic, Circuit };
enum class ChoiMethod { Analytic, Linear, Direct };

inline std::string to_string(Method m) { return m == Method::Analytic ? "analytic" : "circuit"; }

inline Method method_from_string(const std::string& s) {
  if (s == "analytic") return Method::Analytic;
  if (s == "circuit") return Method::Circuit;
  throw FormatError("unknown method '" + s + "'");
}

inline std::string to_string(ChoiMethod m) {
  switch (m) {
    case ChoiMethod::Analytic: return "analytic";
    case ChoiMethod::Linear: return "linear";
    case ChoiMethod::Direct: return "direct";
  }
  return "";
}

inline ChoiMethod choi_method_from_string(const std::string& s) {
  if (s == "analytic") return ChoiMethod::Analytic;
  if (s == "linear") return ChoiMethod::Linear;
  if (s == "direct") return ChoiMethod::Direct;
  throw FormatError("unknown Choi method '" + s + "'");
}

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kConfigError = 2, kRoutingError = 3 };

struct ExperimentConfig {
  AnalyticChannel channel = AnalyticChannel::WH;
  Method method = Method::Analytic;
  ChoiMethod choi_method = ChoiMethod::Analytic;
  std::uint64_t shots = 8192;
  std::uint64_t seed = 0;
  NoiseConfig noise;
  std::string coupling;  ///< preset name or file; empty for all-to-all
  int configuration = 4;
  std::string out = ".";
  std::string choi;  ///< input Choi file for sweep
  int grid = 101;
};

/** A preset name or a CouplingMap JSON file. */
inline CouplingMap load_coupling(const std::string& name) {
  if (auto m = coupling::preset(name)) return *m;
  if (!std::filesystem::exists(name))
    throw FormatError("'" + name + "' is neither a coupling preset nor a file");
  return io::coupling_from_json(io::read_json_file(name));
}

/** "zero", a NoiseConfig JSON file, or an inline object. */
inline NoiseConfig load_noise(const io::json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "zero") return {};
    return io::noise_from_json(io::read_json_file(s));
  }
  return io::noise_from_json(j);
}

inline io::json to_json(const ExperimentConfig& c) {
  return {{"channel", to_string(c.channel)},
          {"method", to_string(c.method)},
          {"choi_method", to_string(c.choi_method)},
          {"shots", c.shots},
          {"seed", c.seed},
          {"noise", io::to_json(c.noise)},
          {"coupling", c.coupling},
          {"configuration", c.configuration},
          {"out", c.out},
          {"choi", c.choi},
          {"grid", c.grid}};
}

/** Overlays the fields present in `j` onto `base`. */
inline ExperimentConfig config_from_json(const io::json& j, ExperimentConfig base = {}) {
  if (!j.is_object()) throw FormatError("config must be a JSON object");
  try {
    for (const auto& [k, v] : j.items()) {
      if (k == "channel") base.channel = analytic_channel_from_string(v.get<std::string>());
      else if (k == "method") base.method = method_from_string(v.get<std::string>());
      else if (k == "choi_method") base.choi_method = choi_method_from_string(v.get<std::string>());
      else if (k == "shots") base.shots = v.get<std::uint64_t>();
      else if (k == "seed") base.seed = v.get<std::uint64_t>();
      else if (k == "noise") base.noise = load_noise(v);
      else if (k == "coupling") base.coupling = v.is_null() ? "" : v.get<std::string>();
      else if (k == "configuration") base.configuration = v.get<int>();
      else if (k == "out") base.out = v.get<std::string>();
      else if (k == "choi") base.choi = v.get<std::string>();
      else if (k == "grid") base.grid = v.get<int>();
      else throw FormatError("unknown config field '" + k + "'");
    }
  } catch (const io::json::exception& e) {
    throw FormatError(std::string("bad config value: ") + e.what());
  } catch (const DomainError& e) {
    throw FormatError(e.what());
  }
  return base;
}

inline void validate(const ExperimentConfig& c) {
  if (c.configuration < 1 || c.configuration > 4)
    throw FormatError("configuration must be 1..4");
  if (c.grid < 2) throw FormatError("grid must be at least 2");
  try {
    c.noise.validate();
  } catch (const DomainError& e) {
    throw FormatError(e.what());
  }
  if (!c.coupling.empty()) load_coupling(c.coupling);
}

inline std::optional<CouplingMap> coupling_of(const ExperimentConfig& c) {
  if (c.coupling.empty()) return std::nullopt;
  return load_coupling(c.coupling);
}

inline std::optional<NoiseConfig> noise_of(const ExperimentConfig& c) {
  if (c.noise.is_zero()) return std::nullopt;
  return c.noise;
}

/** The circuit realising the configured channel, placed when a map is set. */
inline ChannelCircuit channel_circuit(const ExperimentConfig& c) {
  const auto map = coupling_of(c);
  switch (c.channel) {
    case AnalyticChannel::LS: return ls_channel_circuit(c.configuration, map);
    case AnalyticChannel::WH: return wh_channel_circuit(c.configuration, map);
    case AnalyticChannel::Identity: break;
  }
  ChannelCircuit id = identity_channel_circuit();
  if (map) {
    if (map->n_qubits() < 4) throw RoutingError("coupling map has fewer than 4 qubits");
    id.circuit = id.circuit.widened(map->n_qubits());
  }
  return id;
}

inline std::filesystem::path output_path(const ExperimentConfig& c, const std::string& name) {
  std::filesystem::create_directories(c.out);
  return std::filesystem::path(c.out) / name;
}

struct ApplyResult {
  std::vector<ComplexMatrix> outputs;
  std::vector<double> leakage;
};

/** The configured channel on the nine basis states. */
inline ApplyResult run_apply(const ExperimentConfig& c) {
  validate(c);
  ApplyResult r;
  if (c.method == Method::Analytic) {
    const ChannelRep rep = ChannelRep::analytic(c.channel);
    for (int k = 1; k <= 9; ++k) {
      r.outputs.push_back(apply_channel(rep, basis_density(k)));
      r.leakage.push_back(0.0);
    }
    return r;
  }
  const InducedChannel ch(channel_circuit(c), noise_of(c));
  for (int k = 1; k <= 9; ++k) {
    auto p = ch(basis_density(k));
    r.outputs.push_back(std::move(p.rho));
    r.leakage.push_back(p.leakage);
  }
  return r;
}

inline io::json cmd_apply(const ExperimentConfig& c) {
  const auto r = run_apply(c);
  io::json outs = io::json::array();
  for (const auto& m : r.outputs) outs.push_back(io::to_json(m));
  io::json j = {{"config", to_json(c)}, {"outputs", outs}, {"leakage", r.leakage}};
  io::write_json_file(output_path(c, "apply_" + to_string(c.channel) + ".json").string(), j);
  return j;
}

inline ChoiEstimate run_choi(const ExperimentConfig& c) {
  validate(c);
  switch (c.choi_method) {
    case ChoiMethod::Analytic: return {analytic_choi(ChannelRep::analytic(c.channel)), 0.0};
    case ChoiMethod::Linear: return choi_linear_from_circuit(channel_circuit(c), c.shots, c.seed, noise_of(c));
    case ChoiMethod::Direct: break;
  }
  ExperimentConfig logical = c;
  logical.coupling.clear();
  return choi_direct(channel_circuit(logical), c.shots, c.seed, noise_of(c), coupling_of(c));
}

inline io::json cmd_choi(const ExperimentConfig& c) {
  const auto est = run_choi(c);
  const ComplexMatrix theory = analytic_choi(ChannelRep::analytic(c.channel));
  io::json j = {{"config", to_json(c)},
                {"choi", io::choi_to_json(est.omega)},
                {"fidelity", choi_fidelity(theory, est.omega)},
                {"eigenvalues", hermitian_eig(est.omega.hermitian_part()).values},
                {"leakage", est.leakage}};
  io::write_json_file(output_path(c, "choi_" + to_string(c.channel) + ".json").string(), j);
  return j;
}

/** A Choi file as written by cmd_choi, or a bare Choi JSON. */
inline ComplexMatrix load_choi(const std::string& path) {
  const io::json j = io::read_json_file(path);
  return io::choi_from_json(j.contains("choi") ? j["choi"] : j);
}

struct SweepRow {
  int a = 0;
  int b = 0;
  SweepStats stats;
};

inline std::vector<SweepRow> run_sweep(const ComplexMatrix& omega, AnalyticChannel channel,
                                       int grid) {
  const ChannelRep target = ChannelRep::analytic(channel);
  std::vector<SweepRow> rows;
  for (int a = 1; a <= 9; ++a)
    for (int b = a + 1; b <= 9; ++b)
      rows.push_back({a, b, channel_fidelity_sweep(omega, a, b, grid, target)});
  return rows;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows, double overall) {
  std::ostringstream os;
  os << std::setprecision(12);
  os << "pair_a,pair_b,min,max,mean\n";
  for (const auto& r : rows)
    os << r.a << ',' << r.b << ',' << r.stats.min << ',' << r.stats.max << ',' << r.stats.mean
       << '\n';
  os << "all,all," << overall << ',' << overall << ',' << overall << '\n';
  return os.str();
}

inline std::string cmd_sweep(const ExperimentConfig& c) {
  validate(c);
  if (c.choi.empty()) throw FormatError("sweep needs a Choi file");
  const ComplexMatrix omega = load_choi(c.choi);
  const double overall = choi_fidelity(analytic_choi(ChannelRep::analytic(c.channel)),
                                       project_to_density(omega));
  const std::string csv = sweep_csv(run_sweep(omega, c.channel, c.grid), overall);
  std::ofstream out(output_path(c, "sweep_" + to_string(c.channel) + ".csv"));
  if (!out) throw FormatError("cannot write sweep output");
  out << csv;
  return csv;
}

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

namespace detail {

inline std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << v;
  return os.str();
}

inline Check run_check(const std::string& name, const std::function<Check()>& f) {
  try {
    Check c = f();
    c.name = name;
    return c;
  } catch (const std::exception& e) {
    return {name, false, e.what()};
  }
}

inline Check below(double v, double tol) { return {"", v < tol, "max deviation " + fmt(v)}; }

inline double basis_deviation(const std::function<ComplexMatrix(const ComplexMatrix&)>& f,
                              const std::function<ComplexMatrix(const ComplexMatrix&)>& g) {
  double m = 0.0;
  for (int k = 1; k <= 9; ++k)
    m = std::max(m, max_abs_diff(f(basis_density(k)), g(basis_density(k))));
  return m;
}

}  // namespace detail

/**
 * The built-in invariant suite. The routing check uses `coupling` (a preset
 * name or file).
 */
inline std::vector<Check> cmd_verify(const std::string& coupling = "ibmqx4") {
  using detail::below;
  using detail::run_check;
  std::vector<Check> out;
  out.push_back(run_check("ls_dilation_unitary", [] {
    return below(max_abs_diff(ls_stinespring().u.adjoint() * ls_stinespring().u,
                              ComplexMatrix::identity(9)),
                 1e-10);
  }));
  out.push_back(run_check("ls_dilation", [] {
    const auto d = ls_stinespring();
    return below(detail::basis_deviation([&](const auto& r) { return stinespring_apply(d, r); },
                                         [](const auto& r) { return ls_apply(r); }),
                 1e-10);
  }));
  out.push_back(run_check("wh_dilation", [] {
    const auto d = wh_stinespring();
    return below(detail::basis_deviation([&](const auto& r) { return stinespring_apply(d, r); },
                                         [](const auto& r) { return wh_apply(r); }),
                 1e-10);
  }));
  out.push_back(run_check("covariance", [] {
    Rng rng(2026);
    const ComplexMatrix w = covariance_unitary();
    double m = 0.0;
    for (int i = 0; i < 200; ++i) {
      const ComplexMatrix rho = random_density(3, rng);
      m = std::max(m, max_abs_diff(ls_apply(rho), wh_apply(w * rho * w.adjoint())));
    }
    return below(m, 1e-12);
  }));
  out.push_back(run_check("basis_coefficients", [] {
    return below(max_abs_diff(rederive_basis_coefficients(), basis_decomposition().coeffs),
                 1e-12);
  }));
  out.push_back(run_check("wh_choi_swap", [] {
    const ComplexMatrix ref = (ComplexMatrix::identity(9) - mats::swap(3)) / 6.0;
    return below(max_abs_diff(analytic_choi(ChannelRep::wh()), ref), 1e-12);
  }));
  out.push_back(run_check("ls_kraus_rank", [] {
    const auto e = hermitian_eig(analytic_choi(ChannelRep::ls()));
    int rank = 0;
    for (double v : e.values) rank += v > 1e-9 ? 1 : 0;
    return Check{"", rank == 3, std::to_string(rank)};
  }));
  out.push_back(run_check("choi_roundtrip", [] {
    double m = 0.0;
    for (auto ch : {AnalyticChannel::LS, AnalyticChannel::WH, AnalyticChannel::Identity}) {
      const auto rep = ChannelRep::analytic(ch);
      const ComplexMatrix omega = analytic_choi(rep);
      m = std::max(m, detail::basis_deviation(
                          [&](const auto& r) { return channel_from_choi(omega, r); },
                          [&](const auto& r) { return apply_channel(rep, r); }));
    }
    return below(m, 1e-10);
  }));
  out.push_back(run_check("quasi_toffoli", [] {
    const bool a = equal_up_to_global_phase(unitary_of(quasi_toffoli_circuit()),
                                            quasi_toffoli_matrix(), Tolerance{1e-12});
    const bool b = equal_up_to_global_phase(
        unitary_of(quasi_toffoli_circuit(QuasiToffoliVariant::B)), quasi_toffoli_matrix(),
        Tolerance{1e-12});
    return Check{"", a && b, a && b ? "ok" : "mismatch"};
  }));
  out.push_back(run_check("w_tilde", [] {
    return below(max_abs_diff(unitary_of(w_tilde_circuit()), w_tilde_matrix(std::numbers::pi)),
                 1e-12);
  }));
  out.push_back(run_check("reverse_cnot", [] {
    Circuit cx(2);
    cx.cx(1, 0);
    return below(max_abs_diff(unitary_of(reverse_cnot(1, 0)), unitary_of(cx)), 1e-12);
  }));
  out.push_back(run_check("induced_channels", [] {
    double m = 0.0, leak = 0.0;
    for (int k = 1; k <= 4; ++k) {
      const InducedChannel wh(wh_channel_circuit(k)), ls(ls_channel_circuit(k));
      for (int i = 1; i <= 9; ++i) {
        const auto a = wh(basis_density(i)), b = ls(basis_density(i));
        m = std::max({m, max_abs_diff(a.rho, wh_apply(basis_density(i))),
                      max_abs_diff(b.rho, ls_apply(basis_density(i)))});
        leak = std::max({leak, a.leakage, b.leakage});
      }
    }
    return Check{"", m < 1e-9 && leak < 1e-10,
                 "max deviation " + detail::fmt(m) + ", leakage " + detail::fmt(leak)};
  }));
  out.push_back(run_check("routing", [&] {
    const CouplingMap map = load_coupling(coupling);
    Rng rng(4);
    const std::size_t n = std::min<std::size_t>(4, map.n_qubits());
    std::size_t bad = 0;
    for (int t = 0; t < 50; ++t) {
      Circuit c(n);
      for (int g = 0; g < 20; ++g) {
        const std::size_t a = static_cast<std::size_t>(rng.uniform() * n);
        const std::size_t b = (a + 1 + static_cast<std::size_t>(rng.uniform() * (n - 1))) % n;
        if (rng.uniform() < 0.4 && n > 1) c.cx(a, b);
        else c.u3(a, rng.uniform() * 6.0, rng.uniform() * 6.0, rng.uniform() * 6.0);
      }
      const Circuit r = route_circuit(c, map);
      std::vector<std::size_t> keep(n);
      std::iota(keep.begin(), keep.end(), std::size_t{0});
      const Circuit rc = compact_register(r, keep).circuit;
      const bool ok = validate(r, map).empty() &&
                      equal_up_to_global_phase(unitary_of(rc),
                                               unitary_of(c.widened(rc.n_qubits())),
                                               Tolerance{1e-9});
      bad += ok ? 0 : 1;
    }
    return Check{"", bad == 0, std::to_string(bad) + " of 50 circuits failed"};
  }));
  return out;
}

/** Every circuit the experiments use, keyed by name. */
inline io::json circuits_manifest(const std::optional<CouplingMap>& map = {}) {
  io::json j = io::json::object();
  for (int k = 1; k <= 4; ++k) {
    for (auto [name, cc] : {std::pair{"wh", wh_channel_circuit(k, map)},
                            std::pair{"ls", ls_channel_circuit(k, map)}}) {
      io::json e = io::to_json(cc.circuit);
      e["system"] = cc.system;
      e["env"] = cc.env;
      j[std::string(name) + "_" + std::to_string(k)] = e;
    }
  }
  for (int k = 1; k <= 9; ++k) j["prep_" + std::to_string(k)] = io::to_json(prep_basis_circuit(k));
  j["prep_superposition"] = io::to_json(prep_superposition_circuit());
  j["w_tilde"] = io::to_json(w_tilde_circuit());
  j["quasi_toffoli"] = io::to_json(quasi_toffoli_circuit());
  return j;
}

}  // namespace qchan::experiment
