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

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qchan/channel.hpp"
#include "qchan/circuit.hpp"
#include "qchan/errors.hpp"
#include "qchan/layout.hpp"
#include "qchan/numkit.hpp"
#include "qchan/tomography.hpp"

namespace qchan::io {

using json = nlohmann::json;

namespace detail {

inline const json& field(const json& j, const char* key) {
  if (!j.is_object()) throw FormatError(std::string("expected an object with '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) throw FormatError(std::string("missing field '") + key + "'");
  return *it;
}

inline double finite_number(const json& j, const char* what) {
  if (!j.is_number()) throw FormatError(std::string(what) + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw FormatError(std::string(what) + " must be finite");
  return v;
}

inline std::size_t index_value(const json& j, const char* what) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    throw FormatError(std::string(what) + " must be a non-negative integer");
  return j.get<std::size_t>();
}

inline double probability(const json& j, const char* key) {
  if (!j.contains(key)) return 0.0;
  const double v = finite_number(j.at(key), key);
  if (v < 0.0 || v > 1.0) throw FormatError(std::string(key) + " must lie in [0, 1]");
  return v;
}

}  // namespace detail

inline json to_json(const ComplexMatrix& m) {
  json re = json::array(), im = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json rr = json::array(), ri = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ri.push_back(m(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
}

inline ComplexMatrix matrix_from_json(const json& j) {
  const std::size_t rows = detail::index_value(detail::field(j, "rows"), "rows");
  const std::size_t cols = detail::index_value(detail::field(j, "cols"), "cols");
  const json& re = detail::field(j, "re");
  const json& im = detail::field(j, "im");
  if (rows == 0 || cols == 0) throw FormatError("matrix dimensions must be positive");
  if (!re.is_array() || !im.is_array() || re.size() != rows || im.size() != rows)
    throw FormatError("matrix 're'/'im' must have 'rows' rows");
  std::vector<cplx> data;
  data.reserve(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!re[r].is_array() || !im[r].is_array() || re[r].size() != cols ||
        im[r].size() != cols)
      throw FormatError("ragged matrix row " + std::to_string(r));
    for (std::size_t c = 0; c < cols; ++c)
      data.emplace_back(detail::finite_number(re[r][c], "matrix entry"),
                        detail::finite_number(im[r][c], "matrix entry"));
  }
  return ComplexMatrix(rows, cols, std::move(data));
}

inline json to_json(const Circuit& c) {
  json gates = json::array();
  for (const auto& g : c.gates())
    gates.push_back({{"name", std::string(to_string(g.name))},
                     {"params", g.params},
                     {"qubits", g.qubits}});
  return {{"n_qubits", c.n_qubits()}, {"gates", gates}};
}

inline Circuit circuit_from_json(const json& j) {
  Circuit c(detail::index_value(detail::field(j, "n_qubits"), "n_qubits"));
  const json& gates = detail::field(j, "gates");
  if (!gates.is_array()) throw FormatError("'gates' must be an array");
  for (const auto& gj : gates) {
    const json& name = detail::field(gj, "name");
    if (!name.is_string()) throw FormatError("gate name must be a string");
    Gate g;
    g.name = gate_name_from_string(name.get<std::string>());
    if (gj.contains("params")) {
      if (!gj["params"].is_array()) throw FormatError("gate params must be an array");
      for (const auto& p : gj["params"]) g.params.push_back(detail::finite_number(p, "param"));
    }
    const json& qs = detail::field(gj, "qubits");
    if (!qs.is_array()) throw FormatError("gate qubits must be an array");
    for (const auto& q : qs) g.qubits.push_back(detail::index_value(q, "qubit"));
    try {
      c.add(std::move(g));
    } catch (const Error& e) {
      throw FormatError(std::string("invalid gate: ") + e.what());
    }
  }
  return c;
}

inline json to_json(const Counts& c) {
  json counts = json::object();
  for (const auto& [k, v] : c.counts) counts[k] = v;
  return {{"shots", c.shots}, {"seed", c.seed}, {"counts", counts}};
}

inline Counts counts_from_json(const json& j) {
  Counts c;
  c.shots = detail::index_value(detail::field(j, "shots"), "shots");
  c.seed = detail::field(j, "seed").get<std::uint64_t>();
  std::uint64_t total = 0;
  for (const auto& [k, v] : detail::field(j, "counts").items()) {
    if (k.find_first_not_of("01") != std::string::npos)
      throw FormatError("count key '" + k + "' is not a bitstring");
    c.counts[k] = detail::index_value(v, "count");
    total += c.counts[k];
  }
  if (total != c.shots) throw FormatError("counts do not sum to shots");
  return c;
}

inline json to_json(const CouplingMap& m) {
  json edges = json::array();
  for (const auto& [c, t] : m.edges()) edges.push_back({c, t});
  return {{"n_qubits", m.n_qubits()}, {"edges", edges}};
}

inline CouplingMap coupling_from_json(const json& j) {
  const std::size_t n = detail::index_value(detail::field(j, "n_qubits"), "n_qubits");
  std::vector<CouplingMap::Edge> edges;
  const json& ej = detail::field(j, "edges");
  if (!ej.is_array()) throw FormatError("'edges' must be an array");
  for (const auto& e : ej) {
    if (!e.is_array() || e.size() != 2) throw FormatError("edge must be a [control, target] pair");
    edges.push_back({detail::index_value(e[0], "edge"), detail::index_value(e[1], "edge")});
  }
  try {
    return CouplingMap(n, edges);
  } catch (const DomainError& e) {
    throw FormatError(e.what());
  }
}

inline json to_json(const NoiseConfig& n) {
  return {{"p1", n.p1}, {"p2", n.p2}, {"gamma", n.gamma}, {"readout_flip", n.readout_flip}};
}

inline NoiseConfig noise_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("noise config must be an object");
  for (const auto& [k, v] : j.items())
    if (k != "p1" && k != "p2" && k != "gamma" && k != "readout_flip")
      throw FormatError("unknown noise field '" + k + "'");
  return {detail::probability(j, "p1"), detail::probability(j, "p2"),
          detail::probability(j, "gamma"), detail::probability(j, "readout_flip")};
}

inline json to_json(const TomographyRecord& r) {
  json settings = json::array(), outcomes = json::array();
  for (const auto& s : r.settings) settings.push_back(s.label());
  json j = {{"shots", r.shots}, {"seed", r.seed}, {"settings", settings}};
  if (r.exact()) {
    for (const auto& p : r.probabilities) {
      json o = json::object();
      for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] != 0.0) o[bitstring(i, r.n_measured)] = p[i];
      outcomes.push_back(std::move(o));
    }
    j["probabilities"] = outcomes;
  } else {
    for (const auto& c : r.counts) outcomes.push_back(to_json(c)["counts"]);
    j["counts"] = outcomes;
  }
  if (r.noise) j["noise"] = to_json(*r.noise);
  return j;
}

inline TomographyRecord record_from_json(const json& j) {
  TomographyRecord r;
  r.shots = detail::index_value(detail::field(j, "shots"), "shots");
  r.seed = detail::field(j, "seed").get<std::uint64_t>();
  for (const auto& s : detail::field(j, "settings")) {
    if (!s.is_string()) throw FormatError("setting labels must be strings");
    r.settings.push_back(MeasurementSetting::parse(s.get<std::string>()));
  }
  if (r.settings.empty()) throw FormatError("record has no settings");
  r.n_measured = r.settings.front().basis.size();
  for (const auto& s : r.settings)
    if (s.basis.size() != r.n_measured) throw FormatError("settings differ in length");
  if (r.exact()) {
    for (const auto& o : detail::field(j, "probabilities")) {
      std::vector<double> p(std::size_t{1} << r.n_measured, 0.0);
      for (const auto& [k, v] : o.items()) {
        if (k.size() != r.n_measured || k.find_first_not_of("01") != std::string::npos)
          throw FormatError("bad outcome key '" + k + "'");
        p[std::stoull(k, nullptr, 2)] = detail::finite_number(v, "probability");
      }
      r.probabilities.push_back(std::move(p));
    }
  } else {
    for (const auto& o : detail::field(j, "counts")) {
      json cj = {{"shots", r.shots}, {"seed", r.seed}, {"counts", o}};
      Counts c = counts_from_json(cj);
      for (const auto& [k, v] : c.counts)
        if (k.size() != r.n_measured) throw FormatError("bad outcome key '" + k + "'");
      r.counts.push_back(std::move(c));
    }
  }
  if (j.contains("noise")) r.noise = noise_from_json(j["noise"]);
  return r;
}

inline json choi_to_json(const ComplexMatrix& omega) {
  json j = to_json(omega);
  j["ordering"] = "input_output";
  j["normalization"] = "trace_one";
  return j;
}

inline ComplexMatrix choi_from_json(const json& j) {
  if (j.contains("ordering") && j["ordering"] != "input_output")
    throw FormatError("unsupported Choi ordering");
  if (j.contains("normalization") && j["normalization"] != "trace_one")
    throw FormatError("unsupported Choi normalization");
  ComplexMatrix m = matrix_from_json(j);
  if (!m.is_square() || m.rows() != 9) throw FormatError("Choi matrix must be 9x9");
  return m;
}

inline json to_json(const ChannelRep& rep) {
  return std::visit(
      [&](const auto& k) -> json {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, AnalyticRep>) {
          return {{"kind", "analytic"}, {"name", to_string(k.name)}, {"dim", rep.dim()}};
        } else if constexpr (std::is_same_v<T, KrausSet>) {
          json ops = json::array();
          for (const auto& op : k.operators) ops.push_back(to_json(op));
          return {{"kind", "kraus"}, {"operators", ops}};
        } else if constexpr (std::is_same_v<T, StinespringDilation>) {
          return {{"kind", "stinespring"},
                  {"u", to_json(k.u)},
                  {"rho_env", to_json(k.rho_env)},
                  {"ordering", k.ordering == Ordering::SystemFirst ? "system_first" : "env_first"},
                  {"sys_dim", k.sys_dim},
                  {"env_dim", k.env_dim}};
        } else {
          json j = choi_to_json(k.omega);
          return {{"kind", "choi"}, {"omega", j}};
        }
      },
      rep.kind());
}

inline ChannelRep channel_from_json(const json& j) {
  const json& kind = detail::field(j, "kind");
  if (!kind.is_string()) throw FormatError("channel kind must be a string");
  const std::string k = kind.get<std::string>();
  try {
    if (k == "analytic") {
      const std::size_t dim = j.contains("dim") ? detail::index_value(j["dim"], "dim") : 3;
      return ChannelRep::analytic(
          analytic_channel_from_string(detail::field(j, "name").get<std::string>()), dim);
    }
    if (k == "kraus") {
      KrausSet ks;
      for (const auto& op : detail::field(j, "operators")) ks.operators.push_back(matrix_from_json(op));
      return ChannelRep::kraus(std::move(ks));
    }
    if (k == "stinespring") {
      const std::string ord = detail::field(j, "ordering").get<std::string>();
      if (ord != "system_first" && ord != "env_first") throw FormatError("bad ordering '" + ord + "'");
      StinespringDilation s{matrix_from_json(detail::field(j, "u")),
                            matrix_from_json(detail::field(j, "rho_env")),
                            ord == "system_first" ? Ordering::SystemFirst : Ordering::EnvFirst,
                            detail::index_value(detail::field(j, "sys_dim"), "sys_dim"),
                            detail::index_value(detail::field(j, "env_dim"), "env_dim")};
      return ChannelRep::stinespring(std::move(s));
    }
    if (k == "choi") return ChannelRep::choi(choi_from_json(detail::field(j, "omega")));
  } catch (const FormatError&) {
    throw;
  } catch (const Error& e) {
    throw FormatError(std::string("invalid channel: ") + e.what());
  }
  throw FormatError("unknown channel kind '" + k + "'");
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError("'" + path + "' is not valid JSON: " + e.what());
  }
}

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

}  // namespace qchan::io
