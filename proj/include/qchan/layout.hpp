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

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <string>
#include <utility>
#include <vector>

#include "qchan/circuit.hpp"
#include "qchan/errors.hpp"

namespace qchan {

/** Directed CNOT connectivity; an edge (c, t) allows CNOT with control c, target t. */
class CouplingMap {
 public:
  using Edge = std::pair<std::size_t, std::size_t>;

  CouplingMap() = default;

  CouplingMap(std::size_t n_qubits, const std::vector<Edge>& edges)
      : n_(n_qubits) {
    if (n_qubits == 0) throw DomainError("coupling map needs at least one qubit");
    for (const auto& [c, t] : edges) {
      if (c >= n_ || t >= n_)
        throw DomainError("coupling edge (" + std::to_string(c) + "," +
                          std::to_string(t) + ") outside " + std::to_string(n_) +
                          " qubits");
      if (c == t) throw DomainError("coupling map self-loop on " + std::to_string(c));
      edges_.insert({c, t});
    }
  }

  /** Both directions of every listed pair. */
  static CouplingMap bidirectional(std::size_t n, const std::vector<Edge>& pairs) {
    std::vector<Edge> all;
    for (const auto& [a, b] : pairs) {
      all.push_back({a, b});
      all.push_back({b, a});
    }
    return CouplingMap(n, all);
  }

  std::size_t n_qubits() const { return n_; }
  const std::set<Edge>& edges() const { return edges_; }

  bool has_edge(std::size_t c, std::size_t t) const { return edges_.count({c, t}) > 0; }
  bool adjacent(std::size_t a, std::size_t b) const {
    return has_edge(a, b) || has_edge(b, a);
  }

  /** Undirected neighbours in increasing order. */
  std::vector<std::size_t> neighbours(std::size_t q) const {
    std::vector<std::size_t> out;
    for (std::size_t m = 0; m < n_; ++m)
      if (m != q && adjacent(q, m)) out.push_back(m);
    return out;
  }

  friend bool operator==(const CouplingMap&, const CouplingMap&) = default;

 private:
  std::size_t n_ = 0;
  std::set<Edge> edges_;
};

namespace coupling {

/** 5-qubit bow-tie device with one-way couplings. */
inline CouplingMap ibmqx4() {
  return CouplingMap(5, {{1, 0}, {2, 0}, {2, 1}, {3, 2}, {3, 4}, {4, 2}});
}

/** 20-qubit 4x5 lattice with diagonal cross-links, all couplings two-way. */
inline CouplingMap tokyo() {
  return CouplingMap::bidirectional(
      20, {{0, 1},   {0, 5},   {1, 2},   {1, 6},   {1, 7},   {2, 6},   {3, 8},
           {4, 8},   {4, 9},   {5, 6},   {5, 10},  {5, 11},  {6, 7},   {6, 10},
           {6, 11},  {7, 8},   {7, 12},  {8, 9},   {8, 12},  {8, 13},  {10, 11},
           {10, 15}, {11, 12}, {11, 16}, {11, 17}, {12, 13}, {12, 16}, {13, 14},
           {13, 18}, {13, 19}, {14, 18}, {14, 19}, {15, 16}, {16, 17}});
}

/** Physical qubits {0, 1, 5, 6, 10, 11} of tokyo() relabelled 0..5. */
inline CouplingMap tokyo6() {
  const std::vector<std::size_t> phys{0, 1, 5, 6, 10, 11};
  const CouplingMap full = tokyo();
  std::vector<CouplingMap::Edge> edges;
  for (std::size_t a = 0; a < phys.size(); ++a)
    for (std::size_t b = 0; b < phys.size(); ++b)
      if (a != b && full.has_edge(phys[a], phys[b])) edges.push_back({a, b});
  return CouplingMap(phys.size(), edges);
}

inline std::vector<std::string> preset_names() { return {"ibmqx4", "tokyo", "tokyo-6"}; }

inline std::optional<CouplingMap> preset(const std::string& name) {
  if (name == "ibmqx4") return ibmqx4();
  if (name == "tokyo") return tokyo();
  if (name == "tokyo-6") return tokyo6();
  return std::nullopt;
}

}  // namespace coupling

/** CNOT(control -> target) realised with the opposite CNOT and four H gates. */
inline Circuit reverse_cnot(std::size_t control, std::size_t target,
                            std::size_t n_qubits = 0) {
  Circuit c(std::max(n_qubits, std::max(control, target) + 1));
  c.h(control).h(target).cx(target, control).h(control).h(target);
  return c;
}

struct Violation {
  std::size_t gate_index;
  std::size_t control;
  std::size_t target;
  std::string message;
};

inline std::vector<Violation> validate(const Circuit& c, const CouplingMap& map) {
  std::vector<Violation> out;
  for (std::size_t i = 0; i < c.gates().size(); ++i) {
    const Gate& g = c.gates()[i];
    if (!g.is_cnot()) continue;
    const auto ct = g.qubits[0], tg = g.qubits[1];
    if (!map.has_edge(ct, tg))
      out.push_back({i, ct, tg,
                     "gate " + std::to_string(i) + ": cx " + std::to_string(ct) +
                         "->" + std::to_string(tg) + " is not a coupling"});
  }
  return out;
}

/**
 * Removes pairs of identical self-inverse gates that are separated only by
 * gates on disjoint qubits. Repeats until nothing changes.
 */
inline Circuit cancel_adjacent_inverses(const Circuit& c) {
  std::vector<Gate> gates = c.gates();
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<bool> dead(gates.size(), false);
    for (std::size_t i = 0; i < gates.size(); ++i) {
      if (dead[i] || !gates[i].is_self_inverse()) continue;
      for (std::size_t j = i + 1; j < gates.size(); ++j) {
        if (dead[j]) continue;
        const bool overlaps = std::any_of(
            gates[j].qubits.begin(), gates[j].qubits.end(), [&](std::size_t q) {
              return std::find(gates[i].qubits.begin(), gates[i].qubits.end(), q) !=
                     gates[i].qubits.end();
            });
        if (!overlaps) continue;
        if (gates[j] == gates[i]) {
          dead[i] = dead[j] = true;
          changed = true;
        }
        break;
      }
    }
    std::vector<Gate> kept;
    for (std::size_t i = 0; i < gates.size(); ++i)
      if (!dead[i]) kept.push_back(std::move(gates[i]));
    gates = std::move(kept);
  }
  Circuit out(c.n_qubits());
  for (auto& g : gates) out.add(std::move(g));
  return out;
}

namespace detail {

inline void emit_directed_cnot(Circuit& out, const CouplingMap& map,
                               std::size_t c, std::size_t t) {
  if (map.has_edge(c, t))
    out.cx(c, t);
  else if (map.has_edge(t, c))
    out.append(reverse_cnot(c, t, out.n_qubits()));
  else
    throw RoutingError("qubits " + std::to_string(c) + " and " + std::to_string(t) +
                       " are not coupled");
}

// Lowest-index qubit coupled to both a and b.
inline std::optional<std::size_t> common_neighbour(const CouplingMap& map,
                                                   std::size_t a, std::size_t b) {
  for (std::size_t m = 0; m < map.n_qubits(); ++m)
    if (m != a && m != b && map.adjacent(a, m) && map.adjacent(m, b)) return m;
  return std::nullopt;
}

}  // namespace detail

/**
 * Legalises every CNOT for `map`. Couplings in the wrong direction use
 * reverse_cnot. Uncoupled pairs (a, b) are relayed through the lowest-index
 * common neighbour m as cx(a,m) cx(m,b) cx(a,m) cx(m,b), which restores m
 * whatever its state. Adjacent self-inverse pairs are then cancelled. The
 * result acts on map.n_qubits() qubits and has exactly the same unitary
 * (no global phase) as the input widened to that register.
 */
inline Circuit route_circuit(const Circuit& c, const CouplingMap& map) {
  if (c.n_qubits() > map.n_qubits())
    throw RoutingError("circuit has " + std::to_string(c.n_qubits()) +
                       " qubits but the coupling map only " +
                       std::to_string(map.n_qubits()));
  Circuit out(map.n_qubits());
  for (const auto& g : c.gates()) {
    if (!g.is_cnot()) {
      out.add(g);
      continue;
    }
    const std::size_t a = g.qubits[0], b = g.qubits[1];
    if (map.adjacent(a, b)) {
      detail::emit_directed_cnot(out, map, a, b);
      continue;
    }
    const auto m = detail::common_neighbour(map, a, b);
    if (!m)
      throw RoutingError("no common neighbour for cx " + std::to_string(a) + "->" +
                         std::to_string(b));
    detail::emit_directed_cnot(out, map, a, *m);
    detail::emit_directed_cnot(out, map, *m, b);
    detail::emit_directed_cnot(out, map, a, *m);
    detail::emit_directed_cnot(out, map, *m, b);
  }
  return cancel_adjacent_inverses(out);
}

/** A routed circuit and where each logical qubit was placed. */
struct Placement {
  Circuit circuit{1};
  std::vector<std::size_t> layout;  ///< logical qubit k sits on layout[k]
};

/**
 * Chooses an injective placement of the logical qubits that minimises the
 * routed CNOT count (1 per coupled pair, 4 per relayed pair, before
 * cancellation), ties going to the lexicographically smallest placement,
 * then routes the relabelled circuit.
 */
inline Placement place_and_route(const Circuit& c, const CouplingMap& map) {
  const std::size_t k = c.n_qubits(), n = map.n_qubits();
  if (k > n)
    throw RoutingError("circuit has more qubits than the coupling map");
  double count = 1.0;
  for (std::size_t i = 0; i < k; ++i) count *= static_cast<double>(n - i);
  if (count > 5e7) throw ResourceError("placement search space too large");

  std::map<std::pair<std::size_t, std::size_t>, std::size_t> pair_uses;
  for (const auto& g : c.gates())
    if (g.is_cnot()) {
      auto a = g.qubits[0], b = g.qubits[1];
      ++pair_uses[{std::min(a, b), std::max(a, b)}];
    }
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> pairs;
  for (const auto& [p, u] : pair_uses) pairs.emplace_back(p.first, p.second, u);

  constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> pair_cost(n * n, kInf);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      if (map.adjacent(a, b))
        pair_cost[a * n + b] = 1;
      else if (detail::common_neighbour(map, a, b))
        pair_cost[a * n + b] = 4;
    }

  std::vector<std::size_t> cur(k), best;
  std::vector<bool> taken(n, false);
  std::size_t best_cost = kInf;
  auto cost_of = [&]() {
    std::size_t total = 0;
    for (const auto& [a, b, u] : pairs) {
      const std::size_t pc = pair_cost[cur[a] * n + cur[b]];
      if (pc == kInf) return kInf;
      total += pc * u;
    }
    return total;
  };
  auto search = [&](auto&& self, std::size_t depth) -> void {
    if (depth == k) {
      const std::size_t cost = cost_of();
      if (cost < best_cost) {
        best_cost = cost;
        best = cur;
      }
      return;
    }
    for (std::size_t p = 0; p < n; ++p) {
      if (taken[p]) continue;
      taken[p] = true;
      cur[depth] = p;
      self(self, depth + 1);
      taken[p] = false;
    }
  };
  search(search, 0);
  if (best_cost == kInf) throw RoutingError("no placement can be routed");

  Circuit relabelled(n);
  relabelled.append(c, best);
  return {route_circuit(relabelled, map), best};
}

}  // namespace qchan
