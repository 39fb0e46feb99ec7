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
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qchan/circuit.hpp"
#include "qchan/errors.hpp"
#include "qchan/layout.hpp"
#include "qchan/numkit.hpp"

namespace qchan {

/** Identity except -1 at |100> and X on the target when both controls are set. */
inline ComplexMatrix quasi_toffoli_matrix() {
  ComplexMatrix m = ComplexMatrix::identity(8);
  m(4, 4) = -1.0;
  m(6, 6) = 0.0;
  m(7, 7) = 0.0;
  m(6, 7) = 1.0;
  m(7, 6) = 1.0;
  return m;
}

enum class QuasiToffoliVariant { A, B };

/**
 * Appends the quasi-Toffoli on (c1, c2, t) with c1 the most significant
 * control. Variant B routes the c1 CNOT through reverse_cnot.
 */
inline void append_quasi_toffoli(Circuit& c, std::size_t c1, std::size_t c2,
                                 std::size_t t,
                                 QuasiToffoliVariant v = QuasiToffoliVariant::A) {
  constexpr double q = std::numbers::pi / 4.0;
  c.u3(t, -q, 0.0, 0.0).cx(c2, t).u3(t, -q, 0.0, 0.0);
  if (v == QuasiToffoliVariant::A)
    c.cx(c1, t);
  else
    c.append(reverse_cnot(c1, t, c.n_qubits()));
  c.u3(t, q, 0.0, 0.0).cx(c2, t).u3(t, q, 0.0, 0.0);
}

inline Circuit quasi_toffoli_circuit(QuasiToffoliVariant v = QuasiToffoliVariant::A) {
  Circuit c(3);
  append_quasi_toffoli(c, 0, 1, 2, v);
  return c;
}

inline ComplexMatrix w_tilde_matrix(double phi) {
  ComplexMatrix m(4, 4);
  m(0, 2) = 1.0;
  m(1, 1) = -1.0;
  m(2, 0) = 1.0;
  m(3, 3) = std::polar(1.0, phi);
  return m;
}

/** X(q1) CX(q1->q0) X(q1) Z(q1); equals w_tilde_matrix(pi) exactly. */
inline Circuit w_tilde_circuit() {
  Circuit c(2);
  c.x(1).cx(1, 0).x(1).z(1);
  return c;
}

namespace detail {

inline void check_config(int k) {
  if (k < 1 || k > 4) throw DomainError("S configuration must be in 1..4");
}

// Single-qubit layer whose tensor product is the factorised S_k U.
inline void append_factor_layer(Circuit& c, int k) {
  const double pi = std::numbers::pi;
  c.x(0);
  if (k >= 3) {
    c.u3(1, pi, 0.0, 0.0);
    c.h(2);
  } else {
    c.u3(1, -pi, 0.0, 0.0);
    c.u3(2, -pi / 2.0, 0.0, 0.0);
  }
}

// The line-permutation network, i.e. the inverse of S_k.
inline void append_permutation_network(Circuit& c, int k) {
  c.x(2);
  if (k >= 3)
    append_quasi_toffoli(c, 0, 2, 3);
  else
    append_quasi_toffoli(c, 2, 0, 3);
  c.cx(3, 0);
  if (k == 2 || k == 3)
    append_quasi_toffoli(c, 1, 0, 2);
  else
    append_quasi_toffoli(c, 0, 1, 2);
  c.cx(2, 3).x(2).cx(3, 1);
}

}  // namespace detail

/**
 * The row permutation S for configuration k on system (q0, q1) and
 * environment (q2, q3). Built from quasi-Toffoli and CNOT gates.
 */
inline Circuit s_permutation_circuit(int k = 4) {
  detail::check_config(k);
  Circuit net(4);
  detail::append_permutation_network(net, k);
  return net.inverse();
}

/**
 * The printed factorisation of S_k U in environment-first order
 * (env_hi, env_lo, sys_hi, sys_lo).
 */
inline ComplexMatrix s_config_unitary(int k) {
  detail::check_config(k);
  const double r = 1.0 / std::numbers::sqrt2;
  const ComplexMatrix id = ComplexMatrix::identity(2);
  if (k <= 2)
    return kron({ComplexMatrix{{r, r}, {-r, r}}, id, mats::pauli_x(),
                 ComplexMatrix{{0.0, 1.0}, {-1.0, 0.0}}});
  return kron({mats::hadamard(), id, mats::pauli_x(),
               ComplexMatrix{{0.0, -1.0}, {1.0, 0.0}}});
}

namespace detail {

inline ChannelCircuit place_channel(Circuit logical,
                                    const std::optional<CouplingMap>& layout) {
  if (!layout) return {std::move(logical), {0, 1}, {2, 3}};
  Placement p = place_and_route(logical, *layout);
  return {std::move(p.circuit), {p.layout[0], p.layout[1]}, {p.layout[2], p.layout[3]}};
}

}  // namespace detail

/**
 * Werner-Holevo channel on system (q0, q1) with environment (q2, q3) in |00>:
 * the factor layer followed by the permutation network. Configurations 1 and
 * 2 end with Z on q0. With a layout the circuit is placed and routed.
 */
inline Circuit wh_logical_circuit(int k = 4) {
  detail::check_config(k);
  Circuit c(4);
  detail::append_factor_layer(c, k);
  detail::append_permutation_network(c, k);
  if (k <= 2) c.z(0);
  return c;
}

inline ChannelCircuit wh_channel_circuit(int k = 4,
                                         const std::optional<CouplingMap>& layout = {}) {
  return detail::place_channel(wh_logical_circuit(k), layout);
}

/** W-tilde on the system pair followed by the WH circuit. */
inline Circuit ls_logical_circuit(int k = 4) {
  Circuit c(4);
  c.append(w_tilde_circuit());
  c.append(wh_logical_circuit(k));
  return c;
}

inline ChannelCircuit ls_channel_circuit(int k = 4,
                                         const std::optional<CouplingMap>& layout = {}) {
  return detail::place_channel(ls_logical_circuit(k), layout);
}

/** The channel with no gates. */
inline ChannelCircuit identity_channel_circuit() { return {Circuit(4), {0, 1}, {2, 3}}; }

/** Prepares the embedded basis state k (1..9) from |00>. */
inline Circuit prep_basis_circuit(int i) {
  if (i < 1 || i > 9) throw DomainError("basis index must be in 1..9");
  const double half_pi = std::numbers::pi / 2.0;
  Circuit c(2);
  switch (i) {
    case 1: break;
    case 2: c.x(1); break;
    case 3: c.x(0); break;
    case 4: c.h(1); break;
    case 5: c.h(0); break;
    case 6: c.h(0).cx(0, 1).x(1); break;
    case 7: c.h(1).u1(1, half_pi); break;
    case 8: c.h(0).u1(0, half_pi); break;
    case 9: c.h(0).u1(0, half_pi).cx(0, 1).x(1); break;
  }
  return c;
}

/** 2 arccos(1/sqrt3), about 1.9106. */
inline double superposition_angle() { return 2.0 * std::acos(1.0 / std::sqrt(3.0)); }

/** (|00> + |01> + |10>)/sqrt3 from |00>. */
inline Circuit prep_superposition_circuit() {
  const double q = std::numbers::pi / 4.0;
  Circuit c(2);
  c.u3(1, superposition_angle(), 0.0, 0.0);
  // controlled Ry(pi/2) from q1 onto q0
  c.u3(0, q, 0.0, 0.0).cx(1, 0).u3(0, -q, 0.0, 0.0).cx(1, 0);
  c.cx(0, 1);
  return c;
}

}  // namespace qchan
