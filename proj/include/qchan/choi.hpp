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

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qchan/channel.hpp"
#include "qchan/circuit.hpp"
#include "qchan/decomp.hpp"
#include "qchan/errors.hpp"
#include "qchan/layout.hpp"
#include "qchan/numkit.hpp"
#include "qchan/qutrit_map.hpp"
#include "qchan/tomography.hpp"

namespace qchan {

/** Unit-trace Choi matrix of a qutrit channel, input factor first. */
inline ComplexMatrix analytic_choi(const ChannelRep& channel) {
  if (channel.dim() != 3) throw DimensionError("analytic_choi expects a qutrit channel");
  return choi_of(channel);
}

/** d Tr_1((rho^T (x) I) omega), the inverse of analytic_choi. */
inline ComplexMatrix channel_from_choi(const ComplexMatrix& omega, const ComplexMatrix& rho) {
  if (rho.rows() != 3 || rho.cols() != 3 || omega.rows() != 9 || omega.cols() != 9)
    throw ShapeError("channel_from_choi expects a 9x9 Choi matrix and a 3x3 state");
  require_density(rho, "channel_from_choi");
  if (hermiticity_defect(omega) > kDensityTol.atol)
    throw DomainError("Choi matrix is not Hermitian");
  return choi_apply(omega, rho);
}

/** Expansion of the matrix units E_ij over nine physical states. */
struct BasisDecomposition {
  ComplexMatrix coeffs{9, 9};  ///< row 3i+j holds a_ij^k for k = 1..9
  std::vector<ComplexMatrix> basis_states;
};

/** The stored coefficient table; basis state k is basis_density(k). */
inline BasisDecomposition basis_decomposition() {
  const cplx m{-0.5, -0.5};  // -(1+i)/2
  const cplx p{-0.5, 0.5};   // -(1-i)/2
  const cplx i = kI;
  BasisDecomposition d;
  d.coeffs = ComplexMatrix{
      {1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
      {m, m, 0.0, 1.0, 0.0, 0.0, i, 0.0, 0.0},
      {m, 0.0, m, 0.0, 1.0, 0.0, 0.0, i, 0.0},
      {p, p, 0.0, 1.0, 0.0, 0.0, -i, 0.0, 0.0},
      {0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
      {0.0, m, m, 0.0, 0.0, 1.0, 0.0, 0.0, i},
      {p, 0.0, p, 0.0, 1.0, 0.0, 0.0, -i, 0.0},
      {0.0, p, p, 0.0, 0.0, 1.0, 0.0, 0.0, -i},
      {0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
  };
  for (int k = 1; k <= 9; ++k) d.basis_states.push_back(basis_density(k));
  return d;
}

/** Solves E_ij = sum_k a_ij^k basis_state_k from scratch. */
inline ComplexMatrix rederive_basis_coefficients() {
  // Column k of r is the row-major vectorisation of basis state k.
  ComplexMatrix r(9, 9), e(9, 9);
  for (int k = 0; k < 9; ++k) {
    const ComplexMatrix s = basis_density(k + 1);
    for (std::size_t x = 0; x < 9; ++x) r(x, k) = s(x / 3, x % 3);
  }
  for (std::size_t ij = 0; ij < 9; ++ij) e(ij, ij) = 1.0;
  // Column ij of solve(r, e) holds the coefficients of E_ij.
  return solve(r, e).transpose();
}

/**
 * Assembles omega = (1/3) sum_ij E_ij (x) sum_k a_ij^k outputs[k] from the
 * channel's outputs on the nine basis states.
 */
inline ComplexMatrix choi_linear(std::span<const ComplexMatrix> outputs) {
  if (outputs.size() != 9)
    throw ArityError("choi_linear needs 9 outputs, got " + std::to_string(outputs.size()));
  for (const auto& o : outputs) {
    if (o.rows() != 3 || o.cols() != 3) throw ShapeError("channel outputs must be 3x3");
    if (std::abs(o.trace() - 1.0) > 1e-6) throw DomainError("channel output trace is not 1");
  }
  const auto dec = basis_decomposition();
  ComplexMatrix omega(9, 9);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      ComplexMatrix block(3, 3);
      for (std::size_t k = 0; k < 9; ++k) block += outputs[k] * dec.coeffs(3 * i + j, k);
      omega += kron(mats::unit(3, i, j), block);
    }
  return omega / 3.0;
}

/** Uhlmann fidelity between two Choi states. */
inline double choi_fidelity(const ComplexMatrix& theory, const ComplexMatrix& experiment) {
  if (theory.rows() != 9 || experiment.rows() != 9)
    throw ShapeError("choi_fidelity expects 9x9 matrices");
  return fidelity(theory, experiment);
}

/** A Choi estimate plus the weight lost to post-selection. */
struct ChoiEstimate {
  ComplexMatrix omega{9, 9};
  double leakage = 0.0;
};

/** Channel outputs on the nine basis states, each with its leakage. */
inline std::vector<ProjectedState> tomograph_basis_outputs(
    const ChannelCircuit& cc, std::uint64_t shots, std::uint64_t seed,
    const std::optional<NoiseConfig>& noise = {}) {
  std::vector<ProjectedState> out;
  const std::array<std::size_t, 2> sys = cc.system;
  for (int k = 1; k <= 9; ++k) {
    Circuit c(cc.circuit.n_qubits());
    c.append(prep_basis_circuit(k), sys);
    c.append(cc.circuit);
    const auto rec =
        collect(c, sys, shots, Rng::substream(seed, 1000 + static_cast<std::uint64_t>(k))(),
                noise);
    out.push_back(reconstruct_qutrit(rec));
  }
  return out;
}

/** choi_linear on tomographic outputs; mean leakage over the nine runs. */
inline ChoiEstimate choi_linear_from_circuit(const ChannelCircuit& cc, std::uint64_t shots,
                                             std::uint64_t seed,
                                             const std::optional<NoiseConfig>& noise = {}) {
  const auto outs = tomograph_basis_outputs(cc, shots, seed, noise);
  std::vector<ComplexMatrix> rhos;
  double leak = 0.0;
  for (const auto& o : outs) {
    rhos.push_back(o.rho);
    leak += o.leakage;
  }
  return {project_to_density(choi_linear(rhos)), leak / 9.0};
}

/**
 * The six-qubit direct Choi experiment. Logical qubits: system 0-1,
 * environment 2-3, ancilla 4-5. The system is put into the qutrit
 * superposition, copied to the ancilla with two CNOTs, passed through the
 * channel, and (ancilla, system) is tomographed over 81 settings. Extra
 * qubits of the channel circuit follow from index 6. With a coupling map
 * the whole experiment is placed and routed first.
 */
inline ChoiEstimate choi_direct(const ChannelCircuit& cc, std::uint64_t shots, std::uint64_t seed,
                                const std::optional<NoiseConfig>& noise = {},
                                const std::optional<CouplingMap>& map = {}) {
  const std::size_t n_in = cc.circuit.n_qubits();
  std::vector<std::size_t> relabel(n_in, 0);
  std::size_t extra = 6;
  for (std::size_t q = 0; q < n_in; ++q) {
    if (q == cc.system[0]) relabel[q] = 0;
    else if (q == cc.system[1]) relabel[q] = 1;
    else if (q == cc.env[0]) relabel[q] = 2;
    else if (q == cc.env[1]) relabel[q] = 3;
    else relabel[q] = extra++;
  }
  Circuit logical(extra);
  logical.append(prep_superposition_circuit(), {0, 1});
  logical.cx(0, 4).cx(1, 5);
  logical.append(cc.circuit, relabel);

  std::vector<std::size_t> measured{4, 5, 0, 1};
  Circuit run = logical;
  if (map) {
    Placement p = place_and_route(logical, *map);
    for (auto& q : measured) q = p.layout[q];
    run = std::move(p.circuit);
  }
  auto compact = compact_register(run, measured);
  for (auto& q : measured) q = compact.old_to_new[q];

  const auto rec = collect(compact.circuit, measured, shots, seed, noise);
  const auto projected = project_qutrits(reconstruct(rec), 2);
  return {project_to_density(projected.rho), projected.leakage};
}

}  // namespace qchan
