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
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "qchan/circuit.hpp"
#include "qchan/errors.hpp"
#include "qchan/numkit.hpp"

namespace qchan {

// Qutrit levels 0, 1, 2 live on |00>, |01>, |10>; |11> is unused.

inline ComplexMatrix embed_state(const ComplexMatrix& v) {
  if (v.rows() != 3 || !v.is_column())
    throw ShapeError("embed_state expects a 3-vector, got " + v.shape_string());
  if (std::abs(v.frobenius_norm() - 1.0) > kDensityTol.atol)
    throw DomainError("embed_state: vector is not normalised");
  ComplexMatrix out(4, 1);
  for (std::size_t i = 0; i < 3; ++i) out(i, 0) = v(i, 0);
  return out;
}

inline ComplexMatrix embed_density(const ComplexMatrix& rho) {
  if (rho.rows() != 3 || rho.cols() != 3)
    throw ShapeError("embed_density expects 3x3, got " + rho.shape_string());
  require_density(rho, "embed_density");
  ComplexMatrix out(4, 4);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c) out(r, c) = rho(r, c);
  return out;
}

/** A state after post-selection together with the discarded weight. */
struct ProjectedState {
  ComplexMatrix rho;
  double leakage = 0.0;
};

/**
 * Post-selects every two-qubit factor of a 4^k x 4^k density matrix onto the
 * qutrit subspace and renormalises. Coherences with |11> are dropped.
 */
inline ProjectedState project_qutrits(const ComplexMatrix& rho, std::size_t k) {
  std::size_t dim4 = 1, dim3 = 1;
  for (std::size_t i = 0; i < k; ++i) {
    dim4 *= 4;
    dim3 *= 3;
  }
  if (rho.rows() != dim4 || rho.cols() != dim4)
    throw ShapeError("expected a " + std::to_string(dim4) + "x" +
                     std::to_string(dim4) + " matrix, got " + rho.shape_string());
  // Map qutrit multi-index to the corresponding qubit index.
  std::vector<std::size_t> idx(dim3);
  for (std::size_t t = 0; t < dim3; ++t) {
    std::size_t rem = t, q = 0, scale = 1;
    for (std::size_t f = 0; f < k; ++f) {
      q += (rem % 3) * scale;
      rem /= 3;
      scale *= 4;
    }
    idx[t] = q;
  }
  ComplexMatrix out(dim3, dim3);
  double kept = 0.0;
  for (std::size_t r = 0; r < dim3; ++r) {
    kept += rho(idx[r], idx[r]).real();
    for (std::size_t c = 0; c < dim3; ++c) out(r, c) = rho(idx[r], idx[c]);
  }
  if (kept < 1e-12)
    throw DegenerateProjectionError("no weight left in the qutrit subspace");
  const double total = rho.trace().real();
  return {out / kept, std::clamp(1.0 - kept / total, 0.0, 1.0)};
}

inline ProjectedState project_qutrit(const ComplexMatrix& rho4) {
  if (rho4.rows() != 4 || rho4.cols() != 4)
    throw ShapeError("project_qutrit expects 4x4, got " + rho4.shape_string());
  require_density(rho4, "project_qutrit");
  return project_qutrits(rho4, 1);
}

/**
 * The qutrit map of a channel circuit: embed on the system pair, start all
 * other qubits in |0>, run (optionally noisy), trace down to the system
 * pair and post-select.
 */
class InducedChannel {
 public:
  explicit InducedChannel(ChannelCircuit cc, std::optional<NoiseConfig> noise = {})
      : noise_(std::move(noise)) {
    if (noise_) noise_->validate();
    const std::array<std::size_t, 4> roles{cc.system[0], cc.system[1], cc.env[0],
                                           cc.env[1]};
    for (std::size_t a = 0; a < 4; ++a) {
      if (roles[a] >= cc.circuit.n_qubits())
        throw DomainError("channel circuit role outside register");
      for (std::size_t b = a + 1; b < 4; ++b)
        if (roles[a] == roles[b]) throw DomainError("channel circuit roles overlap");
    }
    auto compact = compact_register(cc.circuit, roles);
    circuit_ = std::move(compact.circuit);
    system_ = {compact.old_to_new[cc.system[0]], compact.old_to_new[cc.system[1]]};
    if (circuit_.n_qubits() > 10)
      throw ResourceError("channel circuit touches too many qubits");
  }

  ProjectedState operator()(const ComplexMatrix& rho) const {
    const ComplexMatrix full =
        prepare_register(circuit_.n_qubits(), embed_density(rho), system_);
    const ComplexMatrix out =
        detail::evolve_density(circuit_, full, noise_ ? &*noise_ : nullptr);
    return project_qutrits(reduce_to_qubits(out, circuit_.n_qubits(), system_), 1);
  }

  /** Mean leakage over the given inputs. */
  double mean_leakage(std::span<const ComplexMatrix> inputs) const {
    if (inputs.empty()) return 0.0;
    double s = 0.0;
    for (const auto& rho : inputs) s += (*this)(rho).leakage;
    return s / static_cast<double>(inputs.size());
  }

  const Circuit& circuit() const { return circuit_; }

 private:
  Circuit circuit_{1};
  std::array<std::size_t, 2> system_{0, 1};
  std::optional<NoiseConfig> noise_;
};

inline InducedChannel induced_channel(ChannelCircuit cc,
                                      std::optional<NoiseConfig> noise = {}) {
  return InducedChannel(std::move(cc), std::move(noise));
}

}  // namespace qchan
