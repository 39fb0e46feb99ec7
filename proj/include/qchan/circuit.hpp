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
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qchan/errors.hpp"
#include "qchan/numkit.hpp"
#include "qchan/random.hpp"

namespace qchan {

enum class GateName { U1, U2, U3, X, Y, Z, H, CNOT };

inline std::string_view to_string(GateName g) {
  switch (g) {
    case GateName::U1: return "u1";
    case GateName::U2: return "u2";
    case GateName::U3: return "u3";
    case GateName::X: return "x";
    case GateName::Y: return "y";
    case GateName::Z: return "z";
    case GateName::H: return "h";
    case GateName::CNOT: return "cx";
  }
  return "?";
}

inline GateName gate_name_from_string(std::string_view s) {
  if (s == "u1") return GateName::U1;
  if (s == "u2") return GateName::U2;
  if (s == "u3") return GateName::U3;
  if (s == "x") return GateName::X;
  if (s == "y") return GateName::Y;
  if (s == "z") return GateName::Z;
  if (s == "h") return GateName::H;
  if (s == "cx" || s == "cnot") return GateName::CNOT;
  throw FormatError("unknown gate name '" + std::string(s) + "'");
}

inline std::size_t param_count(GateName g) {
  switch (g) {
    case GateName::U1: return 1;
    case GateName::U2: return 2;
    case GateName::U3: return 3;
    default: return 0;
  }
}

inline std::size_t arity(GateName g) { return g == GateName::CNOT ? 2 : 1; }

/** A named gate applied to register qubits. CNOT qubits are {control, target}. */
struct Gate {
  GateName name = GateName::X;
  std::vector<double> params;
  std::vector<std::size_t> qubits;

  static Gate u1(std::size_t q, double lambda) {
    return {GateName::U1, {lambda}, {q}};
  }
  static Gate u2(std::size_t q, double phi, double lambda) {
    return {GateName::U2, {phi, lambda}, {q}};
  }
  static Gate u3(std::size_t q, double theta, double phi, double lambda) {
    return {GateName::U3, {theta, phi, lambda}, {q}};
  }
  static Gate x(std::size_t q) { return {GateName::X, {}, {q}}; }
  static Gate y(std::size_t q) { return {GateName::Y, {}, {q}}; }
  static Gate z(std::size_t q) { return {GateName::Z, {}, {q}}; }
  static Gate h(std::size_t q) { return {GateName::H, {}, {q}}; }
  static Gate cx(std::size_t control, std::size_t target) {
    return {GateName::CNOT, {}, {control, target}};
  }

  bool is_cnot() const { return name == GateName::CNOT; }

  /** True for parameter-free gates that are their own inverse. */
  bool is_self_inverse() const { return param_count(name) == 0; }

  void validate(std::size_t n_qubits) const {
    if (params.size() != param_count(name))
      throw ArityError("gate " + std::string(to_string(name)) + " takes " +
                       std::to_string(param_count(name)) + " parameters, got " +
                       std::to_string(params.size()));
    if (qubits.size() != arity(name))
      throw ArityError("gate " + std::string(to_string(name)) + " acts on " +
                       std::to_string(arity(name)) + " qubits, got " +
                       std::to_string(qubits.size()));
    for (auto q : qubits)
      if (q >= n_qubits)
        throw DomainError("gate qubit " + std::to_string(q) +
                          " outside register of " + std::to_string(n_qubits));
    if (qubits.size() == 2 && qubits[0] == qubits[1])
      throw DomainError("CNOT control and target coincide");
    for (double p : params)
      if (!std::isfinite(p)) throw DomainError("gate parameter is not finite");
  }

  friend bool operator==(const Gate&, const Gate&) = default;
};

/** 2x2 matrix stored row-major. */
using Mat2 = std::array<cplx, 4>;

inline Mat2 u3_entries(double theta, double phi, double lambda) {
  const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  return {cplx(c), -std::polar(s, lambda), std::polar(s, phi),
          std::polar(c, phi + lambda)};
}

inline Mat2 single_qubit_entries(const Gate& g) {
  const double r = 1.0 / std::numbers::sqrt2;
  switch (g.name) {
    case GateName::U1: return {1.0, 0.0, 0.0, std::polar(1.0, g.params[0])};
    case GateName::U2:
      return u3_entries(std::numbers::pi / 2.0, g.params[0], g.params[1]);
    case GateName::U3: return u3_entries(g.params[0], g.params[1], g.params[2]);
    case GateName::X: return {0.0, 1.0, 1.0, 0.0};
    case GateName::Y: return {0.0, -kI, kI, 0.0};
    case GateName::Z: return {1.0, 0.0, 0.0, -1.0};
    case GateName::H: return {r, r, r, -r};
    case GateName::CNOT: break;
  }
  throw ArityError("CNOT is not a single-qubit gate");
}

/**
 * Matrix of a gate on its own qubits. Single-qubit gates give 2x2, CNOT the
 * 4x4 controlled-X with the control as the most significant bit.
 */
inline ComplexMatrix gate_matrix(const Gate& g) {
  g.validate(g.qubits.empty() ? 0 : *std::max_element(g.qubits.begin(),
                                                      g.qubits.end()) + 1);
  if (g.is_cnot())
    return {{1.0, 0.0, 0.0, 0.0},
            {0.0, 1.0, 0.0, 0.0},
            {0.0, 0.0, 0.0, 1.0},
            {0.0, 0.0, 1.0, 0.0}};
  const Mat2 m = single_qubit_entries(g);
  return {{m[0], m[1]}, {m[2], m[3]}};
}

/** Ordered gate list on an n-qubit register; qubit 0 is the most significant bit. */
class Circuit {
 public:
  explicit Circuit(std::size_t n_qubits) : n_(n_qubits) {
    if (n_qubits == 0) throw DomainError("circuit needs at least one qubit");
  }

  std::size_t n_qubits() const { return n_; }
  const std::vector<Gate>& gates() const { return gates_; }
  std::size_t size() const { return gates_.size(); }
  bool empty() const { return gates_.empty(); }

  Circuit& add(Gate g) {
    g.validate(n_);
    gates_.push_back(std::move(g));
    return *this;
  }

  Circuit& u1(std::size_t q, double l) { return add(Gate::u1(q, l)); }
  Circuit& u2(std::size_t q, double p, double l) { return add(Gate::u2(q, p, l)); }
  Circuit& u3(std::size_t q, double t, double p, double l) {
    return add(Gate::u3(q, t, p, l));
  }
  Circuit& x(std::size_t q) { return add(Gate::x(q)); }
  Circuit& y(std::size_t q) { return add(Gate::y(q)); }
  Circuit& z(std::size_t q) { return add(Gate::z(q)); }
  Circuit& h(std::size_t q) { return add(Gate::h(q)); }
  Circuit& cx(std::size_t c, std::size_t t) { return add(Gate::cx(c, t)); }

  /** Appends `other`; its qubit k lands on qubit k of this register. */
  Circuit& append(const Circuit& other) {
    if (other.n_ > n_)
      throw DimensionError("appended circuit has more qubits than the register");
    for (const auto& g : other.gates_) add(g);
    return *this;
  }

  /** Appends `other` with its qubit k relabelled to map[k]. */
  Circuit& append(const Circuit& other, std::span<const std::size_t> map) {
    if (map.size() != other.n_)
      throw DimensionError("qubit map size does not match appended circuit");
    for (auto g : other.gates_) {
      for (auto& q : g.qubits) q = map[q];
      add(std::move(g));
    }
    return *this;
  }

  Circuit& append(const Circuit& other, std::initializer_list<std::size_t> map) {
    return append(other, std::span<const std::size_t>(map.begin(), map.size()));
  }

  /** Same gates on a larger register. */
  Circuit widened(std::size_t n) const {
    if (n < n_) throw DimensionError("cannot narrow a circuit");
    Circuit out(n);
    out.gates_ = gates_;
    return out;
  }

  /** Gate-by-gate inverse in reverse order. */
  Circuit inverse() const {
    Circuit out(n_);
    for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) {
      Gate g = *it;
      switch (g.name) {
        case GateName::U1: g.params[0] = -g.params[0]; break;
        case GateName::U2:
          g = Gate::u3(g.qubits[0], -std::numbers::pi / 2.0, -g.params[1],
                       -g.params[0]);
          break;
        case GateName::U3:
          g.params = {-g.params[0], -g.params[2], -g.params[1]};
          break;
        default: break;
      }
      out.gates_.push_back(std::move(g));
    }
    return out;
  }

  std::size_t cnot_count() const {
    return static_cast<std::size_t>(std::count_if(
        gates_.begin(), gates_.end(), [](const Gate& g) { return g.is_cnot(); }));
  }

  friend bool operator==(const Circuit&, const Circuit&) = default;

 private:
  std::size_t n_;
  std::vector<Gate> gates_;
};

/** Synthetic gate-level noise; every parameter is a probability. */
struct NoiseConfig {
  double p1 = 0.0;            ///< depolarizing after each single-qubit gate
  double p2 = 0.0;            ///< depolarizing per qubit after each CNOT
  double gamma = 0.0;         ///< amplitude damping on every touched qubit
  double readout_flip = 0.0;  ///< independent bit flip at measurement

  void validate() const {
    for (double v : {p1, p2, gamma, readout_flip})
      if (!(v >= 0.0 && v <= 1.0))
        throw DomainError("noise parameters must lie in [0, 1]");
  }

  bool is_zero() const {
    return p1 == 0.0 && p2 == 0.0 && gamma == 0.0 && readout_flip == 0.0;
  }

  bool gate_noise_free() const { return p1 == 0.0 && p2 == 0.0 && gamma == 0.0; }

  friend bool operator==(const NoiseConfig&, const NoiseConfig&) = default;
};

/** Measurement histogram keyed by bitstrings, qubit 0 leftmost. */
struct Counts {
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;

  std::uint64_t get(const std::string& key) const {
    auto it = counts.find(key);
    return it == counts.end() ? 0 : it->second;
  }

  friend bool operator==(const Counts&, const Counts&) = default;
};

inline std::string bitstring(std::size_t index, std::size_t n_bits) {
  std::string s(n_bits, '0');
  for (std::size_t k = 0; k < n_bits; ++k)
    if ((index >> (n_bits - 1 - k)) & 1U) s[k] = '1';
  return s;
}

namespace detail {

inline std::size_t qubit_bit(std::size_t n, std::size_t q) {
  return std::size_t{1} << (n - 1 - q);
}

inline std::size_t register_dim(std::size_t n) {
  if (n > 30) throw ResourceError("register too large for dense simulation");
  return std::size_t{1} << n;
}

inline void apply_1q_state(std::vector<cplx>& psi, std::size_t n, std::size_t q,
                           const Mat2& m) {
  const std::size_t bit = qubit_bit(n, q);
  for (std::size_t i = 0; i < psi.size(); ++i) {
    if (i & bit) continue;
    const cplx a = psi[i], b = psi[i | bit];
    psi[i] = m[0] * a + m[1] * b;
    psi[i | bit] = m[2] * a + m[3] * b;
  }
}

inline std::size_t cnot_index(std::size_t i, std::size_t cbit, std::size_t tbit) {
  return (i & cbit) ? (i ^ tbit) : i;
}

inline void apply_cnot_state(std::vector<cplx>& psi, std::size_t n,
                             std::size_t c, std::size_t t) {
  const std::size_t cbit = qubit_bit(n, c), tbit = qubit_bit(n, t);
  for (std::size_t i = 0; i < psi.size(); ++i)
    if ((i & cbit) && !(i & tbit)) std::swap(psi[i], psi[i | tbit]);
}

inline void apply_gate_state(std::vector<cplx>& psi, std::size_t n,
                             const Gate& g) {
  if (g.is_cnot())
    apply_cnot_state(psi, n, g.qubits[0], g.qubits[1]);
  else
    apply_1q_state(psi, n, g.qubits[0], single_qubit_entries(g));
}

// rho <- M rho M^dagger on qubit q.
inline void apply_1q_density(ComplexMatrix& rho, std::size_t n, std::size_t q,
                             const Mat2& m) {
  const std::size_t bit = qubit_bit(n, q);
  const std::size_t dim = rho.rows();
  for (std::size_t c = 0; c < dim; ++c)
    for (std::size_t r = 0; r < dim; ++r) {
      if (r & bit) continue;
      const cplx a = rho(r, c), b = rho(r | bit, c);
      rho(r, c) = m[0] * a + m[1] * b;
      rho(r | bit, c) = m[2] * a + m[3] * b;
    }
  const Mat2 mc{std::conj(m[0]), std::conj(m[1]), std::conj(m[2]),
                std::conj(m[3])};
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) {
      if (c & bit) continue;
      const cplx a = rho(r, c), b = rho(r, c | bit);
      rho(r, c) = a * mc[0] + b * mc[1];
      rho(r, c | bit) = a * mc[2] + b * mc[3];
    }
}

inline void apply_cnot_density(ComplexMatrix& rho, std::size_t n, std::size_t c,
                               std::size_t t) {
  const std::size_t cbit = qubit_bit(n, c), tbit = qubit_bit(n, t);
  const std::size_t dim = rho.rows();
  ComplexMatrix out(dim, dim);
  for (std::size_t r = 0; r < dim; ++r) {
    const std::size_t rr = cnot_index(r, cbit, tbit);
    for (std::size_t k = 0; k < dim; ++k)
      out(rr, cnot_index(k, cbit, tbit)) = rho(r, k);
  }
  rho = std::move(out);
}

// Applies f to every 2x2 block of rho indexed by the value of qubit q in the
// row and column labels.
template <typename F>
void for_each_qubit_block(ComplexMatrix& rho, std::size_t n, std::size_t q,
                          F&& f) {
  const std::size_t bit = qubit_bit(n, q);
  const std::size_t dim = rho.rows();
  for (std::size_t r = 0; r < dim; ++r) {
    if (r & bit) continue;
    for (std::size_t c = 0; c < dim; ++c) {
      if (c & bit) continue;
      f(rho(r, c), rho(r, c | bit), rho(r | bit, c), rho(r | bit, c | bit));
    }
  }
}

// (1 - 3p/4) rho + p/4 (X rho X + Y rho Y + Z rho Z), written as
// (1 - p) rho + p Tr_q(rho) (x) I/2.
inline void depolarize(ComplexMatrix& rho, std::size_t n, std::size_t q,
                       double p) {
  if (p == 0.0) return;
  for_each_qubit_block(rho, n, q, [p](cplx& a00, cplx& a01, cplx& a10, cplx& a11) {
    const cplx mix = 0.5 * p * (a00 + a11);
    a00 = (1.0 - p) * a00 + mix;
    a11 = (1.0 - p) * a11 + mix;
    a01 *= (1.0 - p);
    a10 *= (1.0 - p);
  });
}

// Kraus operators diag(1, sqrt(1-g)) and sqrt(g)|0><1|.
inline void amplitude_damp(ComplexMatrix& rho, std::size_t n, std::size_t q,
                           double gamma) {
  if (gamma == 0.0) return;
  const double s = std::sqrt(1.0 - gamma);
  for_each_qubit_block(rho, n, q,
                       [gamma, s](cplx& a00, cplx& a01, cplx& a10, cplx& a11) {
                         a00 += gamma * a11;
                         a11 *= (1.0 - gamma);
                         a01 *= s;
                         a10 *= s;
                       });
}

inline void apply_gate_density(ComplexMatrix& rho, std::size_t n, const Gate& g,
                               const NoiseConfig* noise) {
  if (g.is_cnot())
    apply_cnot_density(rho, n, g.qubits[0], g.qubits[1]);
  else
    apply_1q_density(rho, n, g.qubits[0], single_qubit_entries(g));
  if (noise == nullptr) return;
  const double p = g.is_cnot() ? noise->p2 : noise->p1;
  for (auto q : g.qubits) {
    depolarize(rho, n, q, p);
    amplitude_damp(rho, n, q, noise->gamma);
  }
}

/** Unchecked evolution used by pipelines that already validated their input. */
inline ComplexMatrix evolve_density(const Circuit& c, ComplexMatrix rho,
                                    const NoiseConfig* noise) {
  const NoiseConfig* nz = (noise && !noise->gate_noise_free()) ? noise : nullptr;
  for (const auto& g : c.gates()) apply_gate_density(rho, c.n_qubits(), g, nz);
  return rho;
}

}  // namespace detail

/** Full 2^n x 2^n unitary of a circuit (n <= 6). */
inline ComplexMatrix unitary_of(const Circuit& c) {
  const std::size_t n = c.n_qubits();
  if (n > 6)
    throw ResourceError("unitary_of supports at most 6 qubits, got " +
                        std::to_string(n));
  const std::size_t dim = std::size_t{1} << n;
  ComplexMatrix u(dim, dim);
  std::vector<cplx> col(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    std::fill(col.begin(), col.end(), cplx(0.0));
    col[k] = 1.0;
    for (const auto& g : c.gates()) detail::apply_gate_state(col, n, g);
    for (std::size_t r = 0; r < dim; ++r) u(r, k) = col[r];
  }
  return u;
}

/** Runs a circuit on a normalised state vector, gate by gate. */
inline ComplexMatrix simulate_state(const Circuit& c, const ComplexMatrix& input) {
  const std::size_t dim = detail::register_dim(c.n_qubits());
  if (!input.is_column() || input.rows() != dim)
    throw DimensionError("input state must be a " + std::to_string(dim) +
                         "x1 column vector, got " + input.shape_string());
  if (std::abs(input.frobenius_norm() - 1.0) > kDensityTol.atol)
    throw DomainError("input state is not normalised");
  std::vector<cplx> psi(input.data().begin(), input.data().end());
  for (const auto& g : c.gates()) detail::apply_gate_state(psi, c.n_qubits(), g);
  return ComplexMatrix(dim, 1, std::move(psi));
}

/** |0...0> on n qubits. */
inline ComplexMatrix zero_state(std::size_t n) {
  return ComplexMatrix::basis_vector(detail::register_dim(n), 0);
}

/**
 * Evolves a density matrix. Without noise this is U rho U^dagger. With
 * noise, every gate is followed on each qubit it touches by depolarizing
 * (p1 or p2) and then amplitude damping (gamma).
 */
inline ComplexMatrix simulate_density(const Circuit& c, ComplexMatrix rho,
                                      const std::optional<NoiseConfig>& noise = {}) {
  const std::size_t n = c.n_qubits();
  const std::size_t dim = detail::register_dim(n);
  if (rho.rows() != dim || rho.cols() != dim)
    throw DimensionError("density must be " + std::to_string(dim) + "x" +
                         std::to_string(dim) + ", got " + rho.shape_string());
  require_density(rho, "simulate_density");
  const NoiseConfig* nz = nullptr;
  if (noise) {
    noise->validate();
    if (!noise->gate_noise_free()) nz = &*noise;
  }
  for (const auto& g : c.gates()) detail::apply_gate_density(rho, n, g, nz);
  return rho;
}

/** Born distribution of a column state or the diagonal of a density matrix. */
inline std::vector<double> born_probabilities(const ComplexMatrix& state) {
  std::vector<double> p(state.rows());
  if (state.is_column()) {
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(state(i, 0));
  } else {
    if (!state.is_square()) throw ShapeError("expected a state or density matrix");
    for (std::size_t i = 0; i < p.size(); ++i)
      p[i] = std::max(state(i, i).real(), 0.0);
  }
  double total = 0.0;
  for (double v : p) total += v;
  if (total <= 0.0) throw DomainError("state has no probability weight");
  for (double& v : p) v /= total;
  return p;
}

/** Exact distribution after independent bit flips with probability `flip`. */
inline std::vector<double> apply_readout_flip(std::vector<double> p,
                                              std::size_t n_bits, double flip) {
  if (flip == 0.0) return p;
  for (std::size_t k = 0; k < n_bits; ++k) {
    const std::size_t bit = std::size_t{1} << k;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i & bit) continue;
      const double a = p[i], b = p[i | bit];
      p[i] = (1.0 - flip) * a + flip * b;
      p[i | bit] = flip * a + (1.0 - flip) * b;
    }
  }
  return p;
}

/** Marginal over `measured` qubits, in the listed order (first = leftmost bit). */
inline std::vector<double> marginal_probabilities(
    const std::vector<double>& p, std::size_t n,
    std::span<const std::size_t> measured) {
  if (p.size() != detail::register_dim(n))
    throw DimensionError("probability vector does not match register");
  std::vector<double> out(std::size_t{1} << measured.size(), 0.0);
  const std::size_t m = measured.size();
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::size_t key = 0;
    for (std::size_t k = 0; k < m; ++k)
      key |= ((i & detail::qubit_bit(n, measured[k])) ? 1U : 0U)
             << (m - 1 - k);
    out[key] += p[i];
  }
  return out;
}

/**
 * Draws `shots` outcomes from a distribution over n-bit strings, then flips
 * every bit independently with probability `readout_flip`. Uses a single
 * Rng seeded with `seed`.
 */
inline Counts sample_counts(const std::vector<double>& p, std::size_t n_bits,
                            std::uint64_t shots, std::uint64_t seed,
                            double readout_flip = 0.0) {
  if (shots == 0) throw DomainError("shots must be positive");
  if (p.size() != (std::size_t{1} << n_bits))
    throw DimensionError("distribution size does not match bit count");
  if (!(readout_flip >= 0.0 && readout_flip <= 1.0))
    throw DomainError("readout flip probability must lie in [0, 1]");
  std::vector<double> cdf(p.size());
  std::partial_sum(p.begin(), p.end(), cdf.begin());
  const double total = cdf.back();
  Rng rng(seed);
  std::vector<std::uint64_t> hist(p.size(), 0);
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = rng.uniform() * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t idx = static_cast<std::size_t>(it - cdf.begin());
    if (idx >= p.size()) idx = p.size() - 1;
    while (p[idx] == 0.0 && idx > 0) --idx;
    if (readout_flip > 0.0)
      for (std::size_t k = 0; k < n_bits; ++k)
        if (rng.uniform() < readout_flip) idx ^= std::size_t{1} << k;
    ++hist[idx];
  }
  Counts out;
  out.shots = shots;
  out.seed = seed;
  for (std::size_t i = 0; i < hist.size(); ++i)
    if (hist[i] > 0) out.counts.emplace(bitstring(i, n_bits), hist[i]);
  return out;
}

/** Samples from a column state or density matrix over the whole register. */
inline Counts sample_counts(const ComplexMatrix& state, std::uint64_t shots,
                            std::uint64_t seed, double readout_flip = 0.0) {
  const std::size_t dim = state.rows();
  std::size_t n = 0;
  while ((std::size_t{1} << n) < dim) ++n;
  if ((std::size_t{1} << n) != dim)
    throw DimensionError("state dimension is not a power of two");
  return sample_counts(born_probabilities(state), n, shots, seed, readout_flip);
}

/**
 * Density matrix of the listed qubits, in the listed order, after tracing
 * out the rest of an n-qubit register.
 */
inline ComplexMatrix reduce_to_qubits(const ComplexMatrix& rho, std::size_t n,
                                      std::span<const std::size_t> keep) {
  std::vector<std::size_t> sorted(keep.begin(), keep.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw DomainError("reduce_to_qubits: repeated qubit");
  const std::vector<std::size_t> dims(n, 2);
  ComplexMatrix red = partial_trace(rho, dims, sorted);
  // Position of keep[k] within the sorted order becomes position k.
  std::vector<std::size_t> perm(keep.size());
  for (std::size_t j = 0; j < sorted.size(); ++j)
    perm[j] = static_cast<std::size_t>(
        std::find(keep.begin(), keep.end(), sorted[j]) - keep.begin());
  return permute_qubits(red, perm);
}

/**
 * Register density with `local` on the listed qubits (in order) and every
 * other qubit in |0>.
 */
inline ComplexMatrix prepare_register(std::size_t n, const ComplexMatrix& local,
                                      std::span<const std::size_t> on) {
  const std::size_t m = on.size();
  if (local.rows() != (std::size_t{1} << m) || !local.is_square())
    throw DimensionError("local state does not match the listed qubits");
  const std::size_t rest = n - m;
  ComplexMatrix full = local;
  if (rest > 0) {
    const ComplexMatrix zero =
        ComplexMatrix::projector(ComplexMatrix::basis_vector(std::size_t{1} << rest, 0));
    full = kron(local, zero);
  }
  std::vector<std::size_t> perm(on.begin(), on.end());
  for (std::size_t q = 0; q < n; ++q)
    if (std::find(on.begin(), on.end(), q) == on.end()) perm.push_back(q);
  return permute_qubits(full, perm);
}

/** Circuit relabelled onto the qubits it touches plus `keep`, in index order. */
struct CompactCircuit {
  Circuit circuit;
  std::vector<std::size_t> old_to_new;  ///< SIZE_MAX for dropped qubits
};

inline CompactCircuit compact_register(const Circuit& c,
                                       std::span<const std::size_t> keep) {
  std::vector<bool> used(c.n_qubits(), false);
  for (auto q : keep) {
    if (q >= c.n_qubits()) throw DomainError("kept qubit outside register");
    used[q] = true;
  }
  for (const auto& g : c.gates())
    for (auto q : g.qubits) used[q] = true;
  std::vector<std::size_t> map(c.n_qubits(), SIZE_MAX);
  std::size_t next = 0;
  for (std::size_t q = 0; q < c.n_qubits(); ++q)
    if (used[q]) map[q] = next++;
  Circuit out(std::max<std::size_t>(next, 1));
  for (auto g : c.gates()) {
    for (auto& q : g.qubits) q = map[q];
    out.add(std::move(g));
  }
  return {std::move(out), std::move(map)};
}

/**
 * A circuit implementing a qutrit channel: the system pair carries the
 * encoded qutrit, the environment pair starts in |00>, and every other
 * qubit starts in |0>.
 */
struct ChannelCircuit {
  Circuit circuit{4};
  std::array<std::size_t, 2> system{0, 1};
  std::array<std::size_t, 2> env{2, 3};
};

}  // namespace qchan
