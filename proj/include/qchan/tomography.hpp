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
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "qchan/channel.hpp"
#include "qchan/circuit.hpp"
#include "qchan/errors.hpp"
#include "qchan/numkit.hpp"
#include "qchan/qutrit_map.hpp"
#include "qchan/random.hpp"

namespace qchan {

enum class Pauli { X, Y, Z };

inline char to_char(Pauli p) {
  switch (p) {
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
  }
  return '?';
}

/** Product measurement basis, one Pauli per measured qubit. */
struct MeasurementSetting {
  std::vector<Pauli> basis;

  std::string label() const {
    std::string s;
    for (auto p : basis) s += to_char(p);
    return s;
  }

  static MeasurementSetting parse(const std::string& label) {
    MeasurementSetting m;
    for (char ch : label) {
      if (ch == 'X') m.basis.push_back(Pauli::X);
      else if (ch == 'Y') m.basis.push_back(Pauli::Y);
      else if (ch == 'Z') m.basis.push_back(Pauli::Z);
      else throw FormatError("bad measurement setting '" + label + "'");
    }
    if (m.basis.empty()) throw FormatError("empty measurement setting");
    return m;
  }

  friend bool operator==(const MeasurementSetting&, const MeasurementSetting&) = default;
};

/** All 3^m settings, Z before X before Y, first qubit varying slowest. */
inline std::vector<MeasurementSetting> all_settings(std::size_t m) {
  static constexpr Pauli kOrder[3] = {Pauli::Z, Pauli::X, Pauli::Y};
  std::size_t total = 1;
  for (std::size_t i = 0; i < m; ++i) total *= 3;
  std::vector<MeasurementSetting> out(total);
  for (std::size_t s = 0; s < total; ++s) {
    std::size_t rem = s;
    out[s].basis.resize(m);
    for (std::size_t k = m; k-- > 0;) {
      out[s].basis[k] = kOrder[rem % 3];
      rem /= 3;
    }
  }
  return out;
}

/** Rotation taking the setting's eigenbasis to the computational basis: X -> H, Y -> U1(-pi/2) H. */
inline Circuit pre_rotation(const MeasurementSetting& s, std::span<const std::size_t> qubits,
                            std::size_t n_qubits) {
  if (s.basis.size() != qubits.size())
    throw DimensionError("setting length does not match measured qubits");
  Circuit c(n_qubits);
  for (std::size_t k = 0; k < qubits.size(); ++k) {
    if (s.basis[k] == Pauli::X) {
      c.h(qubits[k]);
    } else if (s.basis[k] == Pauli::Y) {
      c.u1(qubits[k], -std::numbers::pi / 2.0).h(qubits[k]);
    }
  }
  return c;
}

/**
 * Outcomes of every setting. With shots > 0 `counts` holds histograms; with
 * shots == 0 (exact mode) `probabilities` holds Born probabilities,
 * including the readout-flip model.
 */
struct TomographyRecord {
  std::size_t n_measured = 0;
  std::vector<MeasurementSetting> settings;
  std::vector<Counts> counts;
  std::vector<std::vector<double>> probabilities;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  std::optional<NoiseConfig> noise;

  bool exact() const { return shots == 0; }

  /** Outcome distribution of setting i indexed by bitstring value. */
  std::vector<double> frequencies(std::size_t i) const {
    if (exact()) return probabilities.at(i);
    std::vector<double> f(std::size_t{1} << n_measured, 0.0);
    for (const auto& [bits, n] : counts.at(i).counts) {
      if (bits.size() != n_measured) throw FormatError("bitstring length mismatch");
      f[std::stoull(bits, nullptr, 2)] =
          static_cast<double>(n) / static_cast<double>(counts[i].shots);
    }
    return f;
  }
};

/** Seed of the sampler for setting i: first output of Rng::substream(seed, i). */
inline std::uint64_t setting_seed(std::uint64_t seed, std::size_t i) {
  return Rng::substream(seed, i)();
}

/**
 * Runs `c` from |0...0>, then measures `measured` in every product Pauli
 * basis. The circuit is simulated once; each setting adds its rotation
 * gates (noisy if noise is given) and is sampled from its own substream,
 * so results do not depend on the number of worker threads.
 */
inline TomographyRecord collect(const Circuit& c, std::span<const std::size_t> measured,
                                std::uint64_t shots, std::uint64_t seed,
                                const std::optional<NoiseConfig>& noise = {},
                                unsigned threads = 0) {
  const std::size_t n = c.n_qubits();
  if (measured.empty()) throw DomainError("no measured qubits");
  for (auto q : measured)
    if (q >= n) throw DomainError("measured qubit outside register");
  if (noise) noise->validate();
  if (n > 12) throw ResourceError("register too large for density simulation");
  const NoiseConfig* nz = noise ? &*noise : nullptr;
  const double flip = noise ? noise->readout_flip : 0.0;

  const ComplexMatrix base = detail::evolve_density(
      c, ComplexMatrix::projector(zero_state(n)), nz);

  TomographyRecord rec;
  rec.n_measured = measured.size();
  rec.settings = all_settings(measured.size());
  rec.shots = shots;
  rec.seed = seed;
  rec.noise = noise;
  const std::size_t total = rec.settings.size();
  if (shots == 0)
    rec.probabilities.resize(total);
  else
    rec.counts.resize(total);

  auto run = [&](std::size_t i) {
    const Circuit rot = pre_rotation(rec.settings[i], measured, n);
    const ComplexMatrix rho = detail::evolve_density(rot, base, nz);
    const auto p = marginal_probabilities(born_probabilities(rho), n, measured);
    if (shots == 0)
      rec.probabilities[i] = apply_readout_flip(p, measured.size(), flip);
    else
      rec.counts[i] = sample_counts(p, measured.size(), shots, setting_seed(seed, i), flip);
  };

  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < total; i = next++) {
        try {
          run(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  return rec;
}

namespace detail {

inline const ComplexMatrix& pauli_matrix(int k) {
  static const ComplexMatrix mats_[4] = {ComplexMatrix::identity(2), mats::pauli_x(),
                                         mats::pauli_y(), mats::pauli_z()};
  return mats_[k];
}

}  // namespace detail

/**
 * Projects the eigenvalues of a Hermitian matrix onto the probability
 * simplex, keeping its eigenvectors. The result is PSD with unit trace.
 */
inline ComplexMatrix project_to_density(const ComplexMatrix& m) {
  if (!m.is_square()) throw ShapeError("density projection needs a square matrix");
  const auto es = hermitian_eig(m.hermitian_part());
  const auto& v = es.values;  // descending
  double cum = 0.0, theta = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    cum += v[k];
    const double t = (cum - 1.0) / static_cast<double>(k + 1);
    if (v[k] - t > 0.0) theta = t;
  }
  return hermitian_function(es, [theta](double x) { return std::max(x - theta, 0.0); });
}

/**
 * Linear-inversion estimate over all measured qubits, projected to a valid
 * density matrix. Each Pauli expectation is averaged over every setting
 * that measures it.
 */
inline ComplexMatrix reconstruct(const TomographyRecord& rec) {
  const std::size_t m = rec.n_measured;
  if (m == 0 || m > 6) throw DimensionError("unsupported number of measured qubits");
  std::map<std::string, std::size_t> by_label;
  for (std::size_t i = 0; i < rec.settings.size(); ++i)
    by_label[rec.settings[i].label()] = i;
  const std::size_t n_outcomes = rec.exact() ? rec.probabilities.size() : rec.counts.size();
  if (n_outcomes != rec.settings.size())
    throw FormatError("record has " + std::to_string(n_outcomes) + " outcome sets for " +
                      std::to_string(rec.settings.size()) + " settings");
  const auto required = all_settings(m);
  for (const auto& s : required)
    if (!by_label.count(s.label()))
      throw MissingSettingError("tomography record lacks setting " + s.label());

  std::vector<std::vector<double>> freq(required.size());
  for (std::size_t i = 0; i < required.size(); ++i)
    freq[i] = rec.frequencies(by_label[required[i].label()]);

  const std::size_t dim = std::size_t{1} << m;
  std::size_t n_strings = 1;
  for (std::size_t k = 0; k < m; ++k) n_strings *= 4;
  ComplexMatrix rho(dim, dim);
  std::vector<int> letters(m);
  for (std::size_t s = 0; s < n_strings; ++s) {
    std::size_t rem = s;
    for (std::size_t k = m; k-- > 0;) {
      letters[k] = static_cast<int>(rem % 4);  // 0 I, 1 X, 2 Y, 3 Z
      rem /= 4;
    }
    double sum = 0.0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < required.size(); ++i) {
      bool ok = true;
      for (std::size_t k = 0; k < m && ok; ++k) {
        if (letters[k] == 0) continue;
        const Pauli want = letters[k] == 1 ? Pauli::X : letters[k] == 2 ? Pauli::Y : Pauli::Z;
        ok = required[i].basis[k] == want;
      }
      if (!ok) continue;
      double e = 0.0;
      for (std::size_t o = 0; o < dim; ++o) {
        int sign = 1;
        for (std::size_t k = 0; k < m; ++k)
          if (letters[k] != 0 && ((o >> (m - 1 - k)) & 1U)) sign = -sign;
        e += sign * freq[i][o];
      }
      sum += e;
      ++used;
    }
    const double expectation = sum / static_cast<double>(used);
    ComplexMatrix p = detail::pauli_matrix(letters[0]);
    for (std::size_t k = 1; k < m; ++k) p = kron(p, detail::pauli_matrix(letters[k]));
    rho += p * expectation;
  }
  return project_to_density(rho / static_cast<double>(dim));
}

inline ComplexMatrix reconstruct_2q(const TomographyRecord& rec) {
  if (rec.n_measured != 2) throw DimensionError("reconstruct_2q needs a two-qubit record");
  return reconstruct(rec);
}

inline ProjectedState reconstruct_qutrit(const TomographyRecord& rec) {
  return project_qutrit(reconstruct_2q(rec));
}

/** Uhlmann fidelity (Tr sqrt(sqrt(s1) s2 sqrt(s1)))^2, clamped to [0, 1]. */
inline double fidelity(const ComplexMatrix& s1, const ComplexMatrix& s2) {
  if (!s1.is_square() || s1.rows() != s2.rows() || s1.cols() != s2.cols())
    throw ShapeError("fidelity of " + s1.shape_string() + " and " + s2.shape_string());
  require_density(s1, "fidelity");
  require_density(s2, "fidelity");
  const ComplexMatrix r = sqrtm_psd(s1, kDensityTol);
  const auto es = hermitian_eig(r * s2 * r);
  double t = 0.0;
  for (double v : es.values) t += std::sqrt(std::max(v, 0.0));
  return std::clamp(t * t, 0.0, 1.0);
}

struct SweepStats {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

/**
 * Fidelity of channel_from_choi(omega, lambda rho_a + (1 - lambda) rho_b),
 * trace-normalised, against `target` on that mixture, for
 * lambda = 0, 1/(grid-1), ..., 1.
 */
inline SweepStats channel_fidelity_sweep(const ComplexMatrix& omega, int a, int b, int grid,
                                         const ChannelRep& target) {
  if (grid < 2) throw DomainError("sweep grid needs at least two points");
  const ComplexMatrix ra = basis_density(a), rb = basis_density(b);
  SweepStats st{1.0, 0.0, 0.0};
  for (int k = 0; k < grid; ++k) {
    const double lambda = static_cast<double>(k) / static_cast<double>(grid - 1);
    const ComplexMatrix rho = ra * lambda + rb * (1.0 - lambda);
    ComplexMatrix out = choi_apply(omega, rho);
    out = out.hermitian_part() / out.trace().real();
    const double f = fidelity(out, apply_channel(target, rho));
    st.min = std::min(st.min, f);
    st.max = std::max(st.max, f);
    st.mean += f;
  }
  st.mean /= grid;
  return st;
}

}  // namespace qchan
