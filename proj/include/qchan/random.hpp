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
#include <cstdint>
#include <numbers>

#include "qchan/numkit.hpp"

namespace qchan {

/** One step of the splitmix64 sequence; advances `state`. */
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/**
 * xoshiro256** seeded through splitmix64.
 *
 * The output sequence depends only on the seed, so experiments are
 * byte-identical across platforms and standard libraries. Satisfies
 * UniformRandomBitGenerator, but the helpers below should be preferred
 * over <random> distributions, whose algorithms are implementation-defined.
 */
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
  }

  /**
   * Independent stream number `index` under `seed`. Stream k of seed s is
   * seeded with splitmix64(s) ^ splitmix64(k ^ 0xD1B54A32D192ED03).
   */
  static Rng substream(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t a = seed;
    std::uint64_t b = index ^ 0xD1B54A32D192ED03ULL;
    return Rng(splitmix64(a) ^ splitmix64(b));
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /** Uniform double in [0, 1) with 53 random bits. */
  double uniform() {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  /** Standard normal variate by the Box-Muller transform. */
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> s_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/** Haar-random pure state as a column vector of length `dim`. */
inline ComplexMatrix random_state(std::size_t dim, Rng& rng) {
  ComplexMatrix v(dim, 1);
  for (std::size_t i = 0; i < dim; ++i) v(i, 0) = cplx(rng.normal(), rng.normal());
  return v / v.frobenius_norm();
}

/** Full-rank random density matrix G G^dagger / Tr(G G^dagger), G Ginibre. */
inline ComplexMatrix random_density(std::size_t dim, Rng& rng) {
  ComplexMatrix g(dim, dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) g(r, c) = cplx(rng.normal(), rng.normal());
  ComplexMatrix rho = g * g.adjoint();
  return rho / rho.trace();
}

}  // namespace qchan
