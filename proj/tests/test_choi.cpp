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

#include <cmath>

#include <catch_amalgamated.hpp>

#include "qchan/choi.hpp"
#include "qchan/decomp.hpp"
#include "qchan/random.hpp"

namespace qchan {
namespace {

using Catch::Matchers::WithinAbs;

ComplexMatrix psi_plus_projector() {
  ComplexMatrix v(9, 1);
  for (std::size_t i = 0; i < 3; ++i) v(4 * i, 0) = 1.0 / std::sqrt(3.0);
  return ComplexMatrix::projector(v);
}

std::vector<ComplexMatrix> basis_outputs(const ChannelRep& ch) {
  std::vector<ComplexMatrix> out;
  for (int k = 1; k <= 9; ++k) out.push_back(apply_channel(ch, basis_density(k)));
  return out;
}

TEST_CASE("analytic_choi") {
  REQUIRE(max_abs_diff(analytic_choi(ChannelRep::identity()), psi_plus_projector()) < 1e-15);
  const ComplexMatrix wh = (ComplexMatrix::identity(9) - mats::swap(3)) / 6.0;
  REQUIRE(max_abs_diff(analytic_choi(ChannelRep::wh()), wh) < 1e-12);
  for (const auto& ch : {ChannelRep::ls(), ChannelRep::wh()}) {
    const ComplexMatrix om = analytic_choi(ch);
    REQUIRE_THAT(om.trace().real(), WithinAbs(1.0, 1e-12));
    REQUIRE(is_psd(om, Tolerance{1e-12}));
    REQUIRE(max_abs_diff(partial_trace(om, {3, 3}, {0}), ComplexMatrix::identity(3) / 3.0) <
            1e-12);
  }
  REQUIRE_THROWS_AS(analytic_choi(ChannelRep::analytic(AnalyticChannel::WH, 4)), DimensionError);
}

TEST_CASE("channel_from_choi") {
  REQUIRE(max_abs_diff(channel_from_choi(analytic_choi(ChannelRep::wh()), basis_density(1)),
                       ComplexMatrix::diagonal({0.0, 0.5, 0.5})) < 1e-12);
  const ComplexMatrix mixed = ComplexMatrix::identity(3) / 3.0;
  REQUIRE(max_abs_diff(channel_from_choi(analytic_choi(ChannelRep::ls()), mixed), mixed) < 1e-12);
  Rng rng(101);
  for (const auto& ch : {ChannelRep::ls(), ChannelRep::wh(), ChannelRep::identity()}) {
    const ComplexMatrix om = analytic_choi(ch);
    for (int t = 0; t < 100; ++t) {
      const ComplexMatrix rho = random_density(3, rng);
      REQUIRE(max_abs_diff(channel_from_choi(om, rho), apply_channel(ch, rho)) < 1e-10);
    }
  }
  REQUIRE_THROWS_AS(channel_from_choi(ComplexMatrix::identity(4), basis_density(1)), ShapeError);
  REQUIRE_THROWS_AS(channel_from_choi(analytic_choi(ChannelRep::ls()), ComplexMatrix::identity(3)),
                    DomainError);
}

TEST_CASE("Basis coefficients") {
  const auto dec = basis_decomposition();
  REQUIRE(max_abs_diff(rederive_basis_coefficients(), dec.coeffs) < 1e-12);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      ComplexMatrix sum(3, 3);
      for (std::size_t k = 0; k < 9; ++k) sum += dec.basis_states[k] * dec.coeffs(3 * i + j, k);
      REQUIRE(max_abs_diff(sum, mats::unit(3, i, j)) < 1e-15);
    }
}

TEST_CASE("choi_linear") {
  for (const auto& ch : {ChannelRep::ls(), ChannelRep::wh(), ChannelRep::identity()})
    REQUIRE(max_abs_diff(choi_linear(basis_outputs(ch)), analytic_choi(ch)) < 1e-10);
  auto outs = basis_outputs(ChannelRep::ls());
  outs.pop_back();
  REQUIRE_THROWS_AS(choi_linear(outs), ArityError);
  outs.push_back(ComplexMatrix::identity(3));
  REQUIRE_THROWS_AS(choi_linear(outs), DomainError);
}

TEST_CASE("choi_fidelity") {
  const ComplexMatrix ls = analytic_choi(ChannelRep::ls()), wh = analytic_choi(ChannelRep::wh());
  REQUIRE_THAT(choi_fidelity(ls, wh), WithinAbs(1.0 / 9.0, 1e-6));
  REQUIRE_THAT(choi_fidelity(ls, ls), WithinAbs(1.0, 1e-9));
  REQUIRE_THROWS_AS(choi_fidelity(ls, basis_density(1)), ShapeError);
}

TEST_CASE("Choi covariance") {
  const ComplexMatrix wt = kron(covariance_unitary().transpose(), ComplexMatrix::identity(3));
  const ComplexMatrix lhs = wt * analytic_choi(ChannelRep::wh()) * wt.adjoint();
  REQUIRE(max_abs_diff(lhs, analytic_choi(ChannelRep::ls())) < 1e-12);
}

TEST_CASE("Choi from circuits in exact mode") {
  SECTION("linear route") {
    const auto wh = choi_linear_from_circuit(wh_channel_circuit(), 0, 0);
    REQUIRE(max_abs_diff(wh.omega, analytic_choi(ChannelRep::wh())) < 1e-9);
    REQUIRE(wh.leakage < 1e-10);
    const auto ls = choi_linear_from_circuit(ls_channel_circuit(), 0, 0);
    REQUIRE_THAT(choi_fidelity(analytic_choi(ChannelRep::ls()), ls.omega), WithinAbs(1.0, 1e-9));
  }
  SECTION("direct route") {
    const auto id = choi_direct(identity_channel_circuit(), 0, 0);
    REQUIRE(max_abs_diff(id.omega, psi_plus_projector()) < 1e-9);
    const auto wh = choi_direct(wh_channel_circuit(), 0, 0);
    REQUIRE_THAT(choi_fidelity(analytic_choi(ChannelRep::wh()), wh.omega), WithinAbs(1.0, 1e-9));
    REQUIRE(wh.leakage < 1e-10);
  }
  SECTION("direct route on a coupling map") {
    const auto wh = choi_direct(wh_channel_circuit(), 0, 0, {}, coupling::tokyo6());
    REQUIRE_THAT(choi_fidelity(analytic_choi(ChannelRep::wh()), wh.omega), WithinAbs(1.0, 1e-9));
    REQUIRE_THROWS_AS(choi_direct(wh_channel_circuit(), 0, 0, {}, coupling::ibmqx4()),
                      RoutingError);
  }
  SECTION("noise lowers the fidelity") {
    const auto noisy =
        choi_linear_from_circuit(wh_channel_circuit(), 0, 0, NoiseConfig{0.0, 0.05, 0.0, 0.0});
    REQUIRE(choi_fidelity(analytic_choi(ChannelRep::wh()), noisy.omega) < 0.99);
    REQUIRE(noisy.leakage > 0.0);
  }
}

}  // namespace
}  // namespace qchan
